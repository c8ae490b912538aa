//! Ellipticity and the anti-elliptic predicate on reductive algebras.

use std::sync::Arc;

use serde::Serialize;

use crate::lie::{make_algebra, AlgebraElement, Family, LieAlgebra};
use crate::linalg::{self, RMat, RVec};
use crate::{Result, WedgeError, C64};

/// |Re λ| bound for an imaginary ad-eigenvalue.
pub const ELLIPTIC_TOL: f64 = 1e-8;
const IDEAL_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealKind {
    Simple,
    Center,
}

#[derive(Clone, Debug)]
pub struct Ideal {
    pub kind: IdealKind,
    pub label: String,
    /// Coordinate basis (columns).
    pub basis: RMat,
}

/// 𝔤 = 𝔷 ⊕ 𝔰₁ ⊕ … ⊕ 𝔰_k, validated by bracket tests.
#[derive(Clone, Debug)]
pub struct IdealDecomposition {
    algebra: Arc<LieAlgebra>,
    ideals: Vec<Ideal>,
    /// Columns of all ideal bases side by side.
    stacked: RMat,
}

fn inside(b: &RMat, z: &RVec) -> f64 {
    if b.ncols() == 0 {
        return z.norm();
    }
    (b * linalg::lstsq(b, z) - z).norm()
}

fn unit(n: usize, i: usize) -> RVec {
    let mut v = RVec::zeros(n);
    v[i] = 1.0;
    v
}

impl IdealDecomposition {
    pub fn new(alg: &Arc<LieAlgebra>, ideals: Vec<Ideal>) -> Result<IdealDecomposition> {
        let n = alg.dim();
        let cols: Vec<RVec> = ideals.iter().flat_map(|i| i.basis.column_iter().map(|c| c.into_owned())).collect();
        if cols.len() != n || cols.iter().any(|c| c.len() != n) || linalg::rank(&RMat::from_columns(&cols), 1e-10) != n {
            return Err(WedgeError::Domain("ideals do not form a direct sum decomposition of the algebra".into()));
        }
        for ideal in &ideals {
            for y in ideal.basis.column_iter() {
                let y = y.into_owned();
                for k in 0..n {
                    let z = alg.bracket_coords(&unit(n, k), &y);
                    let tol = IDEAL_TOL * (1.0 + z.norm());
                    match ideal.kind {
                        IdealKind::Center if z.norm() > IDEAL_TOL => {
                            return Err(WedgeError::Domain(format!("'{}' is not central", ideal.label)))
                        }
                        _ if inside(&ideal.basis, &z) > tol => {
                            return Err(WedgeError::Domain(format!("'{}' is not an ideal", ideal.label)))
                        }
                        _ => {}
                    }
                }
            }
            if ideal.kind == IdealKind::Simple {
                // A simple ideal is perfect.
                let mut br = Vec::new();
                for a in ideal.basis.column_iter() {
                    for b in ideal.basis.column_iter() {
                        br.push(alg.bracket_coords(&a.into_owned(), &b.into_owned()));
                    }
                }
                if linalg::rank(&RMat::from_columns(&br), 1e-9) != ideal.basis.ncols() {
                    return Err(WedgeError::Domain(format!("'{}' is not perfect, so not simple", ideal.label)));
                }
            }
        }
        Ok(IdealDecomposition { algebra: Arc::clone(alg), ideals, stacked: RMat::from_columns(&cols) })
    }

    /// Decomposition of a recognized family, in basis order.
    pub fn from_family(alg: &Arc<LieAlgebra>) -> Result<IdealDecomposition> {
        let mut parts = Vec::new();
        let mut offset = 0;
        let flat = match alg.family() {
            Family::Sum { parts } => parts.clone(),
            f => vec![f.clone()],
        };
        let n = alg.dim();
        let block = |offset: usize, vecs: Vec<RVec>| -> RMat {
            let mut m = RMat::zeros(n, vecs.len());
            for (j, v) in vecs.iter().enumerate() {
                m.view_mut((offset, j), (v.len(), 1)).copy_from(v);
            }
            m
        };
        for f in &flat {
            let d = family_dim(f)?;
            let label = f.label();
            match f {
                Family::Sl { .. } | Family::Sp { .. } => {
                    parts.push(Ideal { kind: IdealKind::Simple, label, basis: block(offset, (0..d).map(|i| unit(d, i)).collect()) })
                }
                Family::So { p, q } => match p + q {
                    0 | 1 => {}
                    2 => parts.push(Ideal { kind: IdealKind::Center, label, basis: block(offset, vec![unit(1, 0)]) }),
                    4 if !matches!((p, q), (1, 3) | (3, 1)) => {
                        return Err(WedgeError::Unsupported(format!("{label} is not simple; supply its ideals explicitly")))
                    }
                    _ => parts.push(Ideal {
                        kind: IdealKind::Simple,
                        label,
                        basis: block(offset, (0..d).map(|i| unit(d, i)).collect()),
                    }),
                },
                Family::Gl2 => {
                    // Basis E11, E12, E21, E22.
                    let c = RVec::from_vec(vec![1.0, 0.0, 0.0, 1.0]);
                    let s = vec![
                        RVec::from_vec(vec![1.0, 0.0, 0.0, -1.0]),
                        RVec::from_vec(vec![0.0, 1.0, 0.0, 0.0]),
                        RVec::from_vec(vec![0.0, 0.0, 1.0, 0.0]),
                    ];
                    parts.push(Ideal { kind: IdealKind::Center, label: "center(gl2)".into(), basis: block(offset, vec![c]) });
                    parts.push(Ideal { kind: IdealKind::Simple, label: "sl2".into(), basis: block(offset, s) });
                }
                Family::Iso { .. } | Family::Custom | Family::Sum { .. } => {
                    return Err(WedgeError::Unsupported(format!("{label} is not reductive or not recognized")))
                }
            }
            offset += d;
        }
        IdealDecomposition::new(alg, parts)
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    /// Component of x in each ideal, as ambient coordinates.
    pub fn components(&self, x: &RVec) -> Vec<RVec> {
        let c = linalg::lstsq(&self.stacked, x);
        let mut out = Vec::with_capacity(self.ideals.len());
        let mut j = 0;
        for ideal in &self.ideals {
            let k = ideal.basis.ncols();
            out.push(&ideal.basis * c.rows(j, k));
            j += k;
        }
        out
    }
}

fn family_dim(f: &Family) -> Result<usize> {
    Ok(match f {
        Family::Sl { n } => n * n - 1,
        Family::So { p, q } => (p + q) * (p + q).saturating_sub(1) / 2,
        Family::Sp { n } => n * (2 * n + 1),
        Family::Gl2 => 4,
        Family::Iso { d } => (d + 1) * d / 2 + d + 1,
        _ => make_algebra(f)?.dim(),
    })
}

/// ad x on an invariant subspace with basis `b`.
fn restricted_ad(alg: &LieAlgebra, x: &RVec, b: &RMat) -> RMat {
    let ad = alg.ad_coords(x);
    linalg::pseudo_inverse(b, 1e-12) * ad * b
}

/// ad semisimple with imaginary spectrum.
pub fn is_elliptic_matrix(m: &RMat) -> Result<bool> {
    let n = m.nrows();
    if n == 0 {
        return Ok(true);
    }
    let scale = linalg::spectral_norm(m).max(1.0);
    let ev = m.clone().complex_eigenvalues();
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(WedgeError::Numeric("eigenvalue computation failed".into()));
    }
    if ev.iter().any(|z| z.re.abs() >= ELLIPTIC_TOL * scale) {
        return Ok(false);
    }
    // Diagonalizable iff rank(M − μ) = n − mult(μ) for every eigenvalue μ.
    let mc = m.map(|v| C64::new(v, 0.0));
    let mut seen: Vec<C64> = Vec::new();
    for &mu in ev.iter() {
        if seen.iter().any(|s| (s - mu).norm() < CLUSTER_TOL * scale) {
            continue;
        }
        seen.push(mu);
        let mult = ev.iter().filter(|z| (*z - mu).norm() < CLUSTER_TOL * scale).count();
        let shifted = &mc - crate::linalg::CMat::identity(n, n) * mu;
        let sv = shifted.svd(false, false).singular_values;
        let rank = sv.iter().filter(|&&s| s > CLUSTER_TOL * scale).count();
        if rank != n - mult {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether ad x is elliptic on the whole algebra.
pub fn is_elliptic(x: &AlgebraElement) -> Result<bool> {
    is_elliptic_matrix(&x.ad_matrix())
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealComponent {
    pub label: String,
    pub kind: IdealKind,
    pub dim: usize,
    pub component_norm: f64,
    pub elliptic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AntiEllipticReport {
    pub anti_elliptic: bool,
    pub components: Vec<IdealComponent>,
    /// dim 𝔫_h.
    pub n_h_dim: usize,
    /// dim(𝔫_h + ℝh).
    pub with_h_dim: usize,
    pub algebra_dim: usize,
}

/// 𝔫_h, the smallest ideal with elliptic image of h in the quotient, is the
/// sum of the simple ideals on which the component of h is not elliptic;
/// h is anti-elliptic iff 𝔫_h + ℝh = 𝔤.
pub fn anti_elliptic_report(h: &AlgebraElement, dec: &IdealDecomposition) -> Result<AntiEllipticReport> {
    if !Arc::ptr_eq(h.algebra(), dec.algebra()) {
        return Err(WedgeError::Domain("element and decomposition live on different algebras".into()));
    }
    let alg = dec.algebra();
    let parts = dec.components(h.coords());
    let mut components = Vec::new();
    let mut n_h: Vec<RVec> = Vec::new();
    for (ideal, x) in dec.ideals().iter().zip(&parts) {
        let elliptic = match ideal.kind {
            IdealKind::Center => true,
            IdealKind::Simple => is_elliptic_matrix(&restricted_ad(alg, x, &ideal.basis))?,
        };
        if !elliptic {
            n_h.extend(ideal.basis.column_iter().map(|c| c.into_owned()));
        }
        components.push(IdealComponent {
            label: ideal.label.clone(),
            kind: ideal.kind,
            dim: ideal.basis.ncols(),
            component_norm: x.norm(),
            elliptic,
        });
    }
    let n_h_dim = n_h.len();
    let mut with_h = n_h;
    with_h.push(h.coords().clone());
    let with_h_dim = linalg::rank(&RMat::from_columns(&with_h), 1e-10);
    Ok(AntiEllipticReport { anti_elliptic: with_h_dim == alg.dim(), components, n_h_dim, with_h_dim, algebra_dim: alg.dim() })
}

pub fn anti_elliptic(h: &AlgebraElement, dec: &IdealDecomposition) -> Result<bool> {
    Ok(anti_elliptic_report(h, dec)?.anti_elliptic)
}
