//! Orbit classification of Euler elements for the classical families and the
//! hermitian / tube-type tests.

use std::sync::Arc;

use serde::Serialize;

use super::grading::{is_euler, EulerGrading, GradingDims};
use super::symmetric::{is_symmetric, SymmetryOptions, SymmetryReport};
use crate::lie::{families, AlgebraElement, Family, GroupElement, LieAlgebra};
use crate::linalg::{self, RMat, RVec};
use crate::random;
use crate::{Result, WedgeError};

/// Invariants separating Inn(𝔤)-orbits of Euler elements.
///
/// Besides the grading dimensions and the Killing signature on 𝔤₀ the tuple
/// carries the power traces tr(hᵏ) of the matrix realisation, which are
/// conjugation invariant and separate h_j from h_{n−j} in sl_n.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitInvariant {
    pub algebra: String,
    pub dims: GradingDims,
    pub killing_signature: [usize; 3],
    pub power_traces: Vec<f64>,
}

impl OrbitInvariant {
    pub fn compute(g: &EulerGrading) -> OrbitInvariant {
        let alg = g.algebra();
        let q0 = g.eigenbasis(0);
        let k0 = q0.transpose() * alg.killing_matrix() * q0;
        let k0 = (&k0 + k0.transpose()) * 0.5;
        let ev = k0.symmetric_eigenvalues();
        let scale = ev.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let mut sig = [0usize; 3];
        for v in ev.iter() {
            if *v > 1e-8 * scale {
                sig[0] += 1;
            } else if *v < -1e-8 * scale {
                sig[1] += 1;
            } else {
                sig[2] += 1;
            }
        }
        let hm = g.h().matrix();
        let mut power = hm.clone();
        let mut traces = Vec::new();
        for _ in 2..=hm.nrows().max(2) {
            power = &power * &hm;
            traces.push(power.trace());
        }
        OrbitInvariant { algebra: alg.name().to_string(), dims: g.dims(), killing_signature: sig, power_traces: traces }
    }

    /// Equal within 1e-8 on every component.
    pub fn matches(&self, other: &OrbitInvariant) -> bool {
        self.algebra == other.algebra
            && self.dims == other.dims
            && self.killing_signature == other.killing_signature
            && self.power_traces.len() == other.power_traces.len()
            && self
                .power_traces
                .iter()
                .zip(&other.power_traces)
                .all(|(a, b)| (a - b).abs() <= 1e-8 * (1.0 + a.abs()))
    }
}

/// One orbit: its canonical representative and invariants.
#[derive(Clone, Debug)]
pub struct EulerOrbit {
    pub label: String,
    pub node: usize,
    pub grading: EulerGrading,
    pub invariant: OrbitInvariant,
}

impl EulerOrbit {
    pub fn representative(&self) -> &AlgebraElement {
        self.grading.h()
    }
}

#[derive(Clone, Debug)]
pub struct OrbitClassification {
    pub algebra: Arc<LieAlgebra>,
    pub orbits: Vec<EulerOrbit>,
    /// Candidate pairs merged after a successful conjugator search.
    pub merged: Vec<(usize, usize)>,
}

impl OrbitClassification {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }
}

/// Canonical candidates (label, node, coordinates) for a recognized family.
pub fn canonical_candidates(alg: &Arc<LieAlgebra>) -> Result<Vec<(String, usize, RVec)>> {
    match alg.family().clone() {
        Family::Sl { n } => (1..n)
            .map(|j| {
                let m = RMat::from_diagonal(&RVec::from_fn(n, |i, _| {
                    if i < j {
                        (n - j) as f64 / n as f64
                    } else {
                        -(j as f64) / n as f64
                    }
                }));
                Ok((format!("h_{j}"), j, alg.coords_of(&m)?))
            })
            .collect(),
        Family::So { p, q } => {
            let (lo, hi) = (p.min(q), p.max(q));
            if lo == 0 {
                return Ok(Vec::new());
            }
            if p + q < 3 {
                return Err(WedgeError::Unsupported(format!("so({p},{q}) is not simple")));
            }
            if lo == hi {
                return Err(WedgeError::Unsupported(format!(
                    "so({p},{q}) has type D with several Euler orbits; enumeration not implemented"
                )));
            }
            let _ = hi;
            let mut c = RVec::zeros(alg.dim());
            c[families::so_index(p + q, 0, p)] = 1.0;
            Ok(vec![("h_1".into(), 1, c)])
        }
        Family::Sp { n } => {
            let mut c = RVec::zeros(alg.dim());
            for i in 0..n {
                c[i * n + i] = 0.5;
            }
            Ok(vec![(format!("h_{n}"), n, c)])
        }
        other => Err(WedgeError::Unsupported(format!(
            "orbit classification is implemented for sl_n, so(p,q) and sp_2n, not {other}"
        ))),
    }
}

/// Enumerate Euler orbits of a recognized simple algebra.
pub fn classify_euler_orbits(alg: &Arc<LieAlgebra>) -> Result<OrbitClassification> {
    let mut orbits: Vec<EulerOrbit> = Vec::new();
    let mut merged = Vec::new();
    for (k, (label, node, coords)) in canonical_candidates(alg)?.into_iter().enumerate() {
        let h = alg.element(coords)?;
        let grading = is_euler(&h).map_err(|e| {
            WedgeError::InconsistentGrading(format!("canonical candidate {label} is not Euler: {e}"))
        })?;
        let invariant = OrbitInvariant::compute(&grading);
        let mut duplicate = None;
        for (i, o) in orbits.iter().enumerate() {
            if o.invariant.matches(&invariant)
                && find_conjugator(alg, o.grading.h().coords(), h.coords(), 64, 0xc0ffee).is_some()
            {
                duplicate = Some(i);
                break;
            }
        }
        match duplicate {
            Some(i) => {
                log::debug!("candidate {label} merged into orbit {i} after a conjugator search");
                merged.push((i, k))
            }
            None => orbits.push(EulerOrbit { label, node, grading, invariant }),
        }
    }
    Ok(OrbitClassification { algebra: Arc::clone(alg), orbits, merged })
}

/// Orbits paired with their symmetry reports.
pub fn classify_with_symmetry(
    alg: &Arc<LieAlgebra>,
    opts: &SymmetryOptions,
) -> Result<(OrbitClassification, Vec<SymmetryReport>)> {
    let c = classify_euler_orbits(alg)?;
    let reports = c.orbits.iter().map(|o| is_symmetric(&o.grading, opts)).collect();
    Ok((c, reports))
}

/// Gauss–Newton search for g = exp(x₁)⋯exp(x_k) with Ad(g)h_from = h_to.
pub fn find_conjugator(
    alg: &Arc<LieAlgebra>,
    h_from: &RVec,
    h_to: &RVec,
    restarts: usize,
    seed: u64,
) -> Option<GroupElement> {
    let d = alg.matrix_size();
    let n = alg.dim();
    let mut rng = random::seeded(seed, 0);
    let scale = 1.0 + h_to.norm();
    for r in 0..restarts {
        let mut g = if r == 0 {
            GroupElement::identity(d)
        } else {
            let x = random::normal_vec(&mut rng, n) * 0.5;
            alg.exp_coords(&x, 1.0).ok()?
        };
        for _ in 0..100 {
            let k = alg.adjoint_coords(&g, h_from).ok()?;
            let resid = &k - h_to;
            if resid.norm() < 1e-10 * scale {
                return Some(g);
            }
            let step = linalg::lstsq(&alg.ad_coords(&k), &resid);
            let norm = step.norm();
            if norm < 1e-14 {
                break;
            }
            let step = if norm > 1.0 { step / norm } else { step };
            let e = alg.exp_coords(&step, 1.0).ok()?;
            g = e.mul(&g);
        }
    }
    None
}

/// Hermitian test: the maximal compact subalgebra (fixed points of the
/// Cartan involution X ↦ −Xᵀ) has nonzero centre.
pub fn is_hermitian(alg: &Arc<LieAlgebra>) -> Result<bool> {
    match alg.family() {
        Family::Sl { .. } | Family::So { .. } | Family::Sp { .. } => {}
        other => {
            return Err(WedgeError::Unsupported(format!("hermitian test needs a simple classical family, got {other}")))
        }
    }
    if !alg.is_semisimple() {
        return Err(WedgeError::Unsupported(format!("{} is not semisimple", alg.name())));
    }
    let n = alg.dim();
    let mut theta = RMat::zeros(n, n);
    for j in 0..n {
        let m = -alg.basis()[j].transpose();
        theta.set_column(j, &alg.coords_of(&m)?);
    }
    let k_basis = linalg::null_space(&(&theta - RMat::identity(n, n)), 1e-9);
    let p_basis = linalg::null_space(&(&theta + RMat::identity(n, n)), 1e-9);
    let kill = alg.killing_matrix();
    let kk = k_basis.transpose() * kill * &k_basis;
    let pp = p_basis.transpose() * kill * &p_basis;
    let kmax = kk.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pmin = pp.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    if (k_basis.ncols() > 0 && kmax > -1e-9) || (p_basis.ncols() > 0 && pmin < 1e-9) {
        return Err(WedgeError::Numeric("transpose involution is not a Cartan involution here".into()));
    }
    let dk = k_basis.ncols();
    if dk == 0 {
        return Ok(false);
    }
    let mut stacked = RMat::zeros(n * dk, dk);
    for a in 0..dk {
        let ka = k_basis.column(a).into_owned();
        for b in 0..dk {
            let col = alg.bracket_coords(&k_basis.column(b).into_owned(), &ka);
            stacked.view_mut((a * n, b), (n, 1)).copy_from(&col);
        }
    }
    Ok(linalg::null_space(&stacked, 1e-9).ncols() > 0)
}

/// Hermitian and containing a symmetric Euler element.
pub fn is_tube_type_hermitian(alg: &Arc<LieAlgebra>, opts: &SymmetryOptions) -> Result<bool> {
    if !is_hermitian(alg)? {
        return Ok(false);
    }
    let (_, reports) = classify_with_symmetry(alg, opts)?;
    Ok(reports.iter().any(|r| r.is_symmetric()))
}
