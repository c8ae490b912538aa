use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, RMat, RVec};
use crate::{Result, WedgeError};

/// Default tolerance for the structural identities of an algebra.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Relative residual allowed when projecting conjugated matrices back onto
/// the basis span.
const CLOSURE_REL_TOL: f64 = 1e-7;

/// Recognized families with their parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    /// sl_n(ℝ).
    Sl { n: usize },
    /// so(p,q) for the metric diag(1_p, −1_q).
    So { p: usize, q: usize },
    /// sp_{2n}(ℝ).
    Sp { n: usize },
    /// gl_2(ℝ).
    Gl2,
    /// Poincaré algebra iso(1,d).
    Iso { d: usize },
    /// Direct sum, matrices placed block-diagonally.
    Sum { parts: Vec<Family> },
    /// Anything loaded from a file.
    Custom,
}

impl Family {
    /// Short textual label such as `sl3`, `so(1,3)`, `sp4`, `iso(1,3)`.
    pub fn label(&self) -> String {
        match self {
            Family::Sl { n } => format!("sl{n}"),
            Family::So { p, q } => format!("so({p},{q})"),
            Family::Sp { n } => format!("sp{}", 2 * n),
            Family::Gl2 => "gl2".into(),
            Family::Iso { d } => format!("iso(1,{d})"),
            Family::Sum { parts } => parts.iter().map(|p| p.label()).collect::<Vec<_>>().join("+"),
            Family::Custom => "custom".into(),
        }
    }

    /// Parse the labels produced by [`Family::label`].
    pub fn parse(s: &str) -> Result<Family> {
        let s = s.trim().to_ascii_lowercase().replace(' ', "");
        if s.contains('+') {
            let parts = s.split('+').map(Family::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Family::Sum { parts });
        }
        let bad = || WedgeError::Parse(format!("unrecognized algebra label '{s}'"));
        let pair = |body: &str| -> Result<(usize, usize)> {
            let body = body.trim_start_matches('(').trim_end_matches(')');
            let mut it = body.split(',');
            let a = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            let b = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            if it.next().is_some() {
                return Err(bad());
            }
            Ok((a, b))
        };
        if s == "gl2" {
            Ok(Family::Gl2)
        } else if let Some(rest) = s.strip_prefix("iso") {
            let (one, d) = pair(rest)?;
            if one != 1 {
                return Err(bad());
            }
            Ok(Family::Iso { d })
        } else if let Some(rest) = s.strip_prefix("so") {
            let (p, q) = pair(rest)?;
            Ok(Family::So { p, q })
        } else if let Some(rest) = s.strip_prefix("sl") {
            Ok(Family::Sl { n: rest.parse().map_err(|_| bad())? })
        } else if let Some(rest) = s.strip_prefix("sp") {
            let m: usize = rest.parse().map_err(|_| bad())?;
            if m % 2 != 0 {
                return Err(bad());
            }
            Ok(Family::Sp { n: m / 2 })
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A real matrix Lie algebra given by a linearly independent basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    family: Family,
    matrix_size: usize,
    basis: Vec<RMat>,
    structure: Vec<f64>,
    ad_basis: Vec<RMat>,
    killing: RMat,
    tolerance: f64,
    flat_pinv: RMat,
}

impl LieAlgebra {
    /// Build from a matrix basis, deriving and validating structure constants.
    pub fn from_matrices(
        name: impl Into<String>,
        family: Family,
        basis: Vec<RMat>,
        tolerance: f64,
    ) -> Result<Arc<LieAlgebra>> {
        let name = name.into();
        let n = basis.len();
        if n == 0 {
            return Err(WedgeError::Domain("empty basis".into()));
        }
        let d = basis[0].nrows();
        if basis.iter().any(|b| b.nrows() != d || b.ncols() != d) {
            return Err(WedgeError::Domain("basis matrices must be square of equal size".into()));
        }
        if !(tolerance >= 0.0) {
            return Err(WedgeError::Domain("tolerance must be nonnegative".into()));
        }
        let mut flat = RMat::zeros(d * d, n);
        for (j, b) in basis.iter().enumerate() {
            for (k, v) in b.iter().enumerate() {
                flat[(k, j)] = *v;
            }
        }
        if linalg::rank(&flat, 1e-10) != n {
            return Err(WedgeError::Domain("basis matrices are linearly dependent".into()));
        }
        let flat_pinv = linalg::pseudo_inverse(&flat, 1e-13);
        let mut structure = vec![0.0; n * n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let m = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let v = RVec::from_iterator(d * d, m.iter().cloned());
                let c = &flat_pinv * &v;
                let resid = (&flat * &c - &v).amax();
                if resid > tolerance.max(1e-14) * (1.0 + v.amax()) {
                    return Err(WedgeError::Closure(format!(
                        "bracket of basis elements {i} and {j} leaves the span (residual {resid:.3e})"
                    )));
                }
                for k in 0..n {
                    structure[(i * n + j) * n + k] = c[k];
                    structure[(j * n + i) * n + k] = -c[k];
                }
            }
        }
        let alg = Self::assemble(name, family, d, basis, structure, tolerance, flat_pinv);
        alg.check_jacobi()?;
        Ok(Arc::new(alg))
    }

    /// Build from structure constants `c[(i*n + j)*n + k]` alone. The adjoint
    /// representation serves as the matrix realisation, so the centre must be
    /// trivial.
    pub fn from_structure_constants(
        name: impl Into<String>,
        n: usize,
        c: Vec<f64>,
        tolerance: f64,
    ) -> Result<Arc<LieAlgebra>> {
        if c.len() != n * n * n || n == 0 {
            return Err(WedgeError::Domain("structure constant tensor must have n³ entries".into()));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = c[(i * n + j) * n + k];
                    let b = c[(j * n + i) * n + k];
                    if (a + b).abs() > tolerance.max(1e-14) {
                        return Err(WedgeError::Domain(format!(
                            "invalid structure constants: c[{i}][{j}][{k}] not antisymmetric"
                        )));
                    }
                }
            }
        }
        let mut canonical = c.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = c[(i * n + j) * n + k];
                    let b = c[(j * n + i) * n + k];
                    canonical[(i * n + j) * n + k] = 0.5 * (a - b);
                }
            }
        }
        let ad: Vec<RMat> = (0..n)
            .map(|i| RMat::from_fn(n, n, |k, j| canonical[(i * n + j) * n + k]))
            .collect();
        let probe = Self::assemble(
            "probe".into(),
            Family::Custom,
            n,
            ad.clone(),
            canonical.clone(),
            tolerance,
            RMat::zeros(0, 0),
        );
        probe
            .check_jacobi()
            .map_err(|e| WedgeError::Domain(format!("invalid structure constants: {e}")))?;
        Self::from_matrices(name, Family::Custom, ad, tolerance.max(1e-12)).map_err(|e| match e {
            WedgeError::Domain(_) => WedgeError::Unsupported(
                "algebra with nontrivial centre has no faithful adjoint realisation".into(),
            ),
            other => other,
        })
    }

    fn assemble(
        name: String,
        family: Family,
        matrix_size: usize,
        basis: Vec<RMat>,
        structure: Vec<f64>,
        tolerance: f64,
        flat_pinv: RMat,
    ) -> LieAlgebra {
        let n = basis.len();
        let ad_basis: Vec<RMat> = (0..n)
            .map(|i| RMat::from_fn(n, n, |k, j| structure[(i * n + j) * n + k]))
            .collect();
        let killing = RMat::from_fn(n, n, |i, j| (&ad_basis[i] * &ad_basis[j]).trace());
        LieAlgebra {
            name,
            family,
            matrix_size,
            basis,
            structure,
            ad_basis,
            killing,
            tolerance,
            flat_pinv,
        }
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let scale = 1.0 + self.structure.iter().map(|v| v.abs()).fold(0.0, f64::max).powi(2);
        for i in 0..n {
            for j in (i + 1)..n {
                let mut lhs = RMat::zeros(n, n);
                for k in 0..n {
                    let c = self.structure[(i * n + j) * n + k];
                    if c != 0.0 {
                        lhs += &self.ad_basis[k] * c;
                    }
                }
                let rhs = &self.ad_basis[i] * &self.ad_basis[j] - &self.ad_basis[j] * &self.ad_basis[i];
                let r = (lhs - rhs).amax();
                if r > self.tolerance.max(1e-13) * scale * 10.0 {
                    return Err(WedgeError::Closure(format!(
                        "Jacobi identity fails on basis pair ({i},{j}) with residual {r:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn family(&self) -> &Family {
        &self.family
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn matrix_size(&self) -> usize {
        self.matrix_size
    }
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
    pub fn basis(&self) -> &[RMat] {
        &self.basis
    }
    /// c_{ijk} with [x_i, x_j] = Σ_k c_{ijk} x_k.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.structure[(i * n + j) * n + k]
    }
    /// Matrix of ad x_i.
    pub fn ad_basis(&self, i: usize) -> &RMat {
        &self.ad_basis[i]
    }
    /// Gram matrix of the Killing form in the basis.
    pub fn killing_matrix(&self) -> &RMat {
        &self.killing
    }

    /// Largest violation of [x_i, x_j] = Σ_k c_ijk x_k over the basis.
    pub fn closure_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let m = &self.basis[i] * &self.basis[j] - &self.basis[j] * &self.basis[i];
                let c = RVec::from_fn(n, |k, _| self.structure_constant(i, j, k));
                worst = worst.max((m - self.matrix_of(&c)).amax());
            }
        }
        worst
    }

    /// Largest Jacobi residual over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut lhs = RMat::zeros(n, n);
                for k in 0..n {
                    lhs += &self.ad_basis[k] * self.structure_constant(i, j, k);
                }
                let rhs = &self.ad_basis[i] * &self.ad_basis[j] - &self.ad_basis[j] * &self.ad_basis[i];
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// True when the Killing form is non-degenerate (normalised smallest
    /// singular value above 1e-6).
    pub fn is_semisimple(&self) -> bool {
        let s = linalg::singular_values(&self.killing);
        s.len() == self.dim() && s[0] > 0.0 && s[s.len() - 1] / s[0] > 1e-6
    }

    pub fn zero_coords(&self) -> RVec {
        RVec::zeros(self.dim())
    }

    /// ad x as a matrix in the basis.
    pub fn ad_coords(&self, x: &RVec) -> RMat {
        let n = self.dim();
        let mut m = RMat::zeros(n, n);
        for i in 0..n {
            if x[i] != 0.0 {
                m += &self.ad_basis[i] * x[i];
            }
        }
        m
    }

    pub fn bracket_coords(&self, x: &RVec, y: &RVec) -> RVec {
        self.ad_coords(x) * y
    }

    pub fn killing_coords(&self, x: &RVec, y: &RVec) -> f64 {
        (x.transpose() * &self.killing * y)[(0, 0)]
    }

    /// Σ x_i B_i.
    pub fn matrix_of(&self, x: &RVec) -> RMat {
        let d = self.matrix_size;
        let mut m = RMat::zeros(d, d);
        for (i, b) in self.basis.iter().enumerate() {
            if x[i] != 0.0 {
                m += b * x[i];
            }
        }
        m
    }

    /// Coordinates of a matrix in the basis; errors when it leaves the span.
    pub fn coords_of(&self, m: &RMat) -> Result<RVec> {
        let d = self.matrix_size;
        if m.nrows() != d || m.ncols() != d {
            return Err(WedgeError::Domain("matrix size does not match the algebra".into()));
        }
        let v = RVec::from_iterator(d * d, m.iter().cloned());
        let c = &self.flat_pinv * &v;
        let resid = (self.matrix_of(&c) - m).amax();
        if resid > CLOSURE_REL_TOL * (1.0 + m.amax()) {
            return Err(WedgeError::Closure(format!(
                "matrix lies outside the algebra span (residual {resid:.3e})"
            )));
        }
        Ok(c)
    }

    /// exp(t x) in the matrix realisation.
    pub fn exp_coords(&self, x: &RVec, t: f64) -> Result<GroupElement> {
        let m = self.matrix_of(x) * t;
        GroupElement::new(linalg::expm(&m)?, 1)
    }

    /// Coordinates of g X g⁻¹.
    pub fn adjoint_coords(&self, g: &GroupElement, x: &RVec) -> Result<RVec> {
        if g.matrix.nrows() != self.matrix_size {
            return Err(WedgeError::Domain("group element size does not match the algebra".into()));
        }
        let inv = g.inverse()?;
        self.coords_of(&(&g.matrix * self.matrix_of(x) * &inv.matrix))
    }

    /// Matrix of Ad(g) acting on coordinates.
    pub fn adjoint_matrix(&self, g: &GroupElement) -> Result<RMat> {
        let n = self.dim();
        let mut out = RMat::zeros(n, n);
        for j in 0..n {
            let mut e = RVec::zeros(n);
            e[j] = 1.0;
            out.set_column(j, &self.adjoint_coords(g, &e)?);
        }
        Ok(out)
    }

    /// Wrap coordinates as an element.
    pub fn element(self: &Arc<Self>, coords: RVec) -> Result<AlgebraElement> {
        if coords.len() != self.dim() {
            return Err(WedgeError::Domain(format!(
                "coordinate length {} does not match dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok(AlgebraElement { algebra: Arc::clone(self), coords })
    }

    /// Element from a matrix in the span.
    pub fn element_from_matrix(self: &Arc<Self>, m: &RMat) -> Result<AlgebraElement> {
        let c = self.coords_of(m)?;
        self.element(c)
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> AlgebraElement {
        let mut c = RVec::zeros(self.dim());
        c[i] = 1.0;
        AlgebraElement { algebra: Arc::clone(self), coords: c }
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement { algebra: Arc::clone(self), coords: self.zero_coords() }
    }
}

/// Coordinates over a fixed algebra.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    algebra: Arc<LieAlgebra>,
    coords: RVec,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }
    pub fn coords(&self) -> &RVec {
        &self.coords
    }
    pub fn into_coords(self) -> RVec {
        self.coords
    }

    fn same_algebra(&self, other: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra)
            || (self.algebra.name == other.algebra.name
                && self.algebra.dim() == other.algebra.dim()
                && self.algebra.structure == other.algebra.structure)
        {
            Ok(())
        } else {
            Err(WedgeError::Domain(format!(
                "elements belong to different algebras ({} vs {})",
                self.algebra.name, other.algebra.name
            )))
        }
    }

    fn with(&self, coords: RVec) -> AlgebraElement {
        AlgebraElement { algebra: Arc::clone(&self.algebra), coords }
    }

    pub fn bracket(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_algebra(other)?;
        Ok(self.with(self.algebra.bracket_coords(&self.coords, &other.coords)))
    }

    pub fn ad_matrix(&self) -> RMat {
        self.algebra.ad_coords(&self.coords)
    }

    pub fn killing(&self, other: &AlgebraElement) -> Result<f64> {
        self.same_algebra(other)?;
        Ok(self.algebra.killing_coords(&self.coords, &other.coords))
    }

    pub fn matrix(&self) -> RMat {
        self.algebra.matrix_of(&self.coords)
    }

    pub fn exp(&self, t: f64) -> Result<GroupElement> {
        self.algebra.exp_coords(&self.coords, t)
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_algebra(other)?;
        Ok(self.with(&self.coords + &other.coords))
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_algebra(other)?;
        Ok(self.with(&self.coords - &other.coords))
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        self.with(&self.coords * s)
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    /// Ad(g) applied to this element.
    pub fn conjugate(&self, g: &GroupElement) -> Result<AlgebraElement> {
        Ok(self.with(self.algebra.adjoint_coords(g, &self.coords)?))
    }
}

/// Invertible matrix with a grading parity: +1 in G, −1 in the τ-coset.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub matrix: RMat,
    pub parity: i8,
}

impl GroupElement {
    pub fn new(matrix: RMat, parity: i8) -> Result<GroupElement> {
        if matrix.nrows() != matrix.ncols() {
            return Err(WedgeError::Domain("group element must be square".into()));
        }
        if parity != 1 && parity != -1 {
            return Err(WedgeError::Domain("parity must be +1 or -1".into()));
        }
        let det = matrix.determinant();
        if !(det.abs() > 1e-12) {
            return Err(WedgeError::Domain(format!("matrix is singular (det {det:.3e})")));
        }
        Ok(GroupElement { matrix, parity })
    }

    pub fn identity(d: usize) -> GroupElement {
        GroupElement { matrix: RMat::identity(d, d), parity: 1 }
    }

    pub fn is_even(&self) -> bool {
        self.parity == 1
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement { matrix: &self.matrix * &other.matrix, parity: self.parity * other.parity }
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| WedgeError::Numeric("group element not invertible".into()))?;
        Ok(GroupElement { matrix: inv, parity: self.parity })
    }
}
