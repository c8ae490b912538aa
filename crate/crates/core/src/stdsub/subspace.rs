use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat, RMat};
use crate::{Result, WedgeError};

/// Relative singular-value threshold for the rank tests.
pub const RANK_TOL: f64 = 1e-9;

/// A real subspace of ℂ^N stored as orthonormal realified columns
/// z ↔ (Re z, Im z).
#[derive(Clone, Debug)]
pub struct RealSubspace {
    n: usize,
    basis: RMat,
}

/// JSON form: the realified basis columns.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub n: usize,
    pub columns: Vec<Vec<f64>>,
}

impl RealSubspace {
    /// Span of the columns of `basis` (2N × k, rank k).
    pub fn new(n: usize, basis: &RMat) -> Result<RealSubspace> {
        if basis.nrows() != 2 * n {
            return Err(WedgeError::Domain(format!("basis must have 2N = {} rows", 2 * n)));
        }
        let q = linalg::range_basis(basis, RANK_TOL);
        if q.ncols() != basis.ncols() {
            return Err(WedgeError::Domain("basis columns are linearly dependent over R".into()));
        }
        Ok(RealSubspace { n, basis: q })
    }

    /// ℝ^N ⊂ ℂ^N.
    pub fn real_form(n: usize) -> RealSubspace {
        let mut b = RMat::zeros(2 * n, n);
        for i in 0..n {
            b[(i, i)] = 1.0;
        }
        RealSubspace { n, basis: b }
    }

    /// ℝ-span of complex column vectors.
    pub fn from_complex_columns(z: &CMat) -> Result<RealSubspace> {
        let n = z.nrows();
        let cols: Vec<_> = (0..z.ncols()).map(|j| linalg::realify_vec(&z.column(j).into_owned())).collect();
        if cols.is_empty() {
            return Ok(RealSubspace { n, basis: RMat::zeros(2 * n, 0) });
        }
        RealSubspace::new(n, &RMat::from_columns(&cols))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
    pub fn basis(&self) -> &RMat {
        &self.basis
    }

    /// Orthogonal projector onto H for the real inner product Re⟨·,·⟩.
    pub fn projector(&self) -> RMat {
        &self.basis * self.basis.transpose()
    }

    /// [B | Cx·B].
    fn stacked(&self) -> RMat {
        let cx = linalg::complex_structure(self.n);
        let ib = &cx * &self.basis;
        let k = self.dim();
        let mut m = RMat::zeros(2 * self.n, 2 * k);
        m.view_mut((0, 0), (2 * self.n, k)).copy_from(&self.basis);
        m.view_mut((0, k), (2 * self.n, k)).copy_from(&ib);
        m
    }

    fn stacked_rank(&self) -> usize {
        if self.dim() == 0 {
            return 0;
        }
        linalg::rank(&self.stacked(), RANK_TOL)
    }

    /// H + iH = ℂ^N.
    pub fn is_cyclic(&self) -> bool {
        self.stacked_rank() == 2 * self.n
    }

    /// H ∩ iH = {0}.
    pub fn is_separating(&self) -> bool {
        2 * self.dim() == self.stacked_rank()
    }

    pub fn is_standard(&self) -> bool {
        self.is_cyclic() && self.is_separating()
    }

    /// H′ = (iH)^⊥ for the real inner product.
    pub fn symplectic_complement(&self) -> RealSubspace {
        let cx = linalg::complex_structure(self.n);
        let ib = &cx * &self.basis;
        let comp = if self.dim() == 0 {
            RMat::identity(2 * self.n, 2 * self.n)
        } else {
            linalg::null_space(&ib.transpose(), RANK_TOL)
        };
        RealSubspace { n: self.n, basis: comp }
    }

    /// Image under a real-linear map of the realified space.
    pub fn image(&self, op: &RMat) -> Result<RealSubspace> {
        RealSubspace::new(self.n, &(op * &self.basis))
    }

    /// Largest principal angle to another subspace (π/2 if dimensions differ).
    pub fn angle_to(&self, other: &RealSubspace) -> f64 {
        if self.dim() != other.dim() || self.n != other.n {
            return std::f64::consts::FRAC_PI_2;
        }
        if self.dim() == 0 {
            return 0.0;
        }
        linalg::max_principal_angle(&self.basis, &other.basis, RANK_TOL)
    }

    pub fn to_file(&self) -> SubspaceFile {
        SubspaceFile {
            n: self.n,
            columns: (0..self.dim()).map(|j| self.basis.column(j).iter().copied().collect()).collect(),
        }
    }

    pub fn from_file(f: &SubspaceFile) -> Result<RealSubspace> {
        if f.columns.iter().any(|c| c.len() != 2 * f.n) {
            return Err(WedgeError::Parse("subspace column length must be 2N".into()));
        }
        let cols: Vec<_> = f.columns.iter().map(|c| crate::linalg::RVec::from_column_slice(c)).collect();
        if cols.is_empty() {
            return Ok(RealSubspace { n: f.n, basis: RMat::zeros(2 * f.n, 0) });
        }
        RealSubspace::new(f.n, &RMat::from_columns(&cols))
    }
}

/// Tolerance for Cx-anticommutation, relative to max(1, ‖A‖).
pub const ANTILINEAR_TOL: f64 = 1e-10;

/// An anti-linear operator on ℂ^N as a real 2N×2N matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiLinearOp {
    matrix: RMat,
}

impl AntiLinearOp {
    pub fn new(matrix: RMat) -> Result<AntiLinearOp> {
        let r = antilinearity_residual(&matrix);
        if r > ANTILINEAR_TOL * linalg::max_abs(&matrix).max(1.0) {
            return Err(WedgeError::Domain(format!("operator is not anti-linear (residual {r:.3e})")));
        }
        Ok(AntiLinearOp { matrix })
    }

    /// z ↦ conj(z).
    pub fn conjugation(n: usize) -> AntiLinearOp {
        AntiLinearOp { matrix: linalg::conjugation(n) }
    }

    /// z ↦ U conj(z).
    pub fn from_unitary_times_conj(u: &CMat) -> AntiLinearOp {
        let n = u.nrows();
        AntiLinearOp { matrix: linalg::realify(u) * linalg::conjugation(n) }
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }
    pub fn ambient(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// J X J for a complex-linear X.
    pub fn sandwich(&self, x: &CMat) -> CMat {
        linalg::complexify(&(&self.matrix * linalg::realify(x) * &self.matrix))
    }

    /// Product of two anti-linear maps is complex-linear.
    pub fn compose(&self, other: &AntiLinearOp) -> CMat {
        linalg::complexify(&(&self.matrix * &other.matrix))
    }

    /// A ∘ X for a complex-linear X.
    pub fn after_linear(&self, x: &CMat) -> AntiLinearOp {
        AntiLinearOp { matrix: &self.matrix * linalg::realify(x) }
    }

    /// X ∘ A for a complex-linear X.
    pub fn before_linear(&self, x: &CMat) -> AntiLinearOp {
        AntiLinearOp { matrix: linalg::realify(x) * &self.matrix }
    }
}

/// ‖A·Cx + Cx·A‖ (max-abs).
pub fn antilinearity_residual(m: &RMat) -> f64 {
    let cx = linalg::complex_structure(m.nrows() / 2);
    linalg::max_abs(&(m * &cx + &cx * m))
}

/// ‖A·Cx − Cx·A‖ (max-abs).
pub fn linearity_residual(m: &RMat) -> f64 {
    let cx = linalg::complex_structure(m.nrows() / 2);
    linalg::max_abs(&(m * &cx - &cx * m))
}
