//! Lie-algebraic test for modular covariance and the sl₃ counterexample.

use std::sync::Arc;

use serde::Serialize;

use crate::euler::{is_euler, is_symmetric, SymmetryOptions};
use crate::lie::{self, AlgebraElement, Family, GroupElement, LieAlgebra};
use crate::linalg::{self, RMat, RVec};
use crate::{Result, WedgeError};

/// Closure, membership and commutation tolerance.
pub const PUZZLE_TOL: f64 = 1e-8;
/// Rank tolerance for the containment test.
const RANK_TOL: f64 = 1e-8;

/// Two Euler wedges: h₁ Euler in a subalgebra 𝔥, h₂ Euler in 𝔤, [h₁, h₂] = 0.
#[derive(Clone, Debug)]
pub struct CovariancePuzzle {
    algebra: Arc<LieAlgebra>,
    /// Basis of 𝔥 as coordinate columns.
    subalgebra: RMat,
    h1: AlgebraElement,
    h2: AlgebraElement,
    commutation_residual: f64,
    /// Inner automorphism applied to the puzzle after construction, if any.
    pub conjugator: Option<GroupElement>,
}

fn subalgebra_of(alg: &Arc<LieAlgebra>, basis: &RMat) -> Result<Arc<LieAlgebra>> {
    let mats: Vec<RMat> = basis.column_iter().map(|c| alg.matrix_of(&c.into_owned())).collect();
    LieAlgebra::from_matrices(format!("sub({})", alg.name()), Family::Custom, mats, PUZZLE_TOL)
}

impl CovariancePuzzle {
    pub fn new(alg: &Arc<LieAlgebra>, subalgebra: Vec<RVec>, h1: AlgebraElement, h2: AlgebraElement) -> Result<CovariancePuzzle> {
        if subalgebra.is_empty() || subalgebra.iter().any(|v| v.len() != alg.dim()) {
            return Err(WedgeError::Domain("subalgebra basis must be nonempty coordinate vectors of 𝔤".into()));
        }
        if !Arc::ptr_eq(h1.algebra(), alg) || !Arc::ptr_eq(h2.algebra(), alg) {
            return Err(WedgeError::Domain("h₁ and h₂ must live in the ambient algebra".into()));
        }
        let basis = RMat::from_columns(&subalgebra);
        if linalg::rank(&basis, 1e-10) != basis.ncols() {
            return Err(WedgeError::Domain("subalgebra basis is linearly dependent".into()));
        }
        for i in 0..basis.ncols() {
            for j in i + 1..basis.ncols() {
                let z = alg.bracket_coords(&basis.column(i).into_owned(), &basis.column(j).into_owned());
                let gap = linalg::containment_gap(&RMat::from_columns(&[z.clone()]), &basis, 1e-10) * z.norm();
                if gap > PUZZLE_TOL * (1.0 + z.norm()) {
                    return Err(WedgeError::Closure(format!("subalgebra is not bracket-closed (residual {gap:.3e})")));
                }
            }
        }
        let coeff = linalg::lstsq(&basis, h1.coords());
        let off = (&basis * &coeff - h1.coords()).norm();
        if off > PUZZLE_TOL * (1.0 + h1.norm()) {
            return Err(WedgeError::Domain(format!("h₁ is not in the subalgebra (residual {off:.3e})")));
        }
        let sub = subalgebra_of(alg, &basis)?;
        let h1_sub = sub.element(coeff)?;
        if let Err(e) = is_euler(&h1_sub) {
            return Err(WedgeError::Domain(format!("h₁ is not Euler in the subalgebra: {e}")));
        }
        if let Err(e) = is_euler(&h2) {
            return Err(WedgeError::Domain(format!("h₂ is not Euler: {e}")));
        }
        let commutation_residual = h1.bracket(&h2)?.norm();
        if commutation_residual > PUZZLE_TOL * (1.0 + h1.norm() * h2.norm()) {
            return Err(WedgeError::Domain(format!("[h₁, h₂] = {commutation_residual:.3e} ≠ 0")));
        }
        Ok(CovariancePuzzle { algebra: Arc::clone(alg), subalgebra: basis, h1, h2, commutation_residual, conjugator: None })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }
    pub fn subalgebra(&self) -> &RMat {
        &self.subalgebra
    }
    pub fn h1(&self) -> &AlgebraElement {
        &self.h1
    }
    pub fn h2(&self) -> &AlgebraElement {
        &self.h2
    }
    pub fn commutation_residual(&self) -> f64 {
        self.commutation_residual
    }

    /// Ad(g) applied to h₁, h₂ and 𝔥.
    pub fn transport(&self, g: &GroupElement) -> Result<CovariancePuzzle> {
        let ad = self.algebra.adjoint_matrix(g)?;
        let sub: Vec<RVec> = self.subalgebra.column_iter().map(|c| &ad * c).collect();
        let h1 = self.algebra.element(&ad * self.h1.coords())?;
        let h2 = self.algebra.element(&ad * self.h2.coords())?;
        let mut p = CovariancePuzzle::new(&self.algebra, sub, h1, h2)?;
        p.conjugator = Some(match &self.conjugator {
            Some(c) => g.mul(c),
            None => g.clone(),
        });
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovarianceVerdict {
    CovariantCompatible,
    Violated,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceTestReport {
    pub verdict: CovarianceVerdict,
    /// Coordinates of the 𝔥 basis element y with the largest [h₁ − h₂, y]
    /// component outside ker(ad h₂).
    pub witness: Option<Vec<f64>>,
    /// Norm of that component.
    pub witness_norm: f64,
    pub ker_dim: usize,
    /// rank of ker(ad h₂) + span{[h₁ − h₂, y]}.
    pub combined_rank: usize,
    pub commutation_residual: f64,
    /// The criterion is the Lie-algebra form of the covariance condition and
    /// presumes a representation with discrete kernel.
    pub assumptions: Vec<String>,
}

/// Is span{[h₁ − h₂, y] : y ∈ 𝔥} contained in ker(ad h₂)?
pub fn modular_covariance_test(p: &CovariancePuzzle) -> CovarianceTestReport {
    let alg = &p.algebra;
    let d = p.h1.coords() - p.h2.coords();
    let kernel = linalg::null_space(&p.h2.ad_matrix(), RANK_TOL);
    let ad_d = alg.ad_coords(&d);
    let images: Vec<RVec> = p.subalgebra.column_iter().map(|y| &ad_d * y).collect();
    let mut best: Option<(usize, f64)> = None;
    for (i, z) in images.iter().enumerate() {
        let inside = &kernel * (kernel.transpose() * z);
        let out = (z - inside).norm();
        if best.map_or(true, |(_, b)| out > b) {
            best = Some((i, out));
        }
    }
    let mut cols: Vec<RVec> = kernel.column_iter().map(|c| c.into_owned()).collect();
    cols.extend(images.iter().cloned());
    let combined_rank = if cols.is_empty() { 0 } else { linalg::rank(&RMat::from_columns(&cols), RANK_TOL) };
    let contained = combined_rank == kernel.ncols();
    let (idx, norm) = best.unwrap_or((0, 0.0));
    CovarianceTestReport {
        verdict: if contained { CovarianceVerdict::CovariantCompatible } else { CovarianceVerdict::Violated },
        witness: (!contained).then(|| p.subalgebra.column(idx).iter().cloned().collect()),
        witness_norm: if contained { 0.0 } else { norm },
        ker_dim: kernel.ncols(),
        combined_rank,
        commutation_residual: p.commutation_residual,
        assumptions: vec!["ker(U) discrete".into()],
    }
}

/// Verifications performed by [`covariance_counterexample`].
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleChecks {
    pub h2_euler_dims: [usize; 3],
    pub h2_symmetric: bool,
    pub h1_euler_in_subalgebra: bool,
    pub commutation_residual: f64,
    pub verdict: CovarianceVerdict,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub puzzle: CovariancePuzzle,
    pub checks: CounterexampleChecks,
    pub report: CovarianceTestReport,
}

fn diag(n: usize, d: &[f64]) -> RMat {
    let mut m = RMat::zeros(n, n);
    for (i, &x) in d.iter().enumerate() {
        m[(i, i)] = x;
    }
    m
}

/// The obstruction on sl_n(ℝ), n ≥ 3, with the node-1 Euler element
/// h₂ = diag((n−1)/n, −1/n, …).
///
/// 𝔥 = 𝔟 is the gl₂ block on the first two coordinates, embedded trace-free
/// as X ↦ diag(X, −tr X/(n−2)·1). Then h₂ = h_c + s with h_c central in 𝔟 and
/// s = diag(½, −½, 0, …); h₁ = −s, so ad h₂ = −ad h₁ on 𝔟. Finally the puzzle
/// is conjugated by the rotation exp((π/4)(E₁₂ − E₂₁)) ∈ exp 𝔟, which brings h₁
/// to ½(E₁₂ + E₂₁).
pub fn covariance_counterexample(n: usize) -> Result<Counterexample> {
    if n < 3 {
        return Err(WedgeError::Unsupported(format!("the obstruction needs sl_n with n ≥ 3, got n = {n}")));
    }
    let alg = lie::sl(n)?;
    let embed = |x: &RMat| -> RMat {
        let tr = x[(0, 0)] + x[(1, 1)];
        let mut m = RMat::zeros(n, n);
        m.view_mut((0, 0), (2, 2)).copy_from(x);
        for k in 2..n {
            m[(k, k)] = -tr / (n - 2) as f64;
        }
        m
    };
    let mut block = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let mut x = RMat::zeros(2, 2);
            x[(i, j)] = 1.0;
            block.push(alg.coords_of(&embed(&x))?);
        }
    }
    let nf = n as f64;
    let mut h2d = vec![-1.0 / nf; n];
    h2d[0] = (nf - 1.0) / nf;
    let mut sd = vec![0.0; n];
    sd[0] = 0.5;
    sd[1] = -0.5;
    let h2 = alg.element_from_matrix(&diag(n, &h2d))?;
    let s = alg.element_from_matrix(&diag(n, &sd))?;
    let hc = h2.sub(&s)?;
    // h_c must be central in 𝔟.
    for y in &block {
        let r = alg.bracket_coords(hc.coords(), y).norm();
        if r > PUZZLE_TOL {
            return Err(WedgeError::Numeric(format!("h_c is not central in the block (residual {r:.3e})")));
        }
    }
    let h1 = s.scale(-1.0);
    let base = CovariancePuzzle::new(&alg, block, h1, h2)?;

    let mut rot = RMat::zeros(n, n);
    rot[(0, 1)] = std::f64::consts::FRAC_PI_4;
    rot[(1, 0)] = -std::f64::consts::FRAC_PI_4;
    let g = alg.element_from_matrix(&rot)?.exp(1.0)?;
    let puzzle = base.transport(&g)?;

    let grading = is_euler(puzzle.h2()).map_err(|e| WedgeError::Numeric(format!("h₂ is not Euler: {e}")))?;
    let h2_symmetric = is_symmetric(&grading, &SymmetryOptions::default()).is_symmetric();
    let report = modular_covariance_test(&puzzle);
    let checks = CounterexampleChecks {
        h2_euler_dims: grading.dims().as_array(),
        h2_symmetric,
        h1_euler_in_subalgebra: true,
        commutation_residual: puzzle.commutation_residual,
        verdict: report.verdict,
    };
    if h2_symmetric || report.verdict != CovarianceVerdict::Violated {
        return Err(WedgeError::Numeric(format!("counterexample failed to verify: {checks:?}")));
    }
    Ok(Counterexample { puzzle, checks, report })
}

/// The sl₃(ℝ) instance.
pub fn build_ds2_counterexample() -> Result<Counterexample> {
    covariance_counterexample(3)
}
