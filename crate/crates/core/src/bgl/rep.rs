//! Modular pairs from (anti-)unitary representation data.

use std::sync::Arc;

use crate::euler::involution_element;
use crate::lie::{self, GroupElement, LieAlgebra};
use crate::linalg::{self, CMat, RVec};
use crate::random::{self, Rng};
use crate::stdsub::{random_admissible_pair, AntiLinearOp, ModularPair, SymmetryOp};
use crate::wedge::{OrbitWedge, WedgeCouple};
use crate::{Result, WedgeError, C64};

/// Relative tolerance on ‖JAJ + A‖.
pub const COMPATIBILITY_TOL: f64 = 1e-9;
/// Largest 2π‖A‖ for which e^{2πA} is formed.
const MAX_EXPONENT: f64 = 690.0;

/// Δ = e^{2πA} with A = i∂U(h), and J = U(τ_h).
#[derive(Clone, Debug)]
pub struct ModularRepData {
    a: CMat,
    j: AntiLinearOp,
    compatibility_residual: f64,
}

impl ModularRepData {
    pub fn new(a: CMat, j: AntiLinearOp) -> Result<ModularRepData> {
        if a.nrows() != j.ambient() || a.ncols() != j.ambient() {
            return Err(WedgeError::Domain("generator and conjugation act on different spaces".into()));
        }
        let herm = (&a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if herm > 1e-10 * scale {
            return Err(WedgeError::Domain("generator is not self-adjoint".into()));
        }
        let compatibility_residual = (j.sandwich(&a) + &a).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if compatibility_residual > COMPATIBILITY_TOL * scale {
            return Err(WedgeError::Domain(format!(
                "J A J = -A fails (residual {compatibility_residual:.3e})"
            )));
        }
        Ok(ModularRepData { a, j, compatibility_residual })
    }

    pub fn generator(&self) -> &CMat {
        &self.a
    }
    pub fn conjugation(&self) -> &AntiLinearOp {
        &self.j
    }
    pub fn compatibility_residual(&self) -> f64 {
        self.compatibility_residual
    }

    /// Data of the dual wedge (−h, τ_h).
    pub fn dual(&self) -> ModularRepData {
        ModularRepData { a: -&self.a, j: self.j.clone(), compatibility_residual: self.compatibility_residual }
    }
}

/// (J, Δ = e^{2πA}).
pub fn bgl_pair(rep: &ModularRepData) -> Result<ModularPair> {
    let norm = linalg::spectral_norm_c(&rep.a);
    if !(2.0 * std::f64::consts::PI * norm <= MAX_EXPONENT) {
        return Err(WedgeError::Conditioning(format!("‖A‖ = {norm:.3e} is too large to exponentiate")));
    }
    ModularPair::new(rep.j.clone(), rep.a.clone())
}

/// An (anti-)unitary representation of G_τ on ℂ^N.
pub trait Representation: Sync {
    fn algebra(&self) -> &Arc<LieAlgebra>;
    fn ambient(&self) -> usize;
    /// ∂U(x), skew-Hermitian.
    fn derivative(&self, x: &RVec) -> CMat;
    /// U(g): unitary for even g, anti-unitary for odd g.
    fn apply(&self, g: &GroupElement) -> Result<SymmetryOp>;
}

/// Representation data of a placed wedge: A = i∂U(h_W), J = U(σ_W) with
/// σ_W = T σ T⁻¹ for the transporter T and an odd σ realizing τ on the base.
pub fn rep_data_for<R: Representation + ?Sized>(rep: &R, w: &OrbitWedge, sigma: &GroupElement) -> Result<ModularRepData> {
    let a = rep.derivative(w.couple.h().coords()) * C64::new(0.0, 1.0);
    let sw = w.transporter.mul(sigma).mul(&w.transporter.inverse()?);
    let u = rep.apply(&sw)?;
    if u.parity != -1 {
        return Err(WedgeError::Domain("the wedge involution must act anti-unitarily".into()));
    }
    ModularRepData::new((&a + a.adjoint()) * C64::new(0.5, 0.0), AntiLinearOp::new(u.matrix)?)
}

/// U(g) = J^{[g odd]}·exp(−i·ln|det g|·A₀) on GL₂(ℝ) ⋊ {1, τ}.
///
/// ∂U(x) = −i·tr(x)·A₀, and J commutes with every exp(−isA₀) because
/// JA₀J = −A₀, so this is a homomorphism.
#[derive(Clone, Debug)]
pub struct DeterminantRep {
    alg: Arc<LieAlgebra>,
    a0: CMat,
    j: AntiLinearOp,
}

impl DeterminantRep {
    pub fn new(a0: CMat, j: AntiLinearOp) -> Result<DeterminantRep> {
        ModularRepData::new(a0.clone(), j.clone())?;
        Ok(DeterminantRep { alg: lie::gl2()?, a0, j })
    }

    /// Base couple h = diag(1, 0), so A = A₀ on the base wedge.
    pub fn base_couple(&self) -> Result<WedgeCouple> {
        let h = self.alg.element(RVec::from_vec(vec![1.0, 0.0, 0.0, 0.0]))?;
        WedgeCouple::new(&h)
    }

    pub fn base_involution(&self) -> Result<GroupElement> {
        involution_element(self.base_couple()?.grading())
    }

    pub fn a0(&self) -> &CMat {
        &self.a0
    }
    pub fn j(&self) -> &AntiLinearOp {
        &self.j
    }
}

impl Representation for DeterminantRep {
    fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }
    fn ambient(&self) -> usize {
        self.a0.nrows()
    }
    fn derivative(&self, x: &RVec) -> CMat {
        let tr = self.alg.matrix_of(x).trace();
        &self.a0 * C64::new(0.0, -tr)
    }
    fn apply(&self, g: &GroupElement) -> Result<SymmetryOp> {
        let det = g.matrix.determinant();
        let s = det.abs().ln();
        let e = linalg::hermitian_fn(&self.a0, |x| C64::from_polar(1.0, -s * x));
        if g.is_even() {
            SymmetryOp::unitary(&e)
        } else {
            SymmetryOp::anti(&self.j.after_linear(&e))
        }
    }
}

/// Random gl₂ determinant representation on ℂ^n with ‖A₀‖ ≤ max_norm.
pub fn gl2_fixture(rng: &mut Rng, n: usize, max_norm: f64) -> Result<DeterminantRep> {
    let p = random_admissible_pair(rng, n, max_norm);
    DeterminantRep::new(p.generator().clone(), p.j().clone())
}

/// Random transporters in GL₂(ℝ) ⋊ {1, τ}: exp of a Gaussian matrix, odd with
/// probability one half (odd elements carry the base involution).
pub fn random_gl2_transporters(rng: &mut Rng, count: usize, sigma: &GroupElement, scale: f64) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let x = random::normal_mat(rng, 2, 2) * scale;
        let g = GroupElement::new(linalg::expm(&x)?, 1)?;
        let odd = random::uniform(rng, 0.0, 1.0) < 0.5;
        out.push(if odd { g.mul(sigma) } else { g });
    }
    Ok(out)
}
