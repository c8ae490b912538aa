use std::sync::Arc;

use crate::euler::{euler_involution, is_euler, EulerGrading};
use crate::lie::{AlgebraElement, GroupElement, LieAlgebra};
use crate::linalg::{self, RMat, RVec};
use crate::{Result, WedgeError};

const COUPLE_TOL: f64 = 1e-8;

/// An Euler couple (h, τ_h).
#[derive(Clone, Debug)]
pub struct WedgeCouple {
    grading: EulerGrading,
    tau: RMat,
}

impl WedgeCouple {
    /// Couple of an Euler element with its own involution.
    pub fn new(h: &AlgebraElement) -> Result<WedgeCouple> {
        let grading = is_euler(h).map_err(|e| WedgeError::Domain(format!("not an Euler element: {e}")))?;
        let tau = euler_involution(&grading)?.matrix().clone();
        Ok(WedgeCouple { grading, tau })
    }

    /// Couple from explicit data; τ must be the grading sign map of h.
    pub fn from_parts(h: &AlgebraElement, tau: RMat) -> Result<WedgeCouple> {
        let c = WedgeCouple::new(h)?;
        let r = linalg::max_abs(&(&c.tau - &tau));
        if r > COUPLE_TOL {
            return Err(WedgeError::Domain(format!(
                "involution does not match the grading of h (residual {r:.3e})"
            )));
        }
        Ok(WedgeCouple { grading: c.grading, tau })
    }

    pub fn h(&self) -> &AlgebraElement {
        self.grading.h()
    }
    pub fn tau(&self) -> &RMat {
        &self.tau
    }
    pub fn grading(&self) -> &EulerGrading {
        &self.grading
    }
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.grading.algebra()
    }

    /// Max deviation of h and τ between two couples.
    pub fn distance(&self, other: &WedgeCouple) -> f64 {
        (self.h().coords() - other.h().coords())
            .amax()
            .max(linalg::max_abs(&(&self.tau - &other.tau)))
    }

    pub fn approx_eq(&self, other: &WedgeCouple, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// Ad^ε(g) x = ε(g) Ad(g) x.
pub fn twisted_adjoint(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    Ok(x.conjugate(g)?.scale(g.parity as f64))
}

/// g.(h, τ_h) = (Ad^ε(g) h, Ad(g) τ_h Ad(g)⁻¹), rechecked to be an Euler couple.
pub fn act(g: &GroupElement, w: &WedgeCouple) -> Result<WedgeCouple> {
    let alg = w.algebra();
    let h2 = twisted_adjoint(g, w.h())?;
    let ad = alg.adjoint_matrix(g)?;
    let ad_inv = alg.adjoint_matrix(&g.inverse()?)?;
    let tau2 = &ad * w.tau() * &ad_inv;
    let fresh = WedgeCouple::new(&h2).map_err(|e| WedgeError::Numeric(format!("transported couple fails recheck: {e}")))?;
    let r = linalg::max_abs(&(fresh.tau() - &tau2));
    if r > 1e-6 * linalg::max_abs(&tau2).max(1.0) {
        return Err(WedgeError::Numeric(format!(
            "transported involution disagrees with the grading (residual {r:.3e})"
        )));
    }
    Ok(WedgeCouple { grading: fresh.grading, tau: tau2 })
}

/// W′ = (−h, τ_h).
pub fn dual(w: &WedgeCouple) -> WedgeCouple {
    let neg = w.h().scale(-1.0);
    let grading = is_euler(&neg).expect("negative of an Euler element is Euler");
    WedgeCouple { grading, tau: w.tau.clone() }
}

/// A couple together with the transporter placing it in the orbit of a base.
#[derive(Clone, Debug)]
pub struct PlacedWedge {
    pub couple: WedgeCouple,
    pub transporter: GroupElement,
}

impl PlacedWedge {
    pub fn place(base: &WedgeCouple, g: GroupElement) -> Result<PlacedWedge> {
        Ok(PlacedWedge { couple: act(&g, base)?, transporter: g })
    }
}

/// Coordinates of e ∈ 𝔤₁ with respect to h (helper for tests and reports).
pub fn degree_component(w: &WedgeCouple, x: &RVec, nu: i32) -> RVec {
    w.grading().projection(nu) * x
}
