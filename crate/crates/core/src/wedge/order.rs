//! Cone-induced order on an orbit of wedge couples.

use serde::Serialize;

use super::cone::{ConeShape, ConeSpec};
use super::couple::{act, WedgeCouple};
use crate::euler::involution_element;
use crate::lie::{Family, GroupElement};
use crate::linalg::{self, RMat, RVec};
use crate::{Result, WedgeError};

/// Absolute threshold below which a nonzero half-line coefficient is treated
/// as sign-ambiguous.
pub const BOUNDARY_TOL: f64 = 1e-10;
const STABILIZER_TOL: f64 = 1e-8;
const PLACEMENT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderVerdict {
    True,
    False,
    Indeterminate,
}

impl OrderVerdict {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            OrderVerdict::True => Some(true),
            OrderVerdict::False => Some(false),
            OrderVerdict::Indeterminate => None,
        }
    }
}

/// exp(c₊ e) · m · exp(c₋ f) factorisation of the relative transporter.
#[derive(Clone, Debug, Serialize)]
pub struct GaussData {
    pub c_plus: f64,
    pub c_minus: f64,
    pub m: Vec<Vec<f64>>,
    /// Odd relative transporters are first multiplied by the flip x ↦ 1/x.
    pub flipped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderResult {
    pub verdict: OrderVerdict,
    pub cone: String,
    pub relative: Vec<Vec<f64>>,
    pub decomposition: Option<GaussData>,
    pub stabilizer_residual: Option<f64>,
    pub note: Option<String>,
}

/// A couple with the transporter that carries the orbit base onto it.
#[derive(Clone, Debug)]
pub struct OrbitWedge {
    pub couple: WedgeCouple,
    pub transporter: GroupElement,
}

/// An orbit G.W of a base couple together with the cone defining its order.
#[derive(Clone, Debug)]
pub struct WedgeOrbit {
    base: WedgeCouple,
    cone: ConeSpec,
    dual_transporter: GroupElement,
}

fn rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl WedgeOrbit {
    /// For the sl₂ cone the base must be h = ½·diag(1, −1), whose wedge is the
    /// half-line (0, ∞) under fractional-linear action.
    pub fn new(base: WedgeCouple, cone: ConeSpec) -> Result<WedgeOrbit> {
        if !std::sync::Arc::ptr_eq(base.algebra(), cone.algebra()) && base.algebra().name() != cone.algebra().name() {
            return Err(WedgeError::Domain("cone and couple live on different algebras".into()));
        }
        let dual_transporter = match cone.shape {
            ConeShape::Trivial => involution_element(base.grading())?,
            ConeShape::Sl2Standard => {
                let std_h = RVec::from_vec(vec![0.5, 0.0, 0.0]);
                if base.algebra().family() != &(Family::Sl { n: 2 }) || (base.h().coords() - std_h).amax() > PLACEMENT_TOL {
                    return Err(WedgeError::Unsupported(
                        "sl2 cone order is implemented for the base h = diag(1,-1)/2".into(),
                    ));
                }
                GroupElement::new(RMat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]), 1)?
            }
            _ => {
                return Err(WedgeError::Unsupported(format!(
                    "semigroup membership is implemented for the trivial and sl2 cones, not '{}'",
                    cone.label
                )))
            }
        };
        Ok(WedgeOrbit { base, cone, dual_transporter })
    }

    pub fn base(&self) -> &WedgeCouple {
        &self.base
    }
    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    /// g.W with its transporter.
    pub fn place(&self, g: GroupElement) -> Result<OrbitWedge> {
        Ok(OrbitWedge { couple: act(&g, &self.base)?, transporter: g })
    }

    /// g.W′, placed via g·r with r.W = W′.
    pub fn dual(&self, w: &OrbitWedge) -> Result<OrbitWedge> {
        let g = w.transporter.mul(&self.dual_transporter);
        self.place(g)
    }

    fn check_placed(&self, w: &OrbitWedge) -> Result<()> {
        let expect = act(&w.transporter, &self.base)?;
        let r = expect.distance(&w.couple);
        if r > 1e-6 * linalg::max_abs(expect.tau()).max(1.0) {
            return Err(WedgeError::Domain(format!("couple does not match its transporter (residual {r:.3e})")));
        }
        Ok(())
    }

    /// W₁ ≤ W₂, i.e. g₂⁻¹g₁ ∈ S_W.
    pub fn leq(&self, w1: &OrbitWedge, w2: &OrbitWedge) -> Result<OrderResult> {
        self.check_placed(w1)?;
        self.check_placed(w2)?;
        let rel = w2.transporter.inverse()?.mul(&w1.transporter);
        if self.cone.is_trivial() {
            self.stabilizer_verdict(&rel)
        } else {
            self.sl2_verdict(&rel)
        }
    }

    /// W₁ ⊆ W₂′.
    pub fn is_local_pair(&self, w1: &OrbitWedge, w2: &OrbitWedge) -> Result<OrderResult> {
        let d2 = self.dual(w2)?;
        self.leq(w1, &d2)
    }

    fn stabilizer_verdict(&self, rel: &GroupElement) -> Result<OrderResult> {
        let moved = act(rel, &self.base)?;
        let r = moved.distance(&self.base);
        let verdict = if r <= STABILIZER_TOL { OrderVerdict::True } else { OrderVerdict::False };
        Ok(OrderResult {
            verdict,
            cone: self.cone.label.clone(),
            relative: rows(&rel.matrix),
            decomposition: None,
            stabilizer_residual: Some(r),
            note: None,
        })
    }

    fn sl2_verdict(&self, rel: &GroupElement) -> Result<OrderResult> {
        let mut m = rel.matrix.clone();
        let flipped = !rel.is_even();
        if flipped {
            // x ↦ 1/x is an odd element of G_W, so m ∈ S_W iff flip·m ∈ S_W.
            m = RMat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]) * m;
        }
        let det = m.determinant();
        if det <= 0.0 {
            return Err(WedgeError::Domain("parity of the relative transporter disagrees with its determinant".into()));
        }
        m /= det.sqrt();
        let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let mut result = OrderResult {
            verdict: OrderVerdict::False,
            cone: self.cone.label.clone(),
            relative: rows(&rel.matrix),
            decomposition: None,
            stabilizer_residual: None,
            note: None,
        };
        // Elements of S_W with det 1 satisfy a·d = 1 + b·c ≥ 1, so |d| ≥ 1/‖m‖.
        let fro = m.norm();
        if d.abs() * fro < 1.0 - 1e-8 {
            result.note = Some("lower-right entry below the semigroup bound; not in S_W".into());
            return Ok(result);
        }
        let u = b / d;
        let v = c / d;
        let gm = RMat::from_row_slice(2, 2, &[a - u * d * v, 0.0, 0.0, d]);
        result.decomposition = Some(GaussData { c_plus: u, c_minus: v, m: rows(&gm), flipped });
        let classify = |x: f64| {
            if x == 0.0 || x > BOUNDARY_TOL {
                OrderVerdict::True
            } else if x < -BOUNDARY_TOL {
                OrderVerdict::False
            } else {
                OrderVerdict::Indeterminate
            }
        };
        let (vu, vv) = (classify(u), classify(v));
        result.verdict = if vu == OrderVerdict::False || vv == OrderVerdict::False {
            OrderVerdict::False
        } else if vu == OrderVerdict::Indeterminate || vv == OrderVerdict::Indeterminate {
            result.note = Some("half-line coefficient within the boundary band".into());
            OrderVerdict::Indeterminate
        } else {
            OrderVerdict::True
        };
        let recon_err = linalg::max_abs(
            &(RMat::from_row_slice(2, 2, &[1.0, u, 0.0, 1.0]) * &gm * RMat::from_row_slice(2, 2, &[1.0, 0.0, v, 1.0]) - &m),
        );
        if recon_err > 1e-8 * fro.max(1.0) {
            return Err(WedgeError::Numeric(format!("Gauss factorisation residual {recon_err:.3e}")));
        }
        Ok(result)
    }
}
