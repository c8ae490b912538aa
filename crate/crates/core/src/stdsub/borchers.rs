use serde::Serialize;

use super::modular::ModularPair;
use crate::linalg::{self, CMat, CVec};
use crate::C64;

/// Modular data acting on vectors of some (possibly discretized) Hilbert space.
pub trait ModularSystem: Sync {
    fn apply_j(&self, v: &CVec) -> CVec;
    /// Δ^{it} v.
    fn apply_delta_it(&self, t: f64, v: &CVec) -> CVec;
    /// Vectors on which operator identities are evaluated.
    fn probes(&self) -> Vec<CVec>;
}

/// A strongly continuous one-parameter unitary group t ↦ U(t).
pub trait OneParameterGroup: Sync {
    fn apply(&self, t: f64, v: &CVec) -> CVec;
}

impl ModularSystem for ModularPair {
    fn apply_j(&self, v: &CVec) -> CVec {
        linalg::complexify_vec(&(self.j().matrix() * linalg::realify_vec(v)))
    }
    fn apply_delta_it(&self, t: f64, v: &CVec) -> CVec {
        self.delta_it(t) * v
    }
    /// e_k and i·e_k.
    fn probes(&self) -> Vec<CVec> {
        let n = self.ambient();
        let mut out = Vec::with_capacity(2 * n);
        for k in 0..n {
            for z in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut v = CVec::zeros(n);
                v[k] = z;
                out.push(v);
            }
        }
        out
    }
}

/// U(t) = e^{itP} for a Hermitian P.
#[derive(Clone, Debug)]
pub struct GeneratorGroup {
    pub p: CMat,
}

impl OneParameterGroup for GeneratorGroup {
    fn apply(&self, t: f64, v: &CVec) -> CVec {
        linalg::hermitian_fn(&self.p, |x| C64::from_polar(1.0, t * x)) * v
    }
}

/// U(t) = 1.
pub struct IdentityGroup;

impl OneParameterGroup for IdentityGroup {
    fn apply(&self, _t: f64, v: &CVec) -> CVec {
        v.clone()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BorchersReport {
    pub sign: i8,
    /// max ‖J U(t) J v − U(−t) v‖ / ‖v‖.
    pub reflection_residual: f64,
    /// max ‖Δ^{−is/2π} U(t) Δ^{is/2π} v − U(e^{sign·s} t) v‖ / ‖v‖.
    pub dilation_residual: f64,
    pub t_grid: Vec<f64>,
    pub s_grid: Vec<f64>,
}

/// Evaluate both Borchers identities on the grid t ∈ {±0.5, ±1}, s ∈ {±0.5, ±1}.
pub fn borchers_relation_check<M: ModularSystem, U: OneParameterGroup>(sys: &M, u: &U, sign: i8) -> BorchersReport {
    let t_grid = vec![-1.0, -0.5, 0.5, 1.0];
    let s_grid = t_grid.clone();
    borchers_on_grid(sys, u, sign, &t_grid, &s_grid)
}

pub fn borchers_on_grid<M: ModularSystem, U: OneParameterGroup>(
    sys: &M,
    u: &U,
    sign: i8,
    t_grid: &[f64],
    s_grid: &[f64],
) -> BorchersReport {
    let tp = std::f64::consts::TAU;
    let mut refl: f64 = 0.0;
    let mut dil: f64 = 0.0;
    for v in sys.probes() {
        let nv = v.norm();
        if nv == 0.0 {
            continue;
        }
        for &t in t_grid {
            let lhs = sys.apply_j(&u.apply(t, &sys.apply_j(&v)));
            refl = refl.max((lhs - u.apply(-t, &v)).norm() / nv);
            for &s in s_grid {
                let inner = sys.apply_delta_it(s / tp, &v);
                let lhs = sys.apply_delta_it(-s / tp, &u.apply(t, &inner));
                let rhs = u.apply((sign as f64 * s).exp() * t, &v);
                dil = dil.max((lhs - rhs).norm() / nv);
            }
        }
    }
    BorchersReport {
        sign,
        reflection_residual: refl,
        dilation_residual: dil,
        t_grid: t_grid.to_vec(),
        s_grid: s_grid.to_vec(),
    }
}
