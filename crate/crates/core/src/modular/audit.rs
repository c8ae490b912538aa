//! Consistency audit of the Euler element theorem on concrete data.
//!
//! Checks U(exp th) = Δ^{−it/2π} and J U(exp x) J = U(exp τ_h x) on sampled
//! group elements and probe vectors. Nothing here proves anything; it reports
//! residuals.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::bgl::rapidity::RapidityModel;
use crate::bgl::rep::{bgl_pair, ModularRepData, Representation};
use crate::euler::is_euler;
use crate::lie::{self, AlgebraElement, LieAlgebra};
use crate::linalg::{self, CVec, RVec};
use crate::par::{map_indexed, Execution};
use crate::random;
use crate::stdsub::{AntiLinearOp, ModularPair, ModularSystem};
use crate::{Result, WedgeError};

const TIMES: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

/// A group action U(exp x) together with modular data (J, Δ).
pub trait ModularAction: ModularSystem {
    fn algebra(&self) -> &Arc<LieAlgebra>;
    /// U(exp x) v.
    fn apply_exp(&self, x: &RVec, v: &CVec) -> Result<CVec>;
}

/// Finite-dimensional representation with modular data (J, Δ = e^{2πA}).
pub struct RepDataAction<'a, R: Representation + ?Sized> {
    rep: &'a R,
    pair: ModularPair,
    j_override: Option<AntiLinearOp>,
}

impl<'a, R: Representation + ?Sized> RepDataAction<'a, R> {
    pub fn new(rep: &'a R, data: &ModularRepData) -> Result<Self> {
        Ok(RepDataAction { rep, pair: bgl_pair(data)?, j_override: None })
    }

    /// Same Δ, different conjugation (for negative controls).
    pub fn with_conjugation(rep: &'a R, data: &ModularRepData, j: AntiLinearOp) -> Result<Self> {
        if j.ambient() != rep.ambient() {
            return Err(WedgeError::Domain("conjugation acts on a different space".into()));
        }
        Ok(RepDataAction { rep, pair: bgl_pair(data)?, j_override: Some(j) })
    }
}

impl<R: Representation + ?Sized> ModularSystem for RepDataAction<'_, R> {
    fn apply_j(&self, v: &CVec) -> CVec {
        match &self.j_override {
            Some(j) => linalg::complexify_vec(&(j.matrix() * linalg::realify_vec(v))),
            None => self.pair.apply_j(v),
        }
    }
    fn apply_delta_it(&self, t: f64, v: &CVec) -> CVec {
        self.pair.apply_delta_it(t, v)
    }
    fn probes(&self) -> Vec<CVec> {
        self.pair.probes()
    }
}

impl<R: Representation + ?Sized> ModularAction for RepDataAction<'_, R> {
    fn algebra(&self) -> &Arc<LieAlgebra> {
        self.rep.algebra()
    }
    fn apply_exp(&self, x: &RVec, v: &CVec) -> Result<CVec> {
        let g = self.rep.algebra().exp_coords(x, 1.0)?;
        let u = self.rep.apply(&g)?;
        Ok(linalg::complexify_vec(&(u.matrix * linalg::realify_vec(v))))
    }
}

/// The rapidity model as a representation of iso(1,1) (basis L₀₁, P₀, P₁):
/// U(Λ(s), a) = U(a) U(Λ(s)).
pub struct RapidityPoincare<'a> {
    model: &'a RapidityModel,
    algebra: Arc<LieAlgebra>,
}

impl<'a> RapidityPoincare<'a> {
    pub fn new(model: &'a RapidityModel) -> Result<Self> {
        Ok(RapidityPoincare { model, algebra: lie::iso(1)? })
    }

    /// The boost generator L₀₁.
    pub fn boost_generator(&self) -> Result<AlgebraElement> {
        self.algebra.element(RVec::from_vec(vec![1.0, 0.0, 0.0]))
    }
}

impl ModularSystem for RapidityPoincare<'_> {
    fn apply_j(&self, v: &CVec) -> CVec {
        self.model.apply_j(v)
    }
    fn apply_delta_it(&self, t: f64, v: &CVec) -> CVec {
        self.model.apply_delta_it(t, v)
    }
    fn probes(&self) -> Vec<CVec> {
        self.model.probes()
    }
}

impl ModularAction for RapidityPoincare<'_> {
    fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }
    fn apply_exp(&self, x: &RVec, v: &CVec) -> Result<CVec> {
        let g = self.algebra.exp_coords(x, 1.0)?;
        let m = &g.matrix;
        let s = m[(1, 0)].asinh();
        let a = [m[(0, 2)], m[(1, 2)]];
        let boosted = self.model.boost(s, v.as_slice());
        Ok(CVec::from_vec(self.model.translate(a, &boosted)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerAuditReport {
    pub is_euler: bool,
    /// max over t, probes of ‖U(exp th)v − Δ^{−it/2π}v‖ / ‖v‖.
    pub bw_residual: f64,
    /// max over samples x, probes of ‖J U(exp x) J v − U(exp τ_h x) v‖ / ‖v‖;
    /// absent when h is not Euler.
    pub j_relation_residual: Option<f64>,
    pub samples: usize,
    pub probes: usize,
    pub notes: Vec<String>,
}

fn rel(a: &CVec, b: &CVec, v: &CVec) -> f64 {
    (a - b).norm() / v.norm().max(1e-300)
}

/// Audit the theorem's hypothesis (a) and its conclusion on sampled x.
///
/// The samples are ±½ times each basis vector plus `extra` seeded Gaussian
/// combinations of norm ½.
pub fn euler_theorem_audit<A: ModularAction>(
    action: &A,
    h: &AlgebraElement,
    seed: u64,
    extra: usize,
    exec: Execution,
) -> EulerAuditReport {
    let mut notes = Vec::new();
    let probes = action.probes();
    let alg = action.algebra();
    if h.coords().len() != alg.dim() {
        return EulerAuditReport {
            is_euler: false,
            bw_residual: f64::INFINITY,
            j_relation_residual: None,
            samples: 0,
            probes: probes.len(),
            notes: vec!["h does not belong to the acting algebra".into()],
        };
    }
    let mut bw = 0.0f64;
    for &t in &TIMES {
        let x = h.coords() * t;
        for v in &probes {
            match action.apply_exp(&x, v) {
                Ok(u) => bw = bw.max(rel(&u, &action.apply_delta_it(-t / (2.0 * PI), v), v)),
                Err(e) => {
                    notes.push(format!("U(exp {t}h) failed: {e}"));
                    bw = f64::INFINITY;
                }
            }
        }
    }

    let n = alg.dim();
    let mut samples: Vec<RVec> = Vec::new();
    for i in 0..n {
        for s in [0.5, -0.5] {
            let mut x = RVec::zeros(n);
            x[i] = s;
            samples.push(x);
        }
    }
    let mut rng = random::seeded(seed, 31);
    for _ in 0..extra {
        let x = random::normal_vec(&mut rng, n);
        let nx = x.norm().max(1e-300);
        samples.push(x * (0.5 / nx));
    }

    let grading = is_euler(h);
    let j_relation_residual = match &grading {
        Err(e) => {
            notes.push(format!("h is not Euler ({e}); the J-relation is not evaluated"));
            None
        }
        Ok(g) => match g.involution() {
            Err(e) => {
                notes.push(format!("Euler involution failed: {e}"));
                None
            }
            Ok(tau) => {
                let worst = map_indexed(exec, samples.len(), |k| {
                    let x = &samples[k];
                    let tx = tau.apply(x);
                    let mut w = 0.0f64;
                    for v in &probes {
                        let lhs = action.apply_exp(x, &action.apply_j(v)).map(|u| action.apply_j(&u));
                        let rhs = action.apply_exp(&tx, v);
                        w = match (lhs, rhs) {
                            (Ok(l), Ok(r)) => w.max(rel(&l, &r, v)),
                            _ => f64::INFINITY,
                        };
                    }
                    w
                });
                Some(worst.into_iter().fold(0.0, f64::max))
            }
        },
    };
    EulerAuditReport {
        is_euler: grading.is_ok(),
        bw_residual: bw,
        j_relation_residual,
        samples: samples.len(),
        probes: probes.len(),
        notes,
    }
}
