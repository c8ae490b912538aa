//! Invariant cones in a Lie algebra.

use std::sync::Arc;

use serde::Serialize;

use crate::lie::{families, Family, GroupElement, LieAlgebra};
use crate::linalg::{self, RMat, RVec};
use crate::{Result, WedgeError};

/// How membership is decided.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ConeShape {
    /// {0}.
    Trivial,
    /// Conic hull of the generators (membership by non-negative least squares).
    Polyhedral,
    /// sl₂ with x = a·h + b·e + c·f: b ≥ 0, c ≤ 0, a² ≤ −bc.
    Sl2Standard,
    /// Closed forward light cone on the coordinates `time` and `space`.
    ForwardLight { time: usize, space: Vec<usize> },
}

/// A finitely described pointed convex cone.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    pub label: String,
    pub shape: ConeShape,
    generators: Vec<RVec>,
    algebra: Arc<LieAlgebra>,
}

/// Result of [`ConeSpec::verify_invariance`].
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub samples: usize,
    pub worst_residual: f64,
    pub invariant: bool,
}

impl ConeSpec {
    pub fn trivial(alg: &Arc<LieAlgebra>) -> ConeSpec {
        ConeSpec { label: "trivial".into(), shape: ConeShape::Trivial, generators: Vec::new(), algebra: Arc::clone(alg) }
    }

    /// The cone b ≥ 0, c ≤ 0, a² ≤ −bc of sl₂(ℝ) (basis [h, e, f]), with 16
    /// boundary rays as generators (including 2e and −2f).
    pub fn sl2_standard(alg: &Arc<LieAlgebra>) -> Result<ConeSpec> {
        if alg.family() != &(Family::Sl { n: 2 }) {
            return Err(WedgeError::Unsupported("the standard cone is defined on sl2".into()));
        }
        let gens = (0..16)
            .map(|k| {
                let phi = std::f64::consts::PI * 2.0 * k as f64 / 16.0;
                RVec::from_vec(vec![phi.sin(), 1.0 + phi.cos(), -(1.0 - phi.cos())])
            })
            .collect();
        ConeSpec::build(alg, "sl2-standard", ConeShape::Sl2Standard, gens)
    }

    /// Forward light cone in the translation ideal of iso(1,d).
    pub fn poincare_forward(alg: &Arc<LieAlgebra>) -> Result<ConeSpec> {
        let d = match alg.family() {
            Family::Iso { d } => *d,
            _ => return Err(WedgeError::Unsupported("the forward cone is defined on iso(1,d)".into())),
        };
        let off = families::iso_translation_offset(d);
        let n = alg.dim();
        let mut gens = Vec::new();
        for k in 1..=d {
            for s in [1.0, -1.0] {
                let mut v = RVec::zeros(n);
                v[off] = 1.0;
                v[off + k] = s;
                gens.push(v);
            }
        }
        let shape = ConeShape::ForwardLight { time: off, space: (off + 1..=off + d).collect() };
        ConeSpec::build(alg, "poincare-forward", shape, gens)
    }

    /// Conic hull of explicit generators.
    pub fn polyhedral(alg: &Arc<LieAlgebra>, label: &str, generators: Vec<RVec>) -> Result<ConeSpec> {
        ConeSpec::build(alg, label, ConeShape::Polyhedral, generators)
    }

    fn build(alg: &Arc<LieAlgebra>, label: &str, shape: ConeShape, generators: Vec<RVec>) -> Result<ConeSpec> {
        if generators.iter().any(|g| g.len() != alg.dim()) {
            return Err(WedgeError::Domain("cone generator has wrong length".into()));
        }
        let cone = ConeSpec { label: label.into(), shape, generators, algebra: Arc::clone(alg) };
        if !cone.is_pointed() {
            return Err(WedgeError::Domain(format!("cone '{label}' is not pointed")));
        }
        Ok(cone)
    }

    pub fn generators(&self) -> &[RVec] {
        &self.generators
    }
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }
    pub fn is_trivial(&self) -> bool {
        self.shape == ConeShape::Trivial
    }

    /// No nonzero v with v and −v in the cone: 0 is not a convex combination
    /// of the generators.
    pub fn is_pointed(&self) -> bool {
        let k = self.generators.len();
        if k == 0 {
            return true;
        }
        let n = self.algebra.dim();
        let w = 1e3;
        let mut a = RMat::zeros(n + 1, k);
        for (j, g) in self.generators.iter().enumerate() {
            let s = g.norm();
            if s == 0.0 {
                return false;
            }
            a.view_mut((0, j), (n, 1)).copy_from(&(g / s));
            a[(n, j)] = w;
        }
        let mut b = RVec::zeros(n + 1);
        b[n] = w;
        let (_, res) = linalg::nnls(&a, &b);
        res > 1e-8
    }

    /// Distance-like residual of x from the cone, relative to ‖x‖.
    pub fn membership_residual(&self, x: &RVec) -> f64 {
        let scale = x.norm();
        if scale == 0.0 {
            return 0.0;
        }
        let v = x / scale;
        match &self.shape {
            ConeShape::Trivial => 1.0,
            ConeShape::Polyhedral => {
                if self.generators.is_empty() {
                    return 1.0;
                }
                let a = RMat::from_columns(&self.generators);
                linalg::nnls(&a, &v).1
            }
            ConeShape::Sl2Standard => {
                let (a, b, c) = (v[0], v[1], v[2]);
                (-b).max(c).max(a * a + b * c).max(0.0)
            }
            ConeShape::ForwardLight { time, space } => {
                let mut outside: f64 = 0.0;
                for i in 0..v.len() {
                    if i != *time && !space.contains(&i) {
                        outside = outside.max(v[i].abs());
                    }
                }
                let t = v[*time];
                let s2: f64 = space.iter().map(|&i| v[i] * v[i]).sum();
                outside.max(-t).max(s2 - t * t).max(0.0)
            }
        }
    }

    pub fn contains(&self, x: &RVec, tol: f64) -> bool {
        self.membership_residual(x) <= tol
    }

    /// Check Ad^ε(g) maps each generator into the cone for the given samples.
    pub fn verify_invariance(&self, samples: &[GroupElement], tol: f64) -> Result<InvarianceReport> {
        let mut worst: f64 = 0.0;
        for g in samples {
            for x in &self.generators {
                let y = self.algebra.adjoint_coords(g, x)? * g.parity as f64;
                worst = worst.max(self.membership_residual(&y));
            }
        }
        Ok(InvarianceReport { samples: samples.len(), worst_residual: worst, invariant: worst <= tol })
    }
}
