//! Positivity region of the modular vector field on de Sitter space.

use serde::Serialize;

use crate::euler::is_euler;
use crate::lie::{AlgebraElement, Family};
use crate::linalg::RVec;
use crate::{Result, WedgeError};

pub const HYPERBOLOID_TOL: f64 = 1e-8;

/// A point of ℝ^{1,d} together with its distance from dS^d.
#[derive(Clone, Debug, Serialize)]
pub struct CausalPoint {
    pub x: Vec<f64>,
    pub residual: f64,
}

/// Minkowski square x₀² − Σ xᵢ².
pub fn minkowski_square(x: &[f64]) -> f64 {
    x[0] * x[0] - x[1..].iter().map(|v| v * v).sum::<f64>()
}

impl CausalPoint {
    pub fn new(x: Vec<f64>) -> Result<CausalPoint> {
        if x.len() < 2 {
            return Err(WedgeError::Domain("a point of R^{1,d} needs d >= 1".into()));
        }
        let residual = (minkowski_square(&x) + 1.0).abs();
        if residual > HYPERBOLOID_TOL {
            return Err(WedgeError::Domain(format!("point is off the de Sitter hyperboloid (|x^2+1| = {residual:.3e})")));
        }
        Ok(CausalPoint { x, residual })
    }

    /// The point with space coordinates `space` and x₀ = sign·√(1 + |space|² − ...)
    /// chosen on the hyperboloid: x₀ = t, x_space scaled to satisfy x² = −1.
    pub fn from_time_and_direction(t: f64, dir: &[f64]) -> Result<CausalPoint> {
        let n: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(WedgeError::Domain("direction must be nonzero".into()));
        }
        let r = (1.0 + t * t).sqrt();
        let mut x = vec![t];
        x.extend(dir.iter().map(|v| v * r / n));
        CausalPoint::new(x)
    }

    pub fn dimension(&self) -> usize {
        self.x.len() - 1
    }
}

/// Whether h·m is timelike and future pointing (X² > 1e-10, X₀ > 0).
pub fn positivity_region_membership(h: &AlgebraElement, m: &CausalPoint) -> Result<bool> {
    let alg = h.algebra();
    let d = match alg.family() {
        Family::So { p: 1, q } => *q,
        other => return Err(WedgeError::Unsupported(format!("positivity region needs so(1,d), got {other}"))),
    };
    if m.dimension() != d {
        return Err(WedgeError::Domain(format!("point lives in R^(1,{}) but algebra is so(1,{d})", m.dimension())));
    }
    if m.residual > HYPERBOLOID_TOL {
        return Err(WedgeError::Domain("point is off the de Sitter hyperboloid".into()));
    }
    is_euler(h).map_err(|e| WedgeError::Domain(format!("not an Euler element: {e}")))?;
    let x = h.matrix() * RVec::from_column_slice(&m.x);
    Ok(minkowski_square(x.as_slice()) > 1e-10 && x[0] > 0.0)
}
