//! Truncated bosonic Fock space and Weyl operators.
//!
//! Each mode is cut off at `n_max` levels. The field operator
//! Φ(ξ) = (a(ξ) + a†(ξ))/√2 is Hermitian on the truncated block, so
//! w(ξ) = exp(iΦ(ξ)) is exactly unitary there; truncation shows up as
//! errors in the Weyl relations near the top levels.

use serde::Serialize;

use crate::linalg::{self, CMat, CVec};
use crate::{Result, WedgeError, C64};

/// Smallest per-mode cutoff in the accuracy envelope.
pub const MIN_LEVELS: usize = 32;
/// Largest ‖ξ‖ in the accuracy envelope.
pub const MAX_AMPLITUDE: f64 = 1.0;
/// Largest total dimension n_max^modes that is materialized.
pub const MAX_DIMENSION: usize = 4096;

#[derive(Clone, Debug)]
pub struct FockTruncation {
    modes: usize,
    n_max: usize,
    /// Single-mode annihilation operator on n_max levels.
    a: CMat,
}

impl FockTruncation {
    pub fn new(modes: usize, n_max: usize) -> Result<FockTruncation> {
        if modes == 0 {
            return Err(WedgeError::Domain("at least one mode is required".into()));
        }
        if n_max < 2 {
            return Err(WedgeError::Domain("occupation cutoff must be at least 2".into()));
        }
        let dim = (n_max as u128).checked_pow(modes as u32).unwrap_or(u128::MAX);
        if dim > MAX_DIMENSION as u128 {
            return Err(WedgeError::Unsupported(format!(
                "truncated Fock dimension {n_max}^{modes} exceeds {MAX_DIMENSION}"
            )));
        }
        let mut a = CMat::zeros(n_max, n_max);
        for k in 1..n_max {
            a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
        }
        Ok(FockTruncation { modes, n_max, a })
    }

    pub fn single_mode(n_max: usize) -> Result<FockTruncation> {
        FockTruncation::new(1, n_max)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    pub fn dimension(&self) -> usize {
        self.n_max.pow(self.modes as u32)
    }
    pub fn annihilation(&self) -> &CMat {
        &self.a
    }
    pub fn creation(&self) -> CMat {
        self.a.adjoint()
    }
    pub fn number(&self) -> CMat {
        self.creation() * &self.a
    }

    /// ‖[a, a†] − 1‖ on the first n_max − 1 levels.
    pub fn ccr_residual(&self) -> f64 {
        let k = self.n_max - 1;
        let comm = &self.a * self.creation() - self.creation() * &self.a;
        let block = comm.view((0, 0), (k, k)) - CMat::identity(k, k);
        block.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Ω = |0, …, 0⟩.
    pub fn vacuum(&self) -> CVec {
        let mut v = CVec::zeros(self.dimension());
        v[0] = C64::new(1.0, 0.0);
        v
    }

    /// exp(i(ξ̄a + ξa†)/√2) on one mode.
    fn single_weyl(&self, xi: C64) -> CMat {
        let phi = (&self.a * xi.conj() + self.creation() * xi) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        linalg::hermitian_fn(&phi, |x| C64::from_polar(1.0, x))
    }
}

#[derive(Clone, Debug)]
pub struct WeylOp {
    pub matrix: CMat,
    /// ‖w*w − 1‖ (max-abs).
    pub unitarity_residual: f64,
    /// Largest amplitude of w(ξ)Ω on the top level of any mode.
    pub truncation_residual: f64,
}

fn check_amplitude(trunc: &FockTruncation, xi: &[C64]) -> Result<()> {
    if xi.len() != trunc.modes {
        return Err(WedgeError::Domain(format!("amplitude has {} components for {} modes", xi.len(), trunc.modes)));
    }
    let norm = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm > MAX_AMPLITUDE {
        return Err(WedgeError::Envelope(format!("‖ξ‖ = {norm:.3} exceeds {MAX_AMPLITUDE}")));
    }
    if trunc.n_max < MIN_LEVELS {
        return Err(WedgeError::Envelope(format!("cutoff {} below {MIN_LEVELS} levels", trunc.n_max)));
    }
    Ok(())
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    CMat::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// w(ξ) = exp(iΦ(ξ)) with Φ(ξ) = (a(ξ) + a†(ξ))/√2; modes factorize.
pub fn weyl_op(trunc: &FockTruncation, xi: &[C64]) -> Result<WeylOp> {
    check_amplitude(trunc, xi)?;
    let factors: Vec<CMat> = xi.iter().map(|&z| trunc.single_weyl(z)).collect();
    let top = factors.iter().map(|w| w[(trunc.n_max - 1, 0)].norm()).fold(0.0, f64::max);
    let mut m = factors[0].clone();
    for f in &factors[1..] {
        m = kron(&m, f);
    }
    let d = m.nrows();
    let unitarity_residual = (m.adjoint() * &m - CMat::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(WeylOp { matrix: m, unitarity_residual, truncation_residual: top })
}

/// ⟨ξ, η⟩, conjugate-linear in the first slot.
pub fn inner(xi: &[C64], eta: &[C64]) -> C64 {
    xi.iter().zip(eta).map(|(a, b)| a.conj() * b).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct VacuumCheck {
    pub computed: [f64; 2],
    /// e^{−‖ξ‖²/4}.
    pub expected: f64,
    pub residual: f64,
}

/// ⟨Ω, w(ξ)Ω⟩ against e^{−‖ξ‖²/4}.
pub fn vacuum_expectation_check(trunc: &FockTruncation, xi: &[C64]) -> Result<VacuumCheck> {
    let w = weyl_op(trunc, xi)?;
    let z = w.matrix[(0, 0)];
    let n2: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    let expected = (-n2 / 4.0).exp();
    Ok(VacuumCheck { computed: [z.re, z.im], expected, residual: (z - C64::new(expected, 0.0)).norm() })
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionCheck {
    /// Phase e^{−(i/2)Im⟨ξ,η⟩} as (re, im).
    pub phase: [f64; 2],
    /// Operator norm of w(ξ)w(η) − phase·w(ξ+η) on the probe block.
    pub residual: f64,
    /// Levels per mode in the probe block.
    pub probe_levels: usize,
}

/// Default probe block: the lowest 11/16 of the levels of each mode.
///
/// The block scales with the cutoff, so its distance to the truncation edge
/// doubles with n_max and the measured residual decreases with it. At one half
/// the residual is already at round-off for n_max = 64; at three quarters it
/// reaches 1e-4 for ‖ξ + η‖ = 1.
pub fn default_probe_levels(trunc: &FockTruncation) -> usize {
    trunc.n_max * 11 / 16
}

/// Column indices of states with every occupation below `levels`.
fn probe_indices(trunc: &FockTruncation, levels: usize) -> Vec<usize> {
    (0..trunc.dimension())
        .filter(|&idx| {
            let mut r = idx;
            (0..trunc.modes).all(|_| {
                let k = r % trunc.n_max;
                r /= trunc.n_max;
                k < levels
            })
        })
        .collect()
}

/// w(ξ)w(η) = e^{−(i/2)Im⟨ξ,η⟩}·w(ξ+η), measured on the probe block.
pub fn composition_check(trunc: &FockTruncation, xi: &[C64], eta: &[C64], probe_levels: usize) -> Result<CompositionCheck> {
    let sum: Vec<C64> = xi.iter().zip(eta).map(|(a, b)| a + b).collect();
    let wx = weyl_op(trunc, xi)?;
    let we = weyl_op(trunc, eta)?;
    let ws = weyl_op(trunc, &sum)?;
    let phase = C64::from_polar(1.0, -0.5 * inner(xi, eta).im);
    let diff = &wx.matrix * &we.matrix - &ws.matrix * phase;
    let cols = probe_indices(trunc, probe_levels.min(trunc.n_max));
    let block = diff.select_columns(cols.iter());
    Ok(CompositionCheck { phase: [phase.re, phase.im], residual: linalg::spectral_norm_c(&block), probe_levels })
}

/// ‖w(ξ) − w(η)‖ in operator norm.
pub fn weyl_distance(trunc: &FockTruncation, xi: &[C64], eta: &[C64]) -> Result<f64> {
    let a = weyl_op(trunc, xi)?;
    let b = weyl_op(trunc, eta)?;
    Ok(linalg::spectral_norm_c(&(a.matrix - b.matrix)))
}
