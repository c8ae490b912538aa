//! One-particle space of the 1+1d free scalar field in rapidity coordinates.
//!
//! The mass shell is p(θ) = m(cosh θ, sinh θ). Boosts act as translations in
//! θ and the measure dp/p₀ becomes dθ, so the wedge subspace, its modular
//! group and its conjugation all have closed forms on a uniform θ-grid:
//!
//! * Δ^{it} is the shift θ ↦ θ + 2πt, i.e. the boost U(Λ(−2πt));
//! * Δ^{1/2} continues θ ↦ θ − iπ, a Fourier multiplier e^{−πω};
//! * J is pointwise complex conjugation.
//!
//! Writing the grid function as Σ c_ω e^{−iωθ}, the multiplier for Δ^s is
//! e^{−2πsω}.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::dd::Dd;
use crate::linalg::{self, CVec, RMat};
use crate::par::{map_indexed, Execution};
use crate::stdsub::{ModularSystem, OneParameterGroup};
use crate::{Result, WedgeError, C64};

/// Default cutoff of the Fourier band on which Δ^{1/2} is applied.
pub const DEFAULT_BAND: f64 = 7.0;
/// Default half-width of the square |x₀|, |x₁| ≤ L that holds all supports.
pub const DEFAULT_BOX: f64 = 12.0;
/// Relative Gaussian tail at the stated support radius.
pub const TAIL: f64 = 1e-12;

/// amplitude · exp(−½ (x − c)ᵀ Σ⁻¹ (x − c)) in coordinates (x₀, x₁).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub amplitude: f64,
    pub center: [f64; 2],
    pub covariance: [[f64; 2]; 2],
}

impl Gaussian {
    pub fn isotropic(amplitude: f64, center: [f64; 2], width: f64) -> Gaussian {
        Gaussian { amplitude, center, covariance: [[width * width, 0.0], [0.0, width * width]] }
    }

    fn det(&self) -> f64 {
        let s = &self.covariance;
        s[0][0] * s[1][1] - s[0][1] * s[1][0]
    }

    fn largest_variance(&self) -> f64 {
        let s = &self.covariance;
        let tr = s[0][0] + s[1][1];
        let disc = ((s[0][0] - s[1][1]).powi(2) + 4.0 * s[0][1] * s[1][0]).sqrt();
        0.5 * (tr + disc)
    }

    /// Radius beyond which the term is below `TAIL` of its peak.
    pub fn support_radius(&self) -> f64 {
        (2.0 * (1.0 / TAIL).ln() * self.largest_variance()).sqrt()
    }

    fn validate(&self) -> Result<()> {
        let s = &self.covariance;
        if !self.amplitude.is_finite() || self.center.iter().any(|c| !c.is_finite()) {
            return Err(WedgeError::Domain("Gaussian parameters must be finite".into()));
        }
        if (s[0][1] - s[1][0]).abs() > 1e-12 * (s[0][0].abs() + s[1][1].abs()) || s[0][0] <= 0.0 || self.det() <= 0.0 {
            return Err(WedgeError::Domain("Gaussian covariance must be symmetric positive definite".into()));
        }
        Ok(())
    }

    /// (2π)⁻¹ ∫ g(x) e^{i(k₀x₀ + k₁x₁)} dx.
    fn fourier(&self, k: [f64; 2]) -> C64 {
        let s = &self.covariance;
        let quad = k[0] * (s[0][0] * k[0] + s[0][1] * k[1]) + k[1] * (s[1][0] * k[0] + s[1][1] * k[1]);
        let phase = k[0] * self.center[0] + k[1] * self.center[1];
        C64::from_polar(self.amplitude * self.det().sqrt() * (-0.5 * quad).exp(), phase)
    }

    /// The same transform at k = (p₀(θ), −p₁(θ)), with the exponent and the
    /// phase carried in double-double so the samples are correctly rounded
    /// to a few ulps even where |k·c| is large.
    fn fourier_on_shell(&self, mass: f64, theta: f64) -> C64 {
        let (ep, em) = (Dd::exp(theta), Dd::exp(-theta));
        let half_m = Dd::from(0.5 * mass);
        let k0 = (ep + em) * half_m;
        let k1 = (em - ep) * half_m;
        let s = &self.covariance;
        let quad = Dd::from(s[0][0]) * k0 * k0 + Dd::from(2.0 * s[0][1]) * k0 * k1 + Dd::from(s[1][1]) * k1 * k1;
        if quad.hi > 1500.0 {
            return C64::new(0.0, 0.0);
        }
        let decay = Dd::exp(-0.5 * quad.hi) * Dd::from(1.0 - 0.5 * quad.lo);
        let magnitude = decay * Dd::from(self.amplitude * self.det().sqrt());
        let (c, sn) = (k0 * Dd::from(self.center[0]) + k1 * Dd::from(self.center[1])).reduce_tau().cos_sin_dd();
        let (re, im) = (magnitude * c, magnitude * sn);
        C64::new(re.hi + re.lo, im.hi + im.lo)
    }

    fn value(&self, x: [f64; 2]) -> f64 {
        let s = &self.covariance;
        let det = self.det();
        let inv = [[s[1][1] / det, -s[0][1] / det], [-s[1][0] / det, s[0][0] / det]];
        let y = [x[0] - self.center[0], x[1] - self.center[1]];
        let q = y[0] * (inv[0][0] * y[0] + inv[0][1] * y[1]) + y[1] * (inv[1][0] * y[0] + inv[1][1] * y[1]);
        self.amplitude * (-0.5 * q).exp()
    }
}

/// A real test function given as a finite sum of Gaussians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub terms: Vec<Gaussian>,
}

/// Λ(s) = [[cosh s, sinh s], [sinh s, cosh s]] on (x₀, x₁).
pub fn boost_matrix(s: f64) -> [[f64; 2]; 2] {
    [[s.cosh(), s.sinh()], [s.sinh(), s.cosh()]]
}

fn mat_mul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn mat_vec(m: &[[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

impl TestFunction {
    pub fn zero() -> TestFunction {
        TestFunction { terms: Vec::new() }
    }

    pub fn gaussian(center: [f64; 2], width: f64) -> TestFunction {
        TestFunction { terms: vec![Gaussian::isotropic(1.0, center, width)] }
    }

    pub fn validate(&self) -> Result<()> {
        self.terms.iter().try_for_each(Gaussian::validate)
    }

    /// f(x) at a spacetime point.
    pub fn value(&self, x: [f64; 2]) -> f64 {
        self.terms.iter().map(|g| g.value(x)).sum()
    }

    /// f ∘ Λ(s)⁻¹.
    pub fn boosted(&self, s: f64) -> TestFunction {
        let l = boost_matrix(s);
        let lt = [[l[0][0], l[1][0]], [l[0][1], l[1][1]]];
        let terms = self
            .terms
            .iter()
            .map(|g| Gaussian {
                amplitude: g.amplitude,
                center: mat_vec(&l, g.center),
                covariance: mat_mul(&mat_mul(&l, &g.covariance), &lt),
            })
            .collect();
        TestFunction { terms }
    }

    /// x ↦ f(x − a).
    pub fn translated(&self, a: [f64; 2]) -> TestFunction {
        let terms = self
            .terms
            .iter()
            .map(|g| Gaussian { center: [g.center[0] + a[0], g.center[1] + a[1]], ..g.clone() })
            .collect();
        TestFunction { terms }
    }

    /// (center, radius) discs covering the effective support.
    pub fn support_discs(&self) -> Vec<([f64; 2], f64)> {
        self.terms.iter().map(|g| (g.center, g.support_radius())).collect()
    }

    /// Effective support inside the right wedge shifted by a: x₁ − a₁ > |x₀ − a₀|.
    pub fn inside_right_wedge(&self, a: [f64; 2]) -> bool {
        self.support_discs()
            .iter()
            .all(|(c, r)| (c[1] - a[1]) - (c[0] - a[0]).abs() > r * std::f64::consts::SQRT_2)
    }

    /// Effective support inside the left wedge x₁ < −|x₀|.
    pub fn inside_left_wedge(&self) -> bool {
        self.support_discs().iter().all(|(c, r)| -c[1] - c[0].abs() > r * std::f64::consts::SQRT_2)
    }

    fn fourier(&self, k: [f64; 2]) -> C64 {
        self.terms.iter().map(|g| g.fourier(k)).sum()
    }

    fn fourier_on_shell(&self, mass: f64, theta: f64) -> C64 {
        self.terms.iter().map(|g| g.fourier_on_shell(mass, theta)).sum()
    }
}

/// Uniform rapidity grid with cached FFT plans.
#[derive(Clone)]
pub struct RapidityModel {
    mass: f64,
    n: usize,
    theta_max: f64,
    band: f64,
    box_half_width: f64,
    theta: Vec<f64>,
    omega: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for RapidityModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RapidityModel")
            .field("mass", &self.mass)
            .field("n", &self.n)
            .field("theta_max", &self.theta_max)
            .field("band", &self.band)
            .finish()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub mass: f64,
    pub n: usize,
    pub theta_max: f64,
    pub band: f64,
    pub omega_max: f64,
}

impl RapidityModel {
    pub fn new(mass: f64, n: usize, theta_max: f64) -> Result<RapidityModel> {
        RapidityModel::with_band(mass, n, theta_max, DEFAULT_BAND)
    }

    pub fn with_band(mass: f64, n: usize, theta_max: f64, band: f64) -> Result<RapidityModel> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(WedgeError::Domain("mass must be positive".into()));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(WedgeError::Domain(format!("grid size {n} is not a power of two")));
        }
        if !(theta_max >= 10.0) || !theta_max.is_finite() {
            return Err(WedgeError::Domain("theta_max must be at least 10".into()));
        }
        let h = 2.0 * theta_max / n as f64;
        let omega_max = PI / h;
        if !(band > 0.0) || band > omega_max {
            return Err(WedgeError::Domain(format!("band {band} outside (0, {omega_max:.3}]")));
        }
        // e^{πω} must stay finite on the band.
        if (PI * band).exp() > 1e300 {
            return Err(WedgeError::Numeric(format!("Δ^(1/2) multiplier overflows on the band |ω| ≤ {band}")));
        }
        let theta = (0..n).map(|j| -theta_max + j as f64 * h).collect();
        let omega = (0..n)
            .map(|k| {
                let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
                -2.0 * PI * signed / (n as f64 * h)
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(RapidityModel {
            mass,
            n,
            theta_max,
            band,
            box_half_width: DEFAULT_BOX,
            theta,
            omega,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }
    pub fn band(&self) -> f64 {
        self.band
    }
    pub fn spacing(&self) -> f64 {
        2.0 * self.theta_max / self.n as f64
    }
    pub fn omega_max(&self) -> f64 {
        PI / self.spacing()
    }
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
    /// Angular frequency of each FFT bin, in the convention Σ c_ω e^{−iωθ}.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }
    pub fn box_half_width(&self) -> f64 {
        self.box_half_width
    }

    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            mass: self.mass,
            n: self.n,
            theta_max: self.theta_max,
            band: self.band,
            omega_max: self.omega_max(),
        }
    }

    /// p(θ).
    pub fn momentum(&self, theta: f64) -> [f64; 2] {
        [self.mass * theta.cosh(), self.mass * theta.sinh()]
    }

    /// Apply a Fourier multiplier given per bin.
    pub fn apply_multiplier(&self, v: &[C64], mult: impl Fn(f64) -> C64) -> Vec<C64> {
        let mut buf = v.to_vec();
        self.forward.process(&mut buf);
        for (z, &w) in buf.iter_mut().zip(&self.omega) {
            *z *= mult(w);
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
        buf
    }

    /// Projection onto the band |ω| ≤ ω_c.
    pub fn band_projection(&self, v: &[C64]) -> Vec<C64> {
        let band = self.band;
        self.apply_multiplier(v, |w| if w.abs() <= band { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// In-band DFT coefficients c_k = n⁻¹ Σ_j v_j e^{−2πijk/n} as (bin, c_k).
    ///
    /// Twiddle arguments are formed in double-double and products enter a
    /// compensated sum exactly, so each coefficient is accurate to a few ulps of
    /// Σ|v_j|/n rather than of the FFT's error in the largest bin.
    pub fn band_spectrum(&self, v: &[C64]) -> Vec<(usize, C64)> {
        let n = self.n;
        let twiddle: Vec<(f64, f64)> = (0..n).map(|m| Dd::tau_fraction(m, n).cos_sin()).collect();
        (0..n)
            .filter(|&k| self.omega[k].abs() <= self.band)
            .map(|k| {
                let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
                for (j, z) in v.iter().enumerate() {
                    // e^{−iφ} = cos φ − i sin φ.
                    let (c, s) = twiddle[(j * k) % n];
                    re.add_product(z.re, c);
                    re.add_product(z.im, s);
                    im.add_product(z.im, c);
                    im.add_product(-z.re, s);
                }
                (k, C64::new(re.value(), im.value()) / n as f64)
            })
            .collect()
    }

    /// Boost U(Λ(s)): (Uψ)(θ) = ψ(θ − s).
    pub fn boost(&self, s: f64, v: &[C64]) -> Vec<C64> {
        self.apply_multiplier(v, |w| C64::from_polar(1.0, w * s))
    }

    /// Δ^{it} = U(Λ(−2πt)).
    pub fn delta_it(&self, t: f64, v: &[C64]) -> Vec<C64> {
        self.boost(-2.0 * PI * t, v)
    }

    /// Δ^{1/2} on the band, zero outside it.
    pub fn delta_half(&self, v: &[C64]) -> Vec<C64> {
        let band = self.band;
        self.apply_multiplier(v, |w| if w.abs() <= band { C64::new((-PI * w).exp(), 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Translation by a: multiplication by e^{i(p₀a₀ − p₁a₁)}.
    pub fn translate(&self, a: [f64; 2], v: &[C64]) -> Vec<C64> {
        v.iter()
            .zip(&self.theta)
            .map(|(z, &th)| {
                let p = self.momentum(th);
                z * C64::from_polar(1.0, p[0] * a[0] - p[1] * a[1])
            })
            .collect()
    }

    /// ⟨u, v⟩ = Σ conj(u)·v·Δθ.
    pub fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<C64>() * self.spacing()
    }

    pub fn norm(&self, v: &[C64]) -> f64 {
        self.inner(v, v).re.max(0.0).sqrt()
    }

    fn check_support(&self, f: &TestFunction) -> Result<()> {
        f.validate()?;
        let l = self.box_half_width;
        for (c, r) in f.support_discs() {
            if c[0].abs() + r > l || c[1].abs() + r > l {
                return Err(WedgeError::Envelope(format!(
                    "support disc at ({:.3}, {:.3}) with radius {r:.3} leaves the box |x| ≤ {l}",
                    c[0], c[1]
                )));
            }
        }
        Ok(())
    }
}

/// f̂ on the grid with a sampled quadrature cross-check.
#[derive(Clone, Debug)]
pub struct RapidityVector {
    pub values: Vec<C64>,
    /// Largest deviation of a 2d trapezoid quadrature from the closed form at
    /// the sampled rapidities, relative to max |f̂|.
    pub quadrature_error: f64,
}

/// Rapidities at which [`rapidity_vector`] cross-checks the closed form.
const QUADRATURE_SAMPLES: usize = 16;
const QUADRATURE_NODES: usize = 128;

/// f̂(θ) = (2π)⁻¹ ∫ f(x) e^{i(p₀(θ)x₀ − p₁(θ)x₁)} dx.
///
/// Gaussian terms have the closed form amplitude·√det Σ·e^{−kᵀΣk/2}·e^{ik·c}
/// with k = (p₀, −p₁). The closed form is cross-checked against trapezoid
/// quadrature over each support square at a few rapidities in [−3, 3].
pub fn rapidity_vector(model: &RapidityModel, f: &TestFunction) -> Result<RapidityVector> {
    model.check_support(f)?;
    let values: Vec<C64> = model
        .theta
        .iter()
        .map(|&th| f.fourier_on_shell(model.mass, th))
        .collect();
    if f.terms.is_empty() {
        return Ok(RapidityVector { values, quadrature_error: 0.0 });
    }
    let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut err: f64 = 0.0;
    for s in 0..QUADRATURE_SAMPLES {
        let th = -3.0 + 6.0 * s as f64 / (QUADRATURE_SAMPLES - 1) as f64;
        let p = model.momentum(th);
        let k = [p[0], -p[1]];
        let exact = f.fourier(k);
        let approx = trapezoid(f, k, QUADRATURE_NODES);
        err = err.max((exact - approx).norm() / peak);
    }
    Ok(RapidityVector { values, quadrature_error: err })
}

/// (2π)⁻¹ Σ over each term's support square.
fn trapezoid(f: &TestFunction, k: [f64; 2], nodes: usize) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    for g in &f.terms {
        let r = g.support_radius();
        let h = 2.0 * r / (nodes - 1) as f64;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..nodes {
            let x0 = g.center[0] - r + i as f64 * h;
            let wi = if i == 0 || i == nodes - 1 { 0.5 } else { 1.0 };
            for j in 0..nodes {
                let x1 = g.center[1] - r + j as f64 * h;
                let wj = if j == 0 || j == nodes - 1 { 0.5 } else { 1.0 };
                acc += C64::from_polar(wi * wj * g.value([x0, x1]), k[0] * x0 + k[1] * x1);
            }
        }
        total += acc * h * h;
    }
    total / (2.0 * PI)
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }
    fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.add(p);
        self.comp += a.mul_add(b, -p);
    }
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// S = J·Δ^{1/2} on the grid, with Δ^{1/2} applied on the band |ω| ≤ ω_c.
#[derive(Clone, Debug)]
pub struct RindlerTomita<'a> {
    model: &'a RapidityModel,
}

pub fn rindler_tomita(model: &RapidityModel) -> RindlerTomita<'_> {
    RindlerTomita { model }
}

impl RindlerTomita<'_> {
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.model.delta_half(v).into_iter().map(|z| z.conj()).collect()
    }

    /// Realified 2n × 2n matrix of S (small grids only).
    pub fn dense(&self) -> Result<RMat> {
        let n = self.model.n;
        if n > 1024 {
            return Err(WedgeError::Unsupported(format!("dense Tomita operator for n = {n} > 1024")));
        }
        let mut m = RMat::zeros(2 * n, 2 * n);
        for col in 0..2 * n {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[col % n] = if col < n { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
            let image = linalg::realify_vec(&CVec::from_vec(self.apply(&e)));
            m.set_column(col, &image);
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BwResidual {
    /// ‖S f̂ − P f̂‖ / ‖P f̂‖ with P the band projection.
    pub residual: f64,
    /// ‖P f̂‖ / ‖f̂‖.
    pub band_fraction: f64,
    pub quadrature_error: f64,
}

/// Relative S-fixed-point residual of a test function.
///
/// Evaluated on the in-band Fourier coefficients with exactly reduced
/// twiddles and compensated sums, so that round-off amplified by e^{πω_c}
/// stays below the FFT floor; Parseval gives the norms.
pub fn bw_residual(model: &RapidityModel, f: &TestFunction) -> Result<BwResidual> {
    let v = rapidity_vector(model, f)?;
    let total: f64 = v.values.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Err(WedgeError::Domain("test function has zero rapidity vector".into()));
    }
    let n = model.n;
    let spec = model.band_spectrum(&v.values);
    let coeff = |k: usize| spec.iter().find(|(b, _)| *b == k).map(|(_, c)| *c);
    let (mut num, mut den) = (0.0, 0.0);
    for &(k, c) in &spec {
        let mirror = coeff((n - k) % n).unwrap_or_default();
        let s = (mirror * (-PI * model.omega[(n - k) % n]).exp()).conj();
        num += (s - c).norm_sqr();
        den += c.norm_sqr();
    }
    Ok(BwResidual {
        residual: (num / den).sqrt(),
        band_fraction: (n as f64 * den / total).sqrt(),
        quadrature_error: v.quadrature_error,
    })
}

/// BW residuals for a family of test functions.
pub fn bw_residuals(model: &RapidityModel, fs: &[TestFunction], exec: Execution) -> Vec<Result<BwResidual>> {
    map_indexed(exec, fs.len(), |i| bw_residual(model, &fs[i]))
}

/// |Im⟨f̂, ĝ⟩|, whose vanishing is locality of the Weyl operators.
pub fn locality_check(model: &RapidityModel, f: &TestFunction, g: &TestFunction) -> Result<f64> {
    let u = rapidity_vector(model, f)?;
    let v = rapidity_vector(model, g)?;
    Ok(model.inner(&u.values, &v.values).im.abs())
}

/// Real Gaussians deep inside the right wedge, used as default probes.
pub fn right_wedge_family() -> Vec<TestFunction> {
    [
        (0.0, 4.0, 0.35),
        (0.0, 4.5, 0.4),
        (0.0, 5.0, 0.45),
        (0.5, 5.0, 0.4),
        (0.0, 3.5, 0.3),
        (0.0, 5.0, 0.3),
        (-0.5, 4.5, 0.35),
        (0.0, 4.0, 0.3),
    ]
    .iter()
    .map(|&(c0, c1, w)| TestFunction::gaussian([c0, c1], w))
    .collect()
}

/// Spatial mirror images x₁ ↦ −x₁ of [`right_wedge_family`].
pub fn left_wedge_family() -> Vec<TestFunction> {
    right_wedge_family()
        .into_iter()
        .map(|f| TestFunction {
            terms: f
                .terms
                .into_iter()
                .map(|g| Gaussian { center: [g.center[0], -g.center[1]], ..g })
                .collect(),
        })
        .collect()
}

impl ModularSystem for RapidityModel {
    fn apply_j(&self, v: &CVec) -> CVec {
        v.map(|z| z.conj())
    }
    fn apply_delta_it(&self, t: f64, v: &CVec) -> CVec {
        CVec::from_vec(self.delta_it(t, v.as_slice()))
    }
    /// Normalized right-wedge vectors.
    fn probes(&self) -> Vec<CVec> {
        right_wedge_family()
            .iter()
            .filter_map(|f| rapidity_vector(self, f).ok())
            .map(|v| {
                let n = self.norm(&v.values);
                CVec::from_vec(v.values.iter().map(|z| z / n).collect())
            })
            .collect()
    }
}

/// Lightlike translations x ↦ x + t(1, 1), which map W_R into itself for t ≥ 0.
///
/// On the mass shell p₀ − p₁ = m e^{−θ} > 0, so U(t) = e^{itm e^{−θ}}.
pub struct LightlikeTranslation<'a> {
    pub model: &'a RapidityModel,
}

impl OneParameterGroup for LightlikeTranslation<'_> {
    fn apply(&self, t: f64, v: &CVec) -> CVec {
        CVec::from_vec(self.model.translate([t, t], v.as_slice()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub n: usize,
    pub family: usize,
    /// Real rank of the realified family.
    pub real_rank: usize,
    /// Real rank after adjoining i times the family.
    pub complex_rank: usize,
    pub max_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityProbeReport {
    pub translations: Vec<[f64; 2]>,
    pub requested: usize,
    pub retained: usize,
    pub rows: Vec<RankRow>,
    /// Ranks never decrease along the grid sizes.
    pub monotone: bool,
    pub note: String,
}

const PROBE_RANK_TOL: f64 = 1e-10;
const CANDIDATE_WIDTH: f64 = 0.3;

/// Cyclicity proxy for V_N = ⋂_{a ∈ N} (W_R + a) over a finite translation sample.
///
/// Candidates are width-0.3 Gaussians on a lattice of centers in the support
/// box; the first `family_size` whose support lies in every translate are
/// kept. For each grid size the report gives the real rank of the realified
/// family and of the family together with its multiples by i. This is an
/// approximation study: finite ranks only bound the infinite-dimensional
/// cyclicity question.
pub fn regularity_probe(
    mass: f64,
    theta_max: f64,
    grid_sizes: &[usize],
    translations: &[[f64; 2]],
    family_size: usize,
) -> Result<RegularityProbeReport> {
    let mut shifts = translations.to_vec();
    if shifts.is_empty() {
        shifts.push([0.0, 0.0]);
    }
    let mut family = Vec::new();
    let radius = Gaussian::isotropic(1.0, [0.0, 0.0], CANDIDATE_WIDTH).support_radius();
    let limit = DEFAULT_BOX - radius;
    'outer: for i1 in 0.. {
        let c1 = 2.0 + 0.5 * i1 as f64;
        if c1 > limit {
            break;
        }
        for i0 in 0..9 {
            let c0 = 0.5 * (i0 as f64 - 4.0);
            if c0.abs() > limit {
                continue;
            }
            let f = TestFunction::gaussian([c0, c1], CANDIDATE_WIDTH);
            if shifts.iter().all(|&a| f.inside_right_wedge(a)) {
                family.push(f);
                if family.len() == family_size {
                    break 'outer;
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(grid_sizes.len());
    for &n in grid_sizes {
        let model = RapidityModel::new(mass, n, theta_max)?;
        let vecs: Vec<Vec<C64>> = family.iter().map(|f| rapidity_vector(&model, f).map(|v| v.values)).collect::<Result<_>>()?;
        let max_norm = vecs.iter().map(|v| model.norm(v)).fold(0.0, f64::max);
        let (real_rank, complex_rank) = if vecs.is_empty() {
            (0, 0)
        } else {
            let real = RMat::from_columns(&vecs.iter().map(|v| linalg::realify_vec(&CVec::from_vec(v.clone()))).collect::<Vec<_>>());
            let with_i: Vec<_> = vecs
                .iter()
                .flat_map(|v| {
                    let iv: Vec<C64> = v.iter().map(|z| z * C64::new(0.0, 1.0)).collect();
                    [linalg::realify_vec(&CVec::from_vec(v.clone())), linalg::realify_vec(&CVec::from_vec(iv))]
                })
                .collect();
            (linalg::rank(&real, PROBE_RANK_TOL), linalg::rank(&RMat::from_columns(&with_i), PROBE_RANK_TOL))
        };
        rows.push(RankRow { n, family: vecs.len(), real_rank, complex_rank, max_norm });
    }
    let monotone = rows.windows(2).all(|w| w[1].real_rank >= w[0].real_rank && w[1].complex_rank >= w[0].complex_rank);
    Ok(RegularityProbeReport {
        translations: translations.to_vec(),
        requested: family_size,
        retained: family.len(),
        rows,
        monotone,
        note: "finite-rank proxy for cyclicity of the intersected wedge subspace".into(),
    })
}
