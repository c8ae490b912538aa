use serde::Serialize;

use super::subspace::{antilinearity_residual, linearity_residual, AntiLinearOp, RealSubspace};
use crate::linalg::{self, CMat, RMat};
use crate::par::{map_indexed, Execution};
use crate::random::{self, Rng};
use crate::{Result, WedgeError, C64};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
/// Largest condition number of [B | Cx·B] accepted by [`tomita_from_subspace`].
pub const MAX_CONDITION: f64 = 1e12;
/// Relative threshold for kernel extraction.
pub const KERNEL_TOL: f64 = 1e-8;

/// (J, Δ) with Δ stored as A = log Δ / 2π.
#[derive(Clone, Debug)]
pub struct ModularPair {
    j: AntiLinearOp,
    a: CMat,
}

/// Residuals of the pair invariants.
#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub j_squared: f64,
    pub j_isometry: f64,
    pub a_hermitian: f64,
    pub jaj_plus_a: f64,
}

fn cmax(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl ModularPair {
    /// Validate J² = 1, J isometric, A self-adjoint and J A J = −A.
    pub fn new(j: AntiLinearOp, a: CMat) -> Result<ModularPair> {
        if a.nrows() != j.ambient() || a.ncols() != j.ambient() {
            return Err(WedgeError::Domain("J and A act on different spaces".into()));
        }
        let p = ModularPair { j, a };
        let c = p.check();
        let scale = cmax(&p.a).max(1.0);
        if c.j_squared > 1e-9 || c.j_isometry > 1e-9 {
            return Err(WedgeError::Domain(format!(
                "J is not an anti-unitary involution (residuals {:.3e}, {:.3e})",
                c.j_squared, c.j_isometry
            )));
        }
        if c.a_hermitian > 1e-10 * scale {
            return Err(WedgeError::Domain("log of the modular operator is not self-adjoint".into()));
        }
        if c.jaj_plus_a > 1e-8 * scale {
            return Err(WedgeError::Domain(format!("J A J = -A fails (residual {:.3e})", c.jaj_plus_a)));
        }
        Ok(p)
    }

    /// (J, Δ) = (conj, 1), the pair of ℝ^N.
    pub fn trivial(n: usize) -> ModularPair {
        ModularPair { j: AntiLinearOp::conjugation(n), a: CMat::zeros(n, n) }
    }

    pub fn check(&self) -> PairCheck {
        let n = self.ambient();
        let jm = self.j.matrix();
        let id = RMat::identity(2 * n, 2 * n);
        PairCheck {
            j_squared: linalg::max_abs(&(jm * jm - &id)),
            j_isometry: linalg::max_abs(&(jm.transpose() * jm - &id)),
            a_hermitian: cmax(&(&self.a - self.a.adjoint())),
            jaj_plus_a: cmax(&(self.j.sandwich(&self.a) + &self.a)),
        }
    }

    pub fn ambient(&self) -> usize {
        self.a.nrows()
    }
    pub fn j(&self) -> &AntiLinearOp {
        &self.j
    }
    /// A = log Δ / 2π.
    pub fn generator(&self) -> &CMat {
        &self.a
    }

    /// Δ^s.
    pub fn delta_pow(&self, s: f64) -> CMat {
        linalg::hermitian_fn(&self.a, |x| C64::new((TWO_PI * s * x).exp(), 0.0))
    }
    pub fn delta(&self) -> CMat {
        self.delta_pow(1.0)
    }
    /// Δ^{it} = e^{2πitA}.
    pub fn delta_it(&self, t: f64) -> CMat {
        linalg::hermitian_fn(&self.a, |x| C64::from_polar(1.0, TWO_PI * t * x))
    }

    /// S = J Δ^{1/2}.
    pub fn tomita(&self) -> AntiLinearOp {
        self.j.after_linear(&self.delta_pow(0.5))
    }

    /// (Δ⁻¹, J): the pair of the symplectic complement.
    pub fn dual(&self) -> ModularPair {
        ModularPair { j: self.j.clone(), a: -&self.a }
    }

    /// max(‖A − A′‖, ‖J − J′‖) in operator norm.
    pub fn distance(&self, other: &ModularPair) -> f64 {
        let da = linalg::spectral_norm_c(&(&self.a - &other.a));
        let dj = linalg::spectral_norm(&(self.j.matrix() - other.j.matrix()));
        da.max(dj)
    }

    /// ‖Δ‖ spread e^{2π(max − min)} of the spectrum.
    pub fn spectral_spread(&self) -> f64 {
        let ev = linalg::hermitian_eigenvalues(&self.a);
        match (ev.first(), ev.last()) {
            (Some(lo), Some(hi)) => (TWO_PI * (hi - lo)).exp(),
            _ => 1.0,
        }
    }
}

/// S, together with its polar decomposition, for a standard subspace.
pub fn tomita_from_subspace(h: &RealSubspace) -> Result<(AntiLinearOp, ModularPair)> {
    if !h.is_standard() {
        return Err(WedgeError::Domain("subspace is not standard".into()));
    }
    let n = h.ambient();
    let b = h.basis();
    let cx = linalg::complex_structure(n);
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (2 * n, n)).copy_from(b);
    m.view_mut((0, n), (2 * n, n)).copy_from(&(&cx * b));
    let sv = linalg::singular_values(&m);
    let cond = sv[0] / sv[sv.len() - 1];
    if !(cond <= MAX_CONDITION) {
        return Err(WedgeError::Conditioning(format!("H + iH decomposition has condition number {cond:.3e}")));
    }
    let m_inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| WedgeError::Conditioning("H + iH decomposition is singular".into()))?;
    let mut sign = RMat::identity(2 * n, 2 * n);
    for i in n..2 * n {
        sign[(i, i)] = -1.0;
    }
    let s = &m * sign * m_inv;
    let (sigma, u, v) = linalg::svd(&s);
    let j = &u * v.transpose();
    let root = &v * RMat::from_diagonal(&sigma) * v.transpose();
    // Δ^{1/2} commutes with Cx up to round-off; complexify its Cx-linear part.
    let root = (&root - &cx * &root * &cx) * 0.5;
    let j = (&j + &cx * &j * &cx) * 0.5;
    // Nearest symmetric orthogonal matrix, so that J² = 1 to round-off.
    let (_, ju, jv) = linalg::svd(&((&j + j.transpose()) * 0.5));
    let j = &ju * jv.transpose();
    let root_c = linalg::complexify(&root);
    let a = linalg::hermitian_fn(&root_c, |x| C64::new(x.max(f64::MIN_POSITIVE).ln() / std::f64::consts::PI, 0.0));
    let j = AntiLinearOp::new(j)?;
    let pair = ModularPair::new(j, a)?;
    let s = AntiLinearOp::new(s)?;
    Ok((s, pair))
}

/// H = ker(1 − J Δ^{1/2}).
///
/// Evaluated as Δ^{−1/4}·Fix(J), which spans the same kernel and only needs
/// the kernel of the orthogonal map 1 − J.
pub fn subspace_from_pair(p: &ModularPair) -> Result<RealSubspace> {
    let n = p.ambient();
    let id = RMat::identity(2 * n, 2 * n);
    let fix_j = linalg::null_space(&(&id - p.j().matrix()), KERNEL_TOL);
    if fix_j.ncols() != n {
        return Err(WedgeError::Conditioning(format!("Fix(J) has real dimension {} instead of {n}", fix_j.ncols())));
    }
    let quarter = linalg::realify(&p.delta_pow(-0.25));
    let h = RealSubspace::new(n, &(quarter * fix_j))?;
    let s = p.tomita();
    let resid = linalg::max_abs(&((&id - s.matrix()) * h.basis()));
    let scale = linalg::spectral_norm(s.matrix()).max(1.0);
    if resid > KERNEL_TOL * scale {
        return Err(WedgeError::Conditioning(format!(
            "kernel of 1 - S is numerically defective (residual {resid:.3e})"
        )));
    }
    Ok(h)
}

/// A unitary (parity +1) or anti-unitary (parity −1) operator in realified form.
#[derive(Clone, Debug)]
pub struct SymmetryOp {
    pub matrix: RMat,
    pub parity: i8,
}

impl SymmetryOp {
    pub fn new(matrix: RMat, parity: i8) -> Result<SymmetryOp> {
        let n2 = matrix.nrows();
        if matrix.ncols() != n2 || n2 % 2 != 0 {
            return Err(WedgeError::Domain("operator must be a square realified matrix".into()));
        }
        let iso = linalg::max_abs(&(matrix.transpose() * &matrix - RMat::identity(n2, n2)));
        if iso > 1e-9 {
            return Err(WedgeError::Domain(format!("operator is not isometric (residual {iso:.3e})")));
        }
        let r = match parity {
            1 => linearity_residual(&matrix),
            -1 => antilinearity_residual(&matrix),
            _ => return Err(WedgeError::Domain("parity must be +1 or -1".into())),
        };
        if r > 1e-9 {
            return Err(WedgeError::Domain(format!("parity {parity} inconsistent with commutation with i (residual {r:.3e})")));
        }
        Ok(SymmetryOp { matrix, parity })
    }

    pub fn unitary(u: &CMat) -> Result<SymmetryOp> {
        SymmetryOp::new(linalg::realify(u), 1)
    }

    pub fn anti(j: &AntiLinearOp) -> Result<SymmetryOp> {
        SymmetryOp::new(j.matrix().clone(), -1)
    }
}

#[derive(Clone, Debug)]
pub struct CovarianceReport {
    pub predicted: ModularPair,
    pub recomputed: ModularPair,
    pub residual: f64,
}

/// Predicted pair of U·H, (UΔU*, UJU*), compared with a recomputation.
///
/// The parity enters through Δ^{it}: U Δ^{it} U* = Δ_{UH}^{iε(U)t}, since an
/// anti-unitary U conjugates the i in the exponent. With U = J this gives the
/// pair (Δ⁻¹, J) of H′.
pub fn covariance_transport(u: &SymmetryOp, h: &RealSubspace) -> Result<CovarianceReport> {
    let (_, pair) = tomita_from_subspace(h)?;
    let r = &u.matrix;
    let rt = r.transpose();
    let a_r = linalg::realify(pair.generator());
    let a_new = linalg::complexify(&(r * a_r * &rt));
    let a_new = (&a_new + a_new.adjoint()) * C64::new(0.5, 0.0);
    let j_new = AntiLinearOp::new(r * pair.j().matrix() * &rt)?;
    let predicted = ModularPair::new(j_new, a_new)?;
    let (_, recomputed) = tomita_from_subspace(&h.image(r)?)?;
    let residual = predicted.distance(&recomputed);
    Ok(CovarianceReport { predicted, recomputed, residual })
}

/// J = U·conj·U* for Haar U and A = (B − JBJ)/2 for Hermitian B, rescaled to
/// a uniform norm in [0.1, max_norm].
pub fn random_admissible_pair(rng: &mut Rng, n: usize, max_norm: f64) -> ModularPair {
    let u = random::random_unitary(rng, n);
    let half = AntiLinearOp::from_unitary_times_conj(&u);
    let j = AntiLinearOp::new(half.matrix() * linalg::realify(&u.adjoint())).expect("U conj U* is anti-linear");
    let z = random::complex_normal_mat(rng, n, n);
    let b = (&z + z.adjoint()) * C64::new(0.5, 0.0);
    let mut a = (&b - j.sandwich(&b)) * C64::new(0.5, 0.0);
    a = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let norm = linalg::spectral_norm_c(&a);
    let target = random::uniform(rng, 0.1, max_norm);
    // In N = 1 the only admissible generator is 0 and `a` is rounding noise.
    if norm > 1e-8 * linalg::spectral_norm_c(&b).max(1.0) {
        a *= C64::new(target / norm, 0.0);
        a = (&a - j.sandwich(&a)) * C64::new(0.5, 0.0);
        a = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    } else {
        a = CMat::zeros(n, n);
    }
    ModularPair::new(j, a).expect("generator is admissible by construction")
}

/// Gaussian realified basis of a k-dimensional real subspace.
pub fn random_subspace(rng: &mut Rng, n: usize, k: usize) -> RealSubspace {
    loop {
        let b = random::normal_mat(rng, 2 * n, k);
        if let Ok(h) = RealSubspace::new(n, &b) {
            return h;
        }
    }
}

/// One instance of the bijection audit.
#[derive(Clone, Debug, Serialize)]
pub struct BijectionInstance {
    pub n: usize,
    pub generator_norm: f64,
    /// ‖pair − tomita(subspace(pair))‖.
    pub pair_residual: f64,
    /// ∠(H, subspace(tomita(H))).
    pub subspace_angle: f64,
    /// ‖pair(H′) − (Δ⁻¹, J)‖.
    pub dual_residual: f64,
    /// max over t ∈ {0.3, 1.7} of ∠(Δ^{it}H, H).
    pub invariance_angle: f64,
    /// ∠(J H, H′).
    pub j_dual_angle: f64,
    pub standard: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub seed: u64,
    pub instances: Vec<BijectionInstance>,
    pub max_pair_residual: f64,
    pub max_subspace_angle: f64,
    pub max_dual_residual: f64,
    pub max_invariance_angle: f64,
    pub max_j_dual_angle: f64,
    pub failures: usize,
}

fn audit_one(seed: u64, index: usize, max_n: usize, max_norm: f64) -> BijectionInstance {
    let mut rng = random::seeded(seed, index as u64);
    let n = 1 + index % max_n;
    let pair = random_admissible_pair(&mut rng, n, max_norm);
    let mut out = BijectionInstance {
        n,
        generator_norm: linalg::spectral_norm_c(pair.generator()),
        pair_residual: f64::NAN,
        subspace_angle: f64::NAN,
        dual_residual: f64::NAN,
        invariance_angle: f64::NAN,
        j_dual_angle: f64::NAN,
        standard: false,
        error: None,
    };
    let run = |out: &mut BijectionInstance| -> Result<()> {
        let h = subspace_from_pair(&pair)?;
        out.standard = h.is_standard();
        let (_, back) = tomita_from_subspace(&h)?;
        out.pair_residual = pair.distance(&back);
        let h2 = subspace_from_pair(&back)?;
        out.subspace_angle = h.angle_to(&h2);
        let hc = h.symplectic_complement();
        let (_, dual_pair) = tomita_from_subspace(&hc)?;
        out.dual_residual = dual_pair.distance(&pair.dual());
        let mut inv: f64 = 0.0;
        for t in [0.3, 1.7] {
            inv = inv.max(h.image(&linalg::realify(&pair.delta_it(t)))?.angle_to(&h));
        }
        out.invariance_angle = inv;
        out.j_dual_angle = h.image(pair.j().matrix())?.angle_to(&hc);
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        log::warn!("bijection instance {index} (N = {}) failed: {e}", out.n);
        out.error = Some(e.to_string());
    }
    out
}

/// Round trips, duality and modular invariance on `count` random admissible
/// pairs with N cycling through 1..=max_n.
pub fn bijection_audit(count: usize, max_n: usize, max_norm: f64, seed: u64, exec: Execution) -> BijectionReport {
    let instances = map_indexed(exec, count, |i| audit_one(seed, i, max_n.max(1), max_norm));
    let worst = |f: fn(&BijectionInstance) -> f64| {
        instances.iter().map(f).fold(0.0_f64, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
    };
    BijectionReport {
        seed,
        max_pair_residual: worst(|i| i.pair_residual),
        max_subspace_angle: worst(|i| i.subspace_angle),
        max_dual_residual: worst(|i| i.dual_residual),
        max_invariance_angle: worst(|i| i.invariance_angle),
        max_j_dual_angle: worst(|i| i.j_dual_angle),
        failures: instances.iter().filter(|i| i.error.is_some() || !i.standard).count(),
        instances,
    }
}
