use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::lie::{AlgebraElement, GroupElement, LieAlgebra};
use crate::linalg::{self, RMat, RVec};
use crate::{Result, WedgeError};

/// Spectrum tolerance for membership in {−1, 0, 1}, relative to max(1, ‖ad h‖).
pub const SPECTRUM_TOL: f64 = 1e-6;

/// Why an element failed the Euler test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotEuler {
    /// ad h = 0.
    Central,
    /// Some eigenvalue of ad h is not close to −1, 0 or 1.
    SpectrumOutside { real: f64, imag: f64 },
    /// Spectrum fits but ad h is not diagonalizable.
    NotDiagonalizable { residual: f64 },
    /// Projections computed but the bracket grading law fails.
    GradingLaw { residual: f64 },
}

impl fmt::Display for NotEuler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotEuler::Central => write!(f, "central"),
            NotEuler::SpectrumOutside { real, imag } => {
                write!(f, "ad-eigenvalue {real:.6}+{imag:.6}i outside {{-1,0,1}}")
            }
            NotEuler::NotDiagonalizable { residual } => {
                write!(f, "ad h not diagonalizable (|A^3-A| = {residual:.3e})")
            }
            NotEuler::GradingLaw { residual } => write!(f, "grading law fails ({residual:.3e})"),
        }
    }
}

/// Dimensions (𝔤₋₁, 𝔤₀, 𝔤₁).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradingDims {
    pub minus: usize,
    pub zero: usize,
    pub plus: usize,
}

impl GradingDims {
    pub fn as_array(&self) -> [usize; 3] {
        [self.minus, self.zero, self.plus]
    }
}

/// The 3-grading induced by an Euler element.
#[derive(Clone, Debug)]
pub struct EulerGrading {
    h: AlgebraElement,
    ad_h: RMat,
    p_minus: RMat,
    p_zero: RMat,
    p_plus: RMat,
    bases: [RMat; 3],
    dims: GradingDims,
    spectrum_residual: f64,
}

/// Test whether `h` is an Euler element and return its grading.
pub fn is_euler(h: &AlgebraElement) -> std::result::Result<EulerGrading, NotEuler> {
    let alg = h.algebra();
    let n = alg.dim();
    let a = h.ad_matrix();
    let anorm = linalg::spectral_norm(&a);
    if anorm <= 1e-12_f64.max(alg.tolerance()) {
        return Err(NotEuler::Central);
    }
    let id = RMat::identity(n, n);
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let diag_res = linalg::max_abs(&(&a3 - &a));
    // a³ = a holds exactly when ad h is diagonalizable with spectrum in {−1,0,1};
    // the eigenvalues are only consulted to explain a failure.
    if diag_res > SPECTRUM_TOL * anorm.max(1.0).powi(3) {
        let tol = SPECTRUM_TOL.sqrt() * anorm.max(1.0);
        for ev in a.complex_eigenvalues().iter() {
            if !(ev.re.is_finite() && ev.im.is_finite()) {
                continue;
            }
            let close = [-1.0, 0.0, 1.0]
                .iter()
                .any(|t| ((ev.re - t).powi(2) + ev.im.powi(2)).sqrt() <= tol);
            if !close {
                return Err(NotEuler::SpectrumOutside { real: ev.re, imag: ev.im });
            }
        }
        return Err(NotEuler::NotDiagonalizable { residual: diag_res });
    }
    let p_plus = (&a2 + &a) * 0.5;
    let p_minus = (&a2 - &a) * 0.5;
    let p_zero = &id - &a2;
    let mut spectrum_residual: f64 = diag_res;
    spectrum_residual = spectrum_residual
        .max(linalg::max_abs(&(&a * &p_plus - &p_plus)))
        .max(linalg::max_abs(&(&a * &p_minus + &p_minus)))
        .max(linalg::max_abs(&(&a * &p_zero)));
    let rank_of = |p: &RMat| linalg::range_basis(p, 1e-6);
    let bases = [rank_of(&p_minus), rank_of(&p_zero), rank_of(&p_plus)];
    let dims = GradingDims {
        minus: bases[0].ncols(),
        zero: bases[1].ncols(),
        plus: bases[2].ncols(),
    };
    if dims.minus + dims.zero + dims.plus != n {
        return Err(NotEuler::NotDiagonalizable { residual: spectrum_residual });
    }
    let grading = EulerGrading {
        h: h.clone(),
        ad_h: a,
        p_minus,
        p_zero,
        p_plus,
        bases,
        dims,
        spectrum_residual,
    };
    let law = grading.grading_law_residual();
    if law > SPECTRUM_TOL * anorm.max(1.0).powi(2) {
        return Err(NotEuler::GradingLaw { residual: law });
    }
    Ok(grading)
}

impl EulerGrading {
    pub fn h(&self) -> &AlgebraElement {
        &self.h
    }
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.h.algebra()
    }
    pub fn ad_h(&self) -> &RMat {
        &self.ad_h
    }
    pub fn dims(&self) -> GradingDims {
        self.dims
    }
    pub fn spectrum_residual(&self) -> f64 {
        self.spectrum_residual
    }

    /// Projection onto 𝔤_ν for ν ∈ {−1, 0, 1}.
    pub fn projection(&self, nu: i32) -> &RMat {
        match nu {
            -1 => &self.p_minus,
            0 => &self.p_zero,
            1 => &self.p_plus,
            _ => panic!("degree must be -1, 0 or 1"),
        }
    }

    /// Orthonormal coordinate basis of 𝔤_ν.
    pub fn eigenbasis(&self, nu: i32) -> &RMat {
        match nu {
            -1 => &self.bases[0],
            0 => &self.bases[1],
            1 => &self.bases[2],
            _ => panic!("degree must be -1, 0 or 1"),
        }
    }

    /// Degree of `x` if it is homogeneous.
    pub fn degree(&self, x: &RVec, tol: f64) -> Option<i32> {
        let scale = x.norm().max(1e-300);
        [-1, 0, 1]
            .into_iter()
            .find(|&nu| (self.projection(nu) * x - x).norm() <= tol * scale)
    }

    /// Worst violation of [𝔤_i, 𝔤_j] ⊆ 𝔤_{i+j} over eigenbasis pairs.
    pub fn grading_law_residual(&self) -> f64 {
        let alg = self.algebra();
        let mut worst: f64 = 0.0;
        for i in [-1, 0, 1] {
            for j in [-1, 0, 1] {
                let bi = self.eigenbasis(i);
                let bj = self.eigenbasis(j);
                let k = i + j;
                for a in 0..bi.ncols() {
                    let ad = alg.ad_coords(&bi.column(a).into_owned());
                    for b in 0..bj.ncols() {
                        let br = &ad * bj.column(b);
                        let off = if k.abs() >= 2 { br.norm() } else { (&br - self.projection(k) * &br).norm() };
                        worst = worst.max(off);
                    }
                }
            }
        }
        worst
    }

    /// The Euler involution τ_h = P₀ − P₁ − P₋₁.
    pub fn involution(&self) -> Result<EulerInvolution> {
        euler_involution(self)
    }
}

/// τ_h as a coordinate map.
#[derive(Clone, Debug)]
pub struct EulerInvolution {
    matrix: RMat,
    automorphism_residual: f64,
}

impl EulerInvolution {
    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }
    pub fn automorphism_residual(&self) -> f64 {
        self.automorphism_residual
    }
    pub fn apply(&self, x: &RVec) -> RVec {
        &self.matrix * x
    }
}

/// Build τ_h and verify it is an involutive automorphism.
pub fn euler_involution(g: &EulerGrading) -> Result<EulerInvolution> {
    let tau = g.projection(0) - g.projection(1) - g.projection(-1);
    let alg = g.algebra();
    let n = alg.dim();
    let mut worst = linalg::max_abs(&(&tau * &tau - RMat::identity(n, n)));
    let images: Vec<RVec> = (0..n).map(|j| tau.column(j).into_owned()).collect();
    for i in 0..n {
        let ad_ti = alg.ad_coords(&images[i]);
        let lhs = &tau * alg.ad_basis(i);
        for j in 0..n {
            let rhs = &ad_ti * &images[j];
            worst = worst.max((lhs.column(j) - rhs).amax());
        }
    }
    let scale = linalg::max_abs(&tau).max(1.0).powi(3);
    if worst > 1e-6 * scale {
        return Err(WedgeError::InconsistentGrading(format!(
            "Euler involution is not an automorphism (residual {worst:.3e})"
        )));
    }
    Ok(EulerInvolution { matrix: tau, automorphism_residual: worst })
}

/// ‖τ_{h_a}(h_b) + h_b‖ < 1e-8.
pub fn is_orthogonal_pair(ga: &EulerGrading, gb: &EulerGrading) -> Result<bool> {
    ga.h().sub(gb.h())?;
    let tau = euler_involution(ga)?;
    let hb = gb.h().coords();
    Ok((tau.apply(hb) + hb).norm() < 1e-8)
}

/// An odd group element σ (parity −1) with Ad(σ) = τ_h, built as a sign
/// matrix on the eigenspaces of h in the matrix realisation.
pub fn involution_element(g: &EulerGrading) -> Result<GroupElement> {
    let alg = g.algebra();
    let hm = g.h().matrix();
    let d = hm.nrows();
    let evs = hm.complex_eigenvalues();
    if evs.iter().any(|e| e.im.abs() > 1e-8) {
        return Err(WedgeError::Numeric("Euler element has non-real matrix eigenvalues".into()));
    }
    let mut distinct: Vec<f64> = Vec::new();
    for e in evs.iter() {
        if !distinct.iter().any(|v| (v - e.re).abs() < 1e-7) {
            distinct.push(e.re);
        }
    }
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut reference: Vec<f64> = Vec::new();
    let mut sign = vec![0.0; distinct.len()];
    for (k, &lam) in distinct.iter().enumerate() {
        let class = reference.iter().find(|&&r| {
            let diff = lam - r;
            (diff - diff.round()).abs() < 1e-7
        });
        let r = match class {
            Some(&r) => r,
            None => {
                reference.push(lam);
                lam
            }
        };
        sign[k] = if ((lam - r).round() as i64) % 2 == 0 { 1.0 } else { -1.0 };
    }
    let id = RMat::identity(d, d);
    let mut sigma = RMat::zeros(d, d);
    for (k, &lam) in distinct.iter().enumerate() {
        let mut p = id.clone();
        for (l, &mu) in distinct.iter().enumerate() {
            if l != k {
                p = p * ((&hm - &id * mu) / (lam - mu));
            }
        }
        sigma += p * sign[k];
    }
    let sigma_el = GroupElement::new(sigma, -1)?;
    let tau = euler_involution(g)?;
    let ad = alg.adjoint_matrix(&sigma_el)?;
    let r = linalg::max_abs(&(ad - tau.matrix()));
    if r > 1e-8 {
        return Err(WedgeError::Numeric(format!(
            "matrix realisation of the Euler involution failed (residual {r:.3e})"
        )));
    }
    Ok(sigma_el)
}
