//! Constructive symmetry certificates: an sl₂-triple through h and the Weyl
//! element exchanging h and −h.

use serde::Serialize;

use super::grading::EulerGrading;
use crate::lie::{Family, GroupElement};
use crate::linalg::{self, RMat, RVec};
use crate::par::{map_indexed, Execution};
use crate::random;

/// Search parameters for [`is_symmetric`].
#[derive(Clone, Copy, Debug)]
pub struct SymmetryOptions {
    pub starts: usize,
    pub max_iter: usize,
    pub tolerance: f64,
    pub witness_tolerance: f64,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        SymmetryOptions {
            starts: 32,
            max_iter: 500,
            tolerance: 1e-7,
            witness_tolerance: 1e-6,
            seed: 0x5eed,
            exec: Execution::Sequential,
        }
    }
}

/// e ∈ 𝔤₁, f ∈ 𝔤₋₁ with [e,f] = h, and g = exp((π/√2)(e − f)) with Ad(g)h = −h.
#[derive(Clone, Debug, Serialize)]
pub struct Sl2Certificate {
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub triple_residual: f64,
    pub conjugator: Vec<Vec<f64>>,
    pub witness_residual: f64,
    pub start: usize,
    pub iterations: usize,
    #[serde(skip)]
    pub conjugator_element: Option<GroupElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryVerdict {
    Symmetric,
    NotSymmetric,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryMethod {
    /// A verified sl₂ certificate.
    Certificate,
    /// No certificate; verdict from the symmetric-orbit list for the family.
    ClassificationList,
    /// No certificate and no recognized family.
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub verdict: SymmetryVerdict,
    pub method: SymmetryMethod,
    pub certificate: Option<Sl2Certificate>,
    pub best_residual: f64,
    pub starts_run: usize,
}

impl SymmetryReport {
    pub fn is_symmetric(&self) -> bool {
        self.verdict == SymmetryVerdict::Symmetric
    }
}

struct Attempt {
    alpha: RVec,
    beta: RVec,
    residual: f64,
    iterations: usize,
}

/// Multi-start alternating least squares for [e,f] = h.
pub fn is_symmetric(g: &EulerGrading, opts: &SymmetryOptions) -> SymmetryReport {
    let alg = g.algebra();
    let n = alg.dim();
    let q_plus = g.eigenbasis(1).clone();
    let q_minus = g.eigenbasis(-1).clone();
    let (dp, dm) = (q_plus.ncols(), q_minus.ncols());
    let h = g.h().coords().clone();
    if dp == 0 || dm == 0 {
        return fallback(g, f64::INFINITY, 0);
    }
    // tensor[b] is the n×dp matrix a ↦ [Q₊a, Q₋b]
    let ads: Vec<RMat> = (0..dp).map(|a| alg.ad_coords(&q_plus.column(a).into_owned())).collect();
    let tensor: Vec<RMat> = (0..dm)
        .map(|b| {
            let qb = q_minus.column(b).into_owned();
            RMat::from_columns(&(0..dp).map(|a| &ads[a] * &qb).collect::<Vec<_>>())
        })
        .collect();
    let by_alpha = |alpha: &RVec| -> RMat {
        RMat::from_columns(&(0..dm).map(|b| &tensor[b] * alpha).collect::<Vec<_>>())
    };
    let by_beta = |beta: &RVec| -> RMat {
        let mut m = RMat::zeros(n, dp);
        for b in 0..dm {
            if beta[b] != 0.0 {
                m += &tensor[b] * beta[b];
            }
        }
        m
    };
    let run = |start: usize| -> Attempt {
        let mut rng = random::seeded(opts.seed, start as u64);
        let mut beta = random::normal_vec(&mut rng, dm);
        let mut alpha = RVec::zeros(dp);
        let mut residual = f64::INFINITY;
        let mut history = Vec::new();
        let mut it = 0;
        while it < opts.max_iter {
            it += 1;
            alpha = linalg::lstsq(&by_beta(&beta), &h);
            beta = linalg::lstsq(&by_alpha(&alpha), &h);
            let (na, nb) = (alpha.norm(), beta.norm());
            if na > 0.0 && nb > 0.0 {
                let s = (nb / na).sqrt();
                alpha *= s;
                beta /= s;
            }
            residual = (by_beta(&beta) * &alpha - &h).norm();
            if residual < opts.tolerance * 1e-2 {
                break;
            }
            history.push(residual);
            if history.len() > 40 {
                let old = history[history.len() - 41];
                if old - residual <= 1e-10 * old.max(1e-300) {
                    break;
                }
            }
            if !residual.is_finite() {
                break;
            }
        }
        Attempt { alpha, beta, residual, iterations: it }
    };

    let mut chosen: Option<(usize, Attempt)> = None;
    let mut best = f64::INFINITY;
    let mut ran = 0;
    match opts.exec {
        Execution::Sequential => {
            for s in 0..opts.starts {
                let a = run(s);
                ran += 1;
                best = best.min(a.residual);
                if a.residual < opts.tolerance {
                    chosen = Some((s, a));
                    break;
                }
            }
        }
        Execution::Parallel => {
            let all = map_indexed(opts.exec, opts.starts, run);
            ran = all.len();
            for (s, a) in all.into_iter().enumerate() {
                best = best.min(a.residual);
                if chosen.is_none() && a.residual < opts.tolerance {
                    chosen = Some((s, a));
                }
            }
        }
    }
    if let Some((start, a)) = chosen {
        let e = &q_plus * &a.alpha;
        let f = &q_minus * &a.beta;
        if let Some(cert) = certify(g, &e, &f, a.residual, start, a.iterations, opts) {
            return SymmetryReport {
                verdict: SymmetryVerdict::Symmetric,
                method: SymmetryMethod::Certificate,
                certificate: Some(cert),
                best_residual: best,
                starts_run: ran,
            };
        }
    }
    fallback(g, best, ran)
}

/// Verify a candidate triple and build the conjugator.
pub fn certify(
    g: &EulerGrading,
    e: &RVec,
    f: &RVec,
    triple_residual: f64,
    start: usize,
    iterations: usize,
    opts: &SymmetryOptions,
) -> Option<Sl2Certificate> {
    let alg = g.algebra();
    let h = g.h().coords();
    let x = (e - f) * (std::f64::consts::PI / std::f64::consts::SQRT_2);
    let conj = alg.exp_coords(&x, 1.0).ok()?;
    let image = alg.adjoint_coords(&conj, h).ok()?;
    let witness = (&image + h).norm();
    if witness >= opts.witness_tolerance {
        return None;
    }
    let m = &conj.matrix;
    Some(Sl2Certificate {
        e: e.iter().cloned().collect(),
        f: f.iter().cloned().collect(),
        triple_residual,
        conjugator: (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect(),
        witness_residual: witness,
        start,
        iterations,
        conjugator_element: Some(conj),
    })
}

fn fallback(g: &EulerGrading, best: f64, ran: usize) -> SymmetryReport {
    let (verdict, method) = match classification_verdict(g) {
        Some(true) => (SymmetryVerdict::Symmetric, SymmetryMethod::ClassificationList),
        Some(false) => (SymmetryVerdict::NotSymmetric, SymmetryMethod::ClassificationList),
        None => (SymmetryVerdict::Unknown, SymmetryMethod::Undecided),
    };
    log::debug!("no sl2 certificate after {ran} starts (best residual {best:.3e}); verdict {verdict:?} from {method:?}");
    SymmetryReport { verdict, method, certificate: None, best_residual: best, starts_run: ran }
}

/// Symmetric-orbit list keyed by family and node: for sl_n node j is
/// symmetric iff 2j = n; so(p,q) (p ≠ q) and sp_{2n} have one Euler orbit,
/// which is symmetric.
pub fn classification_verdict(g: &EulerGrading) -> Option<bool> {
    match g.algebra().family() {
        Family::Sl { n } => sl_node(g).map(|j| 2 * j == *n),
        Family::So { p, q } if p != q && p + q >= 3 && *p.min(q) >= 1 => Some(true),
        Family::Sp { .. } => Some(true),
        _ => None,
    }
}

/// For sl_n, the node j of an Euler element: the multiplicity of the top
/// eigenvalue of its matrix.
pub fn sl_node(g: &EulerGrading) -> Option<usize> {
    let hm = g.h().matrix();
    let ev = hm.complex_eigenvalues();
    if ev.iter().any(|e| e.im.abs() > 1e-7) {
        return None;
    }
    let top = ev.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    let j = ev.iter().filter(|e| (e.re - top).abs() < 1e-6).count();
    Some(j)
}
