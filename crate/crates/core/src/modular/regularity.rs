//! Regularity criteria through the cones C_± = ±C ∩ 𝔤_{±1}(h).

use serde::Serialize;

use crate::euler::EulerGrading;
use crate::linalg::{self, RMat, RVec};
use crate::wedge::{ConeSpec, OrderVerdict};
use crate::{Result, WedgeError};

/// Tolerance for the ideal and complement checks of a split.
pub const SPLIT_TOL: f64 = 1e-8;
/// NNLS residual below which a support index is accepted.
const FEASIBLE_TOL: f64 = 1e-9;
/// NNLS residual above which a support index is rejected; in between the
/// answer is reported as indeterminate.
const INFEASIBLE_TOL: f64 = 1e-5;
const RANK_TOL: f64 = 1e-8;
/// Weight of the normalisation row λ_i = 1.
const ROW_WEIGHT: f64 = 1.0;

/// 𝔤 = 𝔯 ⋊ 𝔩 with 𝔯 an ideal.
#[derive(Clone, Debug)]
pub struct SemidirectSplit {
    ideal: RMat,
    complement: RMat,
}

impl SemidirectSplit {
    /// Verifies [𝔤, 𝔯] ⊆ 𝔯, [𝔩, 𝔩] ⊆ 𝔩 and 𝔯 ⊕ 𝔩 = 𝔤.
    pub fn new(grading: &EulerGrading, ideal: Vec<RVec>, complement: Vec<RVec>) -> Result<SemidirectSplit> {
        let alg = grading.algebra();
        let n = alg.dim();
        if ideal.is_empty() || ideal.iter().chain(&complement).any(|v| v.len() != n) {
            return Err(WedgeError::Domain("split bases must be nonempty coordinate vectors".into()));
        }
        let r = RMat::from_columns(&ideal);
        let l = if complement.is_empty() { RMat::zeros(n, 0) } else { RMat::from_columns(&complement) };
        let mut all = ideal.clone();
        all.extend(complement.iter().cloned());
        if all.len() != n || linalg::rank(&RMat::from_columns(&all), 1e-10) != n {
            return Err(WedgeError::Domain("ideal and complement do not form a direct sum decomposition".into()));
        }
        let inside = |z: &RVec, b: &RMat| -> f64 {
            let c = linalg::lstsq(b, z);
            (b * c - z).norm()
        };
        for y in &ideal {
            for x in ideal.iter().chain(&complement) {
                let z = alg.bracket_coords(x, y);
                let off = inside(&z, &r);
                if off > SPLIT_TOL * (1.0 + z.norm()) {
                    return Err(WedgeError::Domain(format!("[𝔤, 𝔯] ⊄ 𝔯 (residual {off:.3e})")));
                }
            }
        }
        for (i, x) in complement.iter().enumerate() {
            for y in &complement[i + 1..] {
                let z = alg.bracket_coords(x, y);
                let off = inside(&z, &l);
                if off > SPLIT_TOL * (1.0 + z.norm()) {
                    return Err(WedgeError::Domain(format!("complement is not a subalgebra (residual {off:.3e})")));
                }
            }
        }
        Ok(SemidirectSplit { ideal: r, complement: l })
    }

    pub fn ideal(&self) -> &RMat {
        &self.ideal
    }
    pub fn complement(&self) -> &RMat {
        &self.complement
    }
}

#[derive(Clone, Debug)]
pub struct RegularityQuery {
    pub cone: ConeSpec,
    pub grading: EulerGrading,
    pub split: Option<SemidirectSplit>,
}

impl RegularityQuery {
    pub fn new(cone: ConeSpec, grading: EulerGrading, split: Option<SemidirectSplit>) -> Result<RegularityQuery> {
        if cone.algebra().dim() != grading.algebra().dim() {
            return Err(WedgeError::Domain("cone and grading live on different algebras".into()));
        }
        if let Some(s) = &split {
            for g in cone.generators() {
                let c = linalg::lstsq(s.ideal(), g);
                let off = (s.ideal() * c - g).norm();
                if off > SPLIT_TOL * (1.0 + g.norm()) {
                    return Err(WedgeError::Domain("cone generators must lie in the ideal".into()));
                }
            }
        }
        Ok(RegularityQuery { cone, grading, split })
    }
}

/// One side of the cone check.
#[derive(Clone, Debug, Serialize)]
pub struct SideReport {
    pub sign: i32,
    pub verdict: OrderVerdict,
    /// dim span(C_±).
    pub span_dim: usize,
    /// dim 𝔤_{±1}(h), or dim 𝔯_{±1}(h) on the ideal.
    pub target_dim: usize,
    /// Generators that occur with positive weight in some element of C_±.
    pub support: Vec<usize>,
    /// Membership residual of the re-verified interior point of C_±.
    pub membership_residual: f64,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub cone: String,
    pub plus: SideReport,
    pub minus: SideReport,
}

impl RegularityReport {
    pub fn verdict(&self) -> OrderVerdict {
        combine(self.plus.verdict, self.minus.verdict)
    }
}

fn combine(a: OrderVerdict, b: OrderVerdict) -> OrderVerdict {
    match (a, b) {
        (OrderVerdict::False, _) | (_, OrderVerdict::False) => OrderVerdict::False,
        (OrderVerdict::True, OrderVerdict::True) => OrderVerdict::True,
        _ => OrderVerdict::Indeterminate,
    }
}

/// C_± for one sign against the target space `ambient` (columns).
fn side(q: &RegularityQuery, sign: i32, ambient: Option<&RMat>) -> SideReport {
    let p = q.grading.projection(sign);
    let target_dim = match ambient {
        Some(r) => linalg::rank(&(p * r), RANK_TOL),
        None => linalg::rank(p, RANK_TOL),
    };
    let gens: Vec<RVec> = q.cone.generators().iter().map(|g| g.normalize() * sign as f64).collect();
    let mut diagnostics = Vec::new();
    let empty = |diagnostics: Vec<String>| SideReport {
        sign,
        verdict: if target_dim == 0 { OrderVerdict::True } else { OrderVerdict::False },
        span_dim: 0,
        target_dim,
        support: Vec::new(),
        membership_residual: 0.0,
        diagnostics,
    };
    if gens.is_empty() {
        return empty(vec!["cone has no generators".into()]);
    }
    let n = q.grading.algebra().dim();
    let k = gens.len();
    let g = RMat::from_columns(&gens);
    let id = RMat::identity(n, n);
    let a = (&id - p) * &g;

    // Index i is in the support iff {λ ≥ 0, Aλ = 0, λ_i = 1} is feasible.
    let mut support = Vec::new();
    let mut weights = RVec::zeros(k);
    for i in 0..k {
        let mut m = RMat::zeros(n + 1, k);
        m.view_mut((0, 0), (n, k)).copy_from(&a);
        m[(n, i)] = ROW_WEIGHT;
        let mut b = RVec::zeros(n + 1);
        b[n] = ROW_WEIGHT;
        let (x, res) = linalg::nnls(&m, &b);
        if res <= FEASIBLE_TOL {
            support.push(i);
            weights += x;
        } else if res <= INFEASIBLE_TOL {
            diagnostics.push(format!("generator {i}: feasibility residual {res:.3e} is inconclusive"));
        }
    }
    if support.is_empty() {
        let mut r = empty(diagnostics);
        if !r.diagnostics.is_empty() && target_dim > 0 {
            r.verdict = OrderVerdict::Indeterminate;
        }
        return r;
    }

    // span(C_±) = G·(ker A ∩ ℝ^S) for the support S.
    let a_s = a.select_columns(support.iter());
    let g_s = g.select_columns(support.iter());
    // Generators are normalised, so the cutoff is absolute.
    let kernel = linalg::null_space_abs(&a_s, FEASIBLE_TOL);
    let span_dim = if kernel.ncols() == 0 { 0 } else { linalg::rank(&(&g_s * &kernel), RANK_TOL) };

    // Re-verify: the averaged point lies in ±C and in 𝔤_{±1}.
    let point = &g * &weights;
    let in_cone = q.cone.membership_residual(&(&point * sign as f64));
    let off_grade = (&point - p * &point).norm() / point.norm().max(1e-300);
    let membership_residual = in_cone.max(off_grade);
    if point.norm() <= 1e-12 {
        diagnostics.push("interior point of C_± vanished".into());
    } else if membership_residual > 1e-6 {
        diagnostics.push(format!("interior point failed re-verification (residual {membership_residual:.3e})"));
    }
    let conclusive = diagnostics.is_empty();
    let verdict = if span_dim == target_dim {
        if conclusive {
            OrderVerdict::True
        } else {
            OrderVerdict::Indeterminate
        }
    } else if conclusive {
        OrderVerdict::False
    } else {
        OrderVerdict::Indeterminate
    };
    SideReport { sign, verdict, span_dim, target_dim, support, membership_residual, diagnostics }
}

/// Do C₊ and C₋ linearly generate 𝔤₁(h) and 𝔤₋₁(h)?
///
/// C is the conic hull of the cone's generators; for curved cones this is an
/// inner approximation.
pub fn regularity_cone_check(q: &RegularityQuery) -> RegularityReport {
    RegularityReport { cone: q.cone.label.clone(), plus: side(q, 1, None), minus: side(q, -1, None) }
}

#[derive(Clone, Debug, Serialize)]
pub struct SemidirectReport {
    /// Condition (a): C_± = ±C ∩ 𝔯_{±1}(h) generate 𝔯_{±1}(h).
    pub cone_condition: RegularityReport,
    /// Condition (b): h-regularity of the restriction to the complement's group,
    /// supplied by the caller.
    pub attested_complement_regular: bool,
    pub attestation_note: String,
    pub verdict: OrderVerdict,
}

/// Semidirect criterion: (a) on the ideal, combined with the attested (b).
pub fn semidirect_regularity_check(q: &RegularityQuery, attestation: bool, note: &str) -> Result<SemidirectReport> {
    let split = q.split.as_ref().ok_or_else(|| WedgeError::Domain("query carries no semidirect split".into()))?;
    let cone_condition = RegularityReport {
        cone: q.cone.label.clone(),
        plus: side(q, 1, Some(split.ideal())),
        minus: side(q, -1, Some(split.ideal())),
    };
    let a = cone_condition.verdict();
    let verdict = if attestation { a } else { OrderVerdict::False };
    Ok(SemidirectReport {
        cone_condition,
        attested_complement_regular: attestation,
        attestation_note: note.into(),
        verdict,
    })
}
