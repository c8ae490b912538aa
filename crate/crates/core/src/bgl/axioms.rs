//! Checker for the net axioms on a finite family of placed wedges.

use serde::Serialize;

use super::rep::{bgl_pair, rep_data_for, Representation};
use crate::lie::GroupElement;
use crate::linalg;
use crate::stdsub::{covariance_transport, subspace_from_pair, tomita_from_subspace, RealSubspace};
use crate::wedge::{dual, OrbitWedge, OrderVerdict, WedgeOrbit};
use crate::{Result, WedgeError};

/// Residual threshold for a passing axiom.
pub const AXIOM_TOL: f64 = 1e-8;
const MATCH_TOL: f64 = 1e-8;
const BW_TIMES: [f64; 3] = [-1.0, 0.5, 1.0];

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub pass: bool,
    /// Worst residual over the checked instances (0 if none).
    pub residual: f64,
    pub checked: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NetAxiomReport {
    pub family: usize,
    pub axioms: Vec<AxiomResult>,
}

impl NetAxiomReport {
    pub fn get(&self, axiom: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.axiom == axiom)
    }
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }
}

/// A wedge of the family with its subspace.
#[derive(Clone, Debug)]
pub struct NetEntry {
    pub wedge: OrbitWedge,
    pub subspace: RealSubspace,
}

/// Place g.W₀ for each transporter and attach H_U(g.W₀) from the BGL pair.
pub fn bgl_net<R: Representation + ?Sized>(
    rep: &R,
    orbit: &WedgeOrbit,
    sigma: &GroupElement,
    transporters: &[GroupElement],
) -> Result<Vec<NetEntry>> {
    transporters
        .iter()
        .map(|g| {
            let wedge = orbit.place(g.clone())?;
            let data = rep_data_for(rep, &wedge, sigma)?;
            let subspace = subspace_from_pair(&bgl_pair(&data)?)?;
            Ok(NetEntry { wedge, subspace })
        })
        .collect()
}

fn result(axiom: &str, residual: f64, checked: usize, note: Option<String>) -> AxiomResult {
    AxiomResult { axiom: axiom.into(), pass: residual < AXIOM_TOL, residual, checked, note }
}

/// HK1–HK8 on a finite family. Group elements are the relative transporters
/// T_j T_i⁻¹ between family members, so covariance is tested exactly where the
/// image wedge is in the family.
pub fn check_net_axioms<R: Representation + ?Sized>(
    net: &[NetEntry],
    orbit: &WedgeOrbit,
    rep: &R,
    sigma: &GroupElement,
) -> Result<NetAxiomReport> {
    if net.is_empty() {
        return Err(WedgeError::Domain("empty wedge family".into()));
    }
    let pairs: Vec<_> = net.iter().map(|e| tomita_from_subspace(&e.subspace).map(|(_, p)| p)).collect::<Result<_>>()?;
    let complements: Vec<RealSubspace> = net.iter().map(|e| e.subspace.symplectic_complement()).collect();
    let same = |i: usize, j: usize| net[i].wedge.couple.distance(&net[j].wedge.couple) <= MATCH_TOL;

    // HK1 isotony over distinct couples with W_i ≤ W_j.
    let (mut r1, mut n1) = (0.0f64, 0usize);
    // HK4 locality over W_i ≤ W_j′.
    let (mut r4, mut n4) = (0.0f64, 0usize);
    // HK2 / HK7 covariance.
    let (mut r2, mut n2, mut r7, mut n7) = (0.0f64, 0usize, 0.0f64, 0usize);
    let mut indeterminate = 0usize;
    for i in 0..net.len() {
        for j in 0..net.len() {
            if i != j && !same(i, j) {
                match orbit.leq(&net[i].wedge, &net[j].wedge)?.verdict {
                    OrderVerdict::True => {
                        r1 = r1.max(linalg::containment_gap(net[i].subspace.basis(), net[j].subspace.basis(), 1e-9));
                        n1 += 1;
                    }
                    OrderVerdict::Indeterminate => indeterminate += 1,
                    OrderVerdict::False => {}
                }
            }
            match orbit.is_local_pair(&net[i].wedge, &net[j].wedge)?.verdict {
                OrderVerdict::True => {
                    r4 = r4.max(linalg::containment_gap(net[i].subspace.basis(), complements[j].basis(), 1e-9));
                    n4 += 1;
                }
                OrderVerdict::Indeterminate => indeterminate += 1,
                OrderVerdict::False => {}
            }
            let g = net[j].wedge.transporter.mul(&net[i].wedge.transporter.inverse()?);
            let u = rep.apply(&g)?;
            let cov = covariance_transport(&u, &net[i].subspace)?;
            let img = net[i].subspace.image(&u.matrix)?;
            let r = cov.predicted.distance(&pairs[j]).max(img.angle_to(&net[j].subspace));
            if g.is_even() {
                r2 = r2.max(r);
                n2 += 1;
            } else {
                r7 = r7.max(r);
                n7 += 1;
            }
        }
    }

    // HK3 spectral condition on the cone generators.
    let mut r3: f64 = 0.0;
    for x in orbit.cone().generators() {
        let neg_i = rep.derivative(x) * crate::C64::new(0.0, -1.0);
        let min = linalg::hermitian_eigenvalues(&neg_i).first().copied().unwrap_or(0.0);
        r3 = r3.max((-min).max(0.0));
    }
    let n3 = orbit.cone().generators().len();

    // HK5 BW, HK6 duality, HK8 modular reflection.
    let (mut r5, mut r6, mut n6, mut r8) = (0.0f64, 0.0f64, 0usize, 0.0f64);
    for (i, e) in net.iter().enumerate() {
        let h = e.wedge.couple.h();
        for &t in &BW_TIMES {
            let g = h.exp(t)?;
            let u = rep.apply(&g)?.matrix;
            let d = linalg::realify(&pairs[i].delta_it(-t / (2.0 * std::f64::consts::PI)));
            r5 = r5.max(linalg::spectral_norm(&(u - d)));
        }
        let w_dual = dual(&e.wedge.couple);
        if let Some(k) = (0..net.len()).find(|&k| net[k].wedge.couple.distance(&w_dual) <= MATCH_TOL) {
            r6 = r6.max(net[k].subspace.angle_to(&complements[i]));
            n6 += 1;
        }
        let sw = e.wedge.transporter.mul(sigma).mul(&e.wedge.transporter.inverse()?);
        let u = rep.apply(&sw)?;
        r8 = r8.max(linalg::max_abs(&(u.matrix - pairs[i].j().matrix())));
    }

    let note_ind = (indeterminate > 0).then(|| format!("{indeterminate} order verdicts were indeterminate and skipped"));
    let axioms = vec![
        result(
            "HK1",
            r1,
            n1,
            if n1 == 0 { Some("no nontrivial inclusions in the family".into()) } else { note_ind.clone() },
        ),
        result("HK2", r2, n2, None),
        result("HK3", r3, n3, if n3 == 0 { Some("cone has no generators".into()) } else { None }),
        result("HK4", r4, n4, note_ind),
        result("HK5", r5, net.len() * BW_TIMES.len(), None),
        result("HK6", r6, n6, if n6 == 0 { Some("no dual pairs in the family".into()) } else { None }),
        result("HK7", r7, n7, None),
        result("HK8", r8, net.len(), None),
    ];
    Ok(NetAxiomReport { family: net.len(), axioms })
}
