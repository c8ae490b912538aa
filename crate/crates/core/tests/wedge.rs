use std::sync::Arc;

use proptest::prelude::*;
use wedgekit::euler::{involution_element, is_euler, is_symmetric, SymmetryOptions};
use wedgekit::lie::{self, GroupElement, LieAlgebra};
use wedgekit::linalg::{RMat, RVec};
use wedgekit::random;
use wedgekit::wedge::*;
use wedgekit::WedgeError;

fn sl2() -> Arc<LieAlgebra> {
    lie::sl(2).unwrap()
}

fn sl2_orbit() -> WedgeOrbit {
    let g = sl2();
    let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
    WedgeOrbit::new(WedgeCouple::new(&h).unwrap(), ConeSpec::sl2_standard(&g).unwrap()).unwrap()
}

fn m2(a: f64, b: f64, c: f64, d: f64) -> RMat {
    RMat::from_row_slice(2, 2, &[a, b, c, d])
}

fn even(m: RMat) -> GroupElement {
    GroupElement::new(m, 1).unwrap()
}

/// m·(0,∞) ⊆ (0,∞) for x ↦ (ax+b)/(cx+d), det > 0, from endpoint images and
/// the pole. None when some quantity is within `band` of its boundary.
fn halfline_oracle(m: &RMat, band: f64) -> Option<bool> {
    let s = m.determinant().sqrt();
    let (a, b, c, d) = (m[(0, 0)] / s, m[(0, 1)] / s, m[(1, 0)] / s, m[(1, 1)] / s);
    // Image endpoints b/d (of 0) and a/c (of ∞) must lie in [0,∞]; the pole −d/c
    // must not lie in (0,∞). With det = 1 these reduce to sign conditions.
    let vals = [a, b, c, d];
    if vals.iter().any(|v| v.abs() < band) {
        return None;
    }
    let m0 = b / d;
    let minf = a / c;
    let pole = -d / c;
    Some(m0 > 0.0 && minf > 0.0 && pole < 0.0)
}

/// Point sampling of the same question, used to validate the analytic oracle.
fn halfline_sampled(m: &RMat) -> bool {
    (1..400).all(|k| {
        let x = (k as f64 * 0.05 - 10.0).exp();
        let den = m[(1, 0)] * x + m[(1, 1)];
        let y = (m[(0, 0)] * x + m[(0, 1)]) / den;
        den != 0.0 && y > 0.0
    })
}

#[test]
fn twisted_adjoint_examples() {
    let g = sl2();
    let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
    let e = g.basis_element(1);
    let id = GroupElement::identity(2);
    assert!((twisted_adjoint(&id, &e).unwrap().coords() - e.coords()).norm() < 1e-15);
    let sigma = involution_element(&is_euler(&h).unwrap()).unwrap();
    assert_eq!(sigma.parity, -1);
    let img = twisted_adjoint(&sigma, &h).unwrap();
    assert!((img.coords() + h.coords()).norm() < 1e-12);
    for t in [-1.3, 0.4, 2.0] {
        let b = h.exp(t).unwrap();
        let eb = twisted_adjoint(&b, &e).unwrap();
        assert!((eb.coords() - e.coords() * t.exp()).norm() < 1e-10 * t.exp());
    }
}

#[test]
fn act_and_dual_examples() {
    let g = sl2();
    let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
    let w = WedgeCouple::new(&h).unwrap();
    assert!(act(&GroupElement::identity(2), &w).unwrap().approx_eq(&w, 1e-12));
    let sigma = involution_element(w.grading()).unwrap();
    let tw = act(&sigma, &w).unwrap();
    assert!(tw.approx_eq(&dual(&w), 1e-10));
    assert!((dual(&w).h().coords() + h.coords()).norm() < 1e-15);
    assert!(dual(&dual(&w)).approx_eq(&w, 0.0));
    let report = is_symmetric(w.grading(), &SymmetryOptions::default());
    let cert = report.certificate.expect("sl2 is symmetric");
    let rot = cert.conjugator_element.unwrap();
    assert!(act(&rot, &w).unwrap().approx_eq(&dual(&w), 1e-6));
}

#[test]
fn couple_from_parts_rejects_foreign_involution() {
    let g = sl2();
    let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
    let w = WedgeCouple::new(&h).unwrap();
    assert!(WedgeCouple::from_parts(&h, w.tau().clone()).is_ok());
    assert!(matches!(WedgeCouple::from_parts(&h, RMat::identity(3, 3)), Err(WedgeError::Domain(_))));
    let e = g.basis_element(1);
    assert!(matches!(WedgeCouple::new(&e), Err(WedgeError::Domain(_))));
}

fn random_even(alg: &Arc<LieAlgebra>, rng: &mut random::Rng, scale: f64) -> GroupElement {
    let x = random::normal_vec(rng, alg.dim()) * scale;
    alg.exp_coords(&x, 1.0).unwrap()
}

#[test]
fn action_is_a_group_action() {
    for label in ["sl2", "sl3", "so(1,2)", "so(1,3)"] {
        let alg = lie::make_algebra_from_label(label).unwrap();
        let classes = wedgekit::euler::classify_euler_orbits(&alg).unwrap();
        let w = WedgeCouple::new(classes.orbits[0].representative()).unwrap();
        let mut rng = random::seeded(11, 0);
        for _ in 0..25 {
            let g1 = random_even(&alg, &mut rng, 0.4);
            let g2 = random_even(&alg, &mut rng, 0.4);
            let lhs = act(&g1, &act(&g2, &w).unwrap()).unwrap();
            let rhs = act(&g1.mul(&g2), &w).unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-8), "{label}: {}", lhs.distance(&rhs));
            let a = dual(&act(&g1, &w).unwrap());
            let b = act(&g1, &dual(&w)).unwrap();
            assert!(a.approx_eq(&b, 1e-8));
        }
    }
}

#[test]
fn cones_are_pointed_and_invariant() {
    let g = sl2();
    let c = ConeSpec::sl2_standard(&g).unwrap();
    assert!(c.is_pointed());
    assert_eq!(c.generators().len(), 16);
    let e = RVec::from_vec(vec![0.0, 1.0, 0.0]);
    let f = RVec::from_vec(vec![0.0, 0.0, 1.0]);
    assert!(c.contains(&e, 1e-12));
    assert!(c.contains(&-&f, 1e-12));
    assert!(!c.contains(&f, 1e-6));
    assert!(!c.contains(&RVec::from_vec(vec![1.0, 0.0, 0.0]), 1e-6));
    let mut rng = random::seeded(5, 0);
    let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
    let sigma = involution_element(&is_euler(&h).unwrap()).unwrap();
    let samples: Vec<GroupElement> = (0..64)
        .map(|k| {
            let x = random_even(&g, &mut rng, 0.7);
            if k % 2 == 0 {
                x
            } else {
                x.mul(&sigma)
            }
        })
        .collect();
    let rep = c.verify_invariance(&samples, 1e-6).unwrap();
    assert!(rep.invariant, "worst {}", rep.worst_residual);

    let p = lie::iso(2).unwrap();
    let fwd = ConeSpec::poincare_forward(&p).unwrap();
    assert!(fwd.is_pointed());
    let lorentz: Vec<GroupElement> = (0..64)
        .map(|_| {
            let mut x = random::normal_vec(&mut rng, p.dim()) * 0.6;
            for i in 3..6 {
                x[i] = 0.0;
            }
            p.exp_coords(&x, 1.0).unwrap()
        })
        .collect();
    assert!(fwd.verify_invariance(&lorentz, 1e-6).unwrap().invariant);

    let two_sided = ConeSpec::polyhedral(&g, "line", vec![e.clone(), -&e]);
    assert!(matches!(two_sided, Err(WedgeError::Domain(_))));
    let poly = ConeSpec::polyhedral(&g, "quadrant", vec![e.clone(), -&f]).unwrap();
    assert!(poly.contains(&RVec::from_vec(vec![0.0, 2.0, -3.0]), 1e-9));
    assert!(!poly.contains(&RVec::from_vec(vec![0.0, 2.0, 3.0]), 1e-6));
    let not_invariant = poly.verify_invariance(&samples, 1e-6).unwrap();
    assert!(!not_invariant.invariant);
}

#[test]
fn leq_examples() {
    let o = sl2_orbit();
    let g = sl2();
    let base = o.place(GroupElement::identity(2)).unwrap();
    let up = o.place(g.exp_coords(&RVec::from_vec(vec![0.0, 1.0, 0.0]), 1.0).unwrap()).unwrap();
    assert_eq!(o.leq(&up, &base).unwrap().verdict, OrderVerdict::True);
    assert_eq!(o.leq(&base, &base).unwrap().verdict, OrderVerdict::True);
    assert_eq!(o.leq(&base, &up).unwrap().verdict, OrderVerdict::False);
    let r = o.leq(&up, &base).unwrap();
    let dec = r.decomposition.unwrap();
    assert!((dec.c_plus - 1.0).abs() < 1e-12 && dec.c_minus == 0.0);

    let tiny = o.place(even(m2(1.0, 5e-11, 0.0, 1.0))).unwrap();
    assert_eq!(o.leq(&tiny, &base).unwrap().verdict, OrderVerdict::Indeterminate);

    let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
    let triv = WedgeOrbit::new(WedgeCouple::new(&h).unwrap(), ConeSpec::trivial(&g)).unwrap();
    let b0 = triv.place(GroupElement::identity(2)).unwrap();
    let b1 = triv.place(up.transporter.clone()).unwrap();
    assert_eq!(triv.leq(&b1, &b0).unwrap().verdict, OrderVerdict::False);
    assert_eq!(triv.leq(&b0, &b0).unwrap().verdict, OrderVerdict::True);
    let boost = triv.place(h.exp(0.8).unwrap()).unwrap();
    assert_eq!(triv.leq(&boost, &b0).unwrap().verdict, OrderVerdict::True);
}

#[test]
fn locality_examples() {
    let o = sl2_orbit();
    let base = o.place(GroupElement::identity(2)).unwrap();
    let left = o.dual(&base).unwrap();
    assert_eq!(o.is_local_pair(&base, &base).unwrap().verdict, OrderVerdict::False);
    assert_eq!(o.is_local_pair(&base, &left).unwrap().verdict, OrderVerdict::True);
    // (t, ∞) against the left half-line (−∞, 0).
    for t in [0.1, 1.0, 7.0] {
        let right = o.place(even(m2(1.0, t, 0.0, 1.0))).unwrap();
        assert_eq!(o.is_local_pair(&right, &left).unwrap().verdict, OrderVerdict::True);
        assert_eq!(o.is_local_pair(&left, &right).unwrap().verdict, OrderVerdict::True);
        let overlap = o.place(even(m2(1.0, -t, 0.0, 1.0))).unwrap();
        assert_eq!(o.is_local_pair(&overlap, &left).unwrap().verdict, OrderVerdict::False);
    }
    let g = sl2();
    let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
    let triv = WedgeOrbit::new(WedgeCouple::new(&h).unwrap(), ConeSpec::trivial(&g)).unwrap();
    let b0 = triv.place(GroupElement::identity(2)).unwrap();
    let b0d = triv.dual(&b0).unwrap();
    assert_eq!(triv.is_local_pair(&b0, &b0d).unwrap().verdict, OrderVerdict::True);
    assert_eq!(triv.is_local_pair(&b0, &b0).unwrap().verdict, OrderVerdict::False);
    let shifted = triv.place(even(m2(1.0, 1.0, 0.0, 1.0))).unwrap();
    assert_eq!(triv.is_local_pair(&shifted, &b0d).unwrap().verdict, OrderVerdict::False);
}

#[test]
fn odd_relative_transporters() {
    let o = sl2_orbit();
    let base = o.place(GroupElement::identity(2)).unwrap();
    // x ↦ (x+2)/(x+1) is orientation reversing and maps (0,∞) onto (1,2).
    let odd = o.place(GroupElement::new(m2(1.0, 2.0, 1.0, 1.0), -1).unwrap()).unwrap();
    assert_eq!(o.leq(&odd, &base).unwrap().verdict, OrderVerdict::True);
    // x ↦ −x maps (0,∞) onto the complement.
    let flip = o.place(GroupElement::new(m2(1.0, 0.0, 0.0, -1.0), -1).unwrap()).unwrap();
    assert_eq!(o.leq(&flip, &base).unwrap().verdict, OrderVerdict::False);
    assert!(flip.couple.approx_eq(&dual(&base.couple), 1e-12));
}

fn order_instances(n: usize, seed: u64) -> Vec<RMat> {
    let mut rng = random::seeded(seed, 0);
    let mut out = Vec::new();
    while out.len() < n {
        let k = out.len() % 3;
        let m = match k {
            0 => {
                let a = random::uniform(&mut rng, 0.1, 3.0);
                let b = random::uniform(&mut rng, 0.0, 3.0);
                let c = random::uniform(&mut rng, 0.0, 3.0);
                let m = m2(a, b, c, (1.0 + b * c) / a);
                let eps = random::normal(&mut rng) * 0.3;
                m * m2(1.0, 0.0, eps, 1.0)
            }
            1 => {
                let x = random::normal_vec(&mut rng, 3);
                sl2().exp_coords(&x, 1.0).unwrap().matrix
            }
            _ => {
                let s = if random::uniform(&mut rng, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
                let a = random::uniform(&mut rng, 0.2, 2.0);
                let b = random::normal(&mut rng);
                let c = random::normal(&mut rng);
                if (1.0 + b * c).abs() < 1e-3 {
                    continue;
                }
                m2(a, b, c, (1.0 + b * c) / a) * s
            }
        };
        out.push(m);
    }
    out
}

#[test]
fn analytic_oracle_matches_sampling() {
    for m in order_instances(300, 77) {
        if let Some(v) = halfline_oracle(&m, 1e-3) {
            assert_eq!(v, halfline_sampled(&m), "{m}");
        }
    }
}

#[test]
fn order_agrees_with_halfline_geometry() {
    let o = sl2_orbit();
    let mut rng = random::seeded(123, 1);
    let mut agree = 0;
    let mut trues = 0;
    let mut checked = 0;
    for m in order_instances(400, 2024) {
        let Some(expect) = halfline_oracle(&m, 1e-6) else { continue };
        let g2 = random_even(&sl2(), &mut rng, 0.8);
        let g1 = g2.mul(&even(m.clone()));
        let w1 = o.place(g1).unwrap();
        let w2 = o.place(g2).unwrap();
        let r = o.leq(&w1, &w2).unwrap();
        if r.verdict == OrderVerdict::Indeterminate {
            continue;
        }
        checked += 1;
        if r.verdict.as_bool() == Some(expect) {
            agree += 1;
        }
        if expect {
            trues += 1;
            let d1 = o.dual(&w1).unwrap();
            let d2 = o.dual(&w2).unwrap();
            assert_eq!(o.leq(&d2, &d1).unwrap().verdict, OrderVerdict::True);
        }
    }
    assert!(checked >= 200, "{checked}");
    assert!(trues >= 50 && checked - trues >= 50, "{trues}/{checked}");
    assert_eq!(agree, checked);
}

#[test]
fn unsupported_orbits() {
    let g = sl2();
    let h = g.element(RVec::from_vec(vec![-0.5, 0.0, 0.0])).unwrap();
    let r = WedgeOrbit::new(WedgeCouple::new(&h).unwrap(), ConeSpec::sl2_standard(&g).unwrap());
    assert!(matches!(r, Err(WedgeError::Unsupported(_))));
    let s3 = lie::sl(3).unwrap();
    assert!(matches!(ConeSpec::sl2_standard(&s3), Err(WedgeError::Unsupported(_))));
}

fn so12_boost() -> wedgekit::lie::AlgebraElement {
    let g = lie::so(1, 2).unwrap();
    g.basis_element(lie::families::so_index(3, 0, 1))
}

#[test]
fn desitter_examples() {
    let h = so12_boost();
    let p = |x: [f64; 3]| CausalPoint::new(x.to_vec()).unwrap();
    assert!(positivity_region_membership(&h, &p([0.0, 1.0, 0.0])).unwrap());
    assert!(!positivity_region_membership(&h, &p([0.0, -1.0, 0.0])).unwrap());
    assert!(!positivity_region_membership(&h, &p([0.0, 0.0, 1.0])).unwrap());
    let x = h.matrix() * RVec::from_vec(vec![0.0, 1.0, 0.0]);
    assert_eq!(x.as_slice(), &[1.0, 0.0, 0.0]);
    assert!(matches!(CausalPoint::new(vec![0.0, 0.5, 0.0]), Err(WedgeError::Domain(_))));
    let sl = lie::sl(2).unwrap().basis_element(0);
    assert!(matches!(positivity_region_membership(&sl, &p([0.0, 1.0, 0.0])), Err(WedgeError::Unsupported(_))));
}

#[test]
fn desitter_region_is_the_right_wedge() {
    let h = so12_boost();
    let mut rng = random::seeded(99, 0);
    let mut checked = 0;
    let mut inside = 0;
    for _ in 0..10_000 {
        let t = random::uniform(&mut rng, -3.0, 3.0);
        let phi = random::uniform(&mut rng, 0.0, std::f64::consts::TAU);
        let m = CausalPoint::from_time_and_direction(t, &[phi.cos(), phi.sin()]).unwrap();
        let gap = m.x[1] - m.x[0].abs();
        if gap.abs() < 1e-6 {
            continue;
        }
        checked += 1;
        let got = positivity_region_membership(&h, &m).unwrap();
        assert_eq!(got, gap > 0.0, "{:?}", m.x);
        inside += got as usize;
    }
    assert!(checked > 9_900);
    assert!(inside > 1_000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_reverses_order(a in 0.2f64..3.0, b in 0.0f64..3.0, c in 0.0f64..3.0, s in -1.0f64..1.0) {
        let o = sl2_orbit();
        let m = m2(a, b, c, (1.0 + b * c) / a);
        let g2 = sl2().exp_coords(&RVec::from_vec(vec![s, 0.3 * s, -0.2]), 1.0).unwrap();
        let w2 = o.place(g2.clone()).unwrap();
        let w1 = o.place(g2.mul(&even(m))).unwrap();
        let v = o.leq(&w1, &w2).unwrap().verdict;
        prop_assume!(v != OrderVerdict::Indeterminate);
        prop_assert_eq!(v, OrderVerdict::True);
        let back = o.leq(&o.dual(&w2).unwrap(), &o.dual(&w1).unwrap()).unwrap().verdict;
        prop_assert_eq!(back, OrderVerdict::True);
    }

    #[test]
    fn dual_is_involutive_on_orbits(x in proptest::collection::vec(-1.0f64..1.0, 3)) {
        let g = sl2();
        let h = g.element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap();
        let w = act(&g.exp_coords(&RVec::from_vec(x), 1.0).unwrap(), &WedgeCouple::new(&h).unwrap()).unwrap();
        prop_assert!(dual(&dual(&w)).approx_eq(&w, 1e-15));
    }
}
