use std::sync::Arc;
use std::time::Instant;

use proptest::prelude::*;
use wedgekit::euler::*;
use wedgekit::lie::{self, families::so_index, AlgebraElement, LieAlgebra};
use wedgekit::linalg::{self, CMat, RMat, RVec};
use wedgekit::{random, WedgeError, C64};

fn sl2_h() -> AlgebraElement {
    lie::sl(2).unwrap().element(RVec::from_vec(vec![0.5, 0.0, 0.0])).unwrap()
}

fn check_grading_invariants(g: &EulerGrading) {
    let n = g.algebra().dim();
    let id = RMat::identity(n, n);
    let (pm, p0, pp) = (g.projection(-1), g.projection(0), g.projection(1));
    assert!(linalg::max_abs(&(pm + p0 + pp - &id)) < 1e-8);
    for (nu, p) in [(-1.0, pm), (0.0, p0), (1.0, pp)] {
        assert!(linalg::max_abs(&(p * p - p)) < 1e-8);
        assert!(linalg::max_abs(&(g.ad_h() * p - p * nu)) < 1e-8);
    }
    assert!(linalg::max_abs(&(pm * pp)) < 1e-8 && linalg::max_abs(&(p0 * pp)) < 1e-8);
    assert!(g.grading_law_residual() < 1e-8);
    let d = g.dims();
    assert_eq!(d.minus, d.plus);
    assert_eq!(d.minus + d.zero + d.plus, n);
}

/// Re exp(iπ ad h) by the complex matrix exponential, independent of the
/// grading projections.
fn tau_by_exponential(h: &AlgebraElement) -> RMat {
    let a = h.ad_matrix();
    let z = CMat::from_fn(a.nrows(), a.ncols(), |i, j| C64::new(0.0, std::f64::consts::PI * a[(i, j)]));
    let e = linalg::expm_c(&z).unwrap();
    RMat::from_fn(a.nrows(), a.ncols(), |i, j| e[(i, j)].re)
}

#[test]
fn sl2_standard_grading() {
    let g = is_euler(&sl2_h()).unwrap();
    assert_eq!(g.dims().as_array(), [1, 1, 1]);
    check_grading_invariants(&g);
    let e = RVec::from_vec(vec![0.0, 1.0, 0.0]);
    let f = RVec::from_vec(vec![0.0, 0.0, 1.0]);
    assert_eq!(g.degree(&e, 1e-10), Some(1));
    assert_eq!(g.degree(&f, 1e-10), Some(-1));
    assert_eq!(g.degree(&(&e + &f), 1e-10), None);
    let tau = euler_involution(&g).unwrap();
    assert!((tau.apply(&e) + &e).norm() < 1e-12);
    assert!((tau.apply(&f) + &f).norm() < 1e-12);
    let h = sl2_h();
    assert!((tau.apply(h.coords()) - h.coords()).norm() < 1e-12);
}

#[test]
fn non_euler_elements() {
    let g = lie::sl(2).unwrap();
    assert!(matches!(is_euler(&g.basis_element(1)), Err(NotEuler::NotDiagonalizable { .. })));
    assert_eq!(is_euler(&g.zero()).unwrap_err(), NotEuler::Central);
    let doubled = sl2_h().scale(2.0);
    assert!(matches!(is_euler(&doubled), Err(NotEuler::SpectrumOutside { .. })));
    let rot = g.element(RVec::from_vec(vec![0.0, 0.5, -0.5])).unwrap();
    match is_euler(&rot) {
        Err(NotEuler::SpectrumOutside { imag, .. }) => assert!((imag.abs() - 1.0).abs() < 1e-8),
        other => panic!("{other:?}"),
    }
    let gl = lie::gl2().unwrap();
    let id = gl.element(RVec::from_vec(vec![1.0, 0.0, 0.0, 1.0])).unwrap();
    assert_eq!(is_euler(&id).unwrap_err(), NotEuler::Central);
}

#[test]
fn sl4_node_dimensions() {
    let alg = lie::sl(4).unwrap();
    let c = classify_euler_orbits(&alg).unwrap();
    assert_eq!(c.count(), 3);
    for o in &c.orbits {
        let j = o.node;
        assert_eq!(o.grading.dims().plus, j * (4 - j));
        check_grading_invariants(&o.grading);
    }
}

#[test]
fn involution_matches_exponential() {
    for label in ["sl2", "sl3", "sl4", "so(1,2)", "so(1,3)", "so(2,3)", "sp4", "sp6"] {
        let alg = lie::make_algebra_from_label(label).unwrap();
        for o in classify_euler_orbits(&alg).unwrap().orbits {
            let tau = euler_involution(&o.grading).unwrap();
            let oracle = tau_by_exponential(o.representative());
            assert!(linalg::max_abs(&(tau.matrix() - oracle)) < 1e-6, "{label}");
            let n = alg.dim();
            assert!(linalg::max_abs(&(tau.matrix() * tau.matrix() - RMat::identity(n, n))) < 1e-8);
            assert!(tau.automorphism_residual() < 1e-8);
            let sigma = involution_element(&o.grading).unwrap();
            assert_eq!(sigma.parity, -1);
        }
    }
}

#[test]
fn so12_involution_is_conjugation() {
    let alg = lie::so(1, 2).unwrap();
    let h = alg.basis_element(so_index(3, 0, 1));
    let g = is_euler(&h).unwrap();
    let tau = euler_involution(&g).unwrap();
    let d = RMat::from_diagonal(&RVec::from_vec(vec![-1.0, -1.0, 1.0]));
    for j in 0..3 {
        let x = &alg.basis()[j];
        let expect = alg.coords_of(&(&d * x * &d)).unwrap();
        let mut e = RVec::zeros(3);
        e[j] = 1.0;
        assert!((tau.apply(&e) - expect).norm() < 1e-12);
    }
}

#[test]
fn symmetric_examples() {
    let opts = SymmetryOptions::default();
    let t = Instant::now();
    let r2 = is_symmetric(&is_euler(&sl2_h()).unwrap(), &opts);
    assert!(r2.is_symmetric());
    let cert = r2.certificate.as_ref().unwrap();
    assert!(cert.triple_residual < 1e-7 && cert.witness_residual < 1e-6);

    let s3 = classify_euler_orbits(&lie::sl(3).unwrap()).unwrap();
    let r3 = is_symmetric(&s3.orbits[0].grading, &opts);
    assert_eq!(r3.verdict, SymmetryVerdict::NotSymmetric);
    assert!(r3.certificate.is_none());

    let s4 = classify_euler_orbits(&lie::sl(4).unwrap()).unwrap();
    let mid = s4.orbits.iter().find(|o| o.node == 2).unwrap();
    let r4 = is_symmetric(&mid.grading, &opts);
    assert!(r4.is_symmetric());
    let g = r4.certificate.as_ref().unwrap().conjugator_element.clone().unwrap();
    let h = mid.representative();
    let moved = h.conjugate(&g).unwrap();
    assert!((moved.coords() + h.coords()).norm() < 1e-6);
    let node1 = s4.orbits.iter().find(|o| o.node == 1).unwrap();
    assert_eq!(is_symmetric(&node1.grading, &opts).verdict, SymmetryVerdict::NotSymmetric);
    assert!(t.elapsed().as_secs_f64() < 30.0);
}

#[test]
fn symmetry_is_conjugation_invariant() {
    let opts = SymmetryOptions::default();
    let mut rng = random::seeded(3, 0);
    for label in ["sl2", "sl3", "sl4"] {
        let alg = lie::make_algebra_from_label(label).unwrap();
        for o in classify_euler_orbits(&alg).unwrap().orbits {
            let base = is_symmetric(&o.grading, &opts);
            let x = random::normal_vec(&mut rng, alg.dim()) * 0.3;
            let g = alg.exp_coords(&x, 1.0).unwrap();
            let h2 = o.representative().conjugate(&g).unwrap();
            let moved = is_symmetric(&is_euler(&h2).unwrap(), &opts);
            assert_eq!(base.verdict, moved.verdict, "{label} node {}", o.node);
            if let Some(c) = &base.certificate {
                // Transport the witness: g w g⁻¹ sends Ad(g)h to −Ad(g)h.
                let w = c.conjugator_element.clone().unwrap();
                let tw = g.mul(&w).mul(&g.inverse().unwrap());
                let img = h2.conjugate(&tw).unwrap();
                assert!((img.coords() + h2.coords()).norm() < 1e-6);
            }
        }
    }
}

#[test]
fn orbit_counts() {
    let t = Instant::now();
    for n in 2..=6 {
        let c = classify_euler_orbits(&lie::sl(n).unwrap()).unwrap();
        assert_eq!(c.count(), n - 1, "sl{n}");
    }
    for d in 2..=4 {
        let c = classify_euler_orbits(&lie::so(1, d).unwrap()).unwrap();
        assert_eq!(c.count(), 1, "so(1,{d})");
    }
    let so13 = classify_euler_orbits(&lie::so(1, 3).unwrap()).unwrap();
    assert_eq!(so13.orbits[0].grading.dims().plus, 2);
    assert_eq!(classify_euler_orbits(&lie::sp(2).unwrap()).unwrap().count(), 1);
    assert!(t.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn classification_errors() {
    assert!(matches!(classify_euler_orbits(&lie::so(2, 2).unwrap()), Err(WedgeError::Unsupported(_))));
    assert!(matches!(classify_euler_orbits(&lie::gl2().unwrap()), Err(WedgeError::Unsupported(_))));
    assert_eq!(classify_euler_orbits(&lie::so(3, 0).unwrap()).unwrap().count(), 0);
}

#[test]
fn orthogonal_pairs() {
    let g = lie::sl(2).unwrap();
    let ha = is_euler(&sl2_h()).unwrap();
    let hb_el = g.element_from_matrix(&RMat::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])).unwrap();
    let hb = is_euler(&hb_el).unwrap();
    assert!(is_orthogonal_pair(&ha, &hb).unwrap());
    assert!(is_orthogonal_pair(&hb, &ha).unwrap());
    assert!(!is_orthogonal_pair(&ha, &ha).unwrap());

    let so13 = lie::so(1, 3).unwrap();
    let b1 = is_euler(&so13.basis_element(so_index(4, 0, 1))).unwrap();
    let b2 = is_euler(&so13.basis_element(so_index(4, 0, 2))).unwrap();
    assert!(is_orthogonal_pair(&b1, &b2).unwrap());
    assert!(is_orthogonal_pair(&b2, &b1).unwrap());

    let other = is_euler(&classify_euler_orbits(&lie::sl(3).unwrap()).unwrap().orbits[0].representative().clone()).unwrap();
    assert!(matches!(is_orthogonal_pair(&ha, &other), Err(WedgeError::Domain(_))));
}

#[test]
fn hermitian_and_tube_type() {
    let opts = SymmetryOptions::default();
    assert!(is_hermitian(&lie::sp(2).unwrap()).unwrap());
    assert!(is_tube_type_hermitian(&lie::sp(2).unwrap(), &opts).unwrap());
    assert!(!is_hermitian(&lie::sl(3).unwrap()).unwrap());
    assert!(!is_tube_type_hermitian(&lie::sl(3).unwrap(), &opts).unwrap());
    assert!(!is_hermitian(&lie::so(1, 3).unwrap()).unwrap());
    assert!(!is_tube_type_hermitian(&lie::so(1, 3).unwrap(), &opts).unwrap());
    assert!(is_hermitian(&lie::sl(2).unwrap()).unwrap());
    assert!(is_tube_type_hermitian(&lie::so(2, 3).unwrap(), &opts).unwrap());
    assert!(matches!(is_hermitian(&lie::gl2().unwrap()), Err(WedgeError::Unsupported(_))));
}

#[test]
fn invariants_separate_sl_nodes() {
    let c = classify_euler_orbits(&lie::sl(5).unwrap()).unwrap();
    for (i, a) in c.orbits.iter().enumerate() {
        for b in c.orbits.iter().skip(i + 1) {
            assert!(!a.invariant.matches(&b.invariant));
        }
    }
    assert!(c.merged.is_empty());
}

#[test]
fn conjugator_search_finds_transported_elements() {
    let alg = lie::sl(3).unwrap();
    let h = classify_euler_orbits(&alg).unwrap().orbits[0].representative().clone();
    let mut rng = random::seeded(8, 0);
    let g = alg.exp_coords(&(random::normal_vec(&mut rng, 8) * 0.3), 1.0).unwrap();
    let target = h.conjugate(&g).unwrap();
    let found = find_conjugator(&alg, h.coords(), target.coords(), 16, 1).expect("conjugate elements");
    let img = alg.adjoint_coords(&found, h.coords()).unwrap();
    assert!((img - target.coords()).norm() < 1e-8);
}

fn conjugated(alg: &Arc<LieAlgebra>, h: &AlgebraElement, x: Vec<f64>) -> AlgebraElement {
    let g = alg.exp_coords(&RVec::from_vec(x), 1.0).unwrap();
    h.conjugate(&g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugates_keep_grading(x in proptest::collection::vec(-0.6f64..0.6, 8), node in 0usize..2) {
        let alg = lie::sl(3).unwrap();
        let c = classify_euler_orbits(&alg).unwrap();
        let h = conjugated(&alg, c.orbits[node].representative(), x);
        let g = is_euler(&h).unwrap();
        check_grading_invariants(&g);
        prop_assert_eq!(g.dims(), c.orbits[node].grading.dims());
        let inv = OrbitInvariant::compute(&g);
        prop_assert!(inv.matches(&c.orbits[node].invariant));
    }

    #[test]
    fn so13_boosts_graded(x in proptest::collection::vec(-0.8f64..0.8, 6)) {
        let alg = lie::so(1, 3).unwrap();
        let h = conjugated(&alg, &alg.basis_element(so_index(4, 0, 1)), x);
        let g = is_euler(&h).unwrap();
        check_grading_invariants(&g);
        prop_assert_eq!(g.dims().as_array(), [2, 2, 2]);
    }
}
