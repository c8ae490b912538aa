use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use wedgekit::lie::{self, io, Family, GroupElement, LieAlgebra};
use wedgekit::linalg::{self, RMat, RVec};
use wedgekit::WedgeError;

fn taylor_exp(m: &RMat) -> RMat {
    // scaling and squaring around a plain Taylor series, independent of nalgebra's Padé
    let norm = m.iter().map(|v| v.abs()).sum::<f64>();
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let a = m / 2f64.powi(s);
    let n = m.nrows();
    let mut term = RMat::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn m2(a: f64, b: f64, c: f64, d: f64) -> RMat {
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

#[test]
fn sl2_relations() {
    let g = lie::sl(2).unwrap();
    let (h, e, f) = (g.basis_element(0), g.basis_element(1), g.basis_element(2));
    assert_eq!(h.matrix(), m2(1.0, 0.0, 0.0, -1.0));
    assert_eq!(e.matrix(), m2(0.0, 1.0, 0.0, 0.0));
    let ef = e.bracket(&f).unwrap();
    assert!((ef.coords() - h.coords()).norm() < 1e-14);
    let x = g.element(DVector::from_vec(vec![0.3, -1.2, 2.5])).unwrap();
    assert!(x.bracket(&x).unwrap().norm() < 1e-14);
}

#[test]
fn so12_boosts_bracket_to_rotation() {
    let g = lie::so(1, 2).unwrap();
    // basis: L01 boost, L02 boost, L12 rotation
    let b1 = g.basis_element(0);
    let b2 = g.basis_element(1);
    let r = g.basis_element(2);
    let direct = b1.matrix() * b2.matrix() - b2.matrix() * b1.matrix();
    let br = b1.bracket(&b2).unwrap();
    assert!((br.matrix() - &direct).norm() < 1e-14);
    let plus = (br.coords() - r.coords()).norm();
    let minus = (br.coords() + r.coords()).norm();
    assert!(plus.min(minus) < 1e-14, "bracket of boosts is ±rotation");
}

#[test]
fn ad_spectra() {
    let g = lie::sl(2).unwrap();
    let h = g.basis_element(0);
    let mut ev: Vec<f64> = h.ad_matrix().complex_eigenvalues().iter().map(|z| z.re).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((ev[0] + 2.0).abs() < 1e-12 && ev[1].abs() < 1e-12 && (ev[2] - 2.0).abs() < 1e-12);
    assert_eq!(g.zero().ad_matrix(), RMat::zeros(3, 3));
    let ade = g.basis_element(1).ad_matrix();
    assert!((&ade * &ade * &ade).norm() < 1e-14);
    assert!((&ade * &ade).norm() > 0.5);
}

#[test]
fn killing_values() {
    let g = lie::sl(2).unwrap();
    let h = g.basis_element(0);
    assert!((h.killing(&h).unwrap() - 8.0).abs() < 1e-12);
    assert_eq!(h.killing(&g.zero()).unwrap(), 0.0);
}

#[test]
fn exponentials() {
    let g = lie::sl(2).unwrap();
    assert_eq!(g.zero().exp(1.0).unwrap().matrix, RMat::identity(2, 2));
    let t = 0.7;
    let e = g.basis_element(0).exp(t).unwrap();
    assert!((e.matrix - m2(t.exp(), 0.0, 0.0, (-t).exp())).norm() < 1e-13);
    let so = lie::so(1, 2).unwrap();
    let boost = so.basis_element(0).exp(t).unwrap().matrix;
    let expected = DMatrix::from_row_slice(
        3,
        3,
        &[t.cosh(), t.sinh(), 0.0, t.sinh(), t.cosh(), 0.0, 0.0, 0.0, 1.0],
    );
    assert!((boost - expected).norm() < 1e-13);
}

#[test]
fn exp_agrees_with_taylor_oracle() {
    let mut rng = wedgekit::random::seeded(11, 0);
    for alg in [lie::sl(3).unwrap(), lie::so(2, 3).unwrap(), lie::sp(2).unwrap()] {
        for _ in 0..10 {
            let x = wedgekit::random::normal_vec(&mut rng, alg.dim());
            let m = alg.matrix_of(&x);
            let a = linalg::expm(&m).unwrap();
            let b = taylor_exp(&m);
            assert!((&a - &b).norm() <= 1e-10 * b.norm());
        }
    }
}

#[test]
fn adjoint_action_examples() {
    let g = lie::sl(2).unwrap();
    let h = g.basis_element(0);
    assert!((h.conjugate(&GroupElement::identity(2)).unwrap().coords() - h.coords()).norm() < 1e-14);
    let x = g.element(DVector::from_vec(vec![0.0, 1.0, -1.0])).unwrap();
    let rot = x.exp(std::f64::consts::FRAC_PI_2).unwrap();
    let oracle = m2(0.0, 1.0, -1.0, 0.0);
    assert!((&rot.matrix - &oracle).norm() < 1e-13);
    let image = h.conjugate(&rot).unwrap();
    assert!((image.coords() + h.coords()).norm() < 1e-12);

    let so = lie::so(1, 2).unwrap();
    let r = so.basis_element(2).exp(0.4).unwrap();
    let k = so.basis_element(0);
    let direct = &r.matrix * k.matrix() * r.matrix.clone().try_inverse().unwrap();
    let image = k.conjugate(&r).unwrap();
    assert!((image.matrix() - direct).norm() < 1e-13);
    // rotated boost stays a boost: no rotation component
    assert!(image.coords()[2].abs() < 1e-13);
}

#[test]
fn adjoint_closure_error() {
    let g = lie::so(1, 2).unwrap();
    let outside = GroupElement::new(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 1.0])), 1).unwrap();
    let err = g.basis_element(0).conjugate(&outside).unwrap_err();
    assert!(matches!(err, WedgeError::Closure(_)));
}

#[test]
fn dimensions_of_families() {
    assert_eq!(lie::sl(2).unwrap().dim(), 3);
    assert_eq!(lie::so(1, 3).unwrap().dim(), 6);
    assert_eq!(lie::sp(2).unwrap().dim(), 10);
    assert_eq!(lie::gl2().unwrap().dim(), 4);
    let iso = lie::iso(3).unwrap();
    assert_eq!(iso.dim(), 10);
    // translation ideal: brackets of anything with P_μ stay in span(P_μ)
    let off = lie::families::iso_translation_offset(3);
    for i in 0..iso.dim() {
        for mu in off..iso.dim() {
            let b = iso.bracket_coords(&unit(10, i), &unit(10, mu));
            assert!(b.rows(0, off).norm() < 1e-14);
        }
    }
    assert_eq!(iso.dim() - off, 4);
}

fn unit(n: usize, i: usize) -> RVec {
    let mut v = RVec::zeros(n);
    v[i] = 1.0;
    v
}

#[test]
fn unsupported_and_errors() {
    assert!(matches!(lie::sl(12), Err(WedgeError::Unsupported(_))));
    assert!(matches!(lie::make_algebra_from_label("e7"), Err(WedgeError::Parse(_))));
    let a = lie::sl(2).unwrap();
    let b = lie::so(1, 2).unwrap();
    assert!(matches!(a.basis_element(0).bracket(&b.basis_element(0)), Err(WedgeError::Domain(_))));
}

#[test]
fn structural_identities_hold_for_all_families() {
    let labels = ["sl2", "sl3", "sl4", "sl5", "sl6", "so(1,2)", "so(1,3)", "so(2,3)", "so(3,3)", "sp4", "gl2", "iso(1,1)", "iso(1,3)"];
    for l in labels {
        let g = lie::make_algebra_from_label(l).unwrap();
        assert!(g.closure_residual() <= g.tolerance(), "{l}");
        assert!(g.jacobi_residual() <= g.tolerance(), "{l}");
        let n = g.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(g.structure_constant(i, j, k), -g.structure_constant(j, i, k));
                }
            }
        }
    }
}

#[test]
fn semisimple_detection() {
    for l in ["sl2", "sl4", "so(1,3)", "so(2,3)", "sp4"] {
        assert!(lie::make_algebra_from_label(l).unwrap().is_semisimple(), "{l}");
    }
    for l in ["iso(1,1)", "iso(1,3)", "gl2"] {
        assert!(!lie::make_algebra_from_label(l).unwrap().is_semisimple(), "{l}");
    }
}

#[test]
fn labels_round_trip() {
    for l in ["sl4", "so(1,3)", "sp4", "gl2", "iso(1,3)", "sl2+so(0,3)"] {
        assert_eq!(Family::parse(l).unwrap().label(), l);
    }
}

#[test]
fn json_file_round_trip_and_validation() {
    let g = lie::so(1, 3).unwrap();
    let text = io::algebra_to_json(&g);
    let back = io::load_algebra_json(&text).unwrap();
    assert_eq!(back.dim(), 6);
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                assert!((back.structure_constant(i, j, k) - g.structure_constant(i, j, k)).abs() < 1e-12);
            }
        }
    }
    // span of {E11, E12} is not closed: [E11, E12] = E12 fine, add E21 -> h leaves span
    let bad = r#"{"name":"broken","matrix_size":2,"basis":[[[1,0],[0,0]],[[0,1],[0,0]],[[0,0],[1,0]]],"tolerance":1e-10}"#;
    assert!(matches!(io::load_algebra_json(bad), Err(WedgeError::Closure(_))));
    let dependent = r#"{"name":"dep","matrix_size":2,"basis":[[[0,1],[0,0]],[[0,2],[0,0]]]}"#;
    assert!(matches!(io::load_algebra_json(dependent), Err(WedgeError::Domain(_))));
}

#[test]
fn structure_constant_validation() {
    let g = lie::sl(2).unwrap();
    let n = 3;
    let mut c = vec![0.0; 27];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[(i * n + j) * n + k] = g.structure_constant(i, j, k);
            }
        }
    }
    let rebuilt = LieAlgebra::from_structure_constants("sl2-abstract", 3, c.clone(), 1e-10).unwrap();
    assert_eq!(rebuilt.dim(), 3);
    let mut broken = c.clone();
    broken[(1 * n + 2) * n + 1] += 0.5;
    broken[(2 * n + 1) * n + 1] -= 0.5;
    assert!(matches!(
        LieAlgebra::from_structure_constants("bad", 3, broken, 1e-10),
        Err(WedgeError::Domain(_))
    ));
    let mut asym = c;
    asym[(1 * n + 2) * n + 0] += 0.5;
    assert!(matches!(LieAlgebra::from_structure_constants("bad", 3, asym, 1e-10), Err(WedgeError::Domain(_))));
}

fn algebra_strategy() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("sl2"), Just("sl3"), Just("so(1,3)"), Just("sp4"), Just("iso(1,2)"), Just("gl2")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_matches_exp_of_ad(label in algebra_strategy(), seed in 0u64..10_000, t in -1.0f64..1.0) {
        let g = lie::make_algebra_from_label(label).unwrap();
        let mut rng = wedgekit::random::seeded(seed, 1);
        let mut x = wedgekit::random::normal_vec(&mut rng, g.dim());
        let nx = x.norm();
        let target = 5.0 * wedgekit::random::uniform(&mut rng, 0.0, 1.0);
        x *= target / nx;
        let y = wedgekit::random::normal_vec(&mut rng, g.dim());
        let ge = g.exp_coords(&x, t).unwrap();
        let lhs = g.adjoint_coords(&ge, &y).unwrap();
        let rhs = linalg::expm(&(g.ad_coords(&x) * t)).unwrap() * &y;
        prop_assert!((&lhs - &rhs).norm() <= 1e-8 * (1.0 + rhs.norm()));
    }

    #[test]
    fn killing_is_invariant(label in algebra_strategy(), seed in 0u64..10_000) {
        let g = lie::make_algebra_from_label(label).unwrap();
        let mut rng = wedgekit::random::seeded(seed, 2);
        let x = wedgekit::random::normal_vec(&mut rng, g.dim());
        let y = wedgekit::random::normal_vec(&mut rng, g.dim());
        let z = wedgekit::random::normal_vec(&mut rng, g.dim());
        let a = g.killing_coords(&g.bracket_coords(&z, &x), &y);
        let b = g.killing_coords(&x, &g.bracket_coords(&z, &y));
        prop_assert!((a + b).abs() <= 1e-8 * (1.0 + a.abs()));
        prop_assert!((g.killing_coords(&x, &y) - g.killing_coords(&y, &x)).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn bracket_matches_commutator(label in algebra_strategy(), seed in 0u64..10_000) {
        let g = lie::make_algebra_from_label(label).unwrap();
        let mut rng = wedgekit::random::seeded(seed, 3);
        let x = wedgekit::random::normal_vec(&mut rng, g.dim());
        let y = wedgekit::random::normal_vec(&mut rng, g.dim());
        let (mx, my) = (g.matrix_of(&x), g.matrix_of(&y));
        let direct = &mx * &my - &my * &mx;
        prop_assert!((g.matrix_of(&g.bracket_coords(&x, &y)) - direct).norm() < 1e-10 * (1.0 + x.norm() * y.norm()));
    }
}
