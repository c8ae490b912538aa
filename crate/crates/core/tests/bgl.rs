use std::f64::consts::PI;

use proptest::prelude::*;
use wedgekit::bgl::rapidity::{left_wedge_family, right_wedge_family};
use wedgekit::bgl::rep::random_gl2_transporters;
use wedgekit::bgl::*;
use wedgekit::linalg::{self, CMat, CVec};
use wedgekit::stdsub::*;
use wedgekit::wedge::{ConeSpec, WedgeOrbit};
use wedgekit::{random, Execution, WedgeError, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn swap_conj() -> AntiLinearOp {
    let swap = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    AntiLinearOp::from_unitary_times_conj(&swap)
}

// ---------------------------------------------------------------- rep data

#[test]
fn bgl_pair_examples() {
    let mut rng = random::seeded(21, 0);
    let u = random::random_unitary(&mut rng, 3);
    let j = AntiLinearOp::from_unitary_times_conj(&(&u * u.transpose()));
    let zero = ModularRepData::new(CMat::zeros(3, 3), j.clone()).unwrap();
    let p = bgl_pair(&zero).unwrap();
    assert!(linalg::max_abs(&(linalg::realify(&p.delta()) - linalg::realify(&CMat::identity(3, 3)))) < 1e-12);
    let h = subspace_from_pair(&p).unwrap();
    let id = linalg::RMat::identity(6, 6);
    let fix = RealSubspace::new(3, &linalg::null_space(&(&id - j.matrix()), 1e-9)).unwrap();
    assert!(h.angle_to(&fix) < 1e-10);

    // Swap-conjugate fixture: H = {(e^{−πa} conj w, w)}.
    let a = 0.3;
    let gen = CMat::from_diagonal(&CVec::from_vec(vec![c(a, 0.0), c(-a, 0.0)]));
    let data = ModularRepData::new(gen, swap_conj()).unwrap();
    assert!(data.compatibility_residual() < 1e-12);
    let h = subspace_from_pair(&bgl_pair(&data).unwrap()).unwrap();
    let q = (-PI * a).exp();
    let closed = RealSubspace::from_complex_columns(&CMat::from_row_slice(
        2,
        2,
        &[c(q, 0.0), c(0.0, -q), c(1.0, 0.0), c(0.0, 1.0)],
    ))
    .unwrap();
    assert!(h.angle_to(&closed) < 1e-10);

    // W′ = (−h, τ_h) gives the symplectic complement.
    let hd = subspace_from_pair(&bgl_pair(&data.dual()).unwrap()).unwrap();
    assert!(hd.angle_to(&h.symplectic_complement()) < 1e-9);
}

#[test]
fn rep_data_validation() {
    let gen = CMat::from_diagonal(&CVec::from_vec(vec![c(0.3, 0.0), c(0.3, 0.0)]));
    assert!(matches!(ModularRepData::new(gen, swap_conj()), Err(WedgeError::Domain(_))));
    let big = CMat::from_diagonal(&CVec::from_vec(vec![c(200.0, 0.0), c(-200.0, 0.0)]));
    let data = ModularRepData::new(big, swap_conj()).unwrap();
    assert!(matches!(bgl_pair(&data), Err(WedgeError::Conditioning(_))));
}

#[test]
fn bgl_equivariance() {
    let mut rng = random::seeded(22, 0);
    for n in 2..=5 {
        let p = random_admissible_pair(&mut rng, n, 1.0);
        let data = ModularRepData::new(p.generator().clone(), p.j().clone()).unwrap();
        let h = subspace_from_pair(&bgl_pair(&data).unwrap()).unwrap();
        let u = random::random_unitary(&mut rng, n);
        let moved = ModularRepData::new(
            &u * p.generator() * u.adjoint(),
            AntiLinearOp::new(linalg::realify(&u) * p.j().matrix() * linalg::realify(&u.adjoint())).unwrap(),
        )
        .unwrap();
        let pred = covariance_transport(&SymmetryOp::unitary(&u).unwrap(), &h).unwrap();
        assert!(bgl_pair(&moved).unwrap().distance(&pred.predicted) < 1e-8);
        assert!(pred.residual < 1e-8);
    }
}

fn gl2_net(seed: u64, count: usize) -> (DeterminantRep, WedgeOrbit, wedgekit::lie::GroupElement, Vec<NetEntry>) {
    let mut rng = random::seeded(seed, 0);
    let rep = gl2_fixture(&mut rng, 3, 1.0).unwrap();
    let base = rep.base_couple().unwrap();
    let orbit = WedgeOrbit::new(base.clone(), ConeSpec::trivial(base.algebra())).unwrap();
    let sigma = rep.base_involution().unwrap();
    let gs = random_gl2_transporters(&mut rng, count, &sigma, 0.5).unwrap();
    // Each transporter together with its dual placement.
    let mut all = Vec::new();
    for g in gs {
        all.push(g.mul(&sigma));
        all.push(g);
    }
    let net = bgl_net(&rep, &orbit, &sigma, &all).unwrap();
    (rep, orbit, sigma, net)
}

#[test]
fn bgl_net_satisfies_axioms() {
    let (rep, orbit, sigma, net) = gl2_net(23, 4);
    let report = check_net_axioms(&net, &orbit, &rep, &sigma).unwrap();
    for a in &report.axioms {
        assert!(a.pass, "{a:?}");
    }
    // Trivial cone: no inclusions between distinct couples.
    assert_eq!(report.get("HK1").unwrap().checked, 0);
    assert!(report.get("HK2").unwrap().checked > 0);
    assert!(report.get("HK6").unwrap().checked > 0);
    assert!(report.get("HK7").unwrap().checked > 0);
    assert!(report.get("HK4").unwrap().checked > 0);
    assert!(report.get("HK5").unwrap().residual < 1e-8);
    assert!(report.get("HK8").unwrap().residual < 1e-8);
}

#[test]
fn replaced_subspace_breaks_bw() {
    let (rep, orbit, sigma, mut net) = gl2_net(24, 3);
    let mut rng = random::seeded(24, 1);
    net[1].subspace = random_subspace(&mut rng, 3, 3);
    let report = check_net_axioms(&net, &orbit, &rep, &sigma).unwrap();
    let hk5 = report.get("HK5").unwrap();
    assert!(!hk5.pass && hk5.residual > 1e-3, "{hk5:?}");
}

// ---------------------------------------------------------- rapidity model

fn model(n: usize) -> RapidityModel {
    RapidityModel::new(1.0, n, 20.0).unwrap()
}

/// Composite Simpson quadrature of (2π)⁻¹∫ f e^{i(p₀x₀ − p₁x₁)} over a square.
fn simpson_transform(f: &TestFunction, p: [f64; 2], center: [f64; 2], half: f64, nodes: usize) -> C64 {
    let h = 2.0 * half / nodes as f64;
    let w = |i: usize| if i == 0 || i == nodes { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
    let mut acc = c(0.0, 0.0);
    for i in 0..=nodes {
        let x0 = center[0] - half + i as f64 * h;
        for j in 0..=nodes {
            let x1 = center[1] - half + j as f64 * h;
            acc += C64::from_polar(w(i) * w(j) * f.value([x0, x1]), p[0] * x0 - p[1] * x1);
        }
    }
    acc * (h * h / 9.0) / (2.0 * PI)
}

#[test]
fn rapidity_vector_examples() {
    let m = model(2048);
    let z = rapidity_vector(&m, &TestFunction::zero()).unwrap();
    assert!(z.values.iter().all(|v| *v == c(0.0, 0.0)));

    let f = TestFunction::gaussian([0.0, 3.0], 0.5);
    let v = rapidity_vector(&m, &f).unwrap();
    let norm = m.norm(&v.values);
    assert!(norm.is_finite() && norm > 0.0);
    assert!(v.quadrature_error < 1e-10, "{}", v.quadrature_error);
    // Decay in |θ|.
    let at = |th: f64| v.values[((th + 20.0) / m.spacing()).round() as usize].norm();
    assert!(at(0.0) > at(2.0) && at(2.0) > at(3.0) && at(4.0) < 1e-10);
    assert!(at(-2.0) > at(-3.0) && at(-4.0) < 1e-10);

    // Independent Simpson oracle at two resolutions.
    for th in [-1.5, -0.3, 0.0, 0.7, 2.0] {
        let p = m.momentum(th);
        let idx = ((th + 20.0) / m.spacing()).round() as usize;
        let th_grid = m.theta()[idx];
        let pg = m.momentum(th_grid);
        let coarse = simpson_transform(&f, pg, [0.0, 3.0], 4.0, 160);
        let fine = simpson_transform(&f, pg, [0.0, 3.0], 4.0, 320);
        assert!((coarse - fine).norm() < 1e-10);
        assert!((fine - v.values[idx]).norm() < 1e-10, "θ={th} {p:?}");
    }
}

#[test]
fn boosted_test_function_shifts_rapidity() {
    let m = model(2048);
    let f = TestFunction { terms: vec![Gaussian::isotropic(1.0, [0.3, 4.0], 0.3), Gaussian::isotropic(-0.5, [0.0, 5.0], 0.25)] };
    let v = rapidity_vector(&m, &f).unwrap();
    for s in [0.37, -0.3, 0.15] {
        let vb = rapidity_vector(&m, &f.boosted(s)).unwrap();
        let shifted = m.boost(s, &v.values);
        let err = vb.values.iter().zip(&shifted).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-6, "s={s}: {err}");
        assert!(vb.quadrature_error < 1e-9);
    }
}

#[test]
fn support_must_fit_the_box() {
    let m = model(256);
    let far = TestFunction::gaussian([0.0, 11.0], 0.5);
    assert!(matches!(rapidity_vector(&m, &far), Err(WedgeError::Envelope(_))));
    assert!(RapidityModel::new(1.0, 1000, 20.0).is_err());
    assert!(RapidityModel::new(1.0, 1024, 5.0).is_err());
    assert!(RapidityModel::new(0.0, 1024, 20.0).is_err());
}

#[test]
fn tomita_on_constant_is_conjugation() {
    let m = model(512);
    let v: Vec<C64> = vec![c(0.3, -1.1); 512];
    let s = rindler_tomita(&m).apply(&v);
    for z in s {
        assert!((z - c(0.3, 1.1)).norm() < 1e-12);
    }
    let small = RapidityModel::with_band(1.0, 64, 20.0, 4.0).unwrap();
    let dense = rindler_tomita(&small).dense().unwrap();
    let f = rapidity_vector(&small, &TestFunction::gaussian([0.0, 4.0], 0.4)).unwrap();
    let by_matrix = linalg::complexify_vec(&(&dense * linalg::realify_vec(&CVec::from_vec(f.values.clone()))));
    let by_fft = rindler_tomita(&small).apply(&f.values);
    let err = by_matrix.iter().zip(&by_fft).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-10);
}

#[test]
fn bisognano_wichmann_residuals() {
    let right = right_wedge_family();
    assert!(right.len() >= 5);
    for f in &right {
        assert!(f.inside_right_wedge([0.0, 0.0]));
    }
    let coarse = bw_residuals(&model(2048), &right, Execution::best());
    let fine = bw_residuals(&model(8192), &right, Execution::best());
    for (a, b) in coarse.iter().zip(&fine) {
        let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
        assert!(a.residual < 1e-3, "{a:?}");
        assert!(b.residual < 1e-4, "{b:?}");
        // Both grids are spectrally converged; what remains is sample round-off
        // amplified by e^{πω_c}.
        assert!(a.residual < 1e-7 && b.residual < 1e-7, "{a:?} {b:?}");
        assert!(a.band_fraction > 0.5 && a.band_fraction <= 1.0, "{a:?}");
    }
    for f in &left_wedge_family() {
        assert!(f.inside_left_wedge());
        let r = bw_residual(&model(2048), f).unwrap();
        assert!(r.residual > 0.1, "{r:?}");
    }
}

#[test]
fn locality_examples() {
    let m = model(2048);
    let f = TestFunction::gaussian([0.0, 3.0], 0.4);
    let g = TestFunction::gaussian([0.0, -3.0], 0.4);
    assert!(locality_check(&m, &f, &g).unwrap() < 1e-6);
    assert_eq!(locality_check(&m, &f, &TestFunction::zero()).unwrap(), 0.0);
    // Im⟨f̂, f̂⟩ vanishes identically; a second function in the same wedge does not commute.
    assert!(locality_check(&m, &f, &f).unwrap() < 1e-14);
    let g2 = TestFunction::gaussian([0.5, 3.5], 0.4);
    assert!(locality_check(&m, &f, &g2).unwrap() > 1e-3);
    // Opposite wedges at wider separations.
    for (sep, w) in [(6.0, 0.5), (7.0, 0.3), (8.0, 0.45)] {
        let a = TestFunction::gaussian([0.2, sep / 2.0], w);
        let b = TestFunction::gaussian([-0.1, -sep / 2.0], w);
        assert!(locality_check(&m, &a, &b).unwrap() < 1e-6);
    }
}

#[test]
fn boosts_commute_with_modular_group() {
    let m = model(2048);
    let v = rapidity_vector(&m, &TestFunction::gaussian([0.0, 4.0], 0.4)).unwrap().values;
    for t in [0.1, -0.35, 0.8] {
        let a = m.delta_it(t, &v);
        let b = m.boost(-2.0 * PI * t, &v);
        assert_eq!(a, b);
        for s in [0.5, -1.2] {
            let lhs = m.delta_it(t, &m.boost(s, &m.delta_it(-t, &v)));
            let rhs = m.boost(s, &v);
            let err = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-9, "{err}");
        }
    }
}

#[test]
fn borchers_on_rapidity_model() {
    let m = model(2048);
    let u = LightlikeTranslation { model: &m };
    let r = borchers_relation_check(&m, &u, 1);
    assert!(r.reflection_residual < 1e-3 && r.dilation_residual < 1e-3, "{r:?}");
    let wrong = borchers_relation_check(&m, &u, -1);
    assert!(wrong.dilation_residual > 0.1);
}

#[test]
fn regularity_probe_examples() {
    let sizes = [256, 512, 1024];
    let e = regularity_probe(1.0, 20.0, &sizes, &[], 4).unwrap();
    assert_eq!(e.retained, 4);
    assert!(e.monotone);
    for row in &e.rows {
        assert_eq!(row.real_rank, 4);
        assert_eq!(row.complex_rank, 8);
    }
    let small = regularity_probe(1.0, 20.0, &sizes, &[[0.0, 0.1], [0.0, -0.1]], 4).unwrap();
    assert_eq!(small.retained, 4);
    assert!(small.rows.iter().all(|r| r.real_rank == 4 && r.complex_rank == 8));
    let big = regularity_probe(1.0, 20.0, &sizes, &[[0.0, 10.0], [0.0, -10.0]], 4).unwrap();
    assert!(big.rows.iter().all(|r| r.max_norm < 1e-10));
}

// -------------------------------------------------------------------- Fock

/// ⟨m|D(α)|n⟩ = √(n!/m!) α^{m−n} e^{−|α|²/2} L_n^{(m−n)}(|α|²) for m ≥ n.
fn displacement_element(alpha: C64, m: usize, n: usize) -> C64 {
    let (hi, lo, a) = if m >= n { (m, n, alpha) } else { (n, m, -alpha.conj()) };
    let x = alpha.norm_sqr();
    let k = (hi - lo) as f64;
    // Generalized Laguerre L_lo^{(k)}(x) by recurrence.
    let (mut l0, mut l1) = (1.0, 1.0 + k - x);
    let lag = if lo == 0 {
        1.0
    } else {
        for j in 1..lo {
            let j = j as f64;
            let l2 = ((2.0 * j + 1.0 + k - x) * l1 - (j + k) * l0) / (j + 1.0);
            l0 = l1;
            l1 = l2;
        }
        l1
    };
    let mut ratio = 1.0;
    for j in lo + 1..=hi {
        ratio /= (j as f64).sqrt();
    }
    a.powu((hi - lo) as u32) * ratio * (-x / 2.0).exp() * lag
}

#[test]
fn weyl_matches_displacement_operator() {
    let t = FockTruncation::single_mode(64).unwrap();
    let xi = c(0.3, -0.25);
    let w = weyl_op(&t, &[xi]).unwrap();
    let alpha = c(0.0, 1.0) * xi / 2f64.sqrt();
    for m in 0..12 {
        for n in 0..12 {
            let e = displacement_element(alpha, m, n);
            assert!((w.matrix[(m, n)] - e).norm() < 1e-12, "({m},{n})");
        }
    }
    assert!(w.unitarity_residual < 1e-12);
    assert!(w.truncation_residual < 1e-14);
}

#[test]
fn fock_basics() {
    let t = FockTruncation::single_mode(32).unwrap();
    assert!(t.ccr_residual() < 1e-12);
    let n = t.number();
    for k in 0..32 {
        assert!((n[(k, k)] - c(k as f64, 0.0)).norm() < 1e-12);
    }
    let w0 = weyl_op(&t, &[c(0.0, 0.0)]).unwrap();
    assert!(linalg::max_abs(&(linalg::realify(&w0.matrix) - linalg::realify(&CMat::identity(32, 32)))) < 1e-12);
    assert!(matches!(weyl_op(&t, &[c(1.5, 0.0)]), Err(WedgeError::Envelope(_))));
    let t16 = FockTruncation::single_mode(16).unwrap();
    assert!(matches!(weyl_op(&t16, &[c(0.1, 0.0)]), Err(WedgeError::Envelope(_))));
    assert!(FockTruncation::new(3, 64).is_err());
}

#[test]
fn weyl_vacuum_and_composition() {
    let t64 = FockTruncation::single_mode(64).unwrap();
    let t128 = FockTruncation::single_mode(128).unwrap();
    let xi = c(0.5, 0.0);
    let vac = vacuum_expectation_check(&t64, &[xi]).unwrap();
    assert!(vac.residual < 1e-8);
    assert!((vac.expected - (-0.0625f64).exp()).abs() < 1e-15);
    let eta = c(0.0, 0.5);
    let c64 = composition_check(&t64, &[xi], &[eta], fock::default_probe_levels(&t64)).unwrap();
    let c128 = composition_check(&t128, &[xi], &[eta], fock::default_probe_levels(&t128)).unwrap();
    assert!(c64.residual < 1e-6);
    assert!(c128.residual < c64.residual, "{} vs {}", c128.residual, c64.residual);
    // Im⟨ξ,η⟩ = 0.25 gives phase e^{−i/8}.
    assert!((c64.phase[0] - (0.125f64).cos()).abs() < 1e-15 && (c64.phase[1] + (0.125f64).sin()).abs() < 1e-15);
    // The unphased product misses by |1 − e^{−i/8}|.
    let wx = weyl_op(&t64, &[xi]).unwrap().matrix;
    let we = weyl_op(&t64, &[eta]).unwrap().matrix;
    let ws = weyl_op(&t64, &[xi + eta]).unwrap().matrix;
    let raw = (wx * we - ws).column(0).norm();
    assert!(raw > 0.1);
}

#[test]
fn two_mode_weyl() {
    let t = FockTruncation::new(2, 32).unwrap();
    let xi = [c(0.2, 0.1), c(-0.1, 0.3)];
    let eta = [c(0.0, -0.2), c(0.25, 0.0)];
    let vac = vacuum_expectation_check(&t, &xi).unwrap();
    assert!(vac.residual < 1e-10);
    let r = composition_check(&t, &xi, &eta, 8).unwrap();
    assert!(r.residual < 1e-8, "{}", r.residual);
}

#[test]
fn weyl_continuity() {
    let t = FockTruncation::single_mode(32).unwrap();
    let xi = c(0.4, 0.2);
    let mut last = f64::INFINITY;
    for k in 1..=8 {
        let eps = 0.5f64.powi(k);
        let d = weyl_distance(&t, &[xi], &[xi + c(eps, -eps)]).unwrap();
        assert!(d < last);
        last = d;
    }
    assert!(last < 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weyl_composition_within_envelope(r1 in 0.0f64..0.5, a1 in 0.0f64..6.3, r2 in 0.0f64..0.5, a2 in 0.0f64..6.3) {
        let t = FockTruncation::single_mode(64).unwrap();
        let xi = C64::from_polar(r1, a1);
        let eta = C64::from_polar(r2, a2);
        let r = composition_check(&t, &[xi], &[eta], fock::default_probe_levels(&t)).unwrap();
        prop_assert!(r.residual < 1e-6, "{}", r.residual);
        let w = weyl_op(&t, &[xi]).unwrap();
        prop_assert!(w.unitarity_residual < 1e-12);
        let vac = vacuum_expectation_check(&t, &[xi]).unwrap();
        prop_assert!(vac.residual < 1e-8);
    }

    #[test]
    fn shift_then_translate(s in -0.4f64..0.4, a0 in -0.5f64..0.5, a1 in -0.5f64..0.5) {
        let m = RapidityModel::new(1.0, 1024, 20.0).unwrap();
        let f = TestFunction::gaussian([0.0, 4.0], 0.3);
        let v = rapidity_vector(&m, &f.translated([a0, a1])).unwrap();
        let u = m.translate([a0, a1], &rapidity_vector(&m, &f).unwrap().values);
        let err = v.values.iter().zip(&u).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
        let b = rapidity_vector(&m, &f.boosted(s)).unwrap();
        let shifted = m.boost(s, &rapidity_vector(&m, &f).unwrap().values);
        let err = b.values.iter().zip(&shifted).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-6);
    }
}
