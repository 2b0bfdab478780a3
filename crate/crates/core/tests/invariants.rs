use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qwasser::linalg::{eigh, hs_inner, inner, partial_trace_second, tensor_product, trace_product, vectorize};
use qwasser::{
    bloch_action, build_cost, cost_sym, cost_xz, random_state, run_sweep, self_distance, self_distance_xz_closed,
    solve_qw, trivial_cost, BlochAction, BlochVector, Certificate, ComplexMatrix, Figure, QubitState, SampleKind,
    SemigroupElement, SignDomain, SignFunction, SolverOptions, StateMap, StateRng, SweepConfig,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix(dim: usize, v: &[f64]) -> ComplexMatrix {
    let e: Vec<Complex64> = (0..dim * dim).map(|k| c(v[2 * k], v[2 * k + 1])).collect();
    ComplexMatrix::from_entries(dim, &e).unwrap()
}

fn hermitian(dim: usize, v: &[f64]) -> ComplexMatrix {
    matrix(dim, v).hermitian_part()
}

fn entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

fn ball() -> impl Strategy<Value = BlochVector> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_map(|(x, y, z)| BlochVector::new(x, y, z))
        .prop_filter("inside the ball", |b| b.norm() <= 1.0)
}

fn sigma(j: usize) -> ComplexMatrix {
    qwasser::pauli(j).unwrap()
}

fn random_affine_map(rng: &mut StateRng) -> StateMap {
    match rng.below(5) {
        0 => StateMap::WignerUnitary { u: qwasser::random_su2(rng) },
        1 => StateMap::WignerAntiUnitary { v: qwasser::random_su2(rng) },
        2 => StateMap::RotY { t: rng.uniform_in(-PI, PI) },
        3 => StateMap::ReflectYZ,
        _ => StateMap::GlobalConjugation,
    }
}

fn random_lower_bound_map(rng: &mut StateRng) -> StateMap {
    let len = 1 + rng.below(4) as usize;
    StateMap::compose(
        (0..len)
            .map(|_| match rng.below(5) {
                0 => StateMap::RotY { t: rng.uniform_in(-PI, PI) },
                1 => StateMap::ReflectYZ,
                2 => StateMap::GlobalConjugation,
                3 => StateMap::RotY { t: PI },
                _ => StateMap::PureSignMap {
                    domain: SignDomain::PureNonreal,
                    epsilon: SignFunction::Hashed { seed: rng.next_u64() },
                },
            })
            .collect(),
    )
}

proptest! {
    #[test]
    fn eigh_reconstructs(v in entries(32)) {
        let m = hermitian(4, &v);
        let s = eigh(&m, 1e-12).unwrap();
        prop_assert!(s.reconstruct().max_abs_diff(&m) <= 1e-10);
        prop_assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_trace_is_adjoint_to_tensoring(v in entries(32), j in 0usize..4) {
        let pi = matrix(4, &v);
        let a = if j == 0 { ComplexMatrix::identity(2) } else { sigma(j) };
        let lhs = trace_product(&partial_trace_second(&pi).unwrap(), &a);
        let rhs = trace_product(&pi, &tensor_product(&a, &ComplexMatrix::identity(2)).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn vectorize_is_an_isometry(a in entries(8), b in entries(8)) {
        let (a, b) = (matrix(2, &a), matrix(2, &b));
        let lhs = inner(&vectorize(&a).unwrap(), &vectorize(&b).unwrap());
        prop_assert!((lhs - hs_inner(&a, &b)).norm() <= 1e-12);
    }

    #[test]
    fn tensor_product_is_multiplicative(v in entries(32)) {
        let m: Vec<ComplexMatrix> = v.chunks(8).map(|w| matrix(2, w)).collect();
        let lhs = tensor_product(&m[0], &m[1]).unwrap() * tensor_product(&m[2], &m[3]).unwrap();
        let rhs = tensor_product(&(m[0] * m[2]), &(m[1] * m[3])).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn bloch_round_trip(b in ball()) {
        let s = QubitState::from_bloch(b).unwrap();
        prop_assert!(s.bloch().max_abs_diff(b) <= 1e-12);
        prop_assert!(s.validate().is_ok());
        let back = QubitState::from_matrix(s.matrix()).unwrap();
        prop_assert!(back.bloch().max_abs_diff(b) <= 1e-12);
    }

    #[test]
    fn conjugation_fixes_exactly_the_real_states(b in ball()) {
        let s = QubitState::from_bloch(b).unwrap();
        let fixed = s.conjugate().matrix().max_abs_diff(s.matrix()) <= 1e-12;
        prop_assert_eq!(fixed, b.y.abs() <= 1e-12);
        let r = QubitState::from_xyz(b.x, 0.0, b.z).unwrap();
        prop_assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn built_costs_are_psd_and_kill_the_identity(v in entries(24), k in 1usize..4) {
        let gens: Vec<ComplexMatrix> = v.chunks(8).take(k).map(|w| hermitian(2, w)).collect();
        let cost = build_cost(&gens).unwrap();
        prop_assert!(cost.spectrum().min_eigenvalue() >= -1e-10);
        let id = vectorize(&ComplexMatrix::identity(2)).unwrap();
        let image = cost.matrix().apply(&id);
        prop_assert!(image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() <= 1e-12);
        prop_assert!(cost.assembly_residual() <= 1e-12);
    }

    #[test]
    fn affine_compositions_act_orthogonally(seed in any::<u64>(), len in 0usize..6) {
        let mut rng = StateRng::seed_from_u64(seed);
        let m = StateMap::compose((0..len).map(|_| random_affine_map(&mut rng)).collect());
        let BlochAction::Orthogonal(o) = bloch_action(&m).unwrap() else {
            return Err(TestCaseError::fail("affine map reported as not affine"));
        };
        prop_assert!(qwasser::maps::orthogonality_defect(&o) <= 1e-10);
        let s = random_state(&mut rng, SampleKind::MixedBall);
        let image = m.apply(&s).unwrap().bloch();
        prop_assert!(image.max_abs_diff(qwasser::maps::apply_orthogonal(&o, s.bloch())) <= 1e-12);
    }

    #[test]
    fn sign_maps_flip_or_fix(seed in any::<u64>(), b in ball()) {
        let s = QubitState::from_bloch(b).unwrap();
        for domain in [SignDomain::PureNonreal, SignDomain::AllNonreal] {
            let m = StateMap::PureSignMap { domain, epsilon: SignFunction::Hashed { seed } };
            let image = m.apply(&s).unwrap();
            prop_assert!(image == s || image == s.conjugate());
            if image == s {
                prop_assert_eq!(m.apply(&image).unwrap(), s);
            }
        }
    }
}

#[test]
fn constant_sign_map_is_an_involution_on_pure_states() {
    let m = StateMap::PureSignMap { domain: SignDomain::PureNonreal, epsilon: SignFunction::Constant { sign: -1 } };
    let mut rng = StateRng::seed_from_u64(11);
    for _ in 0..500 {
        let s = random_state(&mut rng, SampleKind::PureSphere);
        let twice = m.apply(&m.apply(&s).unwrap()).unwrap();
        assert!(twice.bloch().max_abs_diff(s.bloch()) <= 1e-12);
        let mixed = random_state(&mut rng, SampleKind::MixedBall);
        assert_eq!(m.apply(&mixed).unwrap(), mixed);
    }
}

#[test]
fn maps_fixing_omega1_and_omega3_keep_x_and_z() {
    let (w1, w3) = (QubitState::from_xyz(1.0, 0.0, 0.0).unwrap(), QubitState::from_xyz(0.0, 0.0, 1.0).unwrap());
    let mut rng = StateRng::seed_from_u64(12);
    let mut pinned = 0;
    for _ in 0..400 {
        let m = random_lower_bound_map(&mut rng);
        let fixes = |s: &QubitState| m.apply(s).unwrap().bloch().max_abs_diff(s.bloch()) <= 1e-12;
        if !(fixes(&w1) && fixes(&w3)) {
            continue;
        }
        pinned += 1;
        for kind in [SampleKind::MixedBall, SampleKind::PureSphere] {
            let s = random_state(&mut rng, kind);
            let (a, b) = (s.bloch(), m.apply(&s).unwrap().bloch());
            assert!((a.x - b.x).abs() <= 1e-12 && (a.z - b.z).abs() <= 1e-12, "{m:?} moves {a:?} to {b:?}");
            assert!((a.y.abs() - b.y.abs()).abs() <= 1e-12);
        }
    }
    assert!(pinned >= 20, "only {pinned} sampled maps fix ω₁ and ω₃");
}

#[test]
fn semigroup_product_matches_composition() {
    let mut rng = StateRng::seed_from_u64(13);
    let mut psi = || {
        StateMap::compose(vec![
            StateMap::RotY { t: rng.uniform_in(-PI, PI) },
            if rng.below(2) == 0 { StateMap::ReflectYZ } else { StateMap::GlobalConjugation },
        ])
    };
    let (p1, p2) = (psi(), psi());
    let xi = |seed| StateMap::PureSignMap { domain: SignDomain::PureNonreal, epsilon: SignFunction::Hashed { seed } };
    let a = SemigroupElement::new(p1, xi(1)).unwrap();
    let b = SemigroupElement::new(p2, xi(2)).unwrap();
    let ab = a.product(&b).unwrap();
    for k in 0..100 {
        let kind = if k % 2 == 0 { SampleKind::PureSphere } else { SampleKind::MixedBall };
        let s = random_state(&mut rng, kind);
        let direct = a.apply(&b.apply(&s).unwrap()).unwrap();
        assert!(ab.apply(&s).unwrap().bloch().max_abs_diff(direct.bloch()) <= 1e-12);
    }
    assert!(SemigroupElement::new(StateMap::WignerUnitary { u: sigma(1) }, xi(0)).is_err());
    assert!(SemigroupElement::new(StateMap::ReflectYZ, StateMap::ReflectYZ).is_err());
}

#[test]
fn solver_is_bounded_by_the_trivial_coupling_and_symmetric() {
    let opts = SolverOptions::default();
    let mut rng = StateRng::seed_from_u64(14);
    for cost in [cost_sym(), cost_xz()] {
        for _ in 0..200 {
            let (a, b) = (random_state(&mut rng, SampleKind::MixedBall), random_state(&mut rng, SampleKind::MixedBall));
            let ab = solve_qw(&a, &b, &cost, &opts).unwrap();
            let ba = solve_qw(&b, &a, &cost, &opts).unwrap();
            assert!(ab.value <= trivial_cost(&a, &b, &cost) + 1e-7);
            assert!((ab.value - ba.value).abs() <= 1e-6);
            assert!(ab.coupling.marginal_residual(&a, &b) <= 1e-9);
            assert!(ab.coupling.min_eigenvalue() >= -1e-8);
            let Certificate::DualityGap { gap, dual } = &ab.certificate else { panic!("mixed pair without a gap") };
            let (value, min_eig) = dual.verify(&cost, &a, &b);
            assert!(min_eig >= -1e-8);
            assert!((value - dual.value).abs() <= 1e-9);
            assert!(gap.abs() <= 1e-7);
        }
    }
}

#[test]
fn pure_marginals_through_the_general_path() {
    let opts = SolverOptions { use_pure_fast_path: false, ..SolverOptions::default() };
    let mut rng = StateRng::seed_from_u64(15);
    for k in 0..200 {
        let cost = if k % 2 == 0 { cost_sym() } else { cost_xz() };
        let pure = random_state(&mut rng, SampleKind::PureSphere);
        let mixed = random_state(&mut rng, SampleKind::MixedBall);
        let (a, b) = if k % 4 < 2 { (pure, mixed) } else { (mixed, pure) };
        let r = solve_qw(&a, &b, &cost, &opts).unwrap();
        assert!(r.iterations > 0);
        assert!((r.value - trivial_cost(&a, &b, &cost)).abs() <= 1e-6, "{a:?} {b:?}: {}", r.value);
    }
}

#[test]
fn self_transport_matches_the_purification() {
    let opts = SolverOptions::default();
    let mut rng = StateRng::seed_from_u64(16);
    for _ in 0..500 {
        let s = random_state(&mut rng, SampleKind::MixedBall);
        for cost in [cost_sym(), cost_xz()] {
            let sdp = solve_qw(&s, &s, &cost, &opts).unwrap().value;
            assert!((sdp - self_distance(&s, &cost).unwrap()).abs() <= 1e-6);
        }
    }
}

#[test]
fn xz_self_distance_grows_with_y_squared() {
    for (x, z) in [(0.1, 0.2), (0.5, -0.3), (-0.6, 0.6), (0.0, 0.05)] {
        let top = (1.0f64 - x * x - z * z).sqrt();
        let values: Vec<f64> = (0..20)
            .map(|k| self_distance_xz_closed(BlochVector::new(x, top * k as f64 / 19.0, z)).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]), "({x}, {z}): {values:?}");
    }
}

#[test]
fn preset_grids_stay_in_the_ball_and_commute_with_conjugation() {
    for figure in [Figure::Fig1, Figure::Fig2, Figure::Fig3] {
        let cfg = SweepConfig::preset(figure).unwrap();
        for (x, z) in cfg.nodes() {
            assert!(x * x + cfg.y_value * cfg.y_value + z * z <= 1.0 + 1e-12);
        }
        let out = run_sweep(&cfg).unwrap();
        assert!(out.summary.conjugation_check_deviation <= 1e-6);
        for r in &out.rows {
            assert!(r.d_plus >= 0.0 && r.d_minus >= 0.0);
            assert!((r.margin - (r.d_minus - r.d_plus)).abs() <= 1e-12);
        }
    }
}
