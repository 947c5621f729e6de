mod common;

use common::*;
use lkdv_core::diagnostics::{deformation_invariance, run_residual_suite, ResidualGrid, INVARIANCE_DELTAS};
use lkdv_core::evaluator::{EvalSettings, ProblemSpec};
use lkdv_core::examples::ExampleId;
use lkdv_core::{Medium, Side};
use proptest::prelude::*;

fn medium() -> impl Strategy<Value = Medium> {
    (prop_oneof![-1.8..-0.5f64, 0.5..1.8f64], prop_oneof![-1.8..-0.5f64, 0.5..1.8f64])
        .prop_map(|(a, b)| Medium::new(a, b).unwrap())
}

fn problem(m: Medium, c1: f64, c2: f64, h: f64) -> ProblemSpec {
    let (case, _) = m.classify();
    let n = lkdv_core::conditions::required_condition_count(case.tag);
    ProblemSpec::new(
        m,
        &continuity(n),
        bump(Side::Left, -c1, 0.6, h, 4),
        bump(Side::Right, c2, 0.5, 1.0 - h, 4),
        1.0,
        EvalSettings::default(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn real_data_give_real_solutions(m in medium(), c1 in 0.7..2.0f64, c2 in 0.6..2.0f64, h in -1.0..1.0f64, x in prop_oneof![-3.0..-0.05f64, 0.05..3.0f64], t in 0.02..1.0f64) {
        let s = problem(m, c1, c2, h).evaluate(x, t).unwrap();
        prop_assert!(s.value.im.abs() <= (10.0 * s.error_estimate).max(1e-8), "{s:?}");
    }

    #[test]
    fn contour_angle_does_not_matter(m in medium(), c1 in 0.7..2.0f64, c2 in 0.6..2.0f64, x in prop_oneof![-3.0..-0.05f64, 0.05..3.0f64], t in 0.05..1.0f64) {
        let r = deformation_invariance(&problem(m, c1, c2, 0.5), &INVARIANCE_DELTAS, &[(x, t)]);
        prop_assert!(r.passed, "{r}");
    }
}

#[test]
fn residual_suite_passes_on_each_sign_case() {
    for m in [Medium::new(1.0, -0.8), Medium::new(1.0, 1.6), Medium::new(-1.0, 1.3), Medium::new(-0.9, -1.4)] {
        let m = m.unwrap();
        let n = lkdv_core::conditions::required_condition_count(m.classify().0.tag);
        let spec = ProblemSpec::new(
            m,
            &continuity(n),
            bump(Side::Left, -2.2, 2.0, 0.8, 4),
            bump(Side::Right, 2.3, 2.1, -0.6, 4),
            1.0,
            EvalSettings { tol: 1e-13, ..EvalSettings::default() },
        )
        .unwrap();
        let grid = ResidualGrid { xs: vec![-1.5, -0.8, -0.3, 0.3, 0.8, 1.5], t: 0.3, h: 0.04 };
        for r in run_residual_suite(&spec, &grid) {
            assert!(r.passed, "{r}");
        }
    }
}

#[test]
fn mirror_symmetry_when_roots_are_opposite() {
    let spec = ProblemSpec::new(
        Medium::new(1.0, -1.0).unwrap(),
        &continuity(2),
        bump(Side::Left, -1.0, 0.7, 1.0, 4),
        bump(Side::Right, 1.0, 0.7, 1.0, 4),
        1.0,
        EvalSettings::default(),
    )
    .unwrap();
    for (x, t) in [(0.3, 0.2), (1.1, 0.5), (2.4, 0.9)] {
        let a = spec.evaluate(x, t).unwrap();
        let b = spec.evaluate(-x, t).unwrap();
        assert!((a.value - b.value).norm() <= 10.0 * (a.error_estimate + b.error_estimate) + 1e-9, "{a:?} {b:?}");
    }
}

#[test]
fn example_one_third_derivative_combination_is_constant() {
    let spec = example_spec(ExampleId::One, EvalSettings::default());
    let m = spec.medium();
    let v: Vec<_> = [0.1, 0.4, 0.8]
        .iter()
        .map(|&t| {
            let l = spec.trace(Side::Left, t, 0).unwrap().value;
            let r = spec.trace(Side::Right, t, 0).unwrap().value;
            l / m.coefficient(Side::Left) - r / m.coefficient(Side::Right)
        })
        .collect();
    for w in &v {
        assert!((w - v[0]).norm() <= 1e-6 * (1.0 + v[0].norm()), "{v:?}");
    }
}

#[test]
fn departure_from_data_is_linear_in_small_t() {
    let spec = problem(Medium::new(1.0, -0.8).unwrap(), 1.2, 1.0, 0.7);
    let x = 0.8;
    let q0 = spec.profile(Side::Right).value(x);
    let d = |t: f64| (spec.evaluate(x, t).unwrap().value.re - q0).abs();
    let ratio = d(1e-3) / d(1e-4);
    assert!((ratio - 10.0).abs() < 1.0, "{ratio}");
}
