use lkdv_core::quadrature::{integrate, QuadSettings};
use lkdv_core::spectral::{HalfLineProfile, PolyPiece};
use lkdv_core::Side;
use num_complex::Complex64;
use proptest::prelude::*;

fn piece(side: Side) -> impl Strategy<Value = PolyPiece> {
    (0.0..2.0f64, 0.1..1.5f64, -1.0..1.0f64, prop::collection::vec(-1.0..1.0f64, 1..5)).prop_map(move |(a, w, o, c)| {
        let (start, end) = match side {
            Side::Left => (-a - w, -a),
            Side::Right => (a, a + w),
        };
        PolyPiece::with_origin(start, end, o, c)
    })
}

fn profile() -> impl Strategy<Value = HalfLineProfile> {
    prop_oneof![Just(Side::Left), Just(Side::Right)].prop_flat_map(|side| {
        prop::collection::vec(piece(side), 1..4).prop_map(move |p| HalfLineProfile::new(side, p).unwrap())
    })
}

fn wavenumber() -> impl Strategy<Value = Complex64> {
    (-20.0..20.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn closed_form_matches_quadrature(p in profile(), k in wavenumber()) {
        let settings = QuadSettings { abs_tol: 1e-14, max_panels: 20000, ..Default::default() };
        let direct: Complex64 = p
            .pieces()
            .unwrap()
            .iter()
            .map(|q| integrate(|x| (-Complex64::i() * k * x).exp() * q.eval(x), q.start, q.end, &settings).unwrap().value)
            .sum();
        let closed = p.transform_value(k);
        prop_assert!((direct - closed).norm() <= 1e-10 * closed.norm().max(1e-2), "{direct} vs {closed}");
    }

    #[test]
    fn growth_bound_holds(p in profile(), k in wavenumber()) {
        let (a, b) = p.support().unwrap();
        let bound = p.l1_norm() * (a * k.im).max(b * k.im).exp();
        prop_assert!(p.transform_value(k).norm() <= bound * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn transform_is_linear(p in profile(), q in profile(), a in -2.0..2.0f64, b in -2.0..2.0f64, k in wavenumber()) {
        prop_assume!(p.side() == q.side());
        let combo = HalfLineProfile::linear_combination(a, &p, b, &q).unwrap();
        let lhs = combo.transform_value(k);
        let rhs = p.transform_value(k) * a + q.transform_value(k) * b;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}
