use lkdv_core::{alpha, CaseTag, Medium, Side};
use num_complex::Complex64;
use proptest::prelude::*;

fn nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.05f64, 0.05..5.0f64]
}

proptest! {
    #[test]
    fn dispersion_is_rotation_invariant(s1 in nonzero(), s2 in nonzero(), re in -20.0..20.0f64, im in -20.0..20.0f64) {
        let m = Medium::new(s1, s2).unwrap();
        let k = Complex64::new(re, im);
        for side in Side::BOTH {
            let a = m.dispersion(side, k);
            let b = m.dispersion(side, alpha() * k);
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn phase_velocity_sign_follows_sigma(s1 in nonzero(), s2 in nonzero(), k in prop_oneof![-10.0..-1e-3f64, 1e-3..10.0f64]) {
        let m = Medium::new(s1, s2).unwrap();
        for side in Side::BOTH {
            prop_assert_eq!(m.phase_velocity(side, k).signum(), m.sigma(side).signum());
        }
    }

    #[test]
    fn classification_is_total_and_reflection_idempotent(s1 in nonzero(), s2 in nonzero()) {
        let m = Medium::new(s1, s2).unwrap();
        let (case, canonical) = m.classify();
        prop_assert!(canonical.sigma1() > 0.0 || canonical.sigma2() > 0.0);
        if case.reflected {
            prop_assert_eq!(case.tag, CaseTag::PosPos);
            let (again, same) = canonical.classify();
            prop_assert_eq!(again.tag, CaseTag::PosPos);
            prop_assert!(!again.reflected);
            prop_assert_eq!(same, canonical);
        }
    }
}

#[test]
fn zero_root_is_rejected() {
    assert!(Medium::new(0.0, 1.0).is_err());
    assert!(Medium::new(1.0, f64::NAN).is_err());
}
