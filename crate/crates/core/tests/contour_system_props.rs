use lkdv_core::conditions::{reduce_third_derivative, CanonicalConditionSet, RawCondition};
use lkdv_core::contours::{sector_boundary, SectorId, Segment};
use lkdv_core::linalg::{mat_vec, norm2};
use lkdv_core::global_system::{regions, rotation_valid, solve_unknowns, RegionLinearSystem, RowDescriptor};
use lkdv_core::quadrature::QuadSettings;
use lkdv_core::spectral::{HalfLineProfile, PolyPiece};
use lkdv_core::{alpha_pow, CaseTag, Medium, Side, SignCase};
use num_complex::Complex64;
use proptest::prelude::*;

const SECTORS: [SectorId; 3] = [SectorId::One, SectorId::Three, SectorId::Five];

fn sector() -> impl Strategy<Value = SectorId> {
    prop_oneof![Just(SectorId::One), Just(SectorId::Three), Just(SectorId::Five)]
}

fn case_medium() -> impl Strategy<Value = (CaseTag, Medium)> {
    (prop_oneof![Just(CaseTag::PosNeg), Just(CaseTag::PosPos), Just(CaseTag::NegPos)], 0.3..2.0f64, 0.3..2.0f64)
        .prop_map(|(tag, a, b)| {
            let m = match tag {
                CaseTag::PosNeg => Medium::new(a, -b),
                CaseTag::PosPos => Medium::new(a, b),
                CaseTag::NegPos => Medium::new(-a, b),
            };
            (tag, m.unwrap())
        })
}

/// Direction of travel at parameter `s`.
fn travel(seg: &Segment, s: f64) -> Complex64 {
    match seg {
        Segment::Ray { inbound: true, direction, .. } => -direction,
        _ => seg.tangent(s),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sector_lies_left_of_its_boundary(sector in sector(), radius in 0.5..4.0f64, u in 0.01..0.99f64, far in 0.0..30.0f64) {
        let i = Complex64::i();
        for seg in &sector_boundary(sector, radius).segments {
            let s = match seg {
                Segment::Arc { from_angle, to_angle, .. } => from_angle + u * (to_angle - from_angle),
                Segment::Line { .. } => u,
                Segment::Ray { .. } => far + 0.1,
            };
            let k = seg.point(s);
            let n = i * travel(seg, s) / travel(seg, s).norm();
            let eps = 1e-3 * k.norm();
            let inside = k + n * eps;
            prop_assert!((i * inside.powi(3)).re < 0.0, "{seg:?} at {k}");
            if let Segment::Ray { .. } = seg {
                let outside = k - n * eps;
                prop_assert!((i * outside.powi(3)).re > 0.0, "{seg:?} at {k}");
            }
        }
    }

    #[test]
    fn reversing_a_segment_negates_its_integral(sector in sector(), radius in 0.5..3.0f64) {
        let f = |k: Complex64| (-(k * k) * 0.1).exp() * (k + 1.0);
        let q = QuadSettings { abs_tol: 1e-13, ..Default::default() };
        for seg in &sector_boundary(sector, radius).segments {
            let a = seg.integrate(f, 8.0, &q).unwrap().value;
            let b = seg.reversed().integrate(f, 8.0, &q).unwrap().value;
            prop_assert!((a + b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn global_relation_rows_valid_on_their_regions((tag, m) in case_medium()) {
        for &region in regions(tag) {
            let sys = RegionLinearSystem::validated(tag, region, &m).unwrap();
            let (lo, hi) = region.angles();
            for row in sys.rows() {
                if let RowDescriptor::GlobalRelation { side, rotation } = *row {
                    prop_assert!(rotation_valid(&m, side, rotation, region));
                    for j in 0..100 {
                        let theta = lo + (hi - lo) * j as f64 / 99.0;
                        let k = Complex64::from_polar(0.5 + j as f64, theta);
                        let z = alpha_pow(rotation) * k / m.sigma(side);
                        let ok = match side {
                            Side::Left => z.im >= -1e-9 * z.norm(),
                            Side::Right => z.im <= 1e-9 * z.norm(),
                        };
                        prop_assert!(ok, "{tag} region {} row {row:?} at {k}", region.number());
                    }
                }
            }
        }
    }

    #[test]
    fn solves_meet_the_residual_bound((tag, m) in case_medium(), r in 1.5..5.0f64, u in 0.05..0.95f64) {
        let n = lkdv_core::conditions::required_condition_count(tag);
        let raws: Vec<RawCondition> =
            (0..n).map(|i| reduce_third_derivative(&RawCondition::continuity(i), &m, 0.0, 0.0).unwrap()).collect();
        let cset = CanonicalConditionSet::canonicalize(&raws, SignCase { tag, reflected: false }).unwrap();
        let left = HalfLineProfile::new(Side::Left, vec![PolyPiece::bump(-1.0, 0.8, 1.0, 3)]).unwrap();
        let right = HalfLineProfile::new(Side::Right, vec![PolyPiece::bump(1.0, 0.5, -0.5, 2)]).unwrap();
        for &region in regions(tag) {
            let sys = RegionLinearSystem::validated(tag, region, &m).unwrap();
            let (lo, hi) = region.angles();
            let k = Complex64::from_polar(r, lo + u * (hi - lo));
            let a = sys.matrix(&m, &cset, k);
            let y = sys.contour_rhs(&m, &cset, [&left, &right], k, 0.4).unwrap();
            let x = solve_unknowns(&a, &y, k).unwrap();
            let ax = mat_vec(&a, &x.as_array());
            let res: [Complex64; 6] = std::array::from_fn(|i| ax[i] - y[i]);
            prop_assert!(norm2(&res) <= 1e-10 * norm2(&y), "{} vs {}", norm2(&res), norm2(&y));
        }
    }
}

#[test]
fn every_sector_has_three_pieces() {
    for s in SECTORS {
        assert_eq!(sector_boundary(s, 1.0).segments.len(), 3);
    }
}
