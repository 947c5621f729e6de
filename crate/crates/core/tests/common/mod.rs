//! Problem configurations shared by the integration tests.
#![allow(dead_code)]

use lkdv_core::conditions::RawCondition;
use lkdv_core::evaluator::{EvalSettings, ProblemSpec};
use lkdv_core::examples::{ExampleId, ExampleProblem};
use lkdv_core::spectral::{HalfLineProfile, PolyPiece};
use lkdv_core::{Medium, Side};

pub fn continuity(n: usize) -> Vec<RawCondition> {
    (0..n).map(RawCondition::continuity).collect()
}

pub fn bump(side: Side, center: f64, width: f64, height: f64, power: u32) -> HalfLineProfile {
    HalfLineProfile::new(side, vec![PolyPiece::bump(center, width, height, power)]).unwrap()
}

/// The even bump `(1 - (x/2)^2)^4` cut at the interface, plus a small
/// extra bump on the right so the data are not symmetric.
pub fn split_bump() -> (HalfLineProfile, HalfLineProfile) {
    let b = PolyPiece::bump(0.0, 2.0, 1.0, 4);
    let left = HalfLineProfile::new(Side::Left, vec![PolyPiece::with_origin(-2.0, 0.0, 0.0, b.coeffs.clone())]).unwrap();
    let right = HalfLineProfile::new(
        Side::Right,
        vec![PolyPiece::with_origin(0.0, 2.0, 0.0, b.coeffs.clone()), PolyPiece::bump(3.0, 0.7, -0.4, 3)],
    )
    .unwrap();
    (left, right)
}

/// Medium used for each worked example.
pub fn example_medium(id: ExampleId) -> Medium {
    match id {
        ExampleId::One => Medium::new(-1.0, 1.3),
        ExampleId::Two => Medium::new(1.0, 1.6),
        ExampleId::Three => Medium::new(1.0, -0.8),
    }
    .unwrap()
}

pub fn example_problem(id: ExampleId, settings: EvalSettings) -> ExampleProblem {
    let (left, right) = split_bump();
    ExampleProblem::new(id, example_medium(id), left, right, 1.0, settings).unwrap()
}

pub fn example_spec(id: ExampleId, settings: EvalSettings) -> ProblemSpec {
    example_problem(id, settings).spec().clone()
}

/// Smooth data for the finite-difference comparison with `sigma = (1, -1)`.
pub fn fd_configuration(horizon: f64) -> ProblemSpec {
    ProblemSpec::new(
        Medium::new(1.0, -1.0).unwrap(),
        &continuity(2),
        bump(Side::Left, -1.5, 1.0, 1.0, 8),
        bump(Side::Right, 1.2, 0.8, 0.5, 8),
        horizon,
        EvalSettings::default(),
    )
    .unwrap()
}
