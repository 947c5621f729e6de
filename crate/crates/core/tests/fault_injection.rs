//! A small injected error in the time dependence must be caught by the
//! residual suite, and the same configuration must pass without it.
#![cfg(feature = "fault-injection")]

mod common;

use common::{bump, continuity};
use lkdv_core::diagnostics::{run_residual_suite, ResidualGrid};
use lkdv_core::evaluator::{EvalSettings, ProblemSpec};
use lkdv_core::{Medium, Side};

fn spec() -> ProblemSpec {
    ProblemSpec::new(
        Medium::new(1.0, 1.4).unwrap(),
        &continuity(3),
        bump(Side::Left, -2.2, 2.0, 0.8, 4),
        bump(Side::Right, 2.3, 2.1, -0.6, 4),
        1.0,
        EvalSettings { tol: 1e-13, ..EvalSettings::default() },
    )
    .unwrap()
}

fn grid() -> ResidualGrid {
    ResidualGrid { xs: vec![-1.5, -0.8, -0.3, 0.3, 0.8, 1.5], t: 0.3, h: 0.01 }
}

#[test]
fn clean_solution_passes() {
    let failed: Vec<String> =
        run_residual_suite(&spec(), &grid()).iter().filter(|r| !r.passed).map(ToString::to_string).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn injected_fault_is_detected() {
    let reports = run_residual_suite(&spec().with_fault(1e-3), &grid());
    let pde = reports.iter().find(|r| r.name.starts_with("pde residual")).unwrap();
    assert!(!pde.passed, "{pde}");
}
