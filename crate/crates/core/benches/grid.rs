use criterion::{criterion_group, criterion_main, Criterion};
use lkdv_core::conditions::RawCondition;
use lkdv_core::evaluator::{EvalSettings, ProblemSpec};
use lkdv_core::spectral::{HalfLineProfile, PolyPiece};
use lkdv_core::{Medium, Side};

fn spec() -> ProblemSpec {
    let raws: Vec<RawCondition> = (0..3).map(RawCondition::continuity).collect();
    let left = HalfLineProfile::new(Side::Left, vec![PolyPiece::bump(-1.5, 1.2, 1.0, 4)]).unwrap();
    let right = HalfLineProfile::new(Side::Right, vec![PolyPiece::bump(1.4, 1.0, -0.5, 4)]).unwrap();
    ProblemSpec::new(Medium::new(1.0, 1.6).unwrap(), &raws, left, right, 1.0, EvalSettings::default()).unwrap()
}

fn grid(c: &mut Criterion) {
    let spec = spec();
    let xs: Vec<f64> = (0..16).map(|i| -3.1 + 0.4 * i as f64).collect();
    let ts = [0.25, 0.75];
    let mut group = c.benchmark_group("evaluate_grid");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| spec.evaluate_grid(&xs, &ts)));
    group.bench_function("sequential", |b| b.iter(|| spec.evaluate_grid_sequential(&xs, &ts)));
    group.finish();
}

criterion_group!(benches, grid);
criterion_main!(benches);
