use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lkdv_core::conditions::{CanonicalConditionSet, RawCondition};
use lkdv_core::criteria::{rank_criteria, RankReport};
use lkdv_core::evaluator::{classify_problem, ProblemSpec};
use lkdv_core::forcing::Forcing;
use lkdv_core::oracles::{compare as compare_fields, richardson_study, Field, Norm, WholeLineOracle};
use lkdv_core::{Error, Result, Side};
use num_complex::Complex64;

use crate::config::{OracleConfig, OracleKind, RunConfig};

/// Process exit status. The numeric values are a stable contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    UserError = 2,
    Degenerate = 3,
    NumericalFailure = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&Error> for ExitStatus {
    fn from(e: &Error) -> Self {
        use Error::*;
        match e {
            DecoupledProblem(_) | SingularSystem { .. } => ExitStatus::Degenerate,
            NearSingularAtK { .. }
            | QuadratureNonConvergence { .. }
            | InvalidDeformation(_)
            | RegionValidityViolation { .. }
            | OriginUndefined
            | ConstraintSingular
            | InstabilityDetected { .. }
            | DomainTruncation { .. } => ExitStatus::NumericalFailure,
            _ => ExitStatus::UserError,
        }
    }
}

/// Text to print and the status to exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub status: ExitStatus,
    pub text: String,
}

/// Shortest decimal that reads back to the same double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn describe_criteria(report: &RankReport, out: &mut String) {
    for c in report.effective() {
        let _ = writeln!(
            out,
            "  criterion {}: lhs {} rhs {} -> {}",
            c.index,
            fmt_f64(c.lhs),
            fmt_f64(c.rhs),
            if c.holds { "holds" } else { "fails" }
        );
    }
    if let Some(fix) = &report.corrected {
        let orig = &report.criteria[fix.index - 1];
        let _ = writeln!(
            out,
            "  criterion {} as published: lhs {} rhs {} -> {}",
            orig.index,
            fmt_f64(orig.lhs),
            fmt_f64(orig.rhs),
            if orig.holds { "holds" } else { "fails" }
        );
    }
    for w in report.warnings() {
        let _ = writeln!(out, "  warning: {w}");
    }
}

pub fn classify(cfg: &RunConfig) -> Result<CommandOutput> {
    let medium = cfg.medium()?;
    let raws = cfg.raw_conditions()?;
    let (case, canonical, cset) =
        classify_problem(&medium, &raws, &cfg.profile(Side::Left)?, &cfg.profile(Side::Right)?)?;
    let report = rank_criteria(&cset, &canonical);
    let mut out = String::new();
    let _ = write!(out, "{}", case.tag);
    if case.reflected {
        let _ = write!(out, " (after reflecting x -> -x; both roots negative)");
    }
    let _ = writeln!(out, ", {} required", cset.len());
    let _ = writeln!(out, "boundary-type conditions: {}", cset.boundary_condition_count());
    let decoupling = cset.decoupling();
    match decoupling {
        Some(d) => {
            let _ = writeln!(out, "decoupling: {d}");
        }
        None => {
            let _ = writeln!(out, "decoupling: none");
        }
    }
    describe_criteria(&report, &mut out);
    let satisfied = report.satisfied();
    if report.full_rank_corrected {
        let list: Vec<String> = satisfied.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "full rank (criterion {})", list.join(", "));
    } else {
        let _ = writeln!(out, "rank-deficient; det \u{2261} 0");
    }
    if !report.det_full_rank {
        let zero: Vec<String> =
            report.det_polys.iter().filter(|p| p.is_zero()).map(|p| p.region.number().to_string()).collect();
        let _ = writeln!(out, "determinant vanishes identically in region(s) {}", zero.join(", "));
    }
    if let Some(r) = report.radius {
        let pole = cset.forcings().iter().map(Forcing::pole_radius).fold(0.0, f64::max);
        let _ = writeln!(out, "R = {}", fmt_f64(r.max(pole)));
    }
    let status =
        if report.det_full_rank && decoupling.is_none() { ExitStatus::Success } else { ExitStatus::Degenerate };
    Ok(CommandOutput { status, text: out })
}

/// Path of the run manifest written next to `csv`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.txt");
    csv.with_file_name(name)
}

fn manifest(spec: &ProblemSpec, cfg: &RunConfig, rows: usize) -> String {
    let mut out = String::new();
    let case = spec.case();
    let _ = writeln!(out, "case: {}", case.tag);
    let _ = writeln!(out, "reflected: {}", case.reflected);
    let _ = writeln!(out, "sigma1: {}", fmt_f64(cfg.medium.sigma1));
    let _ = writeln!(out, "sigma2: {}", fmt_f64(cfg.medium.sigma2));
    let _ = writeln!(out, "horizon: {}", fmt_f64(spec.horizon()));
    let _ = writeln!(out, "R: {}", fmt_f64(spec.radius()));
    let _ = writeln!(out, "delta: {}", fmt_f64(spec.settings().delta));
    let _ = writeln!(out, "tolerance: {}", fmt_f64(spec.settings().tol));
    let _ = writeln!(out, "rows: {rows}");
    let _ = writeln!(out, "parallel: {}", lkdv_core::parallel::is_parallel());
    let _ = writeln!(out, "criteria:");
    describe_criteria(spec.report(), &mut out);
    out
}

/// Writes the CSV and its manifest; returns the CSV path.
pub fn solve(cfg: &RunConfig, out: &Path) -> Result<CommandOutput> {
    let spec = cfg.problem()?;
    let xs = cfg.grid.xs.values();
    let ts = cfg.grid.ts.values();
    let samples = spec.evaluate_grid(&xs, &ts).into_iter().collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("x,t,re_q,im_q,err_est\n");
    for s in &samples {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            fmt_f64(s.x),
            fmt_f64(s.t),
            fmt_f64(s.value.re),
            fmt_f64(s.value.im),
            fmt_f64(s.error_estimate)
        );
    }
    let io = |e: std::io::Error| Error::Config { key: "out".into(), message: e.to_string() };
    fs::write(out, csv).map_err(io)?;
    let mpath = manifest_path(out);
    fs::write(&mpath, manifest(&spec, cfg, samples.len())).map_err(io)?;
    Ok(CommandOutput {
        status: ExitStatus::Success,
        text: format!("wrote {} rows to {}\nmanifest {}\n", samples.len(), out.display(), mpath.display()),
    })
}

/// Whether the conditions are those of a single homogeneous medium.
fn is_plain_continuity(spec: &ProblemSpec) -> bool {
    let raws: Vec<RawCondition> = (0..3).map(RawCondition::continuity).collect();
    match CanonicalConditionSet::canonicalize(&raws, spec.case()) {
        Ok(c) => {
            let cset = spec.conditions();
            c.len() == cset.len()
                && c.beta().iter().zip(cset.beta()).all(|(a, b)| a.iter().zip(b).all(|(u, v)| (u - v).abs() < 1e-12))
                && cset.forcings().iter().all(Forcing::is_zero)
        }
        Err(_) => false,
    }
}

fn oracle_values(spec: &ProblemSpec, oracle: &OracleConfig, xs: &[f64], t: f64) -> Result<(Vec<Complex64>, Vec<f64>)> {
    match oracle.kind {
        OracleKind::WholeLine => {
            let m = spec.medium();
            if m.sigma1() != m.sigma2() || !is_plain_continuity(spec) {
                return Err(Error::OracleUnavailable(
                    "whole-line oracle needs sigma1 = sigma2 and continuity of q, q_x, q_xx".into(),
                ));
            }
            let o = WholeLineOracle::new(spec.profile(Side::Left), spec.profile(Side::Right), m.sigma1())?
                .with_settings(*spec.settings());
            let vals = lkdv_core::parallel::map(xs, |&x| o.solution(x, t).map(|e| (e.value, e.error)));
            let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
            let slack = vals.iter().map(|v| 10.0 * v.1).collect();
            Ok((vals.into_iter().map(|v| v.0).collect(), slack))
        }
        OracleKind::Fd => {
            let study = richardson_study(spec, oracle.half_width, oracle.h0, 0.01, t, xs)?;
            Ok((study.extrapolated.iter().map(|v| Complex64::new(*v, 0.0)).collect(), study.band))
        }
    }
}

pub fn compare(cfg: &RunConfig, oracle: &OracleConfig) -> Result<CommandOutput> {
    let spec = cfg.problem()?;
    let xs = cfg.grid.xs.values();
    let mut out = String::new();
    let mut passed = true;
    let kind = match oracle.kind {
        OracleKind::WholeLine => "whole-line",
        OracleKind::Fd => "fd",
    };
    let _ = writeln!(out, "oracle: {kind}, tolerance {}", fmt_f64(oracle.tolerance));
    for t in cfg.grid.ts.values() {
        let utm = spec.evaluate_grid(&xs, &[t]).into_iter().collect::<Result<Vec<_>>>()?;
        let (reference, band) = if t == 0.0 {
            let v = utm.iter().map(|s| Complex64::new(spec.profile(Side::of(s.x).unwrap_or(Side::Right)).value(s.x), 0.0));
            (v.collect(), vec![0.0; xs.len()])
        } else {
            oracle_values(&spec, oracle, &xs, t)?
        };
        let a = Field::new(xs.clone(), utm.iter().map(|s| s.value).collect())?;
        let b = Field::new(xs.clone(), reference)?;
        let max = compare_fields(&a, &b, Norm::Max)?;
        let l2 = if xs.len() > 1 { compare_fields(&a, &b, Norm::L2)? } else { max };
        let within = a
            .values
            .iter()
            .zip(&b.values)
            .zip(&band)
            .all(|((u, v), w)| (u - v).norm() <= oracle.tolerance.max(*w));
        passed &= within;
        let _ = writeln!(
            out,
            "t = {}: max {:.3e}, L2 {:.3e}, largest oracle band {:.3e} -> {}",
            fmt_f64(t),
            max,
            l2,
            band.iter().copied().fold(0.0, f64::max),
            if within { "PASS" } else { "FAIL" }
        );
    }
    let status = if passed { ExitStatus::Success } else { ExitStatus::NumericalFailure };
    Ok(CommandOutput { status, text: out })
}
