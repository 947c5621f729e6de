//! Evaluation of the solution: the real-line initial-data integral plus the
//! contour integral of the solved spectral combination, on each side.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::conditions::{reduce_third_derivative, CanonicalConditionSet, RawCondition};
use crate::contours::{deform_inward, deform_with_knee, gamma_paths, ContourPath, SectorId, Segment};
use crate::criteria::{rank_criteria, RankReport};
use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::global_system::{regions, solve_unknowns, RegionLinearSystem};
use crate::medium::{Medium, Side, SignCase};
use crate::quadrature::{QuadResult, QuadSettings};
use crate::spectral::HalfLineProfile;

type C = Complex64;

/// Numerical controls of the evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalSettings {
    /// Absolute quadrature tolerance for one term of one sample.
    pub tol: f64,
    /// Outward rotation of the boundary rays.
    pub delta: f64,
    /// Step of the one-sided extrapolation towards `x = 0`.
    pub trace_step: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self { tol: 1e-10, delta: PI / 24.0, trace_step: 1e-2 }
    }
}

/// A number with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: C,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: C::new(0.0, 0.0), error: 0.0 };

    pub fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }

    pub fn scale(self, s: f64) -> Estimate {
        Estimate { value: self.value * s, error: self.error * s.abs() }
    }
}

/// One evaluated point of the solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionSample {
    pub x: f64,
    pub t: f64,
    pub value: C,
    pub error_estimate: f64,
}

/// A fully prepared problem: canonical medium, conditions, data and the
/// contour radius.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    original: Medium,
    medium: Medium,
    case: SignCase,
    cset: CanonicalConditionSet,
    profiles: [HalfLineProfile; 2],
    l1: [f64; 2],
    /// Sum of the forcings' decay constants.
    forcing_decay: f64,
    horizon: f64,
    settings: EvalSettings,
    radius: f64,
    report: RankReport,
    systems: Vec<(SectorId, RegionLinearSystem)>,
    #[cfg(feature = "fault-injection")]
    fault: f64,
}

fn check_profile_sides(left: &HalfLineProfile, right: &HalfLineProfile) -> Result<()> {
    if left.side() != Side::Left || right.side() != Side::Right {
        return Err(Error::InvalidProfile("profiles must be given as (left, right)".into()));
    }
    Ok(())
}

impl ProblemSpec {
    /// Classifies the medium (reflecting `x -> -x` when both roots are
    /// negative), reduces and canonicalizes the conditions, and checks rank.
    pub fn new(
        medium: Medium,
        raws: &[RawCondition],
        left: HalfLineProfile,
        right: HalfLineProfile,
        horizon: f64,
        settings: EvalSettings,
    ) -> Result<Self> {
        check_profile_sides(&left, &right)?;
        let (case, canonical) = medium.classify();
        let (raws, left, right) = canonical_frame(case, raws, left, right);
        let reduced = reduce_all(&raws, &canonical, &left, &right)?;
        let cset = CanonicalConditionSet::canonicalize(&reduced, case)?;
        Self::assemble(medium, canonical, case, cset, [left, right], horizon, settings)
    }

    /// A problem stated directly in canonical form on a canonical medium.
    pub fn from_canonical(
        medium: Medium,
        cset: CanonicalConditionSet,
        left: HalfLineProfile,
        right: HalfLineProfile,
        horizon: f64,
        settings: EvalSettings,
    ) -> Result<Self> {
        check_profile_sides(&left, &right)?;
        let (case, _) = medium.classify();
        if case.reflected || case.tag != cset.case().tag {
            return Err(Error::CanonicalizationFailure(format!(
                "conditions are for {}, medium is {}",
                cset.case().tag,
                case.tag
            )));
        }
        if let Some(d) = cset.decoupling() {
            return Err(Error::DecoupledProblem(d));
        }
        Self::assemble(medium, medium, case, cset, [left, right], horizon, settings)
    }

    fn assemble(
        original: Medium,
        medium: Medium,
        case: SignCase,
        cset: CanonicalConditionSet,
        profiles: [HalfLineProfile; 2],
        horizon: f64,
        settings: EvalSettings,
    ) -> Result<Self> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(Error::InvalidQuery(format!("horizon {horizon} must be finite and nonnegative")));
        }
        if !(settings.tol > 0.0) {
            return Err(Error::InvalidQuery("quadrature tolerance must be positive".into()));
        }
        if !(0.0..PI / 12.0).contains(&settings.delta) || settings.delta == 0.0 {
            return Err(Error::InvalidDeformation(format!("angle {} outside (0, pi/12)", settings.delta)));
        }
        let report = rank_criteria(&cset, &medium);
        let radius = crate::global_system::choose_radius(&report.det_polys)?;
        let systems = regions(case.tag)
            .iter()
            .map(|&r| RegionLinearSystem::validated(case.tag, r, &medium).map(|s| (r, s)))
            .collect::<Result<Vec<_>>>()?;
        let l1 = [profiles[0].l1_norm(), profiles[1].l1_norm()];
        if cset.forcings().iter().any(Forcing::has_custom) {
            return Err(Error::UnsupportedCondition(
                "contour evaluation needs catalogue forcings (const, poly, exp)".into(),
            ));
        }
        let forcing_decay = cset.forcings().iter().map(Forcing::decay_bound).sum();
        let pole_radius = cset.forcings().iter().map(Forcing::pole_radius).fold(0.0, f64::max);
        let radius = radius.max(pole_radius);
        Ok(Self {
            original,
            medium,
            case,
            cset,
            profiles,
            l1,
            forcing_decay,
            horizon,
            settings,
            radius,
            report,
            systems,
            #[cfg(feature = "fault-injection")]
            fault: 0.0,
        })
    }

    /// Same problem with other numerical settings.
    pub fn with_settings(&self, settings: EvalSettings) -> Result<Self> {
        if !(0.0..PI / 12.0).contains(&settings.delta) || settings.delta == 0.0 || !(settings.tol > 0.0) {
            return Err(Error::InvalidDeformation(format!("angle {} outside (0, pi/12)", settings.delta)));
        }
        let mut s = self.clone();
        s.settings = settings;
        Ok(s)
    }

    /// Test hook: perturbs the contour kernel by a relative `k`-dependent
    /// amount so residual checks can be seen to fail.
    #[cfg(feature = "fault-injection")]
    pub fn with_fault(&self, size: f64) -> Self {
        let mut s = self.clone();
        s.fault = size;
        s
    }

    pub fn medium(&self) -> &Medium {
        &self.original
    }

    pub fn canonical_medium(&self) -> &Medium {
        &self.medium
    }

    pub fn case(&self) -> SignCase {
        self.case
    }

    pub fn conditions(&self) -> &CanonicalConditionSet {
        &self.cset
    }

    pub fn report(&self) -> &RankReport {
        &self.report
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn settings(&self) -> &EvalSettings {
        &self.settings
    }

    /// Profile of `side` in the caller's frame.
    pub fn profile(&self, side: Side) -> HalfLineProfile {
        let (s, _) = self.frame(side, 0.0);
        let p = &self.profiles[s.index() as usize - 1];
        if self.case.reflected {
            p.reflected()
        } else {
            p.clone()
        }
    }

    /// Profiles in the canonical frame.
    pub fn canonical_profiles(&self) -> [&HalfLineProfile; 2] {
        [&self.profiles[0], &self.profiles[1]]
    }

    fn frame(&self, side: Side, x: f64) -> (Side, f64) {
        if self.case.reflected {
            (side.other(), -x)
        } else {
            (side, x)
        }
    }

    fn check_query(&self, side: Side, x: f64, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(Error::InvalidQuery(format!("t = {t} outside [0, {}]", self.horizon)));
        }
        if !x.is_finite() {
            return Err(Error::InvalidQuery(format!("x = {x} is not finite")));
        }
        let ok = match side {
            Side::Left => x <= 0.0,
            Side::Right => x >= 0.0,
        };
        if !ok {
            return Err(Error::InvalidQuery(format!("x = {x} is not on the {side:?} half-line")));
        }
        Ok(())
    }

    fn quad(&self, segments: usize) -> QuadSettings {
        QuadSettings { abs_tol: self.settings.tol / segments.max(1) as f64, max_panels: 20000, ..Default::default() }
    }

    /// `(1/2pi) int_R e^{ikx - omega_j t} q0_hat(k) dk`, or its `x`-derivative
    /// of order `n`, in the canonical frame.
    fn initial_term_canonical(&self, side: Side, x: f64, t: f64, n: u32) -> Result<Estimate> {
        let p = &self.profiles[side.index() as usize - 1];
        if p.is_zero() {
            return Ok(Estimate::ZERO);
        }
        if t == 0.0 {
            let v = p.derivative(x, n as usize);
            let v = if v.is_nan() && n == 0 { p.value(x) } else { v };
            return Ok(Estimate { value: C::new(v, 0.0), error: 0.0 });
        }
        let l1 = self.l1[side.index() as usize - 1];
        real_line_inversion(
            |k| p.transform_value(k),
            l1,
            p.radius(),
            self.medium.sigma(side),
            (x, t, n),
            &self.settings,
        )
    }

    fn contour_path(&self, side: Side, x: f64, t: f64) -> Result<ContourPath> {
        let (g1, g2) = gamma_paths(self.case.tag, self.radius);
        let g = match side {
            Side::Left => g1,
            Side::Right => g2,
        };
        let sigma = self.medium.sigma(side);
        let lambda = x.abs() / sigma.abs()
            + Side::BOTH
                .iter()
                .map(|&s| self.profiles[s.index() as usize - 1].radius() / self.medium.sigma(s).abs())
                .fold(0.0, f64::max);
        let knee = (lambda / (3.0 * t)).sqrt();
        deform_with_knee(&g, self.settings.delta, t, knee)
    }

    fn system(&self, sector: SectorId) -> &RegionLinearSystem {
        &self.systems.iter().find(|(r, _)| *r == sector).expect("system for every path sector").1
    }

    /// `sigma^2 w2 + i k sigma w1 - k^2 w0` from solved unknowns.
    fn combination(&self, side: Side, sector: SectorId, k: C, t: f64) -> Result<C> {
        let sys = self.system(sector);
        let a = sys.matrix(&self.medium, &self.cset, k);
        let y = sys.contour_rhs(&self.medium, &self.cset, self.canonical_profiles(), k, t)?;
        let w = solve_unknowns(&a, &y, k)?.side(side);
        let s = self.medium.sigma(side);
        let v = w[2] * (s * s) + C::i() * k * s * w[1] - k * k * w[0];
        #[cfg(feature = "fault-injection")]
        let v = v * (1.0 + self.fault * t * k);
        Ok(v)
    }

    /// Orientation and change-of-variable sign of the contour term. The
    /// product with the path flag is `-1` in every case.
    fn contour_sign(&self, side: Side, flag: f64) -> f64 {
        let side_sign = match side {
            Side::Left => 1.0,
            Side::Right => -1.0,
        };
        side_sign * self.medium.sigma(side).signum() * flag
    }

    fn contour_envelope(&self, side: Side, x: f64, t: f64, k: C) -> f64 {
        let i = C::i();
        let sigma = self.medium.sigma(side);
        let omega = i * k * k * k;
        let oscillation = (i * k * x / sigma).re;
        let r = k.norm();
        let data = Side::BOTH
            .iter()
            .map(|&s| {
                let idx = s.index() as usize - 1;
                let p = &self.profiles[idx];
                if p.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    self.l1[idx].ln() + p.radius() * r / self.medium.sigma(s).abs()
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
            + (-omega * t).re;
        let forcing = (self.forcing_decay / omega.norm()).ln() + (-omega * t).re;
        let log_source = log_add(data, forcing);
        oscillation + log_source + 2.0 * (1.0 + r).ln() + (1e3f64).ln()
    }

    fn contour_term_canonical(&self, side: Side, x: f64, t: f64, n: u32) -> Result<Estimate> {
        if t == 0.0 {
            return Ok(Estimate::ZERO);
        }
        let homogeneous = self.profiles.iter().all(HalfLineProfile::is_zero)
            && self.cset.forcings().iter().all(Forcing::is_zero);
        if homogeneous {
            return Ok(Estimate::ZERO);
        }
        let path = self.contour_path(side, x, t)?;
        let sigma = self.medium.sigma(side);
        let i = C::i();
        let nseg = path.components.iter().map(|c| c.segments.len()).sum();
        let q = self.quad(nseg);
        let mut acc = Estimate::ZERO;
        for comp in &path.components {
            let f = |k: C| -> C {
                match self.combination(side, comp.sector, k, t) {
                    Ok(v) => (i * k / sigma).powu(n) * (i * k * x / sigma).exp() * v,
                    Err(_) => C::new(f64::NAN, f64::NAN),
                }
            };
            let envelope = |k: C| self.contour_envelope(side, x, t, k) + n as f64 * (k.norm() / sigma.abs()).ln().max(0.0);
            for seg in &comp.segments {
                let part = integrate_segment(seg, &f, &envelope, &q)?;
                if part.value.is_nan() {
                    return Err(Error::NearSingularAtK { k: seg.point(0.0) });
                }
                acc = acc.add(part);
            }
        }
        Ok(acc.scale(self.contour_sign(side, path.sign) / (2.0 * PI)))
    }

    fn split(&self, side: Side, x: f64, t: f64, n: u32) -> Result<(Estimate, Estimate)> {
        self.check_query(side, x, t)?;
        let (s, xc) = self.frame(side, x);
        let parity = if self.case.reflected && n % 2 == 1 { -1.0 } else { 1.0 };
        let a = self.initial_term_canonical(s, xc, t, n)?.scale(parity);
        let b = self.contour_term_canonical(s, xc, t, n)?.scale(parity);
        Ok((a, b))
    }

    /// Initial-data integral on `side` at `(x, t)`; `t = 0` returns `q0(x)`.
    pub fn initial_term(&self, side: Side, x: f64, t: f64) -> Result<Estimate> {
        self.check_query(side, x, t)?;
        let (s, xc) = self.frame(side, x);
        self.initial_term_canonical(s, xc, t, 0)
    }

    /// Signed contour integral on `side` at `(x, t)`, zero at `t = 0`.
    pub fn contour_term(&self, side: Side, x: f64, t: f64) -> Result<Estimate> {
        self.check_query(side, x, t)?;
        let (s, xc) = self.frame(side, x);
        self.contour_term_canonical(s, xc, t, 0)
    }

    /// `q(x, t)` for `x != 0`.
    pub fn evaluate(&self, x: f64, t: f64) -> Result<SolutionSample> {
        let side = Side::of(x)
            .ok_or_else(|| Error::InvalidQuery("x = 0 is the interface; request a one-sided trace".into()))?;
        self.evaluate_on_side(side, x, t)
    }

    /// `q` from the formula of `side`, which may be taken at `x = 0`.
    pub fn evaluate_on_side(&self, side: Side, x: f64, t: f64) -> Result<SolutionSample> {
        self.derivative(side, x, t, 0)
    }

    /// `d^n q / dx^n` on `side`, by differentiating under the integrals.
    pub fn derivative(&self, side: Side, x: f64, t: f64, n: u32) -> Result<SolutionSample> {
        let (a, b) = self.split(side, x, t, n)?;
        let e = a.add(b);
        Ok(SolutionSample { x, t, value: e.value, error_estimate: e.error })
    }

    /// One-sided limit of `d^n q / dx^n` at `x = 0` by Richardson
    /// extrapolation from `|x| = h, h/2, h/4`.
    pub fn trace(&self, side: Side, t: f64, n: u32) -> Result<Estimate> {
        let h = self.settings.trace_step;
        let dir = match side {
            Side::Left => -1.0,
            Side::Right => 1.0,
        };
        let mut v = [Estimate::ZERO; 3];
        for (j, e) in v.iter_mut().enumerate() {
            let x = dir * h / (1 << j) as f64;
            let s = self.derivative(side, x, t, n)?;
            *e = Estimate { value: s.value, error: s.error_estimate };
        }
        let value = (v[2].value * 8.0 - v[1].value * 6.0 + v[0].value) / 3.0;
        let first = v[2].value * 2.0 - v[1].value;
        let error = (8.0 * v[2].error + 6.0 * v[1].error + v[0].error) / 3.0 + (value - first).norm();
        Ok(Estimate { value, error })
    }

    /// Contribution of the omitted time-`T` transforms at `t = T`, given the
    /// solution at the horizon on each side (caller's frame). Vanishes
    /// analytically; computed on rays tilted into the sectors.
    pub fn horizon_contribution(&self, side: Side, x: f64, at_horizon: [&HalfLineProfile; 2]) -> Result<Estimate> {
        self.check_query(side, x, self.horizon)?;
        let (s, xc) = self.frame(side, x);
        let hp: [HalfLineProfile; 2] = if self.case.reflected {
            [at_horizon[1].reflected(), at_horizon[0].reflected()]
        } else {
            [at_horizon[0].clone(), at_horizon[1].clone()]
        };
        let l1 = [hp[0].l1_norm(), hp[1].l1_norm()];
        let (g1, g2) = gamma_paths(self.case.tag, self.radius);
        let path = deform_inward(if s == Side::Left { &g1 } else { &g2 }, self.settings.delta)?;
        let sigma = self.medium.sigma(s);
        let i = C::i();
        let nseg = path.components.iter().map(|c| c.segments.len()).sum();
        let q = self.quad(nseg);
        let mut acc = Estimate::ZERO;
        for comp in &path.components {
            let sys = self.system(comp.sector);
            let f = |k: C| -> C {
                let a = sys.matrix(&self.medium, &self.cset, k);
                let y = sys.horizon_terms(&self.medium, [&hp[0], &hp[1]], k);
                match solve_unknowns(&a, &y, k) {
                    Ok(w) => {
                        let w = w.side(s);
                        (i * k * xc / sigma).exp() * (w[2] * (sigma * sigma) + i * k * sigma * w[1] - k * k * w[0])
                    }
                    Err(_) => C::new(f64::NAN, f64::NAN),
                }
            };
            let envelope =
                |k: C| (i * k * xc / sigma).re + (l1[0] + l1[1]).max(1e-300).ln() + 2.0 * (1.0 + k.norm()).ln() + 7.0;
            for seg in &comp.segments {
                acc = acc.add(integrate_segment(seg, &f, &envelope, &q)?);
            }
        }
        Ok(acc.scale(self.contour_sign(s, path.sign) / (2.0 * PI)))
    }

    /// Samples on a grid in `t`-major, `x`-ascending order.
    pub fn evaluate_grid(&self, xs: &[f64], ts: &[f64]) -> Vec<Result<SolutionSample>> {
        let points = grid_points(xs, ts);
        crate::parallel::map(&points, |&(x, t)| self.evaluate(x, t))
    }

    /// Same as [`Self::evaluate_grid`] on the calling thread only.
    pub fn evaluate_grid_sequential(&self, xs: &[f64], ts: &[f64]) -> Vec<Result<SolutionSample>> {
        grid_points(xs, ts).iter().map(|&(x, t)| self.evaluate(x, t)).collect()
    }
}

fn canonical_frame(
    case: SignCase,
    raws: &[RawCondition],
    left: HalfLineProfile,
    right: HalfLineProfile,
) -> (Vec<RawCondition>, HalfLineProfile, HalfLineProfile) {
    if case.reflected {
        (raws.iter().map(RawCondition::reflected).collect(), right.reflected(), left.reflected())
    } else {
        (raws.to_vec(), left, right)
    }
}

fn reduce_all(
    raws: &[RawCondition],
    medium: &Medium,
    left: &HalfLineProfile,
    right: &HalfLineProfile,
) -> Result<Vec<RawCondition>> {
    raws.iter()
        .map(|r| reduce_third_derivative(r, medium, left.value_at_interface(), right.value_at_interface()))
        .collect()
}

/// Sign case, canonical medium and canonical conditions of a problem,
/// keeping condition sets that decouple so they can be diagnosed.
pub fn classify_problem(
    medium: &Medium,
    raws: &[RawCondition],
    left: &HalfLineProfile,
    right: &HalfLineProfile,
) -> Result<(SignCase, Medium, CanonicalConditionSet)> {
    check_profile_sides(left, right)?;
    let (case, canonical) = medium.classify();
    let (raws, left, right) = canonical_frame(case, raws, left.clone(), right.clone());
    let reduced = reduce_all(&raws, &canonical, &left, &right)?;
    Ok((case, canonical, CanonicalConditionSet::canonical_form(&reduced, case)?))
}

/// `(1/2pi) int_R (ik)^n e^{ikx - i sigma^3 k^3 t} F(k) dk` for the transform
/// `F` of data with `L1` norm `l1` supported in `|x| <= support`. The
/// real line is kept up to a knee and then tilted by `delta` into the
/// directions where the cubic exponential decays.
pub fn real_line_inversion<F: Fn(C) -> C>(
    transform: F,
    l1: f64,
    support: f64,
    sigma: f64,
    (x, t, n): (f64, f64, u32),
    settings: &EvalSettings,
) -> Result<Estimate> {
    if t <= 0.0 {
        return Err(Error::InvalidDeformation("real-line inversion needs t > 0".into()));
    }
    let c3 = sigma * sigma * sigma;
    let knee = ((x.abs() + support) / (3.0 * t * c3.abs())).sqrt().max(1.0);
    let tilt = -settings.delta * sigma.signum();
    let segments = [
        Segment::Ray { origin: C::new(-knee, 0.0), direction: C::from_polar(1.0, PI - tilt), inbound: true },
        Segment::Line { from: C::new(-knee, 0.0), to: C::new(knee, 0.0) },
        Segment::Ray { origin: C::new(knee, 0.0), direction: C::from_polar(1.0, tilt), inbound: false },
    ];
    let i = C::i();
    let f = |k: C| {
        let phase = i * k * x - i * c3 * k * k * k * t;
        (i * k).powu(n) * phase.exp() * transform(k)
    };
    let envelope = |k: C| {
        let phase = (i * k * x - i * c3 * k * k * k * t).re;
        phase + l1.max(1e-300).ln() + support * k.im.abs() + n as f64 * (k.norm() + 1.0).ln()
    };
    let q = QuadSettings { abs_tol: settings.tol / 3.0, max_panels: 20000, ..Default::default() };
    let mut acc = Estimate::ZERO;
    for seg in &segments {
        acc = acc.add(integrate_segment(seg, &f, &envelope, &q)?);
    }
    Ok(acc.scale(1.0 / (2.0 * PI)))
}

/// `(x, t)` pairs, `t`-major then `x` ascending.
pub fn grid_points(xs: &[f64], ts: &[f64]) -> Vec<(f64, f64)> {
    let mut xs_sorted = xs.to_vec();
    xs_sorted.sort_by(f64::total_cmp);
    ts.iter().flat_map(|&t| xs_sorted.iter().map(move |&x| (x, t))).collect()
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Integrates along one segment; rays are cut where the log-envelope shows
/// the remaining tail is below a small fraction of the tolerance.
pub(crate) fn integrate_segment<F, E>(seg: &Segment, f: &F, envelope: &E, q: &QuadSettings) -> Result<Estimate>
where
    F: Fn(C) -> C,
    E: Fn(C) -> f64,
{
    if let Segment::Ray { .. } = seg {
        let (s_max, tail) = ray_cutoff(seg, envelope, q.abs_tol)?;
        let r: QuadResult = seg.integrate(f, s_max, q)?;
        return Ok(Estimate { value: r.value, error: r.error + tail });
    }
    let r = seg.integrate(f, 0.0, q)?;
    Ok(Estimate { value: r.value, error: r.error })
}

/// Smallest probed parameter beyond which the envelope (plus `ln s` for the
/// length) stays below `1e-3 tol` and keeps falling.
fn ray_cutoff<E: Fn(C) -> f64>(seg: &Segment, envelope: &E, tol: f64) -> Result<(f64, f64)> {
    let target = (1e-3 * tol).ln();
    let bound = |s: f64| envelope(seg.point(s)) + s.max(1.0).ln();
    let step = |s: f64| s * 1.15 + 0.25;
    let mut s = 1.0f64;
    loop {
        let b0 = bound(s);
        if b0.is_nan() || s > 1e7 {
            return Err(Error::QuadratureNonConvergence { estimate: b0.exp(), target: target.exp() });
        }
        if b0 < target {
            let b1 = bound(step(s));
            let later = [2.0, 4.0, 8.0].iter().all(|m| bound(s * m) < b0);
            if b1 < b0 && later {
                return Ok((s, b0.exp()));
            }
        }
        s = step(s);
    }
}
