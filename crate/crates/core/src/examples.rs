//! The three worked examples with continuity conditions, evaluated from
//! their printed kernels as an independent check of the generic pipeline.
//!
//! Each printed integral over `dD_R^(r)` is a [`KernelTerm`]: a coefficient
//! in `k`, the sector, and what it multiplies. A transform term multiplies
//! `e^{ikx/sigma_j - ik^3 t} q0_hat_s(alpha^m k / sigma_s)`; a point-value term
//! multiplies `(e^{-ik^3 t} - 1) e^{ikx/sigma_j} q0_s(0)`. Coefficients include
//! the printed `1/(2 pi)` and sign. Paths are the positively oriented
//! sector boundaries used everywhere else in the crate.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::Serialize;

use crate::conditions::{reduce_third_derivative, CanonicalConditionSet, RawCondition};
use crate::contours::{deform_inward, deform_with_knee, gamma_paths, sector_boundary, ContourPath, SectorId};
use crate::error::{Error, Result};
use crate::evaluator::{integrate_segment, real_line_inversion, EvalSettings, Estimate, ProblemSpec};
use crate::global_system::{solve_unknowns, RegionLinearSystem};
use crate::medium::{CaseTag, Medium, Side};
use crate::quadrature::QuadSettings;
use crate::spectral::HalfLineProfile;
use crate::alpha;

/// Relative size above which a printed coefficient counts as an erratum.
pub const ERRATUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExampleId {
    /// `sigma1 < 0 < sigma2`, continuity of `q` through `q_xxx`.
    One,
    /// `sigma1, sigma2 > 0`, continuity of `q` through `q_xx`.
    Two,
    /// `sigma1 > 0 > sigma2`, continuity of `q` and `q_x`.
    Three,
}

impl ExampleId {
    pub const ALL: [ExampleId; 3] = [ExampleId::One, ExampleId::Two, ExampleId::Three];

    pub fn number(self) -> u8 {
        match self {
            ExampleId::One => 1,
            ExampleId::Two => 2,
            ExampleId::Three => 3,
        }
    }

    pub fn case(self) -> CaseTag {
        match self {
            ExampleId::One => CaseTag::NegPos,
            ExampleId::Two => CaseTag::PosPos,
            ExampleId::Three => CaseTag::PosNeg,
        }
    }

    /// Continuity of the first `m` derivatives, `m` the count the case needs.
    pub fn conditions(self) -> Vec<RawCondition> {
        let m = crate::conditions::required_condition_count(self.case());
        (0..m).map(RawCondition::continuity).collect()
    }
}

/// What a printed kernel multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KernelSource {
    /// `q0_hat_side(alpha^rotation k / sigma_side)`.
    Transform { side: Side, rotation: u8 },
    /// `q0_side(0)`, with the factor `e^{-ik^3 t} - 1`.
    PointValue { side: Side },
}

type Coefficient = fn(f64, f64, C) -> C;

/// One printed integral.
#[derive(Clone, Copy)]
pub struct KernelTerm {
    /// Solution side the term belongs to.
    pub target: Side,
    pub sector: SectorId,
    pub source: KernelSource,
    /// Position within its displayed formula, counting from one after the
    /// real-line integral.
    pub position: usize,
    coefficient: Coefficient,
}

impl std::fmt::Debug for KernelTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelTerm")
            .field("target", &self.target)
            .field("sector", &self.sector)
            .field("source", &self.source)
            .field("position", &self.position)
            .finish()
    }
}

impl KernelTerm {
    pub fn coefficient(&self, s1: f64, s2: f64, k: C) -> C {
        (self.coefficient)(s1, s2, k)
    }

    pub fn label(&self) -> String {
        format!("q{} term {} on dD_R^({})", self.target.index(), self.position, self.sector.number())
    }
}

fn tr(side: Side, rotation: u8) -> KernelSource {
    KernelSource::Transform { side, rotation }
}

fn pv(side: Side) -> KernelSource {
    KernelSource::PointValue { side }
}

fn term(target: Side, sector: SectorId, position: usize, source: KernelSource, coefficient: Coefficient) -> KernelTerm {
    KernelTerm { target, sector, source, position, coefficient }
}

fn two_pi() -> C {
    C::new(2.0 * PI, 0.0)
}

/// The printed kernels of one example, transcribed term by term.
pub fn kernel_table(id: ExampleId) -> Vec<KernelTerm> {
    use SectorId::{Five, One, Three};
    use Side::{Left as L, Right as R};
    match id {
        ExampleId::One => vec![
            term(L, One, 1, tr(L, 2), |s1, s2, _| {
                let a = alpha();
                (a * a * s1 - s2) / (two_pi() * a * a * s1 * (s1 - s2))
            }),
            term(L, One, 2, pv(L), |s1, s2, k| {
                let a = alpha();
                C::i() * (a - 1.0) / (two_pi() * a * a * k * s1 * s2 * (s1 - s2))
            }),
            term(L, One, 3, tr(R, 2), |s1, s2, _| {
                let a = alpha();
                s1 * s1 * (a * a - 1.0) / (two_pi() * a * a * s2 * s2 * (s1 - s2))
            }),
            term(L, One, 4, pv(R), |s1, s2, k| {
                let a = alpha();
                -(C::i() * s1 * s1 * (a - 1.0)) / (two_pi() * a * a * k * s2.powi(4) * (s1 - s2))
            }),
            term(L, Three, 5, tr(L, 1), |s1, s2, k| {
                let a = alpha();
                (a * s1 - s2) / (two_pi() * k * a * s1 * (s1 - s2))
            }),
            term(L, Three, 6, pv(L), |s1, s2, k| {
                let a = alpha();
                C::i() * (a * a - 1.0) / (two_pi() * k * (s1.powi(3) - s2.powi(3)))
            }),
            term(L, Three, 7, tr(R, 1), |s1, s2, _| {
                let a = alpha();
                s1 * s1 * (a - 1.0) / (two_pi() * a * s2 * s2 * (s1 - s2))
            }),
            term(L, Three, 8, pv(R), |s1, s2, k| {
                let a = alpha();
                -(C::i() * s1 * s1 * (a * a - 1.0)) / (two_pi() * s2.powi(4) * a * k * (s1 - s2))
            }),
            term(R, One, 1, tr(L, 2), |s1, s2, _| {
                let a = alpha();
                s2 * s2 * (a * a - 1.0) / (two_pi() * a * a * s1 * s1 * (s1 - s2))
            }),
            term(R, One, 2, pv(L), |s1, s2, k| {
                let a = alpha();
                C::i() * (a - 1.0) * (s2 - a * s1 + a * s2) / (two_pi() * a * a * k * s1.powi(3) * (s1 - s2))
            }),
            term(R, One, 3, tr(R, 2), |s1, s2, _| {
                let a = alpha();
                (a * a * s2 - s1) / (two_pi() * a * a * s2 * (s1 - s2))
            }),
            term(R, One, 4, pv(R), |s1, s2, k| {
                let a = alpha();
                -(C::i() * (a - 1.0) * (a * s1 - a * s2 - s2)) / (two_pi() * a * a * k * s2.powi(3) * (s1 - s2))
            }),
            term(R, Three, 5, tr(L, 1), |s1, s2, _| {
                let a = alpha();
                s2 * s2 * (a - 1.0) / (two_pi() * a * s1 * s1 * (s1 - s2))
            }),
            term(R, Three, 6, pv(L), |s1, s2, k| {
                let a = alpha();
                -(C::i() * (a - 1.0) * (s2 + a * s1)) / (two_pi() * a * s1.powi(3) * k * (s1 - s2))
            }),
            term(R, Three, 7, tr(R, 1), |s1, s2, _| {
                let a = alpha();
                (a * s2 - s1) / (two_pi() * a * s2 * (s1 - s2))
            }),
            term(R, Three, 8, pv(R), |s1, s2, k| {
                let a = alpha();
                -(C::i() * (a - 1.0) * (s2 + a * s1)) / (two_pi() * a * k * s2.powi(3) * (s1 - s2))
            }),
        ],
        ExampleId::Two => vec![
            term(L, Five, 1, tr(L, 1), |s1, s2, _| {
                let a = alpha();
                (s1 - s2) * (s1 + a * s1 + a * s2) / (two_pi() * a * s1 * (s1 - a * s2) * (s1 + s2 + a * s2))
            }),
            term(L, Five, 2, tr(L, 2), |s1, s2, _| {
                let a = alpha();
                (s2 - s1) / (two_pi() * a * s1 * (s1 + s2 + a * s2))
            }),
            term(L, Five, 3, tr(R, 0), |s1, s2, _| {
                let a = alpha();
                -(3.0 * s1.powi(3)) / (two_pi() * s2 * (s1 - a * s2) * (s1 + s2 + a * s2))
            }),
            term(R, One, 1, tr(L, 0), |s1, s2, _| {
                let a = alpha();
                -(s2 * (s1 * s1 + s1 * s2 - s2 * s2))
                    / (two_pi() * s1 * s1 * (s1 * s1 + a * (1.0 + a) * s1 * s2 - s2 * s2))
            }),
            term(R, One, 2, tr(L, 1), |s1, s2, _| {
                let a = alpha();
                s2 * (s2 * (s1 + s2) + a * (s1 * s1 + s2 * s2))
                    / (two_pi() * a * s1 * s1 * (s1 * s1 + a * (1.0 + a) * s1 * s2 - s2 * s2))
            }),
            term(R, One, 3, tr(R, 2), |s1, s2, _| {
                let a = alpha();
                -(s1 * s1 + (1.0 + a) * s1 * s2 - a * s2 * s2)
                    / (two_pi() * a * s2 * (s1 * s1 + a * (1.0 + a) * s1 * s2 - s2 * s2))
            }),
            term(R, Three, 4, tr(L, 0), |s1, s2, _| {
                let a = alpha();
                s2 * (s1 * s1 + s1 * s2 - s2 * s2) / (two_pi() * s1 * s1 * (a * s1 * s1 * (1.0 + a) + s2 * (s1 + s2)))
            }),
            term(R, Three, 5, tr(L, 2), |s1, s2, _| {
                let a = alpha();
                s2 * (a * s1 * (s2 - s1) + s2 * (s1 + s2))
                    / (two_pi() * a * s1 * s1 * (a * s1 * s1 * (1.0 + a) + s2 * (s1 + s2)))
            }),
            term(R, Three, 6, tr(R, 1), |s1, s2, _| {
                let a = alpha();
                -((1.0 + a) * s1 * s1 + s1 * s2 + a * s2 * s2)
                    / (two_pi() * a * s2 * (a * s1 * s1 * (1.0 + a) + s2 * (s1 + s2)))
            }),
        ],
        ExampleId::Three => vec![
            term(L, Five, 1, tr(L, 1), |s1, s2, _| {
                let a = alpha();
                (s1 + a * s1 - s2) / (two_pi() * a * s1 * (s1 + s2))
            }),
            term(L, Five, 2, tr(L, 2), |s1, s2, _| {
                let a = alpha();
                (s2 + a * s2 - s1) / (two_pi() * a * s1 * (s1 + s2))
            }),
            term(L, Five, 3, tr(R, 1), |s1, s2, _| {
                let a = alpha();
                s1 * (2.0 + a) / (two_pi() * a * s2 * (s1 + s2))
            }),
            term(L, Five, 4, tr(R, 2), |s1, s2, _| {
                let a = alpha();
                -(s1 * (2.0 + a)) / (two_pi() * a * s2 * (s1 + s2))
            }),
            term(R, Five, 1, tr(L, 1), |s1, s2, _| {
                let a = alpha();
                -(s2 * (2.0 + a)) / (two_pi() * a * s1 * (s1 + s2))
            }),
            term(R, Five, 2, tr(L, 2), |s1, s2, _| {
                let a = alpha();
                s2 * (2.0 + a) / (two_pi() * a * s1 * (s1 + s2))
            }),
            term(R, Five, 3, tr(R, 1), |s1, s2, _| {
                let a = alpha();
                -(s2 + a * s2 - s1) / (two_pi() * a * s2 * (s1 + s2))
            }),
            term(R, Five, 4, tr(R, 2), |s1, s2, _| {
                let a = alpha();
                -(s1 + a * s1 - s2) / (two_pi() * a * s2 * (s1 + s2))
            }),
        ],
    }
}

/// Printed coefficient against the one the generic pipeline produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermDiscrepancy {
    pub label: String,
    pub target: Side,
    pub sector: SectorId,
    pub source: KernelSource,
    /// Coefficient evaluated at the probe point, zero when nothing is printed.
    pub printed: C,
    pub derived: C,
    pub probe: C,
    /// `|printed - derived| / |derived|`, maximized over probe points.
    pub relative: f64,
}

/// Which coefficients [`ExampleProblem::eval_with`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernels {
    /// The printed ones, verbatim.
    Printed,
    /// Printed ones, except flagged errata are replaced by the derived kernel
    /// and missing terms are added.
    Amended,
}

/// One example on a concrete medium with concrete data.
#[derive(Debug, Clone)]
pub struct ExampleProblem {
    id: ExampleId,
    spec: ProblemSpec,
    /// Canonical forcings for `q0_1(0) = 1` and for `q0_2(0) = 1`.
    unit_forcings: [Vec<f64>; 2],
}

impl ExampleProblem {
    pub fn new(
        id: ExampleId,
        medium: Medium,
        left: HalfLineProfile,
        right: HalfLineProfile,
        horizon: f64,
        settings: EvalSettings,
    ) -> Result<Self> {
        let (case, _) = medium.classify();
        if case.tag != id.case() || case.reflected {
            return Err(Error::SignCaseMismatch {
                id: id.number(),
                expected: id.case().name(),
                got: if case.reflected { "a reflected medium" } else { case.tag.name() },
            });
        }
        let spec = ProblemSpec::new(medium, &id.conditions(), left, right, horizon, settings)?;
        let unit = |q1: f64, q2: f64| -> Result<Vec<f64>> {
            let reduced = id
                .conditions()
                .iter()
                .map(|r| reduce_third_derivative(r, &medium, q1, q2))
                .collect::<Result<Vec<_>>>()?;
            let cset = CanonicalConditionSet::canonicalize(&reduced, case)?;
            Ok(cset.forcings().iter().map(|f| f.value(0.0)).collect())
        };
        let unit_forcings = [unit(1.0, 0.0)?, unit(0.0, 1.0)?];
        Ok(Self { id, spec, unit_forcings })
    }

    pub fn id(&self) -> ExampleId {
        self.id
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn sigmas(&self) -> (f64, f64) {
        let m = self.spec.medium();
        (m.sigma1(), m.sigma2())
    }

    fn path_sign(&self, target: Side) -> f64 {
        let (g1, g2) = gamma_paths(self.id.case(), self.spec.radius());
        let flag = if target == Side::Left { g1.sign } else { g2.sign };
        let side_sign = if target == Side::Left { 1.0 } else { -1.0 };
        side_sign * self.spec.medium().sigma(target).signum() * flag
    }

    /// Coefficient the generic pipeline attaches to `source` in the contour
    /// integrand of `target` over `dD_R^(sector)`.
    pub fn derived_kernel(&self, target: Side, sector: SectorId, source: KernelSource, k: C) -> Result<C> {
        let medium = self.spec.medium();
        let sys = RegionLinearSystem::validated(self.id.case(), sector, medium)?;
        let mut y = [C::new(0.0, 0.0); 6];
        match source {
            KernelSource::Transform { side, rotation } => {
                let row = sys.rows().iter().position(|r| {
                    *r == crate::global_system::RowDescriptor::GlobalRelation { side, rotation: rotation % 3 }
                });
                match row {
                    Some(r) => y[r] = C::new(-1.0, 0.0),
                    None => return Ok(C::new(0.0, 0.0)),
                }
            }
            KernelSource::PointValue { side } => {
                let omega = C::i() * k * k * k;
                let f = &self.unit_forcings[side.index() as usize - 1];
                for (slot, row) in y.iter_mut().zip(sys.rows()) {
                    if let crate::global_system::RowDescriptor::Condition(c) = row {
                        *slot = -f[*c] / omega;
                    }
                }
            }
        }
        let a = sys.matrix(medium, self.spec.conditions(), k);
        let w = solve_unknowns(&a, &y, k)?.side(target);
        let s = medium.sigma(target);
        let comb = w[2] * (s * s) + C::i() * k * s * w[1] - k * k * w[0];
        Ok(comb * self.path_sign(target) / (2.0 * PI))
    }

    fn probes(&self, sector: SectorId) -> [C; 3] {
        let r = self.spec.radius();
        let (lo, hi) = sector.angles();
        [
            C::from_polar(1.3 * r, 0.5 * (lo + hi)),
            C::from_polar(2.1 * r, lo + 0.2 * (hi - lo)),
            C::from_polar(3.7 * r, lo + 0.85 * (hi - lo)),
        ]
    }

    fn all_slots(&self) -> Vec<(Side, SectorId, KernelSource)> {
        let mut out = Vec::new();
        for target in Side::BOTH {
            for &sector in crate::contours::sectors_for(target, self.spec.medium().sigma(target)) {
                for side in Side::BOTH {
                    for rotation in 0..3 {
                        out.push((target, sector, tr(side, rotation)));
                    }
                    out.push((target, sector, pv(side)));
                }
            }
        }
        out
    }

    /// Every printed term whose coefficient differs from the derived one,
    /// plus every derived term with no printed counterpart.
    pub fn errata(&self) -> Result<Vec<TermDiscrepancy>> {
        let (s1, s2) = self.sigmas();
        let table = kernel_table(self.id);
        let mut out = Vec::new();
        for (target, sector, source) in self.all_slots() {
            let printed = table.iter().find(|t| t.target == target && t.sector == sector && t.source == source);
            let mut worst: Option<TermDiscrepancy> = None;
            for k in self.probes(sector) {
                let derived = self.derived_kernel(target, sector, source, k)?;
                let p = printed.map_or(C::new(0.0, 0.0), |t| t.coefficient(s1, s2, k));
                let scale = derived.norm().max(p.norm());
                if scale < 1e-14 {
                    continue;
                }
                let relative = (p - derived).norm() / derived.norm().max(1e-300);
                if worst.as_ref().is_none_or(|w| relative > w.relative) {
                    let label = printed.map_or_else(
                        || format!("q{} missing {:?} on dD_R^({})", target.index(), source, sector.number()),
                        KernelTerm::label,
                    );
                    worst = Some(TermDiscrepancy { label, target, sector, source, printed: p, derived, probe: k, relative });
                }
            }
            if let Some(w) = worst.filter(|w| w.relative > ERRATUM_TOL) {
                out.push(w);
            }
        }
        Ok(out)
    }

    /// The example solution from the printed kernels.
    pub fn eval(&self, x: f64, t: f64) -> Result<Estimate> {
        self.eval_with(x, t, Kernels::Printed)
    }

    pub fn eval_with(&self, x: f64, t: f64, kernels: Kernels) -> Result<Estimate> {
        let target = Side::of(x).ok_or_else(|| Error::InvalidQuery("x = 0 is two-valued".into()))?;
        if !(t > 0.0 && t <= self.spec.horizon()) {
            return Err(Error::InvalidQuery(format!("t = {t} outside (0, {}]", self.spec.horizon())));
        }
        let p = self.spec.profile(target);
        let settings = *self.spec.settings();
        let mut acc = if p.is_zero() {
            Estimate::ZERO
        } else {
            real_line_inversion(
                |k| p.transform_value(k),
                p.l1_norm(),
                p.radius(),
                self.spec.medium().sigma(target),
                (x, t, 0),
                &settings,
            )?
        };
        for (sector, source, coeff) in self.terms_for(target, kernels)? {
            acc = acc.add(self.integrate_term(target, sector, source, &*coeff, x, t)?);
        }
        Ok(acc)
    }

    /// Value of every printed term of the formula for `q` at `(x, t)`.
    pub fn term_values(&self, x: f64, t: f64) -> Result<Vec<(String, Estimate)>> {
        let target = Side::of(x).ok_or_else(|| Error::InvalidQuery("x = 0 is two-valued".into()))?;
        let (s1, s2) = self.sigmas();
        kernel_table(self.id)
            .into_iter()
            .filter(|t| t.target == target)
            .map(|term| {
                let c = move |k: C| term.coefficient(s1, s2, k);
                Ok((term.label(), self.integrate_term(target, term.sector, term.source, &c, x, t)?))
            })
            .collect()
    }

    #[allow(clippy::type_complexity)]
    fn terms_for(&self, target: Side, kernels: Kernels) -> Result<Vec<(SectorId, KernelSource, Box<dyn Fn(C) -> C + '_>)>> {
        let (s1, s2) = self.sigmas();
        let table = kernel_table(self.id);
        let errata = match kernels {
            Kernels::Printed => Vec::new(),
            Kernels::Amended => self.errata()?,
        };
        let mut out: Vec<(SectorId, KernelSource, Box<dyn Fn(C) -> C + '_>)> = Vec::new();
        for term in table.into_iter().filter(|t| t.target == target) {
            let flagged = errata.iter().any(|e| e.sector == term.sector && e.source == term.source);
            if flagged {
                let (sector, source) = (term.sector, term.source);
                out.push((
                    sector,
                    source,
                    Box::new(move |k| self.derived_kernel(target, sector, source, k).unwrap_or(C::new(f64::NAN, f64::NAN))),
                ));
            } else {
                out.push((term.sector, term.source, Box::new(move |k| term.coefficient(s1, s2, k))));
            }
        }
        for e in errata.iter().filter(|e| e.target == target && e.label.contains("missing")) {
            let (sector, source) = (e.sector, e.source);
            out.push((
                sector,
                source,
                Box::new(move |k| self.derived_kernel(target, sector, source, k).unwrap_or(C::new(f64::NAN, f64::NAN))),
            ));
        }
        Ok(out)
    }

    fn integrate_term(
        &self,
        target: Side,
        sector: SectorId,
        source: KernelSource,
        coeff: &dyn Fn(C) -> C,
        x: f64,
        t: f64,
    ) -> Result<Estimate> {
        let medium = self.spec.medium();
        let sigma = medium.sigma(target);
        let settings = self.spec.settings();
        let i = C::i();
        let base = ContourPath { components: vec![sector_boundary(sector, self.spec.radius())], sign: 1.0 };
        let lambda = x.abs() / sigma.abs()
            + Side::BOTH
                .iter()
                .map(|&s| self.spec.profile(s).radius() / medium.sigma(s).abs())
                .fold(0.0, f64::max);
        let outward = deform_with_knee(&base, settings.delta, t, (lambda / (3.0 * t)).sqrt())?;
        let q = QuadSettings { abs_tol: settings.tol / 8.0, max_panels: 20000, ..Default::default() };
        let guard = |v: C| if v.is_finite() { v } else { C::new(f64::NAN, f64::NAN) };
        // Kernels grow at most like |k|^2; that bound stands in where a
        // derived coefficient cannot be solved for at very large |k|.
        let log_coeff = |k: C| {
            let n = coeff(k).norm();
            if n.is_finite() {
                n.max(1e-300).ln()
            } else {
                2.0 * (1.0 + k.norm()).ln()
            }
        };
        let along = |path: &ContourPath, f: &dyn Fn(C) -> C, env: &dyn Fn(C) -> f64| -> Result<Estimate> {
            let mut acc = Estimate::ZERO;
            for (_, seg) in path.segments() {
                let part = integrate_segment(seg, &f, &env, &q)?;
                if part.value.is_nan() {
                    return Err(Error::NearSingularAtK { k: seg.point(0.0) });
                }
                acc = acc.add(part);
            }
            Ok(acc)
        };
        match source {
            KernelSource::Transform { side, rotation } => {
                let p = self.spec.profile(side);
                if p.is_zero() {
                    return Ok(Estimate::ZERO);
                }
                let s = medium.sigma(side);
                let rot = crate::alpha_pow(rotation);
                let f = |k: C| guard(coeff(k) * (i * k * x / sigma - i * k * k * k * t).exp() * p.transform_value(rot * k / s));
                let env = |k: C| {
                    let z = rot * k / s;
                    (i * k * x / sigma - i * k * k * k * t).re
                        + log_coeff(k)
                        + p.l1_norm().ln()
                        + p.radius() * z.im.abs()
                        + (1e3f64).ln()
                };
                along(&outward, &f, &env)
            }
            KernelSource::PointValue { side } => {
                let v = self.spec.profile(side).value_at_interface();
                if v == 0.0 {
                    return Ok(Estimate::ZERO);
                }
                // The exponential part decays on the outward path; the
                // constant part decays inside the sector.
                let f = |k: C| guard(coeff(k) * (i * k * x / sigma - i * k * k * k * t).exp() * v);
                let env = |k: C| {
                    (i * k * x / sigma - i * k * k * k * t).re + log_coeff(k) + v.abs().ln() + (1e3f64).ln()
                };
                let decaying = along(&outward, &f, &env)?;
                let inward = deform_inward(&base, PI / 13.0)?;
                let g = |k: C| guard(-coeff(k) * (i * k * x / sigma).exp() * v);
                let env_g = |k: C| (i * k * x / sigma).re + log_coeff(k) + v.abs().ln() + (1e3f64).ln();
                let constant = along(&inward, &g, &env_g)?;
                Ok(decaying.add(constant))
            }
        }
    }
}

/// Evaluates the printed formula of `id` at `(x, t)`.
pub fn example_eval(
    id: ExampleId,
    medium: Medium,
    left: HalfLineProfile,
    right: HalfLineProfile,
    x: f64,
    t: f64,
) -> Result<Estimate> {
    ExampleProblem::new(id, medium, left, right, t, EvalSettings::default())?.eval(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_algebra_in_the_tables() {
        let a = alpha();
        assert!((a * a - a.conj()).norm() < 1e-15);
        assert!((1.0 + a + a * a).norm() < 1e-15);
        for id in ExampleId::ALL {
            let table = kernel_table(id);
            // Every term sits on a sector that carries its target side.
            for t in &table {
                assert!(matches!(t.source, KernelSource::Transform { rotation, .. } if rotation < 3) || matches!(t.source, KernelSource::PointValue { .. }));
            }
            let n = table.iter().filter(|t| matches!(t.source, KernelSource::PointValue { .. })).count();
            assert_eq!(n > 0, id == ExampleId::One);
        }
    }

    #[test]
    fn sign_case_mismatch() {
        let m = Medium::new(1.0, 1.0).unwrap();
        let z = (HalfLineProfile::zero(Side::Left), HalfLineProfile::zero(Side::Right));
        let err = ExampleProblem::new(ExampleId::One, m, z.0, z.1, 1.0, EvalSettings::default()).unwrap_err();
        assert!(matches!(err, Error::SignCaseMismatch { id: 1, .. }));
    }

    #[test]
    fn zero_profiles_give_zero() {
        let m = Medium::new(1.0, -1.5).unwrap();
        let v = example_eval(ExampleId::Three, m, HalfLineProfile::zero(Side::Left), HalfLineProfile::zero(Side::Right), -0.5, 0.3)
            .unwrap();
        assert_eq!(v.value, C::new(0.0, 0.0));
    }
}
