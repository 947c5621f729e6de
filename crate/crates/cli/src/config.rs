//! The JSON run configuration.

use std::path::PathBuf;

use lkdv_core::conditions::RawCondition;
use lkdv_core::evaluator::{EvalSettings, ProblemSpec};
use lkdv_core::forcing::{Forcing, ForcingTerm};
use lkdv_core::spectral::{HalfLineProfile, PolyPiece};
use lkdv_core::{Error, Medium, Result, Side};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub medium: MediumConfig,
    pub conditions: Vec<ConditionConfig>,
    #[serde(default)]
    pub profiles: ProfilesConfig,
    pub horizon: f64,
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub sigma1: f64,
    pub sigma2: f64,
}

/// `sum_n left[n] d^n q1(0,t) + sum_n right[n] d^n q2(0,t) = forcing(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionConfig {
    pub left: [f64; 4],
    pub right: [f64; 4],
    #[serde(default)]
    pub forcing: Vec<ForcingTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub center: f64,
    pub width: f64,
    pub height: f64,
    pub power: u32,
}

/// A polynomial piece, or a compactly supported bump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PieceConfig {
    Bump { bump: BumpConfig },
    Poly(PolyPiece),
}

impl PieceConfig {
    fn piece(&self) -> PolyPiece {
        match self {
            PieceConfig::Bump { bump: b } => PolyPiece::bump(b.center, b.width, b.height, b.power),
            PieceConfig::Poly(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesConfig {
    #[serde(default)]
    pub left: Vec<PieceConfig>,
    #[serde(default)]
    pub right: Vec<PieceConfig>,
}

/// Either explicit values or `count` evenly spaced values from `start` to
/// `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Values(v) => v.clone(),
            Axis::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub xs: Axis,
    pub ts: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    WholeLine,
    Fd,
}

fn default_compare_tol() -> f64 {
    1e-6
}

fn default_half_width() -> f64 {
    10.0
}

fn default_h0() -> f64 {
    0.01
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub kind: OracleKind,
    /// Pass threshold on the max-norm discrepancy.
    #[serde(default = "default_compare_tol")]
    pub tolerance: f64,
    /// Finite-difference domain is `[-half_width, half_width]`.
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    /// Coarsest finite-difference step.
    #[serde(default = "default_h0")]
    pub h0: f64,
}

impl OracleConfig {
    pub fn of_kind(kind: OracleKind) -> Self {
        Self { kind, tolerance: default_compare_tol(), half_width: default_half_width(), h0: default_h0() }
    }
}

fn config_error(key: &str, message: impl Into<String>) -> Error {
    Error::Config { key: key.into(), message: message.into() }
}

impl RunConfig {
    /// Parses and validates; errors name the offending key.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            config_error(if path.is_empty() { "." } else { &path }, e.inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config_error(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return Err(config_error("horizon", "must be finite and nonnegative"));
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(config_error("tol", "must be positive"));
            }
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < std::f64::consts::PI / 12.0) {
                return Err(config_error("delta", "must lie in (0, pi/12)"));
            }
        }
        for (name, axis) in [("grid.xs", &self.grid.xs), ("grid.ts", &self.grid.ts)] {
            let v = axis.values();
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return Err(config_error(name, "needs at least one finite value"));
            }
        }
        if self.grid.ts.values().iter().any(|t| *t < 0.0 || *t > self.horizon) {
            return Err(config_error("grid.ts", "times must lie in [0, horizon]"));
        }
        if self.grid.xs.values().contains(&0.0) {
            return Err(config_error("grid.xs", "x = 0 is the interface; sample one-sided points instead"));
        }
        if let Some(o) = &self.oracle {
            if !(o.tolerance > 0.0 && o.half_width > 0.0 && o.h0 > 0.0) {
                return Err(config_error("oracle", "tolerance, half_width and h0 must be positive"));
            }
        }
        Ok(())
    }

    pub fn medium(&self) -> Result<Medium> {
        Medium::new(self.medium.sigma1, self.medium.sigma2)
    }

    pub fn raw_conditions(&self) -> Result<Vec<RawCondition>> {
        self.conditions
            .iter()
            .map(|c| RawCondition::new(c.left, c.right, Forcing::from_terms(c.forcing.clone())))
            .collect()
    }

    pub fn profile(&self, side: Side) -> Result<HalfLineProfile> {
        let pieces = match side {
            Side::Left => &self.profiles.left,
            Side::Right => &self.profiles.right,
        };
        HalfLineProfile::new(side, pieces.iter().map(PieceConfig::piece).collect())
    }

    pub fn settings(&self) -> EvalSettings {
        let d = EvalSettings::default();
        EvalSettings { tol: self.tol.unwrap_or(d.tol), delta: self.delta.unwrap_or(d.delta), ..d }
    }

    pub fn problem(&self) -> Result<ProblemSpec> {
        ProblemSpec::new(
            self.medium()?,
            &self.raw_conditions()?,
            self.profile(Side::Left)?,
            self.profile(Side::Right)?,
            self.horizon,
            self.settings(),
        )
    }
}
