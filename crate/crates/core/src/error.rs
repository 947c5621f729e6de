//! Error type shared by every module of the solver.

use num_complex::Complex64;
use thiserror::Error;

use crate::medium::Side;

/// Every failure the library can report.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degenerate medium: sigma{side} must be nonzero and finite (got {value})")]
    DegenerateMedium { side: u8, value: f64 },

    #[error("wrong number of interface conditions: {case} requires {expected}, got {got}")]
    WrongConditionCount {
        case: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("interface conditions decouple: {0}")]
    DecoupledProblem(Decoupling),

    #[error("canonicalization failed: {0}")]
    CanonicalizationFailure(String),

    #[error("unsupported interface condition: {0}")]
    UnsupportedCondition(String),

    #[error("rank deficient: det A(k) vanishes identically in region {region}")]
    SingularSystem { region: u8 },

    #[error("linear system nearly singular at k = {k}")]
    NearSingularAtK { k: Complex64 },

    #[error("row {row} is not valid on region {region}: {reason}")]
    RegionValidityViolation {
        region: u8,
        row: usize,
        reason: String,
    },

    #[error("k = 0 has no sector")]
    OriginUndefined,

    #[error("invalid contour deformation: {0}")]
    InvalidDeformation(String),

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds target {target:e}")]
    QuadratureNonConvergence { estimate: f64, target: f64 },

    #[error("query outside the admissible range: {0}")]
    InvalidQuery(String),

    #[error("invalid initial profile: {0}")]
    InvalidProfile(String),

    #[error("example {id} requires {expected}, medium is {got}")]
    SignCaseMismatch {
        id: u8,
        expected: &'static str,
        got: &'static str,
    },

    #[error("finite-difference interface block is singular")]
    ConstraintSingular,

    #[error("finite-difference solution grew by more than {factor:e}")]
    InstabilityDetected { factor: f64 },

    #[error("finite-difference domain too small: outer-layer magnitude {magnitude:e}")]
    DomainTruncation { magnitude: f64 },

    #[error("fields are sampled on different grids: {0}")]
    GridMismatch(String),

    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),

    #[error("configuration error at `{key}`: {message}")]
    Config { key: String, message: String },
}

/// Which half-line problem separates when the conditions decouple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoupling {
    /// The problem on `x < 0` can be solved on its own first.
    LeftFirst,
    /// The problem on `x > 0` can be solved on its own first.
    RightFirst,
}

impl Decoupling {
    /// Side whose boundary-value problem is solved first.
    pub fn separable_side(self) -> Side {
        match self {
            Decoupling::LeftFirst => Side::Left,
            Decoupling::RightFirst => Side::Right,
        }
    }
}

impl std::fmt::Display for Decoupling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Decoupling::LeftFirst => write!(f, "left-first (the x<0 problem separates)"),
            Decoupling::RightFirst => write!(f, "right-first (the x>0 problem separates)"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
