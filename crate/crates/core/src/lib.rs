//! Unified transform solver for the linearized KdV equation
//! `q_t = sigma(x)^3 q_xxx` with a single interface at `x = 0`.

pub mod conditions;
pub mod contours;
pub mod criteria;
pub mod diagnostics;
pub mod error;
pub mod evaluator;
pub mod examples;
pub mod forcing;
pub mod global_system;
pub mod linalg;
pub mod medium;
pub mod moments;
pub mod oracles;
pub mod parallel;
pub mod quadrature;
pub mod spectral;

pub use error::{Decoupling, Error, Result};
pub use medium::{CaseTag, Medium, Side, SignCase};

use num_complex::Complex64;

/// The primitive cube root of unity `exp(2 pi i / 3)`.
pub fn alpha() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// `alpha^j` for `j` taken modulo 3, with exact real part.
pub fn alpha_pow(j: u8) -> Complex64 {
    let h = 0.75f64.sqrt();
    match j % 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(-0.5, h),
        _ => Complex64::new(-0.5, -h),
    }
}
