//! Piecewise-constant dispersion medium `q_t = sigma(x)^3 q_xxx`.
//!
//! The medium stores the cube roots `sigma1` (for `x < 0`) and `sigma2`
//! (for `x > 0`). The physical coefficients are their cubes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two half-lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `x < 0`, side index 1.
    Left,
    /// `x > 0`, side index 2.
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    /// Conventional index: 1 for the left half-line, 2 for the right.
    pub fn index(self) -> u8 {
        match self {
            Side::Left => 1,
            Side::Right => 2,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// The side a nonzero `x` lies on.
    pub fn of(x: f64) -> Option<Side> {
        if x < 0.0 {
            Some(Side::Left)
        } else if x > 0.0 {
            Some(Side::Right)
        } else {
            None
        }
    }
}

/// How numbers handed to [`Medium::with_parametrization`] are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parametrization {
    /// The values are the cube roots `sigma_j`.
    CubeRoot,
    /// The values are the physical coefficients `sigma_j^3`.
    Coefficient,
}

/// The pair `(sigma1, sigma2)` of nonzero cube roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    sigma1: f64,
    sigma2: f64,
}

/// Sign-case tag of a medium after the optional reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// `sigma1 > 0`, `sigma2 < 0`.
    PosNeg,
    /// `sigma1 > 0`, `sigma2 > 0`.
    PosPos,
    /// `sigma1 < 0`, `sigma2 > 0`.
    NegPos,
}

impl CaseTag {
    pub const ALL: [CaseTag; 3] = [CaseTag::PosNeg, CaseTag::PosPos, CaseTag::NegPos];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::PosNeg => "PosNeg",
            CaseTag::PosPos => "PosPos",
            CaseTag::NegPos => "NegPos",
        }
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of classifying a medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignCase {
    pub tag: CaseTag,
    /// True when the input had both roots negative and was mapped by `x -> -x`.
    pub reflected: bool,
}

impl Medium {
    /// Builds a medium from the cube roots.
    pub fn new(sigma1: f64, sigma2: f64) -> Result<Self> {
        for (side, value) in [(1u8, sigma1), (2u8, sigma2)] {
            if value == 0.0 || !value.is_finite() {
                return Err(Error::DegenerateMedium { side, value });
            }
        }
        Ok(Self { sigma1, sigma2 })
    }

    /// Builds a medium from the physical coefficients `sigma_j^3`.
    pub fn from_coefficients(c1: f64, c2: f64) -> Result<Self> {
        Self::new(c1.cbrt(), c2.cbrt())
    }

    pub fn with_parametrization(a: f64, b: f64, how: Parametrization) -> Result<Self> {
        match how {
            Parametrization::CubeRoot => Self::new(a, b),
            Parametrization::Coefficient => Self::from_coefficients(a, b),
        }
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn sigma(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.sigma1,
            Side::Right => self.sigma2,
        }
    }

    /// Physical coefficient `sigma_j^3`.
    pub fn coefficient(&self, side: Side) -> f64 {
        self.sigma(side).powi(3)
    }

    /// Dispersion relation `omega_j(k) = i sigma_j^3 k^3`.
    pub fn dispersion(&self, side: Side, k: Complex64) -> Complex64 {
        Complex64::i() * self.coefficient(side) * k * k * k
    }

    /// Phase velocity `sigma_j^3 k^2` of a real wavenumber.
    pub fn phase_velocity(&self, side: Side, k: f64) -> f64 {
        self.coefficient(side) * k * k
    }

    /// Medium seen after the substitution `x -> -x`.
    pub fn reflected(&self) -> Medium {
        Medium {
            sigma1: -self.sigma2,
            sigma2: -self.sigma1,
        }
    }

    /// Sign case together with the medium the solver actually works with.
    pub fn classify(&self) -> (SignCase, Medium) {
        let (p1, p2) = (self.sigma1 > 0.0, self.sigma2 > 0.0);
        match (p1, p2) {
            (true, false) => (SignCase { tag: CaseTag::PosNeg, reflected: false }, *self),
            (true, true) => (SignCase { tag: CaseTag::PosPos, reflected: false }, *self),
            (false, true) => (SignCase { tag: CaseTag::NegPos, reflected: false }, *self),
            (false, false) => (
                SignCase { tag: CaseTag::PosPos, reflected: true },
                self.reflected(),
            ),
        }
    }

    /// `max |sigma_j|^3` over both sides.
    pub fn max_coefficient(&self) -> f64 {
        self.sigma1.abs().max(self.sigma2.abs()).powi(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha;

    #[test]
    fn dispersion_examples() {
        let m = Medium::new(1.0, 2.0).unwrap();
        assert_eq!(m.dispersion(Side::Left, Complex64::new(1.0, 0.0)), Complex64::i());
        assert_eq!(m.dispersion(Side::Right, Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        let n = Medium::new(-1.0, 1.0).unwrap();
        assert_eq!(n.dispersion(Side::Left, Complex64::new(1.0, 0.0)), -Complex64::i());
    }

    #[test]
    fn phase_velocity_examples() {
        let m = Medium::new(1.0, -1.0).unwrap();
        assert_eq!(m.phase_velocity(Side::Left, 2.0), 4.0);
        assert_eq!(m.phase_velocity(Side::Left, 0.0), 0.0);
        assert_eq!(m.phase_velocity(Side::Right, 1.0), -1.0);
    }

    #[test]
    fn classification() {
        let (c, _) = Medium::new(1.0, -1.0).unwrap().classify();
        assert_eq!(c.tag, CaseTag::PosNeg);
        assert!(!c.reflected);
        let (c, m) = Medium::new(-2.0, -3.0).unwrap().classify();
        assert_eq!(c, SignCase { tag: CaseTag::PosPos, reflected: true });
        assert_eq!((m.sigma1(), m.sigma2()), (3.0, 2.0));
        let (c, _) = Medium::new(-1.0, 1.0).unwrap().classify();
        assert_eq!(c.tag, CaseTag::NegPos);
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(Medium::new(0.0, 1.0), Err(Error::DegenerateMedium { side: 1, .. })));
        assert!(matches!(Medium::new(1.0, f64::NAN), Err(Error::DegenerateMedium { side: 2, .. })));
    }

    #[test]
    fn coefficient_constructor() {
        let m = Medium::from_coefficients(8.0, -27.0).unwrap();
        assert!((m.sigma1() - 2.0).abs() < 1e-15);
        assert!((m.sigma2() + 3.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_invariance() {
        let m = Medium::new(1.3, -0.7).unwrap();
        let k = Complex64::new(0.4, -1.1);
        for side in Side::BOTH {
            let a = m.dispersion(side, k);
            let b = m.dispersion(side, alpha() * k);
            assert!((a - b).norm() < 1e-14 * a.norm());
        }
    }
}
