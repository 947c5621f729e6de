//! Free propagation on the whole line, the reference for a homogeneous
//! medium with continuity of the solution and its first two derivatives.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evaluator::{real_line_inversion, EvalSettings, Estimate};
use crate::medium::Side;
use crate::spectral::{whole_line_transform, HalfLineProfile};

/// `q(x, t)` for `q_t = sigma^3 q_xxx` on the line, with the initial datum
/// given as a left and a right piece.
#[derive(Debug, Clone)]
pub struct WholeLineOracle {
    left: HalfLineProfile,
    right: HalfLineProfile,
    sigma: f64,
    settings: EvalSettings,
}

impl WholeLineOracle {
    pub fn new(left: HalfLineProfile, right: HalfLineProfile, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma != 0.0) {
            return Err(Error::DegenerateMedium { side: 1, value: sigma });
        }
        if left.side() != Side::Left || right.side() != Side::Right {
            return Err(Error::InvalidProfile("profiles must be given as (left, right)".into()));
        }
        if left.pieces().is_none() || right.pieces().is_none() {
            return Err(Error::OracleUnavailable("whole-line oracle needs piecewise-polynomial data".into()));
        }
        Ok(Self { left, right, sigma, settings: EvalSettings::default() })
    }

    pub fn with_settings(mut self, settings: EvalSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `x`-derivative of order `n` at a point off the interface.
    pub fn derivative(&self, x: f64, t: f64, n: u32) -> Result<Estimate> {
        if t < 0.0 {
            return Err(Error::InvalidQuery(format!("t = {t} is negative")));
        }
        if t == 0.0 {
            let side = Side::of(x).ok_or_else(|| Error::InvalidQuery("x = 0 is two-valued at t = 0".into()))?;
            let p = if side == Side::Left { &self.left } else { &self.right };
            return Ok(Estimate { value: Complex64::new(p.derivative(x, n as usize), 0.0), error: 0.0 });
        }
        let l1 = self.left.l1_norm() + self.right.l1_norm();
        let support = self.left.radius().max(self.right.radius());
        real_line_inversion(
            |k| whole_line_transform(&self.left, &self.right, k),
            l1,
            support,
            self.sigma,
            (x, t, n),
            &self.settings,
        )
    }

    pub fn solution(&self, x: f64, t: f64) -> Result<Estimate> {
        self.derivative(x, t, 0)
    }

    /// Total mass of the datum, which the flow conserves.
    pub fn mass(&self) -> f64 {
        (self.left.transform_value(Complex64::new(0.0, 0.0)) + self.right.transform_value(Complex64::new(0.0, 0.0))).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_mass_and_initial_values() {
        let left = HalfLineProfile::unit_box(Side::Left, -1.0, 0.0).unwrap();
        let o = WholeLineOracle::new(left, HalfLineProfile::zero(Side::Right), 1.0).unwrap();
        assert!((o.mass() - 1.0).abs() < 1e-14);
        assert_eq!(o.solution(-0.5, 0.0).unwrap().value.re, 1.0);
        assert_eq!(o.solution(0.5, 0.0).unwrap().value.re, 0.0);
    }

    #[test]
    fn gaussian_like_bump_stays_real() {
        let p = crate::spectral::PolyPiece::bump(-1.0, 1.0, 1.0, 4);
        let left = HalfLineProfile::new(Side::Left, vec![p]).unwrap();
        let o = WholeLineOracle::new(left, HalfLineProfile::zero(Side::Right), -0.8).unwrap();
        let v = o.solution(0.3, 0.4).unwrap();
        assert!(v.value.im.abs() < 1e-9, "{v:?}");
    }
}
