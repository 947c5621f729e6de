//! Interface forcings `f(t)` and their time transforms
//! `f~(omega, T) = int_0^T e^{omega s} f(s) ds`.
//!
//! The evaluator works with the damped form
//! `e^{-omega t} f~(omega, t) = int_0^t e^{-omega u} f(t - u) du`, which stays
//! bounded wherever `Re omega >= 0`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::unit_moments;
use crate::quadrature::{integrate, QuadSettings};

/// One entry of the forcing catalogue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingTerm {
    /// `value`.
    Const { value: f64 },
    /// `sum_n coeffs[n] t^n`.
    Poly { coeffs: Vec<f64> },
    /// `amplitude * exp(rate * t)`.
    Exp { amplitude: f64, rate: f64 },
}

type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A forcing: a sum of catalogue terms plus an optional arbitrary function
/// that is transformed by quadrature.
#[derive(Clone, Default)]
pub struct Forcing {
    terms: Vec<ForcingTerm>,
    custom: Vec<(f64, CustomFn)>,
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Forcing")
            .field("terms", &self.terms)
            .field("custom_terms", &self.custom.len())
            .finish()
    }
}

impl PartialEq for Forcing {
    fn eq(&self, other: &Self) -> bool {
        self.custom.is_empty() && other.custom.is_empty() && self.terms == other.terms
    }
}

impl From<ForcingTerm> for Forcing {
    fn from(t: ForcingTerm) -> Self {
        Forcing { terms: vec![t], custom: Vec::new() }
    }
}

fn binomial(n: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl ForcingTerm {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            ForcingTerm::Const { value } => *value,
            ForcingTerm::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            ForcingTerm::Exp { amplitude, rate } => amplitude * (rate * t).exp(),
        }
    }

    fn damped_transform(&self, omega: Complex64, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            ForcingTerm::Const { value } => {
                let j = unit_moments(-Complex64::i() * omega * t, 0);
                j[0] * (value * t)
            }
            ForcingTerm::Poly { coeffs } => {
                if coeffs.is_empty() {
                    return Complex64::new(0.0, 0.0);
                }
                let n = coeffs.len() - 1;
                // f(t - u) = sum_m b_m u^m.
                let b: Vec<f64> = (0..=n)
                    .map(|m| {
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        sign * (m..=n)
                            .map(|d| coeffs[d] * binomial(d, m) * t.powi((d - m) as i32))
                            .sum::<f64>()
                    })
                    .collect();
                let j = unit_moments(-Complex64::i() * omega * t, n);
                b.iter()
                    .zip(&j)
                    .enumerate()
                    .map(|(m, (bm, jm))| jm * (bm * t.powi(m as i32 + 1)))
                    .sum()
            }
            ForcingTerm::Exp { amplitude, rate } => {
                let j = unit_moments(-Complex64::i() * (omega + rate) * t, 0);
                j[0] * (amplitude * (rate * t).exp() * t)
            }
        }
    }

    /// `-e^{-omega t} Q(omega)`, the part of the damped transform that
    /// remembers `t = 0`; the remainder carries no exponential factor.
    fn decaying_part(&self, omega: Complex64, t: f64) -> Complex64 {
        let damping = (-omega * t).exp();
        match self {
            ForcingTerm::Const { value } => -damping * *value / omega,
            ForcingTerm::Poly { coeffs } => {
                // Repeated integration by parts: Q = sum_m (-1)^m f^(m)(0) / omega^(m+1).
                let mut q = Complex64::new(0.0, 0.0);
                let mut inv = 1.0 / omega;
                let mut factorial = 1.0;
                for (m, c) in coeffs.iter().enumerate() {
                    if m > 0 {
                        factorial *= m as f64;
                    }
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    q += inv * (sign * factorial * c);
                    inv /= omega;
                }
                -damping * q
            }
            ForcingTerm::Exp { amplitude, rate } => -damping * *amplitude / (omega + rate),
        }
    }

    /// `B` with `|Q(omega)| <= B / |omega|` once `|omega| >= max(1, 2|rate|)`.
    fn decay_bound(&self) -> f64 {
        match self {
            ForcingTerm::Const { value } => value.abs(),
            ForcingTerm::Poly { coeffs } => {
                let mut factorial = 1.0;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, c)| {
                        if m > 0 {
                            factorial *= m as f64;
                        }
                        factorial * c.abs()
                    })
                    .sum()
            }
            ForcingTerm::Exp { amplitude, .. } => 2.0 * amplitude.abs(),
        }
    }

    fn antiderivative(&self) -> Vec<ForcingTerm> {
        match self {
            ForcingTerm::Const { value } => vec![ForcingTerm::Poly { coeffs: vec![0.0, *value] }],
            ForcingTerm::Poly { coeffs } => {
                let mut out = vec![0.0];
                out.extend(coeffs.iter().enumerate().map(|(n, c)| c / (n + 1) as f64));
                vec![ForcingTerm::Poly { coeffs: out }]
            }
            ForcingTerm::Exp { amplitude, rate } => {
                if *rate == 0.0 {
                    vec![ForcingTerm::Poly { coeffs: vec![0.0, *amplitude] }]
                } else {
                    vec![
                        ForcingTerm::Exp { amplitude: amplitude / rate, rate: *rate },
                        ForcingTerm::Const { value: -amplitude / rate },
                    ]
                }
            }
        }
    }

    fn scaled(&self, s: f64) -> ForcingTerm {
        match self {
            ForcingTerm::Const { value } => ForcingTerm::Const { value: value * s },
            ForcingTerm::Poly { coeffs } => ForcingTerm::Poly { coeffs: coeffs.iter().map(|c| c * s).collect() },
            ForcingTerm::Exp { amplitude, rate } => ForcingTerm::Exp { amplitude: amplitude * s, rate: *rate },
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            ForcingTerm::Const { value } => *value == 0.0,
            ForcingTerm::Poly { coeffs } => coeffs.iter().all(|c| *c == 0.0),
            ForcingTerm::Exp { amplitude, .. } => *amplitude == 0.0,
        }
    }
}

impl Forcing {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        ForcingTerm::Const { value: c }.into()
    }

    pub fn from_terms(terms: Vec<ForcingTerm>) -> Self {
        Forcing { terms, custom: Vec::new() }
    }

    /// An arbitrary function, transformed by adaptive quadrature.
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Forcing { terms: Vec::new(), custom: vec![(1.0, Arc::new(f))] }
    }

    pub fn terms(&self) -> &[ForcingTerm] {
        &self.terms
    }

    pub fn has_custom(&self) -> bool {
        !self.custom.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(ForcingTerm::is_zero) && self.custom.iter().all(|(s, _)| *s == 0.0)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.value(t)).sum::<f64>()
            + self.custom.iter().map(|(s, f)| s * f(t)).sum::<f64>()
    }

    /// `int_0^t e^{-omega u} f(t - u) du`, equal to `e^{-omega t} f~(omega, t)`.
    pub fn damped_transform(&self, omega: Complex64, t: f64) -> Result<Complex64> {
        let mut acc: Complex64 = self.terms.iter().map(|term| term.damped_transform(omega, t)).sum();
        for (s, f) in &self.custom {
            let settings = QuadSettings { abs_tol: 1e-13, ..Default::default() };
            let r = integrate(|u| (-omega * u).exp() * f(t - u), 0.0, t, &settings)?;
            acc += r.value * *s;
        }
        Ok(acc)
    }

    /// The part of [`Self::damped_transform`] proportional to `e^{-omega t}`.
    ///
    /// The rest of the damped transform is analytic in `omega` away from
    /// `0` and `-rate`, decays like `1/omega`, and has no exponential factor.
    /// Its contribution to a contour integral over a sector where
    /// `e^{i k x / sigma}` decays therefore vanishes, which leaves this part
    /// as the only one the contour terms need. Quadrature-only forcings
    /// have no such split and are rejected.
    pub fn decaying_part(&self, omega: Complex64, t: f64) -> Result<Complex64> {
        if !self.custom.is_empty() {
            return Err(Error::UnsupportedCondition(
                "contour evaluation needs catalogue forcings (const, poly, exp)".into(),
            ));
        }
        if t == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.terms.iter().map(|term| term.decaying_part(omega, t)).sum())
    }

    /// Constant `B` with `|decaying_part| <= B |e^{-omega t}| / |omega|` for
    /// `|omega| >= max(1, pole_radius()^3)`.
    pub fn decay_bound(&self) -> f64 {
        self.terms.iter().map(ForcingTerm::decay_bound).sum()
    }

    /// Smallest `|k|` beyond which `omega = i k^3` stays away from every
    /// pole `-rate` of [`Self::decaying_part`] by at least half its size.
    pub fn pole_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| match t {
                ForcingTerm::Exp { rate, .. } => (2.0 * rate.abs()).cbrt(),
                _ => 0.0,
            })
            .fold(0.0, f64::max)
    }

    /// `f~(omega, T) = int_0^T e^{omega s} f(s) ds`.
    pub fn transform(&self, omega: Complex64, horizon: f64) -> Result<Complex64> {
        if self.custom.is_empty() {
            return Ok((omega * horizon).exp() * self.damped_transform(omega, horizon)?);
        }
        let mut acc: Complex64 = self
            .terms
            .iter()
            .map(|term| (omega * horizon).exp() * term.damped_transform(omega, horizon))
            .sum();
        for (s, f) in &self.custom {
            let settings = QuadSettings { abs_tol: 1e-13, ..Default::default() };
            let r = integrate(|u| (omega * u).exp() * f(u), 0.0, horizon, &settings)?;
            acc += r.value * *s;
        }
        Ok(acc)
    }

    /// `t -> int_0^t f(s) ds`, available for catalogue terms only.
    pub fn antiderivative(&self) -> Result<Forcing> {
        if !self.custom.is_empty() {
            return Err(Error::UnsupportedCondition(
                "cannot integrate a quadrature-only forcing in closed form".into(),
            ));
        }
        Ok(Forcing::from_terms(self.terms.iter().flat_map(ForcingTerm::antiderivative).collect()))
    }

    pub fn scaled(&self, s: f64) -> Forcing {
        Forcing {
            terms: self.terms.iter().map(|t| t.scaled(s)).collect(),
            custom: self.custom.iter().map(|(w, f)| (w * s, Arc::clone(f))).collect(),
        }
    }

    /// `sum_i w_i f_i`, dropping terms with zero weight.
    pub fn linear_combination<'a>(parts: impl IntoIterator<Item = (f64, &'a Forcing)>) -> Forcing {
        let mut out = Forcing::zero();
        for (w, f) in parts {
            if w == 0.0 {
                continue;
            }
            let s = f.scaled(w);
            out.terms.extend(s.terms.into_iter().filter(|t| !t.is_zero()));
            out.custom.extend(s.custom);
        }
        out
    }
}

/// `int_0^T e^{i k^3 s} f(s) ds`.
pub fn time_transform_forcing(f: &Forcing, k: Complex64, horizon: f64) -> Result<Complex64> {
    f.transform(Complex64::i() * k * k * k, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_forcing() {
        assert_eq!(time_transform_forcing(&Forcing::zero(), c(1.0, 0.3), 2.0).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn constant_closed_form() {
        let f = Forcing::constant(2.5);
        let k = c(0.8, 0.4);
        let w = Complex64::i() * k * k * k;
        let want = ((w * 1.5).exp() - 1.0) / w * 2.5;
        let got = time_transform_forcing(&f, k, 1.5).unwrap();
        assert!((got - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn small_k_limit() {
        let f = Forcing::constant(1.0);
        let got = time_transform_forcing(&f, c(1e-7, 0.0), 0.7).unwrap();
        assert!((got - c(0.7, 0.0)).norm() < 1e-14);
        assert_eq!(time_transform_forcing(&f, c(0.0, 0.0), 0.7).unwrap(), c(0.7, 0.0));
    }

    #[test]
    fn catalogue_matches_quadrature() {
        let terms = Forcing::from_terms(vec![
            ForcingTerm::Poly { coeffs: vec![0.5, -1.0, 0.25, 2.0] },
            ForcingTerm::Exp { amplitude: 1.5, rate: -0.7 },
            ForcingTerm::Const { value: 0.3 },
        ]);
        let g = terms.clone();
        let custom = Forcing::custom(move |t| g.value(t));
        for w in [c(0.0, 3.0), c(2.0, -5.0), c(-0.4, 0.1), c(30.0, 12.0)] {
            for t in [0.3, 1.7] {
                let a = terms.damped_transform(w, t).unwrap();
                let b = custom.damped_transform(w, t).unwrap();
                assert!((a - b).norm() < 1e-11 * (1.0 + b.norm()), "w={w} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn decaying_part_is_the_exponential_piece() {
        let f = Forcing::from_terms(vec![
            ForcingTerm::Poly { coeffs: vec![0.5, -1.0, 0.25, 2.0] },
            ForcingTerm::Exp { amplitude: 1.5, rate: -0.7 },
            ForcingTerm::Const { value: 0.3 },
        ]);
        // The remainder must not depend on where the exponential sits:
        // compare two omegas differing only by a shift that keeps the
        // remainder's closed form checkable through f at time t.
        let t = 0.9;
        for w in [c(0.0, 3.0), c(2.0, -5.0), c(30.0, 12.0)] {
            let full = f.damped_transform(w, t).unwrap();
            let rest = full - f.decaying_part(w, t).unwrap();
            // rest = sum_m (-1)^m f^(m)(t) / w^(m+1) for the poly and const
            // terms and a e^{rt} / (w + r) for the exponential.
            let p = [0.5 + 0.3, -1.0, 0.25, 2.0];
            let d = [
                p[0] + p[1] * t + p[2] * t * t + p[3] * t * t * t,
                p[1] + 2.0 * p[2] * t + 3.0 * p[3] * t * t,
                2.0 * p[2] + 6.0 * p[3] * t,
                6.0 * p[3],
            ];
            let mut want = 1.5 * (-0.7f64 * t).exp() / (w - 0.7);
            let mut inv = 1.0 / w;
            for (m, dm) in d.iter().enumerate() {
                want += inv * if m % 2 == 0 { *dm } else { -dm };
                inv /= w;
            }
            assert!((rest - want).norm() < 1e-12 * (1.0 + want.norm()), "w={w}: {rest} vs {want}");
            let bound = f.decay_bound() * (-w * t).exp().norm() / w.norm();
            assert!(f.decaying_part(w, t).unwrap().norm() <= bound);
        }
        assert!(Forcing::custom(|t| t).decaying_part(c(1.0, 1.0), 0.5).is_err());
    }

    #[test]
    fn antiderivative_of_catalogue() {
        let f = Forcing::from_terms(vec![
            ForcingTerm::Poly { coeffs: vec![1.0, 2.0] },
            ForcingTerm::Exp { amplitude: 2.0, rate: 0.5 },
        ]);
        let g = f.antiderivative().unwrap();
        let t: f64 = 0.8;
        let want = t + t * t + 4.0 * ((0.5 * t).exp() - 1.0);
        assert!((g.value(t) - want).abs() < 1e-14);
        assert!(Forcing::custom(|t| t).antiderivative().is_err());
    }
}
