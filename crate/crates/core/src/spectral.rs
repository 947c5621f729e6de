//! Initial data on one half-line and its half-line Fourier transform
//! `q0_hat(k) = int e^{-ikx} q0(x) dx` over the supporting half-line.
//!
//! Profiles are finite sums of polynomial pieces, so the transform is an
//! entire function of `k` evaluated in closed form through
//! [`crate::moments`]. A quadrature backend for arbitrary functions on a
//! bounded interval is available as well; it carries no guarantee that the
//! transform may be continued into the complex plane.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::{Medium, Side};
use crate::moments::interval_moments;
use crate::quadrature::{gauss_legendre, integrate, QuadSettings};

/// `sum_n coeffs[n] (x - origin)^n` on `[start, end]`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyPiece {
    pub start: f64,
    pub end: f64,
    #[serde(default)]
    pub origin: f64,
    pub coeffs: Vec<f64>,
}

impl PolyPiece {
    pub fn new(start: f64, end: f64, coeffs: Vec<f64>) -> Self {
        Self { start, end, origin: 0.0, coeffs }
    }

    pub fn with_origin(start: f64, end: f64, origin: f64, coeffs: Vec<f64>) -> Self {
        Self { start, end, origin, coeffs }
    }

    /// The bump `height * (1 - ((x - center)/width)^2)^power` on
    /// `[center - width, center + width]`.
    pub fn bump(center: f64, width: f64, height: f64, power: u32) -> Self {
        // Expand (1 - u^2/w^2)^p in powers of u = x - center.
        let p = power as usize;
        let mut coeffs = vec![0.0; 2 * p + 1];
        let mut binom = 1.0;
        for j in 0..=p {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[2 * j] = height * sign * binom / width.powi(2 * j as i32);
            binom = binom * (p - j) as f64 / (j + 1) as f64;
        }
        Self::with_origin(center - width, center + width, center, coeffs)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start && x <= self.end
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = x - self.origin;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// `n`-th derivative of the polynomial at `x`.
    pub fn derivative(&self, x: f64, n: usize) -> f64 {
        let u = x - self.origin;
        let mut acc = 0.0;
        for (m, c) in self.coeffs.iter().enumerate().skip(n).rev() {
            let falling: f64 = (m - n + 1..=m).map(|v| v as f64).product();
            acc = acc * u + c * falling;
        }
        acc
    }

    fn reflected(&self) -> PolyPiece {
        PolyPiece {
            start: -self.end,
            end: -self.start,
            origin: -self.origin,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n % 2 == 0 { *c } else { -c })
                .collect(),
        }
    }

    fn scaled(&self, s: f64) -> PolyPiece {
        PolyPiece {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    /// `int_start^end p(x) e^{-ikx} dx`.
    pub fn transform(&self, k: Complex64) -> Complex64 {
        if self.coeffs.is_empty() || self.start >= self.end {
            return Complex64::new(0.0, 0.0);
        }
        let lo = self.start - self.origin;
        let hi = self.end - self.origin;
        let local = if lo >= 0.0 {
            nonnegative_segment(&self.coeffs, k, lo, hi)
        } else if hi <= 0.0 {
            nonpositive_segment(&self.coeffs, k, lo, hi)
        } else {
            nonpositive_segment(&self.coeffs, k, lo, 0.0) + nonnegative_segment(&self.coeffs, k, 0.0, hi)
        };
        (-Complex64::i() * k * self.origin).exp() * local
    }
}

/// `int_lo^hi sum_n c_n u^n e^{-iku} du` for `0 <= lo < hi`.
fn nonnegative_segment(c: &[f64], k: Complex64, lo: f64, hi: f64) -> Complex64 {
    let n = c.len() - 1;
    // Shift u = lo + v; every binomial weight lo^(n-m) is nonnegative.
    let mut d = vec![0.0; n + 1];
    for (deg, &cn) in c.iter().enumerate() {
        if cn == 0.0 {
            continue;
        }
        let mut binom = 1.0;
        for m in (0..=deg).rev() {
            d[m] += cn * binom * lo.powi((deg - m) as i32);
            binom = binom * m as f64 / (deg - m + 1) as f64;
        }
    }
    let mom = interval_moments(k, hi - lo, n);
    let s: Complex64 = d.iter().zip(&mom).map(|(dm, jm)| jm * dm).sum();
    (-Complex64::i() * k * lo).exp() * s
}

/// Same as [`nonnegative_segment`] for `lo < hi <= 0`, via `u -> -u`.
fn nonpositive_segment(c: &[f64], k: Complex64, lo: f64, hi: f64) -> Complex64 {
    let flipped: Vec<f64> = c
        .iter()
        .enumerate()
        .map(|(n, v)| if n % 2 == 0 { *v } else { -v })
        .collect();
    nonnegative_segment(&flipped, -k, -hi, -lo)
}

type SampledFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Body {
    Pieces(Vec<PolyPiece>),
    Sampled { f: SampledFn, start: f64, end: f64 },
}

/// Initial datum on one half-line.
#[derive(Clone)]
pub struct HalfLineProfile {
    side: Side,
    body: Body,
}

impl fmt::Debug for HalfLineProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Pieces(p) => f
                .debug_struct("HalfLineProfile")
                .field("side", &self.side)
                .field("pieces", p)
                .finish(),
            Body::Sampled { start, end, .. } => f
                .debug_struct("HalfLineProfile")
                .field("side", &self.side)
                .field("sampled_on", &(start, end))
                .finish(),
        }
    }
}

/// A transform value together with where it was taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub value: Complex64,
    pub argument: Complex64,
    pub side: Side,
}

fn check_interval(side: Side, start: f64, end: f64) -> Result<()> {
    if !(start.is_finite() && end.is_finite()) || start > end {
        return Err(Error::InvalidProfile(format!("bad interval [{start}, {end}]")));
    }
    let ok = match side {
        Side::Left => end <= 0.0,
        Side::Right => start >= 0.0,
    };
    if !ok {
        return Err(Error::InvalidProfile(format!(
            "interval [{start}, {end}] leaves the {side:?} half-line"
        )));
    }
    Ok(())
}

impl HalfLineProfile {
    /// Sum of polynomial pieces; pieces may overlap, in which case they add.
    pub fn new(side: Side, pieces: Vec<PolyPiece>) -> Result<Self> {
        for p in &pieces {
            check_interval(side, p.start, p.end)?;
            if !p.origin.is_finite() || p.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidProfile("non-finite coefficient".into()));
            }
        }
        Ok(Self { side, body: Body::Pieces(pieces) })
    }

    pub fn zero(side: Side) -> Self {
        Self { side, body: Body::Pieces(Vec::new()) }
    }

    /// Indicator of `[start, end]`.
    pub fn unit_box(side: Side, start: f64, end: f64) -> Result<Self> {
        Self::new(side, vec![PolyPiece::new(start, end, vec![1.0])])
    }

    /// Arbitrary function on `[start, end]`, transformed by quadrature.
    pub fn sampled(
        side: Side,
        start: f64,
        end: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_interval(side, start, end)?;
        Ok(Self { side, body: Body::Sampled { f: Arc::new(f), start, end } })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn pieces(&self) -> Option<&[PolyPiece]> {
        match &self.body {
            Body::Pieces(p) => Some(p),
            Body::Sampled { .. } => None,
        }
    }

    /// False for the quadrature backend, whose transform is only trusted on
    /// the real axis.
    pub fn deformation_guaranteed(&self) -> bool {
        matches!(self.body, Body::Pieces(_))
    }

    pub fn is_zero(&self) -> bool {
        match &self.body {
            Body::Pieces(p) => p.iter().all(|q| q.coeffs.iter().all(|c| *c == 0.0) || q.start == q.end),
            Body::Sampled { .. } => false,
        }
    }

    /// Smallest interval containing the support.
    pub fn support(&self) -> Option<(f64, f64)> {
        match &self.body {
            Body::Pieces(p) => p
                .iter()
                .filter(|q| q.coeffs.iter().any(|c| *c != 0.0))
                .map(|q| (q.start, q.end))
                .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1))),
            Body::Sampled { start, end, .. } => Some((*start, *end)),
        }
    }

    /// Support radius `L = max |x|` over the support.
    pub fn radius(&self) -> f64 {
        self.support().map_or(0.0, |(a, b)| a.abs().max(b.abs()))
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.body {
            Body::Pieces(p) => p.iter().filter(|q| q.contains(x)).map(|q| q.eval(x)).sum(),
            Body::Sampled { f, start, end } => {
                if x >= *start && x <= *end {
                    f(x)
                } else {
                    0.0
                }
            }
        }
    }

    /// `n`-th derivative of the datum at `x` (pieces containing `x`).
    pub fn derivative(&self, x: f64, n: usize) -> f64 {
        match &self.body {
            Body::Pieces(p) => p.iter().filter(|q| q.contains(x)).map(|q| q.derivative(x, n)).sum(),
            Body::Sampled { .. } => f64::NAN,
        }
    }

    /// One-sided value at the interface, `q0(0-)` or `q0(0+)`.
    pub fn value_at_interface(&self) -> f64 {
        self.value(0.0)
    }

    /// `int |q0| dx`.
    pub fn l1_norm(&self) -> f64 {
        let settings = QuadSettings { abs_tol: 1e-14, ..Default::default() };
        let abs_int = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
            integrate(|x| Complex64::new(f(x).abs(), 0.0), a, b, &settings)
                .map(|r| r.value.re)
                .unwrap_or_else(|_| {
                    // Fall back to a fine fixed rule; the result is only used as a bound.
                    let n = 2000;
                    let h = (b - a) / n as f64;
                    (0..n).map(|i| f(a + h * (i as f64 + 0.5)).abs() * h).sum()
                })
        };
        match &self.body {
            Body::Pieces(p) => p
                .iter()
                .filter(|q| q.start < q.end)
                .map(|q| abs_int(&|x| q.eval(x), q.start, q.end))
                .sum(),
            Body::Sampled { f, start, end } => abs_int(&|x| f(x), *start, *end),
        }
    }

    /// Upper bound for `ln |q0_hat(k)|` from `|e^{-ikx}| = e^{x Im k}` on the
    /// support; `-inf` for the zero profile.
    pub fn log_growth_bound(&self, k: Complex64, l1: f64) -> f64 {
        match self.support() {
            None => f64::NEG_INFINITY,
            Some(_) if l1 == 0.0 => f64::NEG_INFINITY,
            Some((a, b)) => l1.ln() + (a * k.im).max(b * k.im),
        }
    }

    /// Half-line Fourier transform at `k`.
    pub fn transform(&self, k: Complex64) -> TransformValue {
        TransformValue { value: self.transform_value(k), argument: k, side: self.side }
    }

    pub fn transform_value(&self, k: Complex64) -> Complex64 {
        match &self.body {
            Body::Pieces(p) => p.iter().map(|q| q.transform(k)).sum(),
            Body::Sampled { f, start, end } => sampled_transform(f.as_ref(), *start, *end, k),
        }
    }

    /// Transform at `alpha^j k / sigma_side`.
    pub fn rotated_transform(&self, medium: &Medium, j: u8, k: Complex64) -> TransformValue {
        let z = crate::alpha_pow(j) * k / medium.sigma(self.side);
        self.transform(z)
    }

    /// Image of the profile under `x -> -x` (it moves to the other side).
    pub fn reflected(&self) -> HalfLineProfile {
        match &self.body {
            Body::Pieces(p) => HalfLineProfile {
                side: self.side.other(),
                body: Body::Pieces(p.iter().map(PolyPiece::reflected).collect()),
            },
            Body::Sampled { f, start, end } => {
                let g = Arc::clone(f);
                HalfLineProfile {
                    side: self.side.other(),
                    body: Body::Sampled { f: Arc::new(move |x| g(-x)), start: -end, end: -start },
                }
            }
        }
    }

    /// `a * self + b * other` for two piecewise profiles on the same side.
    pub fn linear_combination(a: f64, p: &HalfLineProfile, b: f64, q: &HalfLineProfile) -> Result<Self> {
        match (&p.body, &q.body) {
            (Body::Pieces(x), Body::Pieces(y)) if p.side == q.side => {
                let pieces = x.iter().map(|v| v.scaled(a)).chain(y.iter().map(|v| v.scaled(b))).collect();
                Ok(HalfLineProfile { side: p.side, body: Body::Pieces(pieces) })
            }
            _ => Err(Error::InvalidProfile("linear combination needs piecewise profiles on one side".into())),
        }
    }
}

fn sampled_transform(f: &(dyn Fn(f64) -> f64 + Send + Sync), a: f64, b: f64, k: Complex64) -> Complex64 {
    let (x, w) = gauss_legendre(16);
    let panels = ((k.norm() * (b - a)) / 4.0).ceil() as usize + 8;
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (xi, wi) in x.iter().zip(&w) {
            let y = lo + 0.5 * h * (1.0 + xi);
            acc += (-Complex64::i() * k * y).exp() * (f(y) * wi * 0.5 * h);
        }
    }
    acc
}

/// Transform over the whole line of a left and a right profile.
pub fn whole_line_transform(left: &HalfLineProfile, right: &HalfLineProfile, k: Complex64) -> Complex64 {
    left.transform_value(k) + right.transform_value(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_box_closed_form() {
        let p = HalfLineProfile::unit_box(Side::Left, -1.0, 0.0).unwrap();
        for k in [c(1.0, 0.0), c(-3.0, 0.5), c(0.2, -2.0), c(40.0, 1.0)] {
            let want = ((Complex64::i() * k).exp() - 1.0) / (Complex64::i() * k);
            assert!((p.transform_value(k) - want).norm() < 1e-14 * (1.0 + want.norm()));
        }
        assert!((p.transform_value(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_profile() {
        let p = HalfLineProfile::zero(Side::Right);
        assert_eq!(p.transform_value(c(2.0, 1.0)), c(0.0, 0.0));
        assert!(p.is_zero());
        assert_eq!(p.radius(), 0.0);
    }

    #[test]
    fn rotated_examples() {
        let m = Medium::new(1.0, 1.0).unwrap();
        let p = HalfLineProfile::unit_box(Side::Left, -1.0, 0.0).unwrap();
        let k = c(0.7, 0.2);
        assert_eq!(p.rotated_transform(&m, 0, k).value, p.transform_value(k));
        let a = crate::alpha_pow(1);
        let want = ((Complex64::i() * a).exp() - 1.0) / (Complex64::i() * a);
        assert!((p.rotated_transform(&m, 1, c(1.0, 0.0)).value - want).norm() < 1e-14);
        let z = crate::alpha_pow(1) * crate::alpha_pow(1) * crate::alpha_pow(1) * k;
        assert!((p.transform_value(z) - p.transform_value(k)).norm() < 1e-13);
    }

    #[test]
    fn side_validation() {
        assert!(HalfLineProfile::unit_box(Side::Left, -1.0, 0.5).is_err());
        assert!(HalfLineProfile::unit_box(Side::Right, -0.1, 0.5).is_err());
        assert!(HalfLineProfile::unit_box(Side::Right, 0.0, 0.5).is_ok());
    }

    #[test]
    fn bump_and_derivatives() {
        let b = PolyPiece::bump(-1.5, 1.0, 2.0, 3);
        assert!((b.eval(-1.5) - 2.0).abs() < 1e-15);
        assert!(b.eval(-0.5).abs() < 1e-14);
        let x: f64 = -1.2;
        let u: f64 = x + 1.5;
        let want = 2.0 * 3.0 * (1.0 - u * u).powi(2) * (-2.0 * u);
        assert!((b.derivative(x, 1) - want).abs() < 1e-13);
    }

    #[test]
    fn reflection_maps_transform() {
        let p = HalfLineProfile::new(
            Side::Left,
            vec![PolyPiece::new(-2.0, -0.5, vec![1.0, 0.5, -0.25]), PolyPiece::bump(-1.0, 0.7, 1.0, 4)],
        )
        .unwrap();
        let r = p.reflected();
        assert_eq!(r.side(), Side::Right);
        for k in [c(0.3, 0.0), c(-2.0, 1.5), c(5.0, -0.7)] {
            assert!((r.transform_value(k) - p.transform_value(-k)).norm() < 1e-12);
        }
        assert!((r.value(1.0) - p.value(-1.0)).abs() < 1e-14);
    }

    #[test]
    fn sampled_backend_matches_closed_form() {
        let piece = PolyPiece::bump(1.0, 0.8, 1.0, 4);
        let exact = HalfLineProfile::new(Side::Right, vec![piece.clone()]).unwrap();
        let sampled = HalfLineProfile::sampled(Side::Right, 0.2, 1.8, move |x| piece.eval(x)).unwrap();
        assert!(!sampled.deformation_guaranteed());
        for k in [c(0.0, 0.0), c(3.0, 0.0), c(-11.0, 0.0)] {
            assert!((exact.transform_value(k) - sampled.transform_value(k)).norm() < 1e-12);
        }
    }
}
