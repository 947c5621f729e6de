//! Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands of
//! a real parameter, plus Gauss-Legendre rules for fixed-order work.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Estimated absolute error, including a round-off floor.
    pub error: f64,
    /// Approximation of the integral of `|f|`.
    pub abs_integral: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub const ZERO: QuadResult = QuadResult {
        value: Complex64 { re: 0.0, im: 0.0 },
        error: 0.0,
        abs_integral: 0.0,
        evaluations: 0,
    };

    /// Combines the results of two integrals that are added together.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error: self.error + other.error,
            abs_integral: self.abs_integral + other.abs_integral,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(self, s: Complex64) -> QuadResult {
        QuadResult {
            value: self.value * s,
            error: self.error * s.norm(),
            abs_integral: self.abs_integral * s.norm(),
            evaluations: self.evaluations,
        }
    }
}

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 0.0,
            max_panels: 4000,
            initial_panels: 4,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    abs_integral: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    let mut vals = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    for (j, v) in vals.iter_mut().enumerate() {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        *v = (f1, f2);
    }
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for (j, (f1, f2)) in vals.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let hab = h.abs();
    let value = kron * h;
    let resasc = asc * hab;
    let abs_integral = abs * hab;
    let diff = ((kron - gauss) * h).norm();
    let mut error = diff;
    if resasc > 0.0 && diff > 0.0 {
        error = resasc * (200.0 * diff / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_integral;
    Panel {
        a,
        b,
        value,
        error: error.max(floor),
        abs_integral,
    }
}

/// Integrates `f` over `[a, b]` until the summed error estimate is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::ZERO);
    }
    let n0 = settings.initial_panels.max(1);
    let mut heap = BinaryHeap::with_capacity(settings.max_panels + 2);
    let step = (b - a) / n0 as f64;
    for i in 0..n0 {
        let lo = a + step * i as f64;
        let hi = if i + 1 == n0 { b } else { lo + step };
        heap.push(gk15(&f, lo, hi));
    }
    let mut evaluations = 15 * n0;
    loop {
        let (value, error, abs_integral) = heap.iter().fold(
            (Complex64::new(0.0, 0.0), 0.0, 0.0),
            |(v, e, s), p| (v + p.value, e + p.error, s + p.abs_integral),
        );
        let target = settings.abs_tol.max(settings.rel_tol * value.norm());
        let floor = 50.0 * f64::EPSILON * abs_integral;
        if error <= target || error <= 2.0 * floor {
            return Ok(QuadResult {
                value,
                error,
                abs_integral,
                evaluations,
            });
        }
        if heap.len() >= settings.max_panels {
            return Err(Error::QuadratureNonConvergence {
                estimate: error,
                target,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // The panel cannot be split further in floating point.
            return Err(Error::QuadratureNonConvergence {
                estimate: error,
                target,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
        evaluations += 30;
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| Complex64::new(x * x * x, x), 0.0, 2.0, &QuadSettings::default())
            .unwrap();
        assert!((r.value - Complex64::new(4.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn oscillatory_exponential() {
        let k = 40.0;
        let r = integrate(
            |x| Complex64::new(0.0, k * x).exp(),
            0.0,
            1.0,
            &QuadSettings { abs_tol: 1e-13, ..Default::default() },
        )
        .unwrap();
        let exact = (Complex64::new(0.0, k).exp() - 1.0) / Complex64::new(0.0, k);
        assert!((r.value - exact).norm() < 1e-12);
        assert!(r.error < 1e-12);
    }

    #[test]
    fn reversed_interval_negates() {
        let s = QuadSettings::default();
        let f = |x: f64| Complex64::new(x.sin(), x.cos());
        let a = integrate(f, 0.0, 3.0, &s).unwrap();
        let b = integrate(f, 3.0, 0.0, &s).unwrap();
        assert!((a.value + b.value).norm() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_degree_2n_minus_1() {
        for n in [1, 2, 5, 12, 20] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn failure_is_reported() {
        let s = QuadSettings { abs_tol: 1e-300, max_panels: 8, ..Default::default() };
        let r = integrate(|x| Complex64::new(1.0 / x.abs().sqrt().max(1e-300), 0.0), -1.0, 1.0, &s);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }
}
