//! Oscillatory moments `J_j(kappa) = int_0^1 v^j exp(-i kappa v) dv`.
//!
//! Three evaluation regimes keep every moment accurate for complex `kappa`:
//! a Kummer series `J_j = exp(-i kappa) 1F1(1; j+2; i kappa) / (j+1)` when
//! `|kappa| <= (j+2)/2`, upward recursion for `j <= |kappa|`, and downward
//! recursion from the first series-eligible index in between.

use num_complex::Complex64;

fn kummer_series(kappa: Complex64, j: usize) -> Complex64 {
    let z = Complex64::i() * kappa;
    let b = (j + 2) as f64;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..400 {
        term *= z / (b + n as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    (-Complex64::i() * kappa).exp() * sum / (j + 1) as f64
}

/// Returns `[J_0, ..., J_n]`.
pub fn unit_moments(kappa: Complex64, n: usize) -> Vec<Complex64> {
    let s = kappa.norm();
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    // Indices at or above `first_series` use the series directly.
    let first_series = ((2.0 * s - 2.0).ceil().max(0.0)) as usize;
    for (j, slot) in out.iter_mut().enumerate().skip(first_series) {
        *slot = kummer_series(kappa, j);
    }
    if first_series == 0 {
        return out;
    }
    let e = (-Complex64::i() * kappa).exp();
    let ik = Complex64::i() * kappa;
    // Upward: J_j = (j J_{j-1} - e) / (i kappa), stable while j <= |kappa|.
    let up_to = (s.floor() as usize).min(n).min(first_series - 1);
    out[0] = (Complex64::new(1.0, 0.0) - e) / ik;
    for j in 1..=up_to {
        out[j] = (out[j - 1] * j as f64 - e) / ik;
    }
    if up_to + 1 >= first_series.min(n + 1) {
        return out;
    }
    // Downward: J_{j-1} = (i kappa J_j + e) / j, stable while j > |kappa|.
    let mut acc = kummer_series(kappa, first_series);
    for j in (up_to + 2..=first_series).rev() {
        acc = (ik * acc + e) / j as f64;
        if j - 1 <= n {
            out[j - 1] = acc;
        }
    }
    out
}

/// `int_0^h u^j exp(-i k u) du` for `j = 0..=n` and `h > 0`.
pub fn interval_moments(k: Complex64, h: f64, n: usize) -> Vec<Complex64> {
    let mut out = unit_moments(k * h, n);
    let mut scale = h;
    for v in &mut out {
        *v *= scale;
        scale *= h;
    }
    out
}
