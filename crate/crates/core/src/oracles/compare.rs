//! Pointwise comparison of two sampled fields.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Samples of a field at matching abscissae.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field {
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl Field {
    pub fn new(x: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if x.len() != values.len() {
            return Err(Error::GridMismatch(format!("{} abscissae, {} values", x.len(), values.len())));
        }
        Ok(Self { x, values })
    }

    pub fn real(x: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(x, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Norm {
    Max,
    /// Discrete `L2` with the grid step taken from the first two abscissae.
    L2,
}

/// Norm of the difference `a - b`; abscissae must agree to `1e-12`.
pub fn compare(a: &Field, b: &Field, norm: Norm) -> Result<f64> {
    if a.x.len() != b.x.len() {
        return Err(Error::GridMismatch(format!("{} vs {} points", a.x.len(), b.x.len())));
    }
    if let Some((i, (p, q))) = a.x.iter().zip(&b.x).enumerate().find(|(_, (p, q))| (*p - *q).abs() > 1e-12) {
        return Err(Error::GridMismatch(format!("abscissa {i}: {p} vs {q}")));
    }
    let diffs = a.values.iter().zip(&b.values).map(|(u, v)| (u - v).norm());
    Ok(match norm {
        Norm::Max => diffs.fold(0.0, f64::max),
        Norm::L2 => {
            let h = if a.x.len() > 1 { (a.x[1] - a.x[0]).abs() } else { 1.0 };
            (h * diffs.map(|d| d * d).sum::<f64>()).sqrt()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_and_mismatch() {
        let a = Field::real(vec![0.0, 0.5, 1.0], &[1.0, 2.0, 3.0]).unwrap();
        let b = Field::real(vec![0.0, 0.5, 1.0], &[1.0, 2.5, 3.0]).unwrap();
        assert_eq!(compare(&a, &b, Norm::Max).unwrap(), 0.5);
        assert!((compare(&a, &b, Norm::L2).unwrap() - (0.5f64 * 0.25).sqrt()).abs() < 1e-15);
        let c = Field::real(vec![0.0, 0.6, 1.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(compare(&a, &c, Norm::Max), Err(Error::GridMismatch(_))));
    }
}
