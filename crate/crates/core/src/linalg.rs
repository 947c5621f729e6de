//! Small dense complex linear algebra: partial-pivot LU, determinants,
//! Cramer's rule, and polynomial roots through a companion matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

type C = Complex64;

/// LU factors of an `N x N` matrix with row pivoting.
#[derive(Debug, Clone, Copy)]
pub struct Lu<const N: usize> {
    lu: [[C; N]; N],
    perm: [usize; N],
    sign: f64,
}

impl<const N: usize> Lu<N> {
    /// Factors `a`; returns `None` when an exact zero pivot appears.
    pub fn factor(a: &[[C; N]; N]) -> Option<Self> {
        let mut lu = *a;
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut sign = 1.0;
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&i, &j| lu[i][col].norm().total_cmp(&lu[j][col].norm()))
                .unwrap_or(col);
            if lu[pivot][col] == C::new(0.0, 0.0) {
                return None;
            }
            if pivot != col {
                lu.swap(pivot, col);
                perm.swap(pivot, col);
                sign = -sign;
            }
            let inv = C::new(1.0, 0.0) / lu[col][col];
            for row in col + 1..N {
                let factor = lu[row][col] * inv;
                lu[row][col] = factor;
                for c in col + 1..N {
                    let v = lu[col][c];
                    lu[row][c] -= factor * v;
                }
            }
        }
        Some(Self { lu, perm, sign })
    }

    pub fn determinant(&self) -> C {
        (0..N).fold(C::new(self.sign, 0.0), |acc, i| acc * self.lu[i][i])
    }

    pub fn solve(&self, b: &[C; N]) -> [C; N] {
        let mut y = [C::new(0.0, 0.0); N];
        for i in 0..N {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= self.lu[i][j] * y[j];
            }
            y[i] = s;
        }
        for i in (0..N).rev() {
            let mut s = y[i];
            for j in i + 1..N {
                s -= self.lu[i][j] * y[j];
            }
            y[i] = s / self.lu[i][i];
        }
        y
    }
}

/// Determinant by partial-pivot elimination (zero for singular input).
pub fn determinant<const N: usize>(a: &[[C; N]; N]) -> C {
    Lu::factor(a).map_or(C::new(0.0, 0.0), |lu| lu.determinant())
}

pub fn mat_vec<const N: usize>(a: &[[C; N]; N], x: &[C; N]) -> [C; N] {
    let mut out = [C::new(0.0, 0.0); N];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row.iter().zip(x).map(|(r, v)| r * v).sum();
    }
    out
}

pub fn norm2<const N: usize>(v: &[C; N]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Product of the Euclidean norms of the rows (Hadamard bound on `|det|`).
pub fn row_norm_product<const N: usize>(a: &[[C; N]; N]) -> f64 {
    a.iter().map(norm2).product()
}

/// Solution by Cramer's rule, `x_i = det(A_i) / det(A)`. Slow; used as an
/// independent check of the elimination path.
pub fn cramer_solve<const N: usize>(a: &[[C; N]; N], b: &[C; N]) -> Option<[C; N]> {
    let d = laplace_determinant(a);
    if d == C::new(0.0, 0.0) {
        return None;
    }
    let mut x = [C::new(0.0, 0.0); N];
    for (i, xi) in x.iter_mut().enumerate() {
        let mut ai = *a;
        for (row, bv) in ai.iter_mut().zip(b) {
            row[i] = *bv;
        }
        *xi = laplace_determinant(&ai) / d;
    }
    Some(x)
}

/// Determinant by cofactor expansion along the first row. Exponential cost,
/// fine for `N <= 6` and free of pivoting decisions.
pub fn laplace_determinant<const N: usize>(a: &[[C; N]; N]) -> C {
    let rows: Vec<Vec<C>> = a.iter().map(|r| r.to_vec()).collect();
    laplace_dyn(&rows)
}

fn laplace_dyn(a: &[Vec<C>]) -> C {
    let n = a.len();
    match n {
        0 => C::new(1.0, 0.0),
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => {
            let mut acc = C::new(0.0, 0.0);
            for col in 0..n {
                if a[0][col] == C::new(0.0, 0.0) {
                    continue;
                }
                let minor: Vec<Vec<C>> = a[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let term = a[0][col] * laplace_dyn(&minor);
                if col % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Evaluates `sum c_n z^n` (coefficients in ascending order).
pub fn poly_eval(coeffs: &[C], z: C) -> C {
    coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Roots of `sum c_n z^n` as eigenvalues of the companion matrix, refined by
/// a few Newton steps. Leading zero coefficients are dropped; an identically
/// zero polynomial has no meaningful roots and yields `None`.
pub fn poly_roots(coeffs: &[C]) -> Option<Vec<C>> {
    let degree = coeffs.iter().rposition(|c| *c != C::new(0.0, 0.0))?;
    if degree == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<C>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let eig = nalgebra::linalg::Schur::new(companion).eigenvalues()?;
    let deriv: Vec<C> = coeffs[1..=degree]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (i + 1) as f64)
        .collect();
    let roots = eig
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..3 {
                let d = poly_eval(&deriv, z);
                if d == C::new(0.0, 0.0) {
                    break;
                }
                let step = poly_eval(&coeffs[..=degree], z) / d;
                if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn solve_permuted_identity() {
        let mut a = [[c(0.0, 0.0); 3]; 3];
        a[0][2] = c(1.0, 0.0);
        a[1][0] = c(1.0, 0.0);
        a[2][1] = c(1.0, 0.0);
        let b = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 1.0)];
        let x = Lu::factor(&a).unwrap().solve(&b);
        assert_eq!(x, [c(2.0, 0.0), c(3.0, 1.0), c(1.0, 0.0)]);
        assert!((Lu::factor(&a).unwrap().determinant() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn determinants_agree() {
        let a = [
            [c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0)],
            [c(0.0, 1.0), c(3.0, 0.0), c(2.0, -2.0)],
            [c(1.0, 0.0), c(-1.0, 0.5), c(0.25, 0.0)],
        ];
        let d1 = determinant(&a);
        let d2 = laplace_determinant(&a);
        assert!((d1 - d2).norm() < 1e-13 * d2.norm());
    }

    #[test]
    fn singular_matrix_has_zero_det() {
        let a = [[c(1.0, 0.0), c(2.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)]];
        assert_eq!(determinant(&a), c(0.0, 0.0));
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (z - 1)(z - 2i) = z^2 - (1 + 2i) z + 2i
        let coeffs = [c(0.0, 2.0), c(-1.0, -2.0), c(1.0, 0.0)];
        let mut r = poly_roots(&coeffs).unwrap();
        r.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-13);
        assert!((r[1] - c(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn roots_edge_cases() {
        assert!(poly_roots(&[c(0.0, 0.0); 5]).is_none());
        assert!(poly_roots(&[c(3.0, 0.0), c(0.0, 0.0)]).unwrap().is_empty());
        let r = poly_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert!(r.iter().all(|z| z.norm() < 1e-12));
    }
}
