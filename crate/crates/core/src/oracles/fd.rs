//! Crank-Nicolson finite differences for the interface problem, used as an
//! independent reference.
//!
//! Each half-line is truncated to `[-L, 0]` or `[0, L]` with a node at the
//! interface on both grids. Every node carries one equation: a zero
//! far-field row, a collocated PDE row with a five-point third-derivative
//! stencil (shifted near the ends), or one of the canonical interface
//! conditions written with one-sided five-point derivative weights. The
//! interface rows sit where the characteristic count says information
//! leaves the subdomain: one row on a side with `sigma > 0` at its right end
//! and so on.

use serde::Serialize;

use crate::conditions::CanonicalConditionSet;
use crate::error::{Error, Result};
use crate::evaluator::ProblemSpec;
use crate::medium::{Medium, Side};
use crate::spectral::HalfLineProfile;

use super::band::BandMatrix;

/// Grid and step parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdGrid {
    /// Each half-line is truncated at distance `half_width` from the interface.
    pub half_width: f64,
    pub h: f64,
    pub tau: f64,
    /// Largest magnitude tolerated on the outer tenth of each grid.
    pub far_field_tol: f64,
}

impl FdGrid {
    /// Grid with `tau = ratio * h`.
    pub fn new(half_width: f64, h: f64, ratio: f64) -> Self {
        Self { half_width, h, tau: ratio * h, far_field_tol: 1e-8 }
    }
}

/// Field at the final time on both grids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdSolution {
    pub h: f64,
    pub t: f64,
    /// Nodes `-L, ..., 0`.
    pub x_left: Vec<f64>,
    /// Nodes `0, ..., L`.
    pub x_right: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// Largest magnitude on the outer tenth of either grid.
    pub far_field: f64,
}

impl FdSolution {
    /// Linear interpolation on the grid of `side`.
    pub fn value_on_side(&self, side: Side, x: f64) -> Result<f64> {
        let (xs, us) = match side {
            Side::Left => (&self.x_left, &self.left),
            Side::Right => (&self.x_right, &self.right),
        };
        let (a, b) = (xs[0], xs[xs.len() - 1]);
        if x < a - 1e-12 || x > b + 1e-12 {
            return Err(Error::InvalidQuery(format!("x = {x} outside the {side:?} grid [{a}, {b}]")));
        }
        let pos = ((x - a) / self.h).clamp(0.0, (xs.len() - 1) as f64);
        let i = (pos.floor() as usize).min(xs.len() - 2);
        let w = pos - i as f64;
        Ok(us[i] * (1.0 - w) + us[i + 1] * w)
    }

    /// Value at a nonzero `x`.
    pub fn value(&self, x: f64) -> Result<f64> {
        let side = Side::of(x).ok_or_else(|| Error::InvalidQuery("x = 0 is two-valued".into()))?;
        self.value_on_side(side, x)
    }
}

/// Finite-difference weights for the `m`-th derivative at `z` on nodes `x`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

const WIDTH: usize = 5;

struct Layout {
    n_side: usize,
    /// Far-field rows on the left grid, counted from `x = -L`.
    far_left: usize,
    /// Interface rows at the right end of the left grid.
    iface_left: usize,
    iface_right: usize,
    far_right: usize,
}

impl Layout {
    fn new(medium: &Medium, n_side: usize) -> Self {
        let (pos1, pos2) = (medium.sigma1() > 0.0, medium.sigma2() > 0.0);
        Self {
            n_side,
            far_left: if pos1 { 2 } else { 1 },
            iface_left: if pos1 { 1 } else { 2 },
            iface_right: if pos2 { 2 } else { 1 },
            far_right: if pos2 { 1 } else { 2 },
        }
    }

    fn constraint_rows(&self) -> Vec<usize> {
        let n = self.n_side;
        (0..self.iface_left)
            .map(|q| n - self.iface_left + q)
            .chain((0..self.iface_right).map(|q| n + q))
            .collect()
    }
}

/// Runs the scheme to `t_final` in the canonical frame of `medium`.
pub fn fd_reference(
    medium: &Medium,
    cset: &CanonicalConditionSet,
    profiles: [&HalfLineProfile; 2],
    grid: &FdGrid,
    t_final: f64,
) -> Result<FdSolution> {
    if !(grid.h > 0.0 && grid.tau > 0.0 && grid.half_width > 0.0) {
        return Err(Error::InvalidQuery("grid steps and width must be positive".into()));
    }
    let big_n = (grid.half_width / grid.h).round() as usize;
    if big_n < 2 * WIDTH {
        return Err(Error::InvalidQuery("grid too coarse".into()));
    }
    let h = grid.half_width / big_n as f64;
    let n_side = big_n + 1;
    let n = 2 * n_side;
    let layout = Layout::new(medium, n_side);
    let crow = layout.constraint_rows();
    if crow.len() != cset.len() {
        return Err(Error::ConstraintSingular);
    }

    // Assemble as triplets first to size the band.
    let mut m_entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut d_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut is_pde = vec![false; n];
    let stencil = |i: usize| -> Vec<(usize, f64)> {
        let start = i.saturating_sub(WIDTH / 2).min(n_side - WIDTH);
        let nodes: Vec<f64> = (start..start + WIDTH).map(|j| (j as f64 - i as f64) * h).collect();
        let w = fornberg_weights(0.0, &nodes, 3);
        (start..start + WIDTH).zip(w).collect()
    };
    for (side, offset) in [(Side::Left, 0usize), (Side::Right, n_side)] {
        let c3 = medium.coefficient(side);
        for i in 0..n_side {
            let row = offset + i;
            let far = match side {
                Side::Left => i < layout.far_left,
                Side::Right => i + layout.far_right >= n_side,
            };
            if far {
                m_entries.push((row, row, 1.0));
            } else if !crow.contains(&row) {
                is_pde[row] = true;
                m_entries.push((row, row, 1.0));
                for (j, w) in stencil(i) {
                    d_rows[row].push((offset + j, c3 * w));
                    m_entries.push((row, offset + j, -0.5 * grid.tau * c3 * w));
                }
            }
        }
    }
    let left_nodes: Vec<f64> = (0..WIDTH).map(|q| (q as f64 - (WIDTH - 1) as f64) * h).collect();
    let right_nodes: Vec<f64> = (0..WIDTH).map(|q| q as f64 * h).collect();
    for (&row, beta) in crow.iter().zip(cset.beta()) {
        for (col, &b) in beta.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            let order = col % 3;
            if col < 3 {
                let w = fornberg_weights(0.0, &left_nodes, order);
                for (q, wq) in w.iter().enumerate() {
                    m_entries.push((row, n_side - WIDTH + q, b * wq));
                }
            } else {
                let w = fornberg_weights(0.0, &right_nodes, order);
                for (q, wq) in w.iter().enumerate() {
                    m_entries.push((row, n_side + q, b * wq));
                }
            }
        }
    }
    let kl = m_entries.iter().map(|&(i, j, _)| i.saturating_sub(j)).max().unwrap_or(0);
    let ku = m_entries.iter().map(|&(i, j, _)| j.saturating_sub(i)).max().unwrap_or(0);
    let mut mat = BandMatrix::zeros(n, kl, ku);
    for (i, j, v) in m_entries {
        mat.add(i, j, v);
    }
    let lu = mat.factor().ok_or(Error::ConstraintSingular)?;

    let x_left: Vec<f64> = (0..n_side).map(|i| -grid.half_width + i as f64 * h).collect();
    let x_right: Vec<f64> = (0..n_side).map(|i| i as f64 * h).collect();
    let mut u: Vec<f64> = x_left
        .iter()
        .map(|&x| profiles[0].value(x))
        .chain(x_right.iter().map(|&x| profiles[1].value(x)))
        .collect();
    let initial = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let forcing_scale = cset
        .forcings()
        .iter()
        .map(|f| (0..=16).map(|j| f.value(t_final * j as f64 / 16.0).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let reference = initial.max(forcing_scale).max(1e-300);
    let steps = (t_final / grid.tau).round().max(if t_final > 0.0 { 1.0 } else { 0.0 }) as usize;
    let tau = if steps > 0 { t_final / steps as f64 } else { 0.0 };
    if steps > 0 && (tau - grid.tau).abs() > 1e-9 * grid.tau {
        // The step is adjusted to land exactly on t_final, which requires a
        // refactorization at the adjusted step.
        let adjusted = FdGrid { tau, ..*grid };
        return fd_reference(medium, cset, profiles, &adjusted, t_final);
    }
    let mut rhs = vec![0.0; n];
    for s in 0..steps {
        let t_next = (s + 1) as f64 * tau;
        for row in 0..n {
            rhs[row] = if is_pde[row] {
                u[row] + 0.5 * tau * d_rows[row].iter().map(|&(j, w)| w * u[j]).sum::<f64>()
            } else {
                0.0
            };
        }
        for (&row, f) in crow.iter().zip(cset.forcings()) {
            rhs[row] = f.value(t_next);
        }
        lu.solve(&mut rhs);
        std::mem::swap(&mut u, &mut rhs);
        let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !peak.is_finite() || peak > 1e3 * reference {
            return Err(Error::InstabilityDetected { factor: peak / reference });
        }
    }
    let outer = n_side / 10;
    let far_field = u[..outer]
        .iter()
        .chain(&u[n - outer..])
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if far_field > grid.far_field_tol {
        return Err(Error::DomainTruncation { magnitude: far_field });
    }
    let right = u.split_off(n_side);
    Ok(FdSolution { h, t: t_final, x_left, x_right, left: u, right, far_field })
}

/// Runs the scheme for a prepared problem, in the caller's frame.
pub fn fd_for_problem(spec: &ProblemSpec, grid: &FdGrid, t_final: f64) -> Result<FdSolution> {
    let sol = fd_reference(spec.canonical_medium(), spec.conditions(), spec.canonical_profiles(), grid, t_final)?;
    if !spec.case().reflected {
        return Ok(sol);
    }
    let mirror = |xs: &[f64]| xs.iter().rev().map(|x| -x).collect::<Vec<_>>();
    let flip = |us: &[f64]| us.iter().rev().copied().collect::<Vec<_>>();
    Ok(FdSolution {
        h: sol.h,
        t: sol.t,
        x_left: mirror(&sol.x_right),
        x_right: mirror(&sol.x_left),
        left: flip(&sol.right),
        right: flip(&sol.left),
        far_field: sol.far_field,
    })
}

/// Three-level refinement study at fixed points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RichardsonStudy {
    pub steps: [f64; 3],
    pub points: Vec<f64>,
    /// Values per point at the three step sizes, coarse to fine.
    pub values: Vec<[f64; 3]>,
    /// Extrapolated values assuming second order.
    pub extrapolated: Vec<f64>,
    /// Per-point uncertainty: `|fine - mid|` plus a round-off floor.
    pub band: Vec<f64>,
    /// `log2` of the ratio of successive max-norm differences.
    pub order: f64,
}

/// Solves at `h0`, `h0/2`, `h0/4` with `tau = ratio * h` and extrapolates.
pub fn richardson_study(
    spec: &ProblemSpec,
    half_width: f64,
    h0: f64,
    ratio: f64,
    t_final: f64,
    points: &[f64],
) -> Result<RichardsonStudy> {
    let steps = [h0, h0 / 2.0, h0 / 4.0];
    let sols = crate::parallel::map(&steps, |&h| fd_for_problem(spec, &FdGrid::new(half_width, h, ratio), t_final));
    let sols = sols.into_iter().collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(points.len());
    for &x in points {
        let v = [sols[0].value(x)?, sols[1].value(x)?, sols[2].value(x)?];
        values.push(v);
    }
    let d1 = values.iter().map(|v| (v[0] - v[1]).abs()).fold(0.0, f64::max);
    let d2 = values.iter().map(|v| (v[1] - v[2]).abs()).fold(0.0, f64::max);
    let order = (d1 / d2).log2();
    let extrapolated = values.iter().map(|v| v[2] + (v[2] - v[1]) / 3.0).collect();
    let band = values.iter().map(|v| (v[2] - v[1]).abs() + 1e-10).collect();
    Ok(RichardsonStudy { steps, points: points.to_vec(), values, extrapolated, band, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_third_derivative() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 3);
        let want = [-0.5, 1.0, 0.0, -1.0, 0.5];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        let d1 = fornberg_weights(0.0, &[0.0, 1.0, 2.0], 1);
        assert!((d1[0] + 1.5).abs() < 1e-14 && (d1[1] - 2.0).abs() < 1e-14 && (d1[2] + 0.5).abs() < 1e-14);
    }
}
