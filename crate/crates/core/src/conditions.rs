//! Interface conditions: third-derivative reduction, canonical forms and
//! decoupling detection.
//!
//! Columns of the coefficient matrix are ordered
//! `q1, q1_x, q1_xx, q2, q2_x, q2_xx`, all evaluated at `x = 0`.

use nalgebra::DMatrix;

use crate::error::{Decoupling, Error, Result};
use crate::forcing::Forcing;
use crate::medium::{CaseTag, Medium, Side, SignCase};
use crate::spectral::HalfLineProfile;

pub use crate::criteria::{rank_criteria, CriterionEval, RankReport};

/// One interface condition
/// `sum_n left[n] d^n q1(0,t) + sum_n right[n] d^n q2(0,t) = f(t)`, `n = 0..=3`.
#[derive(Debug, Clone)]
pub struct RawCondition {
    pub left: [f64; 4],
    pub right: [f64; 4],
    pub forcing: Forcing,
}

impl RawCondition {
    pub fn new(left: [f64; 4], right: [f64; 4], forcing: Forcing) -> Result<Self> {
        if left.iter().chain(&right).all(|c| *c == 0.0) {
            return Err(Error::UnsupportedCondition("all coefficients are zero".into()));
        }
        if left.iter().chain(&right).any(|c| !c.is_finite()) {
            return Err(Error::UnsupportedCondition("non-finite coefficient".into()));
        }
        Ok(Self { left, right, forcing })
    }

    /// Continuity of the `n`-th derivative, `d^n q1 - d^n q2 = 0`.
    pub fn continuity(order: usize) -> Self {
        let mut left = [0.0; 4];
        let mut right = [0.0; 4];
        left[order] = 1.0;
        right[order] = -1.0;
        Self { left, right, forcing: Forcing::zero() }
    }

    pub fn has_third_derivative(&self) -> bool {
        self.left[3] != 0.0 || self.right[3] != 0.0
    }

    /// The six retained coefficients.
    pub fn row(&self) -> [f64; 6] {
        [self.left[0], self.left[1], self.left[2], self.right[0], self.right[1], self.right[2]]
    }

    /// The condition after `x -> -x`: sides swap and `d^n` picks up `(-1)^n`.
    pub fn reflected(&self) -> RawCondition {
        let flip = |c: [f64; 4]| [c[0], -c[1], c[2], -c[3]];
        RawCondition { left: flip(self.right), right: flip(self.left), forcing: self.forcing.clone() }
    }
}

/// Number of interface conditions each sign case needs.
pub fn required_condition_count(case: CaseTag) -> usize {
    match case {
        CaseTag::PosNeg => 2,
        CaseTag::PosPos => 3,
        CaseTag::NegPos => 4,
    }
}

/// Replaces `d^3 q_j(0,t)` through `q_t = sigma_j^3 q_xxx` integrated in time.
///
/// A condition `c1 q1_xxx + c2 q2_xxx = f` becomes
/// `(c1/s1^3) q1 + (c2/s2^3) q2 = (c1/s1^3) q0_1(0) + (c2/s2^3) q0_2(0) + int_0^t f`.
/// Conditions that mix third derivatives with lower-order traces have no such
/// reduction and are rejected.
pub fn reduce_third_derivative(
    raw: &RawCondition,
    medium: &Medium,
    q0_left_at_0: f64,
    q0_right_at_0: f64,
) -> Result<RawCondition> {
    if !raw.has_third_derivative() {
        return Ok(raw.clone());
    }
    let lower = raw.left[..3].iter().chain(&raw.right[..3]).any(|c| *c != 0.0);
    if lower {
        return Err(Error::UnsupportedCondition(
            "third-derivative traces mixed with lower-order traces cannot be reduced".into(),
        ));
    }
    let a1 = raw.left[3] / medium.coefficient(Side::Left);
    let a2 = raw.right[3] / medium.coefficient(Side::Right);
    let constant = Forcing::constant(a1 * q0_left_at_0 + a2 * q0_right_at_0);
    let forcing = Forcing::linear_combination([(1.0, &constant), (1.0, &raw.forcing.antiderivative()?)]);
    Ok(RawCondition { left: [a1, 0.0, 0.0, 0.0], right: [a2, 0.0, 0.0, 0.0], forcing })
}

/// Interface conditions in the canonical pivot structure of their sign case.
#[derive(Debug, Clone)]
pub struct CanonicalConditionSet {
    case: SignCase,
    beta: Vec<[f64; 6]>,
    forcings: Vec<Forcing>,
    left_only: usize,
    right_only: usize,
}

fn matrix_rank(rows: &[[f64; 6]], cols: std::ops::Range<usize>) -> usize {
    let m = rows.len();
    let n = cols.len();
    let data: Vec<f64> = rows.iter().flat_map(|r| r[cols.clone()].iter().copied()).collect();
    let scale = data.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    DMatrix::from_row_slice(m, n, &data).rank(1e-10 * scale)
}

fn apply(p: &DMatrix<f64>, rows: &[[f64; 6]], forcings: &[Forcing]) -> (Vec<[f64; 6]>, Vec<Forcing>) {
    let mut beta = Vec::with_capacity(p.nrows());
    let mut out_f = Vec::with_capacity(p.nrows());
    for i in 0..p.nrows() {
        let mut row = [0.0; 6];
        for (j, r) in rows.iter().enumerate() {
            for c in 0..6 {
                row[c] += p[(i, j)] * r[c];
            }
        }
        for v in &mut row {
            if v.abs() < 1e-14 {
                *v = 0.0;
            }
        }
        beta.push(row);
        out_f.push(Forcing::linear_combination((0..rows.len()).map(|j| (p[(i, j)], &forcings[j]))));
    }
    (beta, out_f)
}

/// Mixing matrix bringing `rows` to reduced row echelon form.
fn rref_transform(rows: &[[f64; 6]]) -> DMatrix<f64> {
    let m = rows.len();
    let mut a = DMatrix::<f64>::zeros(m, 6 + m);
    for (i, r) in rows.iter().enumerate() {
        for c in 0..6 {
            a[(i, c)] = r[c];
        }
        a[(i, 6 + i)] = 1.0;
    }
    let scale = rows.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    let mut pivot_row = 0;
    for col in 0..6 {
        if pivot_row == m {
            break;
        }
        let best = (pivot_row..m).max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()));
        let Some(best) = best else { break };
        if a[(best, col)].abs() <= 1e-12 * scale {
            continue;
        }
        a.swap_rows(best, pivot_row);
        let inv = 1.0 / a[(pivot_row, col)];
        for c in 0..6 + m {
            a[(pivot_row, c)] *= inv;
        }
        for i in 0..m {
            if i != pivot_row {
                let f = a[(i, col)];
                if f != 0.0 {
                    for c in 0..6 + m {
                        a[(i, c)] -= f * a[(pivot_row, c)];
                    }
                }
            }
        }
        pivot_row += 1;
    }
    a.columns(6, m).into_owned()
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl CanonicalConditionSet {
    /// Brings conditions to canonical form without rejecting decoupled sets.
    /// Third-derivative terms must already be reduced.
    pub fn canonical_form(raws: &[RawCondition], case: SignCase) -> Result<Self> {
        let m = required_condition_count(case.tag);
        if raws.len() != m {
            return Err(Error::WrongConditionCount { case: case.tag.name(), expected: m, got: raws.len() });
        }
        if raws.iter().any(RawCondition::has_third_derivative) {
            return Err(Error::CanonicalizationFailure(
                "third-derivative terms must be reduced before canonicalization".into(),
            ));
        }
        let rows: Vec<[f64; 6]> = raws.iter().map(RawCondition::row).collect();
        let forcings: Vec<Forcing> = raws.iter().map(|r| r.forcing.clone()).collect();
        if matrix_rank(&rows, 0..6) < m {
            return Err(Error::CanonicalizationFailure("conditions are linearly dependent".into()));
        }
        let left_only = m - matrix_rank(&rows, 3..6);
        let right_only = m - matrix_rank(&rows, 0..3);
        let p = match case.tag {
            CaseTag::PosNeg => rref_transform(&rows),
            CaseTag::PosPos => {
                let h = DMatrix::from_fn(3, 3, |i, j| rows[i][3 + j]);
                h.try_inverse().filter(|_| left_only == 0).ok_or_else(|| {
                    Error::CanonicalizationFailure("q2 columns are rank deficient".into())
                })?
            }
            CaseTag::NegPos => {
                if right_only != 1 || left_only != 1 {
                    return Err(Error::CanonicalizationFailure(
                        "need exactly one pure-q2 row and one pure-q1 row".into(),
                    ));
                }
                negpos_transform(&rows)?
            }
        };
        let (beta, forcings) = apply(&p, &rows, &forcings);
        Ok(Self { case, beta, forcings, left_only, right_only })
    }

    /// Canonical form, rejecting conditions that split into sequential
    /// half-line problems.
    pub fn canonicalize(raws: &[RawCondition], case: SignCase) -> Result<Self> {
        let m = required_condition_count(case.tag);
        if raws.len() != m {
            return Err(Error::WrongConditionCount { case: case.tag.name(), expected: m, got: raws.len() });
        }
        let rows: Vec<[f64; 6]> = raws.iter().map(RawCondition::row).collect();
        if matrix_rank(&rows, 0..6) == m {
            let left_only = m - matrix_rank(&rows, 3..6);
            let right_only = m - matrix_rank(&rows, 0..3);
            if let Some(d) = decoupling_of(case.tag, left_only, right_only) {
                return Err(Error::DecoupledProblem(d));
            }
        }
        Self::canonical_form(raws, case)
    }

    /// Builds a set directly from canonical rows, checking the pivot pattern.
    pub fn from_canonical(case: SignCase, beta: Vec<[f64; 6]>, forcings: Vec<Forcing>) -> Result<Self> {
        let m = required_condition_count(case.tag);
        if beta.len() != m || forcings.len() != m {
            return Err(Error::WrongConditionCount { case: case.tag.name(), expected: m, got: beta.len() });
        }
        let unit = |row: &[f64; 6], cols: [usize; 3], at: usize| {
            cols.iter().enumerate().all(|(i, &c)| row[c] == if i == at { 1.0 } else { 0.0 })
        };
        let ok = match case.tag {
            CaseTag::PosNeg => true,
            CaseTag::PosPos => (0..3).all(|i| unit(&beta[i], [3, 4, 5], i)),
            CaseTag::NegPos => {
                (0..3).all(|i| unit(&beta[i], [0, 1, 2], i)) && beta[3][..3].iter().all(|v| *v == 0.0)
            }
        };
        if !ok {
            return Err(Error::CanonicalizationFailure(format!(
                "rows do not follow the {} pivot structure",
                case.tag
            )));
        }
        if matrix_rank(&beta, 0..6) < m {
            return Err(Error::CanonicalizationFailure("conditions are linearly dependent".into()));
        }
        let left_only = m - matrix_rank(&beta, 3..6);
        let right_only = m - matrix_rank(&beta, 0..3);
        Ok(Self { case, beta, forcings, left_only, right_only })
    }

    pub fn case(&self) -> SignCase {
        self.case
    }

    pub fn beta(&self) -> &[[f64; 6]] {
        &self.beta
    }

    /// `beta_{i,j}` with the one-based indices used in the criteria.
    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.beta[i - 1][j - 1]
    }

    pub fn forcings(&self) -> &[Forcing] {
        &self.forcings
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// Rows that can be written using left traces only.
    pub fn left_only_rows(&self) -> usize {
        self.left_only
    }

    /// Rows that can be written using right traces only.
    pub fn right_only_rows(&self) -> usize {
        self.right_only
    }

    /// Maximum number of one-sided (boundary) conditions over equivalent
    /// row spans.
    pub fn boundary_condition_count(&self) -> usize {
        self.left_only + self.right_only
    }

    pub fn decoupling(&self) -> Option<Decoupling> {
        decoupling_of(self.case.tag, self.left_only, self.right_only)
    }

    /// `f_i(0) - sum_c beta_{i,c} d^c q0(0)` for each row: nonzero entries
    /// flag data that are incompatible with the conditions at `t = 0`.
    pub fn compatibility_defects(&self, left: &HalfLineProfile, right: &HalfLineProfile) -> Vec<f64> {
        let traces = [
            left.derivative(0.0, 0),
            left.derivative(0.0, 1),
            left.derivative(0.0, 2),
            right.derivative(0.0, 0),
            right.derivative(0.0, 1),
            right.derivative(0.0, 2),
        ];
        self.beta
            .iter()
            .zip(&self.forcings)
            .map(|(row, f)| f.value(0.0) - row.iter().zip(&traces).map(|(b, q)| b * q).sum::<f64>())
            .collect()
    }
}

fn decoupling_of(case: CaseTag, left_only: usize, right_only: usize) -> Option<Decoupling> {
    let (left_limit, right_limit) = match case {
        CaseTag::PosNeg => (1, 1),
        CaseTag::PosPos => (1, 2),
        CaseTag::NegPos => (2, 2),
    };
    if left_only >= left_limit {
        Some(Decoupling::LeftFirst)
    } else if right_only >= right_limit {
        Some(Decoupling::RightFirst)
    } else {
        None
    }
}

/// Mixing matrix for the NegPos form: rows 1-3 carry the identity on the q1
/// columns, row 4 is the pure-q2 row with its first nonzero entry equal to 1,
/// and that entry's column is cleared from rows 1-3.
fn negpos_transform(rows: &[[f64; 6]]) -> Result<DMatrix<f64>> {
    let g = DMatrix::from_fn(4, 3, |i, j| rows[i][j]);
    // Left null vector of G from signed 3x3 minors.
    let mut y = [0.0; 4];
    for (skip, yi) in y.iter_mut().enumerate() {
        let mut minor = [[0.0; 3]; 3];
        for (r, src) in (0..4).filter(|&i| i != skip).enumerate() {
            for c in 0..3 {
                minor[r][c] = rows[src][c];
            }
        }
        *yi = if skip % 2 == 0 { 1.0 } else { -1.0 } * det3(&minor);
    }
    let mut row4 = [0.0; 6];
    for (i, r) in rows.iter().enumerate() {
        for c in 0..6 {
            row4[c] += y[i] * r[c];
        }
    }
    let scale = row4.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let pivot = (3..6)
        .find(|&c| row4[c].abs() > 1e-12 * scale)
        .ok_or_else(|| Error::CanonicalizationFailure("pure-q2 row vanished".into()))?;
    let norm = row4[pivot];
    let gt = g.transpose();
    let pinv = (&gt * &g)
        .try_inverse()
        .ok_or_else(|| Error::CanonicalizationFailure("q1 columns are rank deficient".into()))?
        * gt;
    let mut p = DMatrix::<f64>::zeros(4, 4);
    for i in 0..3 {
        for j in 0..4 {
            p[(i, j)] = pinv[(i, j)];
        }
    }
    for j in 0..4 {
        p[(3, j)] = y[j] / norm;
    }
    for i in 0..3 {
        let coeff: f64 = (0..4).map(|j| p[(i, j)] * rows[j][pivot]).sum();
        for j in 0..4 {
            p[(i, j)] -= coeff * p[(3, j)];
        }
    }
    Ok(p)
}
