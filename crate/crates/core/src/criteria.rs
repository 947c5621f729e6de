//! Full-rank criteria of the three sign cases, evaluated on canonical
//! coefficients and cross-checked against the interpolated determinant.

use serde::Serialize;

use crate::conditions::CanonicalConditionSet;
use crate::global_system::{choose_radius, determinant_polynomials, DeterminantPolynomial};
use crate::medium::{CaseTag, Medium};

/// Relative size below which a criterion difference counts as zero.
pub const CRITERION_TOL: f64 = 1e-12;
/// Relative size below which a nonzero difference is flagged as suspicious.
pub const NEAR_ZERO_TOL: f64 = 1e-8;

/// One criterion `lhs != rhs`, with the monomial scale used to judge it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionEval {
    /// One-based position in the published list.
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// Sum of absolute values of every monomial on both sides.
    pub scale: f64,
    pub holds: bool,
    /// Holds, but only barely: the system is close to singular.
    pub near_zero: bool,
}

impl CriterionEval {
    fn from_terms(index: usize, lhs: &[f64], rhs: &[f64]) -> Self {
        let l: f64 = lhs.iter().sum();
        let r: f64 = rhs.iter().sum();
        let scale: f64 = lhs.iter().chain(rhs).map(|v| v.abs()).sum();
        let diff = (l - r).abs();
        let holds = diff > CRITERION_TOL * scale;
        Self { index, lhs: l, rhs: r, scale, holds, near_zero: holds && diff <= NEAR_ZERO_TOL * scale }
    }

    pub fn difference(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Criteria verdicts next to the determinant verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub case: CaseTag,
    /// The five criteria exactly as published.
    pub criteria: Vec<CriterionEval>,
    /// Replacement for a published criterion that disagrees with the
    /// determinant expansion (PosNeg criterion 3 only).
    pub corrected: Option<CriterionEval>,
    /// Some published criterion holds.
    pub full_rank: bool,
    /// Some criterion holds after substituting the corrected one.
    pub full_rank_corrected: bool,
    pub det_polys: Vec<DeterminantPolynomial>,
    /// No region determinant vanishes identically.
    pub det_full_rank: bool,
    /// `full_rank_corrected == det_full_rank`.
    pub consistent: bool,
    pub radius: Option<f64>,
}

impl RankReport {
    /// Criteria that hold, with the correction applied.
    pub fn satisfied(&self) -> Vec<usize> {
        self.effective().filter(|c| c.holds).map(|c| c.index).collect()
    }

    /// The criteria list with the corrected entry substituted.
    pub fn effective(&self) -> impl Iterator<Item = &CriterionEval> {
        self.criteria.iter().map(move |c| match &self.corrected {
            Some(fix) if fix.index == c.index => fix,
            _ => c,
        })
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .effective()
            .filter(|c| c.near_zero)
            .map(|c| format!("criterion {} holds only marginally (|lhs - rhs| = {:e})", c.index, c.difference().abs()))
            .collect();
        if let Some(fix) = &self.corrected {
            let orig = &self.criteria[fix.index - 1];
            if orig.holds != fix.holds {
                out.push(format!(
                    "published criterion {} says {}, determinant-consistent form says {}",
                    fix.index, orig.holds, fix.holds
                ));
            }
        }
        if !self.consistent {
            out.push("criteria verdict disagrees with the determinant polynomial".into());
        }
        out
    }
}

type Terms = (Vec<f64>, Vec<f64>);

fn published(cset: &CanonicalConditionSet, s1: f64, s2: f64) -> [Terms; 5] {
    let b = |i, j| cset.b(i, j);
    match cset.case().tag {
        CaseTag::PosNeg => [
            (vec![b(1, 4) * b(2, 1)], vec![b(1, 1) * b(2, 4)]),
            (
                vec![s1 * b(1, 5) * b(2, 1), -s1 * b(1, 1) * b(2, 5)],
                vec![s2 * b(1, 2) * b(2, 4), -s2 * b(1, 4) * b(2, 2)],
            ),
            (
                vec![
                    s1 * s1 * b(1, 6) * b(2, 1),
                    -s1 * s1 * b(1, 1) * b(2, 6),
                    s1 * s2 * b(1, 5) * b(2, 2),
                    -s1 * s2 * b(1, 2) * b(2, 5),
                    s2 * s2 * b(1, 4) * b(2, 4),
                    -s2 * s2 * b(1, 3) * b(2, 4),
                ],
                vec![],
            ),
            (
                vec![s1 * b(1, 6) * b(2, 2), -s1 * b(1, 2) * b(2, 6)],
                vec![s2 * b(1, 3) * b(2, 5), -s2 * b(1, 5) * b(2, 3)],
            ),
            (vec![b(1, 6) * b(2, 3)], vec![b(1, 3) * b(2, 6)]),
        ],
        CaseTag::PosPos => [
            (vec![b(3, 1)], vec![]),
            (vec![s1 * b(2, 1), s2 * b(3, 2)], vec![]),
            (vec![s1 * s1 * b(1, 1), s1 * s2 * b(2, 2), s2 * s2 * b(3, 3)], vec![]),
            (vec![s1 * b(1, 2), s2 * b(2, 3)], vec![]),
            (vec![b(1, 3)], vec![]),
        ],
        CaseTag::NegPos => [
            (vec![b(3, 5) * b(4, 4)], vec![b(3, 4) * b(4, 5)]),
            (
                vec![s1 * b(3, 4) * b(4, 6), -s1 * b(3, 6) * b(4, 4)],
                vec![s2 * b(2, 4) * b(4, 5), -s2 * b(2, 5) * b(4, 4)],
            ),
            (
                vec![
                    s1 * s1 * b(3, 5) * b(4, 6),
                    -s1 * s1 * b(3, 6) * b(4, 5),
                    s1 * s2 * b(2, 6) * b(4, 4),
                    -s1 * s2 * b(2, 4) * b(4, 6),
                    s2 * s2 * b(1, 4) * b(4, 5),
                    -s2 * s2 * b(1, 5) * b(4, 4),
                ],
                vec![],
            ),
            (
                vec![s1 * b(2, 6) * b(4, 5), -s1 * b(2, 5) * b(4, 6)],
                vec![s2 * b(1, 6) * b(4, 4), -s2 * b(1, 4) * b(4, 6)],
            ),
            (vec![b(1, 6) * b(4, 5)], vec![b(1, 5) * b(4, 6)]),
        ],
    }
}

/// PosNeg criterion 3 with the repeated factor `beta_24` replaced so the
/// quantity matches the `k^2` coefficient of the determinant.
fn corrected_posneg_three(cset: &CanonicalConditionSet, s1: f64, s2: f64) -> CriterionEval {
    let b = |i, j| cset.b(i, j);
    CriterionEval::from_terms(
        3,
        &[
            s1 * s1 * b(1, 6) * b(2, 1),
            -s1 * s1 * b(1, 1) * b(2, 6),
            s1 * s2 * b(1, 5) * b(2, 2),
            -s1 * s2 * b(1, 2) * b(2, 5),
            s2 * s2 * b(1, 4) * b(2, 3),
            -s2 * s2 * b(1, 3) * b(2, 4),
        ],
        &[],
    )
}

/// Evaluates the published criteria and the determinant polynomials.
pub fn rank_criteria(cset: &CanonicalConditionSet, medium: &Medium) -> RankReport {
    let (s1, s2) = (medium.sigma1(), medium.sigma2());
    let criteria: Vec<CriterionEval> = published(cset, s1, s2)
        .iter()
        .enumerate()
        .map(|(i, (l, r))| CriterionEval::from_terms(i + 1, l, r))
        .collect();
    let corrected = (cset.case().tag == CaseTag::PosNeg).then(|| corrected_posneg_three(cset, s1, s2));
    let full_rank = criteria.iter().any(|c| c.holds);
    let full_rank_corrected = criteria
        .iter()
        .map(|c| match &corrected {
            Some(fix) if fix.index == c.index => fix.holds,
            _ => c.holds,
        })
        .any(|h| h);
    let det_polys = determinant_polynomials(medium, cset);
    let det_full_rank = det_polys.iter().all(|p| !p.is_zero());
    let radius = choose_radius(&det_polys).ok();
    RankReport {
        case: cset.case().tag,
        criteria,
        corrected,
        full_rank,
        full_rank_corrected,
        det_polys,
        det_full_rank,
        consistent: full_rank_corrected == det_full_rank,
        radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::RawCondition;
    use crate::forcing::Forcing;
    use crate::medium::SignCase;
    use num_complex::Complex64;

    fn set(tag: CaseTag, beta: Vec<[f64; 6]>) -> CanonicalConditionSet {
        let n = beta.len();
        CanonicalConditionSet::from_canonical(SignCase { tag, reflected: false }, beta, vec![Forcing::zero(); n])
            .unwrap()
    }

    #[test]
    fn example_two_criterion_three() {
        let raws: Vec<_> = (0..3).map(RawCondition::continuity).collect();
        let cset =
            CanonicalConditionSet::canonicalize(&raws, SignCase { tag: CaseTag::PosPos, reflected: false }).unwrap();
        let m = Medium::new(1.0, 2.0).unwrap();
        let r = rank_criteria(&cset, &m);
        assert!((r.criteria[2].lhs + 7.0).abs() < 1e-14);
        assert_eq!(r.satisfied(), vec![3]);
        assert!(r.full_rank && r.det_full_rank && r.consistent);
        assert!(r.radius.is_some());
    }

    #[test]
    fn zero_beta_fails_everything() {
        let beta = vec![
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ];
        let r = rank_criteria(&set(CaseTag::PosPos, beta), &Medium::new(1.0, 1.0).unwrap());
        assert!(r.criteria.iter().all(|c| !c.holds));
        assert!(!r.full_rank && !r.det_full_rank && r.consistent);
        assert!(r.radius.is_none());
    }

    #[test]
    fn published_posneg_three_counterexample() {
        // Only the repeated-factor monomial separates these two rows.
        let beta = vec![[1.0, 0.0, 1.0, -2.0, 1.0, -1.0], [0.0, 1.0, 1.0, 0.0, 2.0, -1.0]];
        let cset = set(CaseTag::PosNeg, beta);
        let r = rank_criteria(&cset, &Medium::new(1.0, -1.0).unwrap());
        let orig = &r.criteria[2];
        let fix = r.corrected.as_ref().unwrap();
        assert_ne!(orig.holds, fix.holds);
        assert_eq!(r.full_rank_corrected, r.det_full_rank);
    }

    #[test]
    fn criteria_track_polynomial_coefficients() {
        let m = Medium::new(0.7, -1.2).unwrap();
        let cset = set(
            CaseTag::PosNeg,
            vec![[0.3, -0.8, 0.1, 0.5, 0.9, -0.4], [-0.6, 0.2, 0.75, -0.1, 0.35, 0.6]],
        );
        let r = rank_criteria(&cset, &m);
        let p = &r.det_polys[0];
        let diffs: Vec<f64> = r.effective().map(CriterionEval::difference).collect();
        // Coefficient of k^n is K i^n (s1 s2)^max(2 - n, 0) times criterion n + 1.
        let s12 = m.sigma1() * m.sigma2();
        let k0 = p.coeffs[4] / diffs[4];
        for (n, (c, d)) in p.coeffs.iter().zip(&diffs).enumerate() {
            let want = k0 * Complex64::i().powu(n as u32) * s12.powi(2i32.saturating_sub(n as i32).max(0)) * *d;
            assert!((c - want).norm() < 1e-9 * k0.norm(), "n={n}: {c} vs {want}");
        }
    }
}
