//! The per-region 6x6 spectral system `A(k) X = Y(k)` for the unknowns
//! `X = (g0, g1, g2, h0, h1, h2)`, its determinant polynomial and the contour
//! radius derived from it.

use num_complex::Complex64;
use serde::Serialize;

use crate::conditions::CanonicalConditionSet;
use crate::contours::SectorId;
use crate::error::{Error, Result};
use crate::linalg::{mat_vec, norm2, poly_eval, poly_roots, row_norm_product, Lu};
use crate::medium::{CaseTag, Medium, Side};
use crate::spectral::HalfLineProfile;
use crate::alpha_pow;

type C = Complex64;
pub type Matrix6 = [[C; 6]; 6];
pub type Vector6 = [C; 6];

const ZERO: C = C::new(0.0, 0.0);

/// Source of one row of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowDescriptor {
    /// Global relation of `side` evaluated at `alpha^rotation k`.
    GlobalRelation { side: Side, rotation: u8 },
    /// Time transform of canonical condition row `i` (zero-based).
    Condition(usize),
}

/// The six equations used for `k` in the closure of one sector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionLinearSystem {
    case: CaseTag,
    region: SectorId,
    rows: [RowDescriptor; 6],
}

/// Solved spectral unknowns at one `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralUnknowns {
    pub g: [C; 3],
    pub h: [C; 3],
}

impl SpectralUnknowns {
    pub fn from_array(x: Vector6) -> Self {
        Self { g: [x[0], x[1], x[2]], h: [x[3], x[4], x[5]] }
    }

    pub fn as_array(&self) -> Vector6 {
        [self.g[0], self.g[1], self.g[2], self.h[0], self.h[1], self.h[2]]
    }

    /// `(w0, w1, w2)` for one side: `g` on the left, `h` on the right.
    pub fn side(&self, side: Side) -> [C; 3] {
        match side {
            Side::Left => self.g,
            Side::Right => self.h,
        }
    }
}

/// `det A(k) = k^power * sum_n coeffs[n] k^n` on one region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminantPolynomial {
    pub region: SectorId,
    pub power: u32,
    pub coeffs: [C; 5],
    /// Relative mismatch at a sixth, independent sample point.
    pub fit_residual: f64,
    /// Size of the determinant samples used for the relative threshold.
    pub scale: f64,
}

impl DeterminantPolynomial {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn eval(&self, k: C) -> C {
        k.powu(self.power) * poly_eval(&self.coeffs, k)
    }

    pub fn roots(&self) -> Vec<C> {
        poly_roots(&self.coeffs).unwrap_or_default()
    }
}

/// Power of `k` that factors out of every determinant of the case.
pub fn prefactor_power(case: CaseTag) -> u32 {
    match case {
        CaseTag::PosNeg => 2,
        CaseTag::PosPos => 1,
        CaseTag::NegPos => 0,
    }
}

/// Regions in which the case needs a linear system.
pub fn regions(case: CaseTag) -> &'static [SectorId] {
    match case {
        CaseTag::PosNeg => &[SectorId::Five],
        CaseTag::PosPos => &[SectorId::One, SectorId::Three, SectorId::Five],
        CaseTag::NegPos => &[SectorId::One, SectorId::Three],
    }
}

fn gr(side: Side, rotation: u8) -> RowDescriptor {
    RowDescriptor::GlobalRelation { side, rotation: rotation % 3 }
}

/// Whether the rotated relation of `side` holds on the whole closed sector.
pub fn rotation_valid(medium: &Medium, side: Side, rotation: u8, region: SectorId) -> bool {
    let (lo, hi) = region.angles();
    let sigma = medium.sigma(side);
    (0..=8).all(|i| {
        let theta = lo + (hi - lo) * i as f64 / 8.0;
        let im = (alpha_pow(rotation) * C::from_polar(1.0, theta)).im;
        let signed = match side {
            Side::Left => sigma * im,
            Side::Right => -sigma * im,
        };
        signed >= -1e-12
    })
}

impl RegionLinearSystem {
    /// The standard row selection of the case on `region`.
    pub fn standard(case: CaseTag, region: SectorId) -> Result<Self> {
        use RowDescriptor::Condition as Cd;
        use Side::{Left as L, Right as R};
        let r = region.number();
        let rows = match case {
            CaseTag::PosNeg => {
                if region != SectorId::Five {
                    return Err(region_error(region, 0, "PosNeg uses region 5 only"));
                }
                [gr(L, 1), gr(L, 2), gr(R, 1), gr(R, 2), Cd(0), Cd(1)]
            }
            CaseTag::PosPos => [gr(L, r), gr(L, r + 2), gr(R, r + 1), Cd(0), Cd(1), Cd(2)],
            CaseTag::NegPos => {
                if region == SectorId::Five {
                    return Err(region_error(region, 0, "NegPos uses regions 1 and 3 only"));
                }
                [gr(L, r + 1), gr(R, r + 1), Cd(0), Cd(1), Cd(2), Cd(3)]
            }
        };
        Ok(Self { case, region, rows })
    }

    /// A custom row selection, validated against the medium.
    pub fn with_rows(case: CaseTag, region: SectorId, medium: &Medium, rows: [RowDescriptor; 6]) -> Result<Self> {
        let m = crate::conditions::required_condition_count(case);
        for (i, row) in rows.iter().enumerate() {
            match *row {
                RowDescriptor::GlobalRelation { side, rotation } => {
                    if !rotation_valid(medium, side, rotation, region) {
                        return Err(region_error(
                            region,
                            i,
                            &format!("rotation alpha^{rotation} of side {} is not valid here", side.index()),
                        ));
                    }
                }
                RowDescriptor::Condition(c) if c >= m => {
                    return Err(region_error(region, i, &format!("condition row {c} does not exist")));
                }
                RowDescriptor::Condition(_) => {}
            }
        }
        Ok(Self { case, region, rows })
    }

    /// The standard system, validated against the medium.
    pub fn validated(case: CaseTag, region: SectorId, medium: &Medium) -> Result<Self> {
        let s = Self::standard(case, region)?;
        Self::with_rows(case, region, medium, s.rows)
    }

    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn region(&self) -> SectorId {
        self.region
    }

    pub fn rows(&self) -> &[RowDescriptor; 6] {
        &self.rows
    }

    pub fn matrix(&self, medium: &Medium, cset: &CanonicalConditionSet, k: C) -> Matrix6 {
        let mut a = [[ZERO; 6]; 6];
        let i = C::i();
        for (row, desc) in a.iter_mut().zip(&self.rows) {
            match *desc {
                RowDescriptor::GlobalRelation { side: Side::Left, rotation } => {
                    let z = alpha_pow(rotation) * k;
                    let s = medium.sigma1();
                    row[0] = -z * z * s;
                    row[1] = i * z * (s * s);
                    row[2] = C::new(s * s * s, 0.0);
                }
                RowDescriptor::GlobalRelation { side: Side::Right, rotation } => {
                    let z = alpha_pow(rotation) * k;
                    let s = medium.sigma2();
                    row[3] = z * z * s;
                    row[4] = -i * z * (s * s);
                    row[5] = C::new(-s * s * s, 0.0);
                }
                RowDescriptor::Condition(c) => {
                    for (e, b) in row.iter_mut().zip(&cset.beta()[c]) {
                        *e = C::new(*b, 0.0);
                    }
                }
            }
        }
        a
    }

    fn rhs_with(
        &self,
        medium: &Medium,
        profiles: [&HalfLineProfile; 2],
        k: C,
        damping: C,
        forcing: impl Fn(usize) -> Result<C>,
    ) -> Result<Vector6> {
        let mut y = [ZERO; 6];
        for (v, desc) in y.iter_mut().zip(&self.rows) {
            *v = match *desc {
                RowDescriptor::GlobalRelation { side, rotation } => {
                    let p = profiles[side.index() as usize - 1];
                    let z = alpha_pow(rotation) * k / medium.sigma(side);
                    // Skip transforms whose damped size underflows; evaluating
                    // them alone could overflow.
                    let growth = p.support().map_or(f64::NEG_INFINITY, |(a, b)| (a * z.im).max(b * z.im));
                    if damping.norm().ln() + growth < -700.0 {
                        ZERO
                    } else {
                        -damping * p.transform_value(z)
                    }
                }
                RowDescriptor::Condition(c) => forcing(c)?,
            };
        }
        Ok(y)
    }

    /// `Y(k)` at horizon `T`, without the unknown time-`T` transforms.
    pub fn rhs(
        &self,
        medium: &Medium,
        cset: &CanonicalConditionSet,
        profiles: [&HalfLineProfile; 2],
        k: C,
        horizon: f64,
    ) -> Result<Vector6> {
        let omega = C::i() * k * k * k;
        self.rhs_with(medium, profiles, k, C::new(1.0, 0.0), |c| cset.forcings()[c].transform(omega, horizon))
    }

    /// `exp(-i k^3 t) Y(k)` at horizon `t`, which stays bounded outside `D`.
    pub fn damped_rhs(
        &self,
        medium: &Medium,
        cset: &CanonicalConditionSet,
        profiles: [&HalfLineProfile; 2],
        k: C,
        t: f64,
    ) -> Result<Vector6> {
        let omega = C::i() * k * k * k;
        let damping = (-omega * t).exp();
        self.rhs_with(medium, profiles, k, damping, |c| cset.forcings()[c].damped_transform(omega, t))
    }

    /// The part of `exp(-i k^3 t) Y(k)` that contributes to the contour
    /// integrals: forcing transforms keep only their decaying piece.
    pub fn contour_rhs(
        &self,
        medium: &Medium,
        cset: &CanonicalConditionSet,
        profiles: [&HalfLineProfile; 2],
        k: C,
        t: f64,
    ) -> Result<Vector6> {
        let omega = C::i() * k * k * k;
        let damping = (-omega * t).exp();
        self.rhs_with(medium, profiles, k, damping, |c| cset.forcings()[c].decaying_part(omega, t))
    }

    /// The omitted term: rotated transforms of the solution at the horizon
    /// on global-relation rows, zero on condition rows. The full relation is
    /// `A X = Y + exp(i k^3 T) * this`.
    pub fn horizon_terms(&self, medium: &Medium, at_horizon: [&HalfLineProfile; 2], k: C) -> Vector6 {
        let mut y = [ZERO; 6];
        for (v, desc) in y.iter_mut().zip(&self.rows) {
            if let RowDescriptor::GlobalRelation { side, rotation } = *desc {
                let p = at_horizon[side.index() as usize - 1];
                *v = p.rotated_transform(medium, rotation, k).value;
            }
        }
        y
    }
}

fn region_error(region: SectorId, row: usize, reason: &str) -> Error {
    Error::RegionValidityViolation { region: region.number(), row, reason: reason.to_string() }
}

/// Matrix and right side of one region at horizon `T`.
pub fn assemble(
    system: &RegionLinearSystem,
    medium: &Medium,
    cset: &CanonicalConditionSet,
    profiles: [&HalfLineProfile; 2],
    k: C,
    horizon: f64,
) -> Result<(Matrix6, Vector6)> {
    Ok((system.matrix(medium, cset, k), system.rhs(medium, cset, profiles, k, horizon)?))
}

/// Fits `det A(k) / k^p` by a discrete Fourier transform of five samples on
/// the unit circle and checks the fit at a sixth point.
pub fn determinant_polynomial(
    system: &RegionLinearSystem,
    medium: &Medium,
    cset: &CanonicalConditionSet,
) -> DeterminantPolynomial {
    let p = prefactor_power(system.case);
    let phase0 = 0.3f64;
    let nodes: Vec<C> = (0..5)
        .map(|m| C::from_polar(1.0, phase0 + 2.0 * std::f64::consts::PI * m as f64 / 5.0))
        .collect();
    let mut scale = 0.0f64;
    let samples: Vec<C> = nodes
        .iter()
        .map(|&k| {
            let a = system.matrix(medium, cset, k);
            scale = scale.max(row_norm_product(&a));
            crate::linalg::determinant(&a) / k.powu(p)
        })
        .collect();
    let mut coeffs = [ZERO; 5];
    for (n, c) in coeffs.iter_mut().enumerate() {
        let s: C = samples.iter().zip(&nodes).map(|(v, k)| v * k.powi(-(n as i32))).sum();
        *c = s / 5.0;
        if c.norm() < 1e-12 * scale {
            *c = ZERO;
        }
    }
    let check = C::from_polar(0.7, 1.1);
    let direct = crate::linalg::determinant(&system.matrix(medium, cset, check));
    let fitted = check.powu(p) * poly_eval(&coeffs, check);
    let fit_residual = (direct - fitted).norm() / scale.max(f64::MIN_POSITIVE);
    DeterminantPolynomial { region: system.region, power: p, coeffs, fit_residual, scale }
}

/// Determinant polynomials of every region of the case.
pub fn determinant_polynomials(medium: &Medium, cset: &CanonicalConditionSet) -> Vec<DeterminantPolynomial> {
    regions(cset.case().tag)
        .iter()
        .map(|&r| {
            let sys = RegionLinearSystem::standard(cset.case().tag, r).expect("standard regions are valid");
            determinant_polynomial(&sys, medium, cset)
        })
        .collect()
}

/// `R = 1.5 max |root|` over all regions, at least 1.
pub fn choose_radius(polys: &[DeterminantPolynomial]) -> Result<f64> {
    let mut r = 0.0f64;
    for p in polys {
        if p.is_zero() {
            return Err(Error::SingularSystem { region: p.region.number() });
        }
        r = p.roots().iter().fold(r, |m, z| m.max(z.norm()));
    }
    Ok((1.5 * r).max(1.0))
}

/// Solves `A X = Y` by partial-pivot elimination with one refinement step,
/// after equilibrating rows and columns. Entries of `A` span powers of `k`
/// up to `k^2`, so singularity is judged on the equilibrated matrix.
pub fn solve_unknowns(a: &Matrix6, y: &Vector6, k: C) -> Result<SpectralUnknowns> {
    let near_singular = || Error::NearSingularAtK { k };
    let row_max = |row: &[C; 6]| row.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let rs: [f64; 6] = std::array::from_fn(|i| {
        let m = row_max(&a[i]);
        if m > 0.0 { 1.0 / m } else { 1.0 }
    });
    let cs: [f64; 6] = std::array::from_fn(|j| {
        let m = (0..6).fold(0.0f64, |m, i| m.max(a[i][j].norm() * rs[i]));
        if m > 0.0 { 1.0 / m } else { 1.0 }
    });
    let b: Matrix6 = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] * (rs[i] * cs[j])));
    let rhs: Vector6 = std::array::from_fn(|i| y[i] * rs[i]);
    let lu = Lu::factor(&b).ok_or_else(near_singular)?;
    if lu.determinant().norm() < 1e-13 * row_norm_product(&b) {
        return Err(near_singular());
    }
    let y_norm = norm2(&rhs);
    if y_norm == 0.0 {
        return Ok(SpectralUnknowns::from_array([ZERO; 6]));
    }
    let mut z = lu.solve(&rhs);
    let residual = |z: &Vector6| {
        let bz = mat_vec(&b, z);
        let r: Vector6 = std::array::from_fn(|i| rhs[i] - bz[i]);
        r
    };
    let mut r = residual(&z);
    if norm2(&r) > 1e-13 * y_norm {
        let dz = lu.solve(&r);
        for i in 0..6 {
            z[i] += dz[i];
        }
        r = residual(&z);
    }
    if norm2(&r) > 1e-10 * y_norm {
        return Err(near_singular());
    }
    Ok(SpectralUnknowns::from_array(std::array::from_fn(|j| z[j] * cs[j])))
}
