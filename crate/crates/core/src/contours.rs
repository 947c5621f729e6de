//! Sectors of `D = {Re(i k^3) < 0}`, their truncated boundaries, the
//! per-case integration paths and their outward deformation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::{CaseTag, Side};
use crate::quadrature::{integrate, QuadResult, QuadSettings};

/// The three sectors in which `Re(i k^3) < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorId {
    /// `0 < arg k < pi/3`.
    One,
    /// `2pi/3 < arg k < pi`.
    Three,
    /// `-2pi/3 < arg k < -pi/3`.
    Five,
}

impl SectorId {
    pub const ALL: [SectorId; 3] = [SectorId::One, SectorId::Three, SectorId::Five];

    pub fn number(self) -> u8 {
        match self {
            SectorId::One => 1,
            SectorId::Three => 3,
            SectorId::Five => 5,
        }
    }

    /// `(theta_lo, theta_hi)`.
    pub fn angles(self) -> (f64, f64) {
        match self {
            SectorId::One => (0.0, PI / 3.0),
            SectorId::Three => (2.0 * PI / 3.0, PI),
            SectorId::Five => (-2.0 * PI / 3.0, -PI / 3.0),
        }
    }

    /// A point on the bisector at modulus `r`.
    pub fn interior_point(self, r: f64) -> Complex64 {
        let (lo, hi) = self.angles();
        Complex64::from_polar(r, 0.5 * (lo + hi))
    }
}

/// Where a nonzero `k` lies relative to `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Sector(SectorId),
    Boundary,
    Exterior,
}

/// Classifies `k` by the sign of `sin(3 arg k)`.
pub fn sector_of(k: Complex64) -> Result<Location> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::OriginUndefined);
    }
    let theta = k.arg();
    let s = (3.0 * theta).sin();
    if s.abs() <= 1e-14 {
        return Ok(Location::Boundary);
    }
    if s < 0.0 {
        return Ok(Location::Exterior);
    }
    let id = if theta > 0.0 && theta < PI / 3.0 {
        SectorId::One
    } else if theta > 2.0 * PI / 3.0 {
        SectorId::Three
    } else {
        SectorId::Five
    };
    Ok(Location::Sector(id))
}

/// Sectors whose boundaries carry the contour term of one side.
pub fn sectors_for(side: Side, sigma: f64) -> &'static [SectorId] {
    match (side, sigma > 0.0) {
        (Side::Left, true) | (Side::Right, false) => &[SectorId::Five],
        (Side::Left, false) | (Side::Right, true) => &[SectorId::One, SectorId::Three],
    }
}

/// One smooth piece of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// Straight line from `from` to `to`, parameter `s` in `[0, 1]`.
    Line { from: Complex64, to: Complex64 },
    /// `radius * exp(i s)` for `s` from `from_angle` to `to_angle`.
    Arc { radius: f64, from_angle: f64, to_angle: f64 },
    /// `origin + s * direction`, `s >= 0`, `|direction| = 1`. An inbound ray is
    /// traversed from infinity towards `origin`.
    Ray { origin: Complex64, direction: Complex64, inbound: bool },
}

impl Segment {
    pub fn reversed(self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { radius, from_angle, to_angle } => {
                Segment::Arc { radius, from_angle: to_angle, to_angle: from_angle }
            }
            Segment::Ray { origin, direction, inbound } => Segment::Ray { origin, direction, inbound: !inbound },
        }
    }

    /// Point at parameter `s` (for rays, distance from the origin).
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { radius, .. } => Complex64::from_polar(radius, s),
            Segment::Ray { origin, direction, .. } => origin + direction * s,
        }
    }

    /// `dk/ds` at parameter `s`.
    pub fn tangent(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, .. } => Complex64::i() * Complex64::from_polar(radius, s),
            Segment::Ray { direction, .. } => direction,
        }
    }

    /// Start and end points in traversal order (`None` stands for infinity).
    pub fn endpoints(&self) -> (Option<Complex64>, Option<Complex64>) {
        match *self {
            Segment::Line { from, to } => (Some(from), Some(to)),
            Segment::Arc { radius, from_angle, to_angle } => (
                Some(Complex64::from_polar(radius, from_angle)),
                Some(Complex64::from_polar(radius, to_angle)),
            ),
            Segment::Ray { origin, inbound: true, .. } => (None, Some(origin)),
            Segment::Ray { origin, inbound: false, .. } => (Some(origin), None),
        }
    }

    /// Integral of `f(k) dk` along the segment in traversal order. Rays are
    /// cut at parameter `s_max`.
    pub fn integrate<F: Fn(Complex64) -> Complex64>(
        &self,
        f: F,
        s_max: f64,
        settings: &QuadSettings,
    ) -> Result<QuadResult> {
        let g = |s: f64| f(self.point(s)) * self.tangent(s);
        match *self {
            Segment::Line { .. } => integrate(g, 0.0, 1.0, settings),
            Segment::Arc { from_angle, to_angle, .. } => integrate(g, from_angle, to_angle, settings),
            Segment::Ray { inbound, .. } => {
                let r = integrate(g, 0.0, s_max, settings)?;
                Ok(if inbound { r.scale(Complex64::new(-1.0, 0.0)) } else { r })
            }
        }
    }
}

/// Positively oriented boundary of one truncated sector, possibly deformed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryComponent {
    pub sector: SectorId,
    pub segments: Vec<Segment>,
}

/// Union of sector boundaries with a scalar orientation flag.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub components: Vec<BoundaryComponent>,
    /// `+1` or `-1`; multiplies every integral over the path.
    pub sign: f64,
}

impl ContourPath {
    pub fn segments(&self) -> impl Iterator<Item = (SectorId, &Segment)> {
        self.components.iter().flat_map(|c| c.segments.iter().map(move |s| (c.sector, s)))
    }

    pub fn reversed(&self) -> ContourPath {
        ContourPath {
            components: self
                .components
                .iter()
                .map(|c| BoundaryComponent {
                    sector: c.sector,
                    segments: c.segments.iter().rev().map(|s| s.reversed()).collect(),
                })
                .collect(),
            sign: self.sign,
        }
    }

    /// Integral of `f` over the whole path including the orientation flag,
    /// with rays cut at a common parameter.
    pub fn integrate<F: Fn(Complex64) -> Complex64>(
        &self,
        f: F,
        s_max: f64,
        settings: &QuadSettings,
    ) -> Result<QuadResult> {
        let mut acc = QuadResult::ZERO;
        for (_, seg) in self.segments() {
            acc = acc.combine(seg.integrate(&f, s_max, settings)?);
        }
        Ok(acc.scale(Complex64::new(self.sign, 0.0)))
    }
}

/// `d D_R^(r)`: inbound ray along `theta_hi`, clockwise arc of radius `r`,
/// outbound ray along `theta_lo`. The sector lies to the left.
pub fn sector_boundary(sector: SectorId, radius: f64) -> BoundaryComponent {
    let (lo, hi) = sector.angles();
    BoundaryComponent {
        sector,
        segments: vec![
            Segment::Ray {
                origin: Complex64::from_polar(radius, hi),
                direction: Complex64::from_polar(1.0, hi),
                inbound: true,
            },
            Segment::Arc { radius, from_angle: hi, to_angle: lo },
            Segment::Ray {
                origin: Complex64::from_polar(radius, lo),
                direction: Complex64::from_polar(1.0, lo),
                inbound: false,
            },
        ],
    }
}

fn path_over(sectors: &[SectorId], radius: f64, sign: f64) -> ContourPath {
    ContourPath { components: sectors.iter().map(|&s| sector_boundary(s, radius)).collect(), sign }
}

/// The paths carrying the contour terms of sides 1 and 2.
///
/// A path through the lower half-plane carries the flag `-1`, one through
/// the upper half-plane `+1`.
pub fn gamma_paths(case: CaseTag, radius: f64) -> (ContourPath, ContourPath) {
    let lower = [SectorId::Five];
    let upper = [SectorId::One, SectorId::Three];
    match case {
        CaseTag::PosNeg => (path_over(&lower, radius, -1.0), path_over(&lower, radius, -1.0)),
        CaseTag::PosPos => (path_over(&lower, radius, -1.0), path_over(&upper, radius, 1.0)),
        CaseTag::NegPos => (path_over(&upper, radius, 1.0), path_over(&upper, radius, 1.0)),
    }
}

/// Rotates every boundary ray by `delta` away from its sector, after an
/// optional straight run to modulus `knee` along the original direction.
pub fn deform_with_knee(path: &ContourPath, delta: f64, t: f64, knee: f64) -> Result<ContourPath> {
    if t <= 0.0 {
        return Err(Error::InvalidDeformation(
            "no deformation at t = 0; the cubic factor gives no decay".into(),
        ));
    }
    if !(0.0..PI / 12.0).contains(&delta) {
        return Err(Error::InvalidDeformation(format!("angle {delta} outside [0, pi/12)")));
    }
    if delta == 0.0 {
        return Ok(path.clone());
    }
    let components = path
        .components
        .iter()
        .map(|c| {
            let (lo, hi) = c.sector.angles();
            let mut segs = Vec::with_capacity(c.segments.len() + 2);
            for seg in &c.segments {
                match *seg {
                    Segment::Ray { origin, direction, inbound } => {
                        let theta = direction.arg();
                        let away = if (theta - hi).abs() < 1e-9 || (theta - hi).abs() > 2.0 * PI - 1e-9 {
                            delta
                        } else {
                            debug_assert!((theta - lo).abs() < 1e-9);
                            -delta
                        };
                        let k_abs = origin.norm().max(knee);
                        let bend = Complex64::from_polar(k_abs, theta);
                        let rotated = Segment::Ray {
                            origin: bend,
                            direction: Complex64::from_polar(1.0, theta + away),
                            inbound,
                        };
                        let straight = Segment::Line { from: origin, to: bend };
                        if k_abs > origin.norm() {
                            if inbound {
                                segs.push(rotated);
                                segs.push(straight.reversed());
                            } else {
                                segs.push(straight);
                                segs.push(rotated);
                            }
                        } else {
                            segs.push(rotated);
                        }
                    }
                    other => segs.push(other),
                }
            }
            BoundaryComponent { sector: c.sector, segments: segs }
        })
        .collect();
    Ok(ContourPath { components, sign: path.sign })
}

/// Rotates every boundary ray by `delta` into the region `Re(i k^3) > 0`.
pub fn deform_outward(path: &ContourPath, delta: f64, t: f64) -> Result<ContourPath> {
    deform_with_knee(path, delta, t, 0.0)
}

/// Rotates every boundary ray by `delta` into its sector (used by the
/// diagnostic that integrates `exp(i k^3 (T - t))` terms).
pub fn deform_inward(path: &ContourPath, delta: f64) -> Result<ContourPath> {
    if !(0.0..PI / 12.0).contains(&delta) {
        return Err(Error::InvalidDeformation(format!("angle {delta} outside [0, pi/12)")));
    }
    let components = path
        .components
        .iter()
        .map(|c| {
            let (_, hi) = c.sector.angles();
            let segments = c
                .segments
                .iter()
                .map(|seg| match *seg {
                    Segment::Ray { origin, direction, inbound } => {
                        let theta = direction.arg();
                        let into = if (theta - hi).abs() < 1e-9 { -delta } else { delta };
                        Segment::Ray { origin, direction: Complex64::from_polar(1.0, theta + into), inbound }
                    }
                    other => other,
                })
                .collect();
            BoundaryComponent { sector: c.sector, segments }
        })
        .collect();
    Ok(ContourPath { components, sign: path.sign })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re_ik3(k: Complex64) -> f64 {
        (Complex64::i() * k * k * k).re
    }

    #[test]
    fn sector_examples() {
        assert_eq!(sector_of(Complex64::from_polar(1.0, PI / 6.0)).unwrap(), Location::Sector(SectorId::One));
        assert_eq!(sector_of(Complex64::new(1.0, 0.0)).unwrap(), Location::Boundary);
        assert_eq!(sector_of(Complex64::new(0.0, -1.0)).unwrap(), Location::Sector(SectorId::Five));
        assert_eq!(sector_of(Complex64::from_polar(2.0, 5.0 * PI / 6.0)).unwrap(), Location::Sector(SectorId::Three));
        assert_eq!(sector_of(Complex64::new(0.0, 1.0)).unwrap(), Location::Exterior);
        assert_eq!(sector_of(Complex64::new(0.0, 0.0)), Err(Error::OriginUndefined));
    }

    #[test]
    fn sectors_have_decay() {
        for s in SectorId::ALL {
            assert!(re_ik3(s.interior_point(1.7)) < 0.0);
        }
    }

    #[test]
    fn boundaries_are_continuous_and_positively_oriented() {
        for s in SectorId::ALL {
            let b = sector_boundary(s, 2.0);
            for w in b.segments.windows(2) {
                let end = w[0].endpoints().1.unwrap();
                let start = w[1].endpoints().0.unwrap();
                assert!((end - start).norm() < 1e-14);
            }
            // Left normal of the outbound ray points into the sector.
            if let Segment::Ray { origin, direction, .. } = b.segments[2] {
                let probe = origin + direction * 3.0 + direction * Complex64::i() * 0.1;
                assert!(re_ik3(probe) < 0.0);
                let outside = origin + direction * 3.0 - direction * Complex64::i() * 0.1;
                assert!(re_ik3(outside) > 0.0);
            }
        }
    }

    #[test]
    fn posneg_path_shape() {
        let (g1, g2) = gamma_paths(CaseTag::PosNeg, 2.0);
        assert_eq!(g1, g2);
        assert_eq!(g1.sign, -1.0);
        assert_eq!(g1.components.len(), 1);
        let (_, g2) = gamma_paths(CaseTag::PosPos, 1.0);
        assert_eq!(g2.components.len(), 2);
        assert_eq!(g2.sign, 1.0);
        let (a, b) = gamma_paths(CaseTag::NegPos, 1.0);
        assert_eq!(a, b);
    }

    #[test]
    fn deformation_moves_rays_outside() {
        let (g1, g2) = gamma_paths(CaseTag::PosPos, 1.5);
        for path in [g1, g2] {
            let d = deform_outward(&path, PI / 24.0, 0.3).unwrap();
            for (_, seg) in d.segments() {
                if let Segment::Ray { .. } = seg {
                    for s in [1.0, 10.0, 100.0] {
                        assert!(re_ik3(seg.point(s)) > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn deformation_edge_cases() {
        let (g, _) = gamma_paths(CaseTag::PosNeg, 1.0);
        assert_eq!(deform_outward(&g, 0.0, 0.5).unwrap(), g);
        assert!(matches!(deform_outward(&g, 0.1, 0.0), Err(Error::InvalidDeformation(_))));
        assert!(matches!(deform_outward(&g, 1.0, 0.5), Err(Error::InvalidDeformation(_))));
    }

    #[test]
    fn knee_keeps_path_continuous() {
        let (_, g) = gamma_paths(CaseTag::PosPos, 1.0);
        let d = deform_with_knee(&g, PI / 24.0, 0.1, 4.0).unwrap();
        for c in &d.components {
            for w in c.segments.windows(2) {
                let end = w[0].endpoints().1.unwrap();
                let start = w[1].endpoints().0.unwrap();
                assert!((end - start).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn reversal_negates_integral() {
        let (g, _) = gamma_paths(CaseTag::PosNeg, 1.0);
        let d = deform_outward(&g, PI / 24.0, 0.5).unwrap();
        let f = |k: Complex64| (-Complex64::i() * k * k * k * 0.5).exp() * (k * 0.3).cos();
        let s = QuadSettings::default();
        let a = d.integrate(f, 8.0, &s).unwrap();
        let b = d.reversed().integrate(f, 8.0, &s).unwrap();
        assert!((a.value + b.value).norm() < 1e-12);
    }
}
