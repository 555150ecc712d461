//! Parameter domains: a rectangle in chart coordinates minus exclusion sets.
//!
//! Points are addressed by chart coordinates `(s, t)`. The Cartesian chart is
//! `z = s + e t`; the polar chart is `z = exp(s + e t)`, so `s = ln r`.
//! Exclusions are described in the `z` plane.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{eval, Expr};
use crate::kalgebra::{Algebra, KScalar};

pub const DEFAULT_MARGIN: f64 = 1e-3;
pub const GRID_SIDE: usize = 20;
pub const RANDOM_POINTS: usize = 100;
pub const SAMPLE_SEED: u64 = 0x5eed_1e55;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DomainError {
    #[error("domain has no admissible sample points")]
    EmptyDomain,
    #[error("malformed rectangle '{0}'")]
    BadRect(String),
    #[error("unknown chart '{0}'")]
    BadChart(String),
    #[error("unknown exclusion '{0}'")]
    BadExclusion(String),
    #[error("basepoint ({0}, {1}) is not admissible")]
    BadBasepoint(f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Cartesian,
    Polar,
}

impl Chart {
    pub fn to_z(self, algebra: Algebra, s: f64, t: f64) -> KScalar {
        let w = KScalar::new(algebra, s, t);
        match self {
            Chart::Cartesian => w,
            Chart::Polar => w.exp(),
        }
    }

    /// `dz/dw` at chart point `w = s + e t`.
    pub fn jacobian(self, algebra: Algebra, s: f64, t: f64) -> KScalar {
        match self {
            Chart::Cartesian => KScalar::one(algebra),
            Chart::Polar => KScalar::new(algebra, s, t).exp(),
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Cartesian => "cartesian",
            Chart::Polar => "polar",
        })
    }
}

impl FromStr for Chart {
    type Err = DomainError;
    fn from_str(s: &str) -> Result<Self, DomainError> {
        match s.trim() {
            "cartesian" => Ok(Chart::Cartesian),
            "polar" => Ok(Chart::Polar),
            other => Err(DomainError::BadChart(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Rect {
        Rect { u_min, u_max, v_min, v_max }
    }

    pub fn contains(&self, s: f64, t: f64) -> bool {
        s >= self.u_min && s <= self.u_max && t >= self.v_min && t <= self.v_max
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u_min + self.u_max), 0.5 * (self.v_min + self.v_max))
    }

    pub fn shrunk(&self, d: f64) -> Rect {
        Rect::new(self.u_min + d, self.u_max - d, self.v_min + d, self.v_max - d)
    }

    fn is_valid(&self) -> bool {
        [self.u_min, self.u_max, self.v_min, self.v_max].iter().all(|x| x.is_finite())
            && self.u_min < self.u_max
            && self.v_min < self.v_max
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}, {}", self.u_min, self.u_max, self.v_min, self.v_max)
    }
}

impl FromStr for Rect {
    type Err = DomainError;
    fn from_str(src: &str) -> Result<Rect, DomainError> {
        let bad = || DomainError::BadRect(src.to_string());
        let vals: Vec<f64> = src
            .split(',')
            .map(|p| crate::expr::real::RealExpr::parse(p.trim(), &[]).map(|e| e.eval(&[])))
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if vals.len() != 4 {
            return Err(bad());
        }
        let r = Rect::new(vals[0], vals[1], vals[2], vals[3]);
        if r.is_valid() {
            Ok(r)
        } else {
            Err(bad())
        }
    }
}

/// Sets removed from the domain, in `z` coordinates `z = x + e y`.
#[derive(Clone, Debug, PartialEq)]
pub enum Exclusion {
    /// `|z| = 1`
    UnitCircle,
    /// `|x - cx| = |y - cy|`
    NullCone { center: (f64, f64) },
    /// `x = 0`
    AxisU,
    /// `y = 0`
    AxisV,
    /// zeros of an expression; clearance is the size of its value
    NonZero(Expr),
}

impl Exclusion {
    /// Distance-like clearance of `z` from the excluded set.
    pub fn clearance(&self, z: KScalar) -> f64 {
        match self {
            Exclusion::UnitCircle => (z.magnitude() - 1.0).abs(),
            Exclusion::NullCone { center } => {
                let (dx, dy) = (z.re - center.0, z.im - center.1);
                (dx - dy).abs().min((dx + dy).abs()) / std::f64::consts::SQRT_2
            }
            Exclusion::AxisU => z.re.abs(),
            Exclusion::AxisV => z.im.abs(),
            Exclusion::NonZero(e) => match eval(e, z) {
                Ok(v) if v.is_finite() => match z.algebra {
                    Algebra::Complex => v.magnitude(),
                    Algebra::Lorentz => v.modulus(),
                },
                _ => 0.0,
            },
        }
    }

    pub fn parse(src: &str, algebra: Algebra) -> Result<Exclusion, DomainError> {
        let src = src.trim();
        let bad = || DomainError::BadExclusion(src.to_string());
        match src {
            "unit-circle" => return Ok(Exclusion::UnitCircle),
            "axis-u" => return Ok(Exclusion::AxisU),
            "axis-v" => return Ok(Exclusion::AxisV),
            "null-cone" => return Ok(Exclusion::NullCone { center: (0.0, 0.0) }),
            _ => {}
        }
        if let Some(rest) = src.strip_prefix("null-cone") {
            let inner = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let parts: Vec<f64> =
                inner.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
            if parts.len() != 2 {
                return Err(bad());
            }
            return Ok(Exclusion::NullCone { center: (parts[0], parts[1]) });
        }
        if let Some(rest) = src.strip_prefix("nonzero") {
            let inner = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let e = crate::expr::parse(inner, algebra).map_err(|_| bad())?;
            return Ok(Exclusion::NonZero(e));
        }
        Err(bad())
    }
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exclusion::UnitCircle => f.write_str("unit-circle"),
            Exclusion::NullCone { center: (0.0, 0.0) } => f.write_str("null-cone"),
            Exclusion::NullCone { center } => write!(f, "null-cone({}, {})", center.0, center.1),
            Exclusion::AxisU => f.write_str("axis-u"),
            Exclusion::AxisV => f.write_str("axis-v"),
            Exclusion::NonZero(e) => write!(f, "nonzero({e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub chart: Chart,
    pub rect: Rect,
    pub exclusions: Vec<Exclusion>,
    /// Chart coordinates of the basepoint.
    pub basepoint: (f64, f64),
    pub margin: f64,
}

impl DomainSpec {
    /// Cartesian domain over `rect` with basepoint at its center.
    pub fn rect(rect: Rect) -> DomainSpec {
        DomainSpec {
            chart: Chart::Cartesian,
            rect,
            exclusions: Vec::new(),
            basepoint: rect.center(),
            margin: DEFAULT_MARGIN,
        }
    }

    pub fn z_at(&self, algebra: Algebra, s: f64, t: f64) -> KScalar {
        self.chart.to_z(algebra, s, t)
    }

    /// Smallest clearance from the exclusion sets (infinite when there are none).
    pub fn clearance(&self, algebra: Algebra, s: f64, t: f64) -> f64 {
        let z = self.z_at(algebra, s, t);
        self.exclusions.iter().map(|e| e.clearance(z)).fold(f64::INFINITY, f64::min)
    }

    pub fn admits(&self, algebra: Algebra, s: f64, t: f64) -> bool {
        self.rect.contains(s, t) && self.clearance(algebra, s, t) >= self.margin
    }

    pub fn check_basepoint(&self, algebra: Algebra) -> Result<(), DomainError> {
        let (s, t) = self.basepoint;
        if self.admits(algebra, s, t) {
            Ok(())
        } else {
            Err(DomainError::BadBasepoint(s, t))
        }
    }

    /// Cell centers of an `n x n` grid over the rect shrunk by the margin.
    pub fn grid(&self, algebra: Algebra, n: usize) -> Vec<(f64, f64)> {
        let r = self.rect.shrunk(self.margin);
        if !r.is_valid() {
            return Vec::new();
        }
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let s = r.u_min + (r.u_max - r.u_min) * (i as f64 + 0.5) / n as f64;
                let t = r.v_min + (r.v_max - r.v_min) * (j as f64 + 0.5) / n as f64;
                if self.admits(algebra, s, t) {
                    pts.push((s, t));
                }
            }
        }
        pts
    }

    /// `count` uniform points from the shrunk rect, rejecting inadmissible ones.
    pub fn random_points(&self, algebra: Algebra, count: usize, seed: u64) -> Vec<(f64, f64)> {
        let r = self.rect.shrunk(self.margin);
        if !r.is_valid() {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::with_capacity(count);
        let mut tries = 0;
        while pts.len() < count && tries < 100 * count.max(1) {
            tries += 1;
            let s = rng.gen_range(r.u_min..r.u_max);
            let t = rng.gen_range(r.v_min..r.v_max);
            if self.admits(algebra, s, t) {
                pts.push((s, t));
            }
        }
        pts
    }

    /// The standard verification sample: 20x20 grid plus 100 seeded random points.
    pub fn samples(&self, algebra: Algebra) -> Result<Vec<(f64, f64)>, DomainError> {
        let mut pts = self.grid(algebra, GRID_SIDE);
        pts.extend(self.random_points(algebra, RANDOM_POINTS, SAMPLE_SEED));
        if pts.is_empty() {
            Err(DomainError::EmptyDomain)
        } else {
            Ok(pts)
        }
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_parsing() {
        let r: Rect = "0.1, 2, -pi/2, pi/2".parse().unwrap();
        assert_eq!(r.u_min, 0.1);
        assert!((r.v_max - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!("1,0,0,1".parse::<Rect>().is_err());
        assert!("1,2,3".parse::<Rect>().is_err());
    }

    #[test]
    fn exclusions_round_trip() {
        for src in ["unit-circle", "axis-u", "axis-v", "null-cone", "null-cone(1, -0.5)", "nonzero(sin(z))"] {
            let e = Exclusion::parse(src, Algebra::Lorentz).unwrap();
            assert_eq!(e.to_string(), src);
        }
        assert!(Exclusion::parse("moon", Algebra::Complex).is_err());
    }

    #[test]
    fn clearance_values() {
        let c = KScalar::complex(2.0, 0.0);
        assert_eq!(Exclusion::UnitCircle.clearance(c), 1.0);
        let l = KScalar::lorentz(1.0, 1.0);
        assert_eq!(Exclusion::NullCone { center: (0.0, 0.0) }.clearance(l), 0.0);
        let e = Exclusion::parse("nonzero(z)", Algebra::Lorentz).unwrap();
        assert_eq!(e.clearance(KScalar::lorentz(2.0, 2.0)), 0.0);
    }

    #[test]
    fn polar_chart() {
        let z = Chart::Polar.to_z(Algebra::Complex, 1.0, 0.0);
        assert!((z.re - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic_and_masked() {
        let mut d = DomainSpec::rect(Rect::new(-2.0, 2.0, -2.0, 2.0));
        d.exclusions.push(Exclusion::UnitCircle);
        let a = d.samples(Algebra::Complex).unwrap();
        let b = d.samples(Algebra::Complex).unwrap();
        assert_eq!(a, b);
        assert!(a.len() > 300);
        for (s, t) in a {
            assert!(((s * s + t * t).sqrt() - 1.0).abs() >= d.margin);
        }
    }

    #[test]
    fn empty_domain() {
        let mut d = DomainSpec::rect(Rect::new(0.0, 1e-4, 0.0, 1e-4));
        d.margin = 1e-3;
        assert_eq!(d.samples(Algebra::Complex), Err(DomainError::EmptyDomain));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.1, 2.0, 20);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[19], 2.0);
    }
}
