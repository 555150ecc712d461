//! Enneper data `(L_z, P_z, h_z)` and the constructions built on them.
//!
//! Spacelike surfaces use complex data and the layout
//! `psi = (Re L + Re P, Im L - Im P, h)`; timelike surfaces use Lorentz data
//! and `psi = (h, Re L - Re P, Im L + Im P)`.

// Negated comparisons below are deliberate: a NaN residual must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod immersion;
mod recover;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

pub use immersion::{layout, Backend, Immersion, PATH_SAMPLES};
pub use recover::{recover, RecoveredData, RecoveredSample};

use crate::domain::{DomainError, DomainSpec, Rect};
use crate::expr::{self, eval, poly, Expr, ParseError};
use crate::kalgebra::{Algebra, ArithError, KScalar};
use crate::numfmt::g12;
use crate::quadrature::NonConvergence;

pub const TOL_CONDITION_A: f64 = 1e-10;
pub const TOL_MARGIN: f64 = 1e-8;
pub const TOL_CLOSED_FORM: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EnneperError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{character} data must use {expected} constants ({field})")]
    WrongAlgebra { character: CausalCharacter, expected: Algebra, field: &'static str },
    #[error("evaluation failed at ({s}, {t}): {source}")]
    EvalAt { s: f64, t: f64, source: ArithError },
    #[error("no closed form available")]
    MissingClosedForm,
    #[error("path leaves the domain near ({s}, {t})")]
    PathLeavesDomain { s: f64, t: f64 },
    #[error(transparent)]
    QuadratureNonConvergence(#[from] NonConvergence),
    #[error("condition violated: {0}")]
    ConditionViolation(String),
    #[error("scale factor is degenerate at ({s}, {t}): f*conj(f) = {value:e}")]
    ScalarDegenerate { s: f64, t: f64, value: f64 },
    #[error("family index must be at least 2, got {0}")]
    BadFamilyIndex(i64),
    #[error("degenerate sample at ({s}, {t}): induced metric has rank < 2")]
    DegenerateSample { s: f64, t: f64 },
    #[error("malformed harmonic part '{0}', expected re(...) or im(...)")]
    BadHarmonic(String),
    #[error("unknown causal character '{0}'")]
    BadCharacter(String),
}

pub(crate) fn at(s: f64, t: f64) -> impl Fn(ArithError) -> EnneperError {
    move |source| EnneperError::EvalAt { s, t, source }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
}

impl CausalCharacter {
    pub fn algebra(self) -> Algebra {
        match self {
            CausalCharacter::Spacelike => Algebra::Complex,
            CausalCharacter::Timelike => Algebra::Lorentz,
        }
    }

    /// `+1` for spacelike, `-1` for timelike.
    pub fn epsilon(self) -> f64 {
        match self {
            CausalCharacter::Spacelike => 1.0,
            CausalCharacter::Timelike => -1.0,
        }
    }
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
        })
    }
}

impl FromStr for CausalCharacter {
    type Err = EnneperError;
    fn from_str(s: &str) -> Result<Self, EnneperError> {
        match s.trim() {
            "spacelike" => Ok(CausalCharacter::Spacelike),
            "timelike" => Ok(CausalCharacter::Timelike),
            other => Err(EnneperError::BadCharacter(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// A harmonic function stored as `Re H` or `Im H` of a holomorphic `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Harmonic {
    pub part: Part,
    pub antecedent: Expr,
}

impl Harmonic {
    pub fn parse(src: &str, algebra: Algebra) -> Result<Harmonic, EnneperError> {
        let src = src.trim();
        let bad = || EnneperError::BadHarmonic(src.to_string());
        let (part, rest) = if let Some(r) = src.strip_prefix("re") {
            (Part::Re, r)
        } else if let Some(r) = src.strip_prefix("im") {
            (Part::Im, r)
        } else {
            return Err(bad());
        };
        let inner = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        Ok(Harmonic { part, antecedent: expr::parse(inner, algebra)? })
    }

    pub fn eval(&self, z: KScalar) -> Result<f64, ArithError> {
        let v = eval(&self.antecedent, z)?;
        Ok(match self.part {
            Part::Re => v.re,
            Part::Im => v.im,
        })
    }

    /// `h_z`: `H'/2` for the real part; `-i H'/2` or `tau H'/2` for the imaginary part.
    pub fn z_derivative(&self, algebra: Algebra) -> Expr {
        let half = expr::div(self.antecedent.deriv(algebra), Expr::real(algebra, 2.0));
        match (self.part, algebra) {
            (Part::Re, _) => half,
            (Part::Im, Algebra::Complex) => expr::mul(Expr::Const(KScalar::complex(0.0, -1.0)), half),
            (Part::Im, Algebra::Lorentz) => expr::mul(Expr::unit(algebra), half),
        }
    }
}

impl fmt::Display for Harmonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.part {
            Part::Re => "re",
            Part::Im => "im",
        };
        write!(f, "{p}({})", self.antecedent)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub l: Expr,
    pub p: Expr,
    pub h: Harmonic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnneperData {
    pub name: String,
    pub character: CausalCharacter,
    pub lz: Expr,
    pub pz: Expr,
    pub hz: Expr,
    pub closed: Option<ClosedForm>,
    pub domain: DomainSpec,
}

impl EnneperData {
    pub fn new(
        name: impl Into<String>,
        character: CausalCharacter,
        lz: Expr,
        pz: Expr,
        hz: Expr,
        domain: DomainSpec,
    ) -> Result<EnneperData, EnneperError> {
        let data = EnneperData { name: name.into(), character, lz, pz, hz, closed: None, domain };
        data.check_algebra()?;
        Ok(data)
    }

    /// Parses the three data expressions in the algebra of `character`.
    pub fn parse(
        name: impl Into<String>,
        character: CausalCharacter,
        lz: &str,
        pz: &str,
        hz: &str,
        domain: DomainSpec,
    ) -> Result<EnneperData, EnneperError> {
        let alg = character.algebra();
        EnneperData::new(name, character, expr::parse(lz, alg)?, expr::parse(pz, alg)?, expr::parse(hz, alg)?, domain)
    }

    pub fn with_closed_form(mut self, closed: ClosedForm) -> Result<EnneperData, EnneperError> {
        self.closed = Some(closed);
        self.check_algebra()?;
        Ok(self)
    }

    pub fn algebra(&self) -> Algebra {
        self.character.algebra()
    }

    fn check_algebra(&self) -> Result<(), EnneperError> {
        let alg = self.algebra();
        let mut fields: Vec<(&'static str, &Expr)> = vec![("Lz", &self.lz), ("Pz", &self.pz), ("hz", &self.hz)];
        if let Some(c) = &self.closed {
            fields.extend([("L", &c.l), ("P", &c.p), ("h", &c.h.antecedent)]);
        }
        for (field, e) in fields {
            if !e.uses_only(alg) {
                return Err(EnneperError::WrongAlgebra { character: self.character, expected: alg, field });
            }
        }
        Ok(())
    }

    /// `(L_z, P_z, h_z)` at chart point `(s, t)`.
    pub fn eval_at(&self, s: f64, t: f64) -> Result<[KScalar; 3], EnneperError> {
        let z = self.domain.z_at(self.algebra(), s, t);
        let f = at(s, t);
        Ok([eval(&self.lz, z).map_err(&f)?, eval(&self.pz, z).map_err(&f)?, eval(&self.hz, z).map_err(&f)?])
    }
}

/// Relative residual of `h_z^2 = L_z P_z`.
pub fn condition_a(lz: KScalar, pz: KScalar, hz: KScalar) -> f64 {
    let lp = lz * pz;
    let h2 = hz * hz;
    (h2 - lp).magnitude() / (1.0 + h2.magnitude() + lp.magnitude())
}

/// Spacelike: `|L_z| - |P_z|`. Timelike: `2 h_z conj(h_z) + L_z conj(L_z) + P_z conj(P_z)`.
pub fn condition_b(character: CausalCharacter, lz: KScalar, pz: KScalar, hz: KScalar) -> f64 {
    match character {
        CausalCharacter::Spacelike => lz.modulus() - pz.modulus(),
        CausalCharacter::Timelike => 2.0 * hz.norm_sq() + lz.norm_sq() + pz.norm_sq(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub name: String,
    pub character: CausalCharacter,
    pub samples: usize,
    pub max_condition_a: f64,
    /// Smallest `|condition B|` over the samples.
    pub min_condition_b: f64,
    /// Sign of condition B when it is constant over the samples.
    pub condition_b_sign: Option<f64>,
    /// Largest mismatch between derivatives of the closed form and the data.
    pub closed_form_residual: Option<f64>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.max_condition_a < TOL_CONDITION_A) {
            out.push(format!("condition A residual {:e} >= {:e}", self.max_condition_a, TOL_CONDITION_A));
        }
        if !(self.min_condition_b > TOL_MARGIN) {
            out.push(format!("condition B margin {:e} <= {:e}", self.min_condition_b, TOL_MARGIN));
        }
        if self.condition_b_sign.is_none() {
            out.push("condition B changes sign".to_string());
        }
        if let Some(r) = self.closed_form_residual {
            if !(r < TOL_CLOSED_FORM) {
                out.push(format!("closed form disagrees with data: {r:e}"));
            }
        }
        out
    }

    /// The `[conditions]` block of a report.
    pub fn conditions_block(&self) -> String {
        let sign = match self.condition_b_sign {
            Some(x) if x > 0.0 => "+1",
            Some(_) => "-1",
            None => "mixed",
        };
        let mut o = String::from("[conditions]\n");
        let _ = writeln!(o, "max_condition_a = {}", g12(self.max_condition_a));
        let _ = writeln!(o, "min_condition_b = {}", g12(self.min_condition_b));
        let _ = writeln!(o, "condition_b_sign = {sign}");
        if let Some(r) = self.closed_form_residual {
            let _ = writeln!(o, "max_closed_form_residual = {}", g12(r));
        }
        let _ = writeln!(o, "pass = {}", self.pass);
        o
    }

    /// Stand-alone report: surface, conditions and verdict blocks.
    pub fn to_text(&self) -> String {
        format!(
            "[surface]\nname = {}\ncharacter = {}\nsamples = {}\n\n{}\n[verdict]\npass = {}\n",
            self.name,
            self.character,
            self.samples,
            self.conditions_block(),
            self.pass
        )
    }
}

struct PointCheck {
    a: f64,
    b: f64,
    closed: Option<f64>,
}

fn rel(a: KScalar, b: KScalar) -> f64 {
    (a - b).magnitude() / (1.0 + a.magnitude().max(b.magnitude()))
}

/// Checks both conditions (and closed-form consistency) on the standard sample.
pub fn validate(data: &EnneperData) -> Result<ValidationReport, EnneperError> {
    let pts = data.domain.samples(data.algebra())?;
    validate_at(data, &pts)
}

pub fn validate_at(data: &EnneperData, pts: &[(f64, f64)]) -> Result<ValidationReport, EnneperError> {
    if pts.is_empty() {
        return Err(DomainError::EmptyDomain.into());
    }
    let alg = data.algebra();
    let derivs = data.closed.as_ref().map(|c| [c.l.deriv(alg), c.p.deriv(alg), c.h.z_derivative(alg)]);
    let checks: Vec<PointCheck> = pts
        .par_iter()
        .map(|&(s, t)| {
            let [lz, pz, hz] = data.eval_at(s, t)?;
            let closed = match &derivs {
                Some(d) => {
                    let z = data.domain.z_at(alg, s, t);
                    let f = at(s, t);
                    let vals = [eval(&d[0], z).map_err(&f)?, eval(&d[1], z).map_err(&f)?, eval(&d[2], z).map_err(&f)?];
                    Some(rel(vals[0], lz).max(rel(vals[1], pz)).max(rel(vals[2], hz)))
                }
                None => None,
            };
            Ok(PointCheck { a: condition_a(lz, pz, hz), b: condition_b(data.character, lz, pz, hz), closed })
        })
        .collect::<Result<_, EnneperError>>()?;

    let max_condition_a = checks.iter().map(|c| c.a).fold(0.0, f64::max);
    let min_condition_b = checks.iter().map(|c| c.b.abs()).fold(f64::INFINITY, f64::min);
    let positive = checks.iter().all(|c| c.b > 0.0);
    let negative = checks.iter().all(|c| c.b < 0.0);
    let condition_b_sign = if positive {
        Some(1.0)
    } else if negative {
        Some(-1.0)
    } else {
        None
    };
    let closed_form_residual = derivs.map(|_| checks.iter().filter_map(|c| c.closed).fold(0.0, f64::max));
    let mut report = ValidationReport {
        name: data.name.clone(),
        character: data.character,
        samples: checks.len(),
        max_condition_a,
        min_condition_b,
        condition_b_sign,
        closed_form_residual,
        pass: false,
    };
    report.pass = report.failures().is_empty();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    pub character: CausalCharacter,
    pub phi: [Expr; 3],
    pub domain: DomainSpec,
}

impl WeierstrassData {
    pub fn eval_at(&self, s: f64, t: f64) -> Result<[KScalar; 3], EnneperError> {
        let z = self.domain.z_at(self.character.algebra(), s, t);
        let f = at(s, t);
        Ok([eval(&self.phi[0], z).map_err(&f)?, eval(&self.phi[1], z).map_err(&f)?, eval(&self.phi[2], z).map_err(&f)?])
    }
}

/// `phi_1^2 + phi_2^2 - phi_3^2`, relative to the size of the terms.
pub fn weierstrass_null(phi: [KScalar; 3]) -> f64 {
    let sq = phi.map(|p| p * p);
    let r = sq[0] + sq[1] - sq[2];
    r.magnitude() / (1.0 + sq.iter().map(|s| s.magnitude()).sum::<f64>())
}

/// `phi_1 conj(phi_1) + phi_2 conj(phi_2) - phi_3 conj(phi_3)`.
pub fn weierstrass_norm(phi: [KScalar; 3]) -> f64 {
    phi[0].norm_sq() + phi[1].norm_sq() - phi[2].norm_sq()
}

pub fn to_weierstrass(data: &EnneperData) -> WeierstrassData {
    let alg = data.algebra();
    let two = || Expr::real(alg, 2.0);
    let phi = match data.character {
        CausalCharacter::Spacelike => [
            expr::div(expr::add(data.lz.clone(), data.pz.clone()), two()),
            expr::div(expr::mul(Expr::unit(alg), expr::sub(data.pz.clone(), data.lz.clone())), two()),
            data.hz.clone(),
        ],
        CausalCharacter::Timelike => [
            data.hz.clone(),
            expr::div(expr::sub(data.lz.clone(), data.pz.clone()), two()),
            expr::div(expr::mul(Expr::unit(alg), expr::add(data.lz.clone(), data.pz.clone())), two()),
        ],
    };
    WeierstrassData { character: data.character, phi, domain: data.domain.clone() }
}

/// Inverse of [`to_weierstrass`]; rejects data violating `phi_1^2 + phi_2^2 = phi_3^2`.
pub fn from_weierstrass(w: &WeierstrassData, name: &str) -> Result<EnneperData, EnneperError> {
    let alg = w.character.algebra();
    for (s, t) in w.domain.samples(alg)? {
        let r = weierstrass_null(w.eval_at(s, t)?);
        if !(r < TOL_CONDITION_A) {
            return Err(EnneperError::ConditionViolation(format!("phi1^2+phi2^2-phi3^2 = {r:e} at ({s}, {t})")));
        }
    }
    let [p1, p2, p3] = w.phi.clone();
    let e = || Expr::unit(alg);
    let (lz, pz, hz) = match w.character {
        CausalCharacter::Spacelike => {
            (expr::add(p1.clone(), expr::mul(e(), p2.clone())), expr::sub(p1, expr::mul(e(), p2)), p3)
        }
        CausalCharacter::Timelike => {
            (expr::add(p2.clone(), expr::mul(e(), p3.clone())), expr::add(expr::neg(p2), expr::mul(e(), p3)), p1)
        }
    };
    EnneperData::new(name, w.character, lz, pz, hz, w.domain.clone())
}

/// `f * D = (f L_z, f P_z, f h_z)`. Fails if `f conj(f)` comes within the
/// margin of zero on the domain sample. The result has no closed form.
pub fn scale_transform(data: &EnneperData, f: &Expr, name: &str) -> Result<EnneperData, EnneperError> {
    let alg = data.algebra();
    if !f.uses_only(alg) {
        return Err(EnneperError::WrongAlgebra { character: data.character, expected: alg, field: "f" });
    }
    for (s, t) in data.domain.samples(alg)? {
        let z = data.domain.z_at(alg, s, t);
        let value = eval(f, z).map(|v| v.norm_sq()).unwrap_or(0.0);
        if !(value.abs() > TOL_MARGIN) {
            return Err(EnneperError::ScalarDegenerate { s, t, value });
        }
    }
    let scaled = |e: &Expr| expr::mul(f.clone(), e.clone());
    EnneperData::new(name, data.character, scaled(&data.lz), scaled(&data.pz), scaled(&data.hz), data.domain.clone())
}

/// Symbolic check that `(f h)^2 - (f L)(f P) - f^2 (h^2 - L P)` normalises to zero.
pub fn scale_preserves_condition_a(data: &EnneperData, f: &Expr) -> bool {
    let m = |a: &Expr, b: &Expr| Expr::Mul(Box::new(a.clone()), Box::new(b.clone()));
    let s = |a: Expr, b: Expr| Expr::Sub(Box::new(a), Box::new(b));
    let (fl, fp, fh) = (m(f, &data.lz), m(f, &data.pz), m(f, &data.hz));
    let lhs = s(m(&fh, &fh), m(&fl, &fp));
    let rhs = m(&m(f, f), &s(m(&data.hz, &data.hz), m(&data.lz, &data.pz)));
    poly::identical(&lhs, &rhs, data.algebra(), 1e-12)
}

/// The epicycloid family member with index `n`: rolling radius `r = 1/(n+1)`
/// on a fixed circle of radius `R = 2/(n^2-1)`.
#[derive(Clone, Debug)]
pub struct Epicycloid {
    pub n: i64,
    pub fixed_radius: Ratio<i64>,
    pub rolling_radius: Ratio<i64>,
    pub data: EnneperData,
}

fn times_z(k: i64) -> String {
    if k == 1 {
        "z".to_string()
    } else {
        format!("{k}*z")
    }
}

pub fn epicycloid_family(n: i64) -> Result<Epicycloid, EnneperError> {
    if n < 2 {
        return Err(EnneperError::BadFamilyIndex(n));
    }
    let alg = Algebra::Lorentz;
    let (a, b) = (n - 1, n + 1);
    let (za, zb, zn) = (times_z(a), times_z(b), times_z(n));
    let lz = format!("sin(z)*(1+tau*sin({zn}))");
    let pz = format!("sin(z)*(1-tau*sin({zn}))");
    let hz = format!("sin(z)*cos({zn})");
    let bracket = format!("sin({za})/{}-sin({zb})/{}", 2 * a, 2 * b);
    let l = format!("-cos(z)+tau*({bracket})");
    let p = format!("-cos(z)-tau*({bracket})");
    let h = format!("re(cos({za})/{a}-cos({zb})/{b})");

    let q = std::f64::consts::PI / (4 * n) as f64;
    let domain = DomainSpec::rect(Rect::new(-q, q, q, 3.0 * q));
    let closed = ClosedForm { l: expr::parse(&l, alg)?, p: expr::parse(&p, alg)?, h: Harmonic::parse(&h, alg)? };
    let data = EnneperData::parse(format!("epicycloid-{n}"), CausalCharacter::Timelike, &lz, &pz, &hz, domain)?
        .with_closed_form(closed)?;
    Ok(Epicycloid { n, fixed_radius: Ratio::new(2, n * n - 1), rolling_radius: Ratio::new(1, n + 1), data })
}

impl Epicycloid {
    /// The boundary epicycloid `alpha_n(t) = psi_n(0, t/(n-1))`, in the plane `x3 = 0`.
    pub fn alpha(&self, t: f64) -> [f64; 3] {
        let (a, b) = ((self.n - 1) as f64, (self.n + 1) as f64);
        let k = b / a;
        [(t).cos() / a - (k * t).cos() / b, (t).sin() / a - (k * t).sin() / b, 0.0]
    }

    /// The same curve from the rolling-circle construction with radii `R`, `r`.
    pub fn rolling_curve(&self, t: f64) -> [f64; 3] {
        let r_fixed = *self.fixed_radius.numer() as f64 / *self.fixed_radius.denom() as f64;
        let r = *self.rolling_radius.numer() as f64 / *self.rolling_radius.denom() as f64;
        let k = (r_fixed + r) / r;
        [(r_fixed + r) * t.cos() - r * (k * t).cos(), (r_fixed + r) * t.sin() - r * (k * t).sin(), 0.0]
    }

    /// `nephroid` for `R = 2r`, `cardioid` for `R = r`.
    pub fn curve_kind(&self) -> &'static str {
        if self.fixed_radius == self.rolling_radius * 2 {
            "nephroid"
        } else if self.fixed_radius == self.rolling_radius {
            "cardioid"
        } else {
            "epicycloid"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Chart, Exclusion};

    fn catenoid() -> EnneperData {
        let mut d = DomainSpec::rect(Rect::new(0.1, 2.0, -3.0, 3.0));
        d.chart = Chart::Polar;
        d.exclusions.push(Exclusion::UnitCircle);
        d.basepoint = (1.0, 0.0);
        EnneperData::parse("c", CausalCharacter::Spacelike, "1/2", "1/(2*z^2)", "-1/(2*z)", d).unwrap()
    }

    #[test]
    fn catenoid_margin_matches_formula() {
        let data = catenoid();
        let r = validate(&data).unwrap();
        assert!(r.pass, "{:?}", r.failures());
        for (s, t) in [(0.3, 1.0), (1.5, -2.0)] {
            let [lz, pz, hz] = data.eval_at(s, t).unwrap();
            let m = (s * 2.0f64).exp();
            assert!((condition_b(data.character, lz, pz, hz) - (m - 1.0) / (2.0 * m)).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_spacelike_fails() {
        let d = DomainSpec::rect(Rect::new(-1.0, 1.0, -1.0, 1.0));
        let data = EnneperData::parse("x", CausalCharacter::Spacelike, "1/2", "1/2", "1/2", d).unwrap();
        let r = validate(&data).unwrap();
        assert!(!r.pass);
        assert_eq!(r.min_condition_b, 0.0);
    }

    #[test]
    fn lorentzian_catenoid_condition_b_is_cosh_squared() {
        let d = DomainSpec::rect(Rect::new(-1.5, 1.5, -1.5, 1.5));
        let data = EnneperData::parse(
            "lc",
            CausalCharacter::Timelike,
            "(sinh(z)-cosh(z))/2",
            "-(sinh(z)+cosh(z))/2",
            "1/2",
            d,
        )
        .unwrap();
        assert!(validate(&data).unwrap().pass);
        for (u, v) in [(0.3, 0.2), (-1.1, 0.9)] {
            let [lz, pz, hz] = data.eval_at(u, v).unwrap();
            let b = condition_b(data.character, lz, pz, hz);
            assert!((b - u.cosh().powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn algebra_mixing_rejected() {
        let d = DomainSpec::rect(Rect::new(-1.0, 1.0, -1.0, 1.0));
        let e = EnneperData::parse("x", CausalCharacter::Timelike, "i", "1", "1", d);
        assert!(matches!(e, Err(EnneperError::Parse(_))));
    }

    #[test]
    fn weierstrass_conversion() {
        let data = catenoid();
        let w = to_weierstrass(&data);
        assert_eq!(w.phi[2].to_string(), "-1/(2*z)");
        for (s, t) in data.domain.random_points(Algebra::Complex, 20, 7) {
            let phi = w.eval_at(s, t).unwrap();
            assert!(weierstrass_null(phi) < 1e-12);
            assert!(weierstrass_norm(phi) > 0.0);
        }
        let back = from_weierstrass(&w, "c").unwrap();
        for (s, t) in data.domain.random_points(Algebra::Complex, 20, 8) {
            let a = data.eval_at(s, t).unwrap();
            let b = back.eval_at(s, t).unwrap();
            for k in 0..3 {
                assert!((a[k] - b[k]).magnitude() < 1e-12);
            }
        }
    }

    #[test]
    fn from_weierstrass_rejects_non_null() {
        let d = DomainSpec::rect(Rect::new(-1.0, 1.0, -1.0, 1.0));
        let alg = Algebra::Complex;
        let w = WeierstrassData {
            character: CausalCharacter::Spacelike,
            phi: [Expr::real(alg, 1.0), Expr::real(alg, 1.0), Expr::real(alg, 1.0)],
            domain: d,
        };
        assert!(matches!(from_weierstrass(&w, "x"), Err(EnneperError::ConditionViolation(_))));
    }

    #[test]
    fn zero_scale_is_degenerate() {
        let data = catenoid();
        let f = expr::parse("z-z", Algebra::Complex).unwrap();
        assert!(matches!(scale_transform(&data, &f, "x"), Err(EnneperError::ScalarDegenerate { .. })));
        let one = Expr::real(Algebra::Complex, 1.0);
        let same = scale_transform(&data, &one, "c").unwrap();
        assert_eq!(same.lz, data.lz);
        assert!(scale_preserves_condition_a(&data, &expr::parse("exp(z)+z", Algebra::Complex).unwrap()));
    }

    #[test]
    fn family_radii() {
        let e2 = epicycloid_family(2).unwrap();
        assert_eq!(e2.fixed_radius, Ratio::new(2, 3));
        assert_eq!(e2.rolling_radius, Ratio::new(1, 3));
        assert_eq!(e2.curve_kind(), "nephroid");
        let e3 = epicycloid_family(3).unwrap();
        assert_eq!(e3.fixed_radius, Ratio::new(1, 4));
        assert_eq!(e3.curve_kind(), "cardioid");
        let a0 = e2.alpha(0.0);
        assert!((a0[0] - 2.0 / 3.0).abs() < 1e-15 && a0[1] == 0.0 && a0[2] == 0.0);
        assert!(matches!(epicycloid_family(1), Err(EnneperError::BadFamilyIndex(1))));
        for n in [2, 3, 5] {
            let e = epicycloid_family(n).unwrap();
            for t in [0.1, 0.7, 2.0] {
                let (a, b) = (e.alpha(t), e.rolling_curve(t));
                assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
            }
            assert!(validate(&e.data).unwrap().pass);
        }
    }
}
