//! Finite-difference certification of immersions: metric, conformality,
//! causal character, unit normal, mean curvature, harmonicity and
//! implicit-equation residuals.
//!
//! The ambient metric is `g = dx1^2 + dx2^2 - dx3^2`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::domain::DomainError;
use crate::enneper::{CausalCharacter, EnneperError, Immersion, ValidationReport};
use crate::expr::real::Equation;
use crate::numfmt::g12;

/// First-derivative step.
pub const FD_STEP: f64 = 1e-5;
/// Second-derivative step for the five-point stencil.
pub const FD2_STEP: f64 = 2e-3;

pub const TOL_CONFORMAL: f64 = 1e-6;
pub const TOL_MEAN_CURVATURE: f64 = 1e-6;
pub const TOL_HARMONIC: f64 = 1e-5;
pub const TOL_NORMAL: f64 = 1e-9;
pub const TOL_IMPLICIT: f64 = 1e-9;
pub const TOL_PARAMETRIZATION: f64 = 1e-9;
pub const TOL_PREGEODESIC: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Enneper(#[from] EnneperError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("degenerate sample at ({s}, {t}): |E| and |G| below 1e-12")]
    DegenerateSample { s: f64, t: f64 },
    #[error("lightlike normal at ({s}, {t})")]
    NullNormal { s: f64, t: f64 },
}

pub type Vec3 = [f64; 3];

pub fn minkowski(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// Lorentzian cross product, so that `g(a x b, c) = det(a, b, c)`.
pub fn lorentz_cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], -(a[0] * b[1] - a[1] * b[0])]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSample {
    pub point: (f64, f64),
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub lambda: f64,
    pub epsilon: f64,
}

impl MetricSample {
    /// `max(|F|, |E - eps G|) / (|E| + |G|)`.
    pub fn conformality(&self) -> f64 {
        self.f.abs().max((self.e - self.epsilon * self.g).abs()) / (self.e.abs() + self.g.abs())
    }

    /// Spacelike: `E, G > 0`. Timelike: `E G < 0`.
    pub fn causal_consistent(&self) -> bool {
        if self.epsilon > 0.0 {
            self.e > 0.0 && self.g > 0.0
        } else {
            self.e * self.g < 0.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureSample {
    pub point: (f64, f64),
    pub h: f64,
    pub laplacian: Vec3,
    pub normal: Vec3,
    /// `max(|g(N,N) + eps|, |g(N, psi_u)|, |g(N, psi_v)|)`, tangency terms relative.
    pub normal_residual: f64,
    pub harmonicity: f64,
}

struct Derivatives {
    du: Vec3,
    dv: Vec3,
    duu: Vec3,
    dvv: Vec3,
}

fn eval(psi: &Immersion, s: f64, t: f64) -> Result<Vec3, VerifyError> {
    Ok(psi.eval(s, t)?)
}

fn first(psi: &Immersion, s: f64, t: f64) -> Result<(Vec3, Vec3), VerifyError> {
    let h = FD_STEP;
    let (a, b) = (eval(psi, s + h, t)?, eval(psi, s - h, t)?);
    let (c, d) = (eval(psi, s, t + h)?, eval(psi, s, t - h)?);
    Ok((std::array::from_fn(|k| (a[k] - b[k]) / (2.0 * h)), std::array::from_fn(|k| (c[k] - d[k]) / (2.0 * h))))
}

/// Fourth-order five-point second difference along one axis.
fn second(psi: &Immersion, s: f64, t: f64, along_u: bool) -> Result<Vec3, VerifyError> {
    let h = FD2_STEP;
    let at = |k: f64| if along_u { eval(psi, s + k * h, t) } else { eval(psi, s, t + k * h) };
    let (m2, m1, c, p1, p2) = (at(-2.0)?, at(-1.0)?, at(0.0)?, at(1.0)?, at(2.0)?);
    Ok(std::array::from_fn(|k| (-m2[k] + 16.0 * m1[k] - 30.0 * c[k] + 16.0 * p1[k] - p2[k]) / (12.0 * h * h)))
}

fn derivatives(psi: &Immersion, s: f64, t: f64) -> Result<Derivatives, VerifyError> {
    let (du, dv) = first(psi, s, t)?;
    Ok(Derivatives { du, dv, duu: second(psi, s, t, true)?, dvv: second(psi, s, t, false)? })
}

fn metric_from(character: CausalCharacter, s: f64, t: f64, du: Vec3, dv: Vec3) -> Result<MetricSample, VerifyError> {
    let (e, f, g) = (minkowski(du, du), minkowski(du, dv), minkowski(dv, dv));
    if e.abs() < 1e-12 && g.abs() < 1e-12 {
        return Err(VerifyError::DegenerateSample { s, t });
    }
    let epsilon = character.epsilon();
    Ok(MetricSample { point: (s, t), e, f, g, lambda: 0.5 * (e + epsilon * g), epsilon })
}

pub fn metric_at(psi: &Immersion, s: f64, t: f64) -> Result<MetricSample, VerifyError> {
    let (du, dv) = first(psi, s, t)?;
    metric_from(psi.character, s, t, du, dv)
}

fn curvature_from(m: &MetricSample, d: &Derivatives) -> Result<CurvatureSample, VerifyError> {
    let eps = m.epsilon;
    let (s, t) = m.point;
    let n = lorentz_cross(d.du, d.dv);
    let nn = minkowski(n, n);
    if nn.abs() < 1e-12 {
        return Err(VerifyError::NullNormal { s, t });
    }
    let normal = n.map(|x| x / nn.abs().sqrt());
    let flat: Vec3 = std::array::from_fn(|k| d.duu[k] + eps * d.dvv[k]);
    let laplacian = flat.map(|x| x / m.lambda);
    let tangency = minkowski(normal, d.du).abs() / (1.0 + m.e.abs().sqrt())
        + minkowski(normal, d.dv).abs() / (1.0 + m.g.abs().sqrt());
    Ok(CurvatureSample {
        point: m.point,
        h: minkowski(laplacian, normal),
        laplacian,
        normal,
        normal_residual: (minkowski(normal, normal) + eps).abs().max(tangency),
        harmonicity: flat.iter().fold(0.0, |a: f64, x| a.max(x.abs())),
    })
}

pub fn mean_curvature_at(psi: &Immersion, s: f64, t: f64) -> Result<CurvatureSample, VerifyError> {
    let d = derivatives(psi, s, t)?;
    let m = metric_from(psi.character, s, t, d.du, d.dv)?;
    curvature_from(&m, &d)
}

/// `max_j |(psi_j)_uu + eps (psi_j)_vv|`.
pub fn harmonicity_residual(psi: &Immersion, s: f64, t: f64) -> Result<f64, VerifyError> {
    let eps = psi.character.epsilon();
    let (uu, vv) = (second(psi, s, t, true)?, second(psi, s, t, false)?);
    Ok((0..3).map(|k| (uu[k] + eps * vv[k]).abs()).fold(0.0, f64::max))
}

/// `|lhs - rhs| / (1 + |lhs| + |rhs|)` at `psi(s, t)`.
pub fn implicit_residual(psi: &Immersion, eq: &Equation, s: f64, t: f64) -> Result<f64, VerifyError> {
    let x = eval(psi, s, t)?;
    Ok(eq.relative_residual(&x))
}

/// A curve that should coincide with `psi` along a chart curve.
pub struct CurveCheck<'a> {
    pub curve: &'a dyn Fn(f64) -> Vec3,
    pub chart_point: &'a dyn Fn(f64) -> (f64, f64),
    pub params: Vec<f64>,
}

/// Optional checks attached to a verification run.
#[derive(Default)]
pub struct Extras<'a> {
    pub validation: Option<ValidationReport>,
    pub implicit: Option<&'a Equation>,
    /// An independent parametrization expected to agree with the immersion.
    pub parametrization: Option<&'a Immersion>,
    pub pregeodesic: Option<CurveCheck<'a>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub character: CausalCharacter,
    pub metric: Vec<MetricSample>,
    pub curvature: Vec<CurvatureSample>,
    pub max_conformality: f64,
    pub max_harmonicity: f64,
    pub max_abs_h: f64,
    pub max_normal_residual: f64,
    pub min_abs_lambda: f64,
    pub lambda_sign: Option<f64>,
    pub causal_consistent: bool,
    pub max_implicit: Option<f64>,
    pub max_parametrization: Option<f64>,
    pub max_pregeodesic: Option<f64>,
    pub validation: Option<ValidationReport>,
}

impl VerificationReport {
    pub fn metric_pass(&self) -> bool {
        let lambda_ok = match self.character {
            CausalCharacter::Spacelike => self.lambda_sign == Some(1.0),
            CausalCharacter::Timelike => self.lambda_sign.is_some(),
        };
        self.max_conformality < TOL_CONFORMAL && self.causal_consistent && lambda_ok
    }

    pub fn curvature_pass(&self) -> bool {
        self.max_abs_h < TOL_MEAN_CURVATURE && self.max_normal_residual < TOL_NORMAL
    }

    pub fn harmonicity_pass(&self) -> bool {
        self.max_harmonicity < TOL_HARMONIC
    }

    pub fn pass(&self) -> bool {
        let opt = |v: Option<f64>, tol: f64| v.is_none_or(|x| x < tol);
        self.metric_pass()
            && self.curvature_pass()
            && self.harmonicity_pass()
            && opt(self.max_implicit, TOL_IMPLICIT)
            && opt(self.max_parametrization, TOL_PARAMETRIZATION)
            && opt(self.max_pregeodesic, TOL_PREGEODESIC)
            && self.validation.as_ref().is_none_or(|v| v.pass)
    }

    /// Key-value text, one `[block]` per check.
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let sign = |s: Option<f64>| match s {
            Some(x) if x > 0.0 => "+1",
            Some(_) => "-1",
            None => "mixed",
        };
        let _ = writeln!(
            o,
            "[surface]\nname = {}\ncharacter = {}\nsamples = {}",
            self.name,
            self.character,
            self.metric.len()
        );
        if let Some(v) = &self.validation {
            let _ = write!(o, "\n{}", v.conditions_block());
        }
        let _ = writeln!(o, "\n[metric]");
        let _ = writeln!(o, "max_conformality = {}", g12(self.max_conformality));
        let _ = writeln!(o, "min|lambda| = {}", g12(self.min_abs_lambda));
        let _ = writeln!(o, "lambda_sign = {}", sign(self.lambda_sign));
        let _ = writeln!(o, "causal_consistent = {}", self.causal_consistent);
        let _ = writeln!(o, "pass = {}", self.metric_pass());
        let _ = writeln!(o, "\n[curvature]");
        let _ = writeln!(o, "max|H| = {}", g12(self.max_abs_h));
        let _ = writeln!(o, "max_normal_residual = {}", g12(self.max_normal_residual));
        let _ = writeln!(o, "pass = {}", self.curvature_pass());
        let _ = writeln!(o, "\n[harmonicity]");
        let _ = writeln!(o, "max_harmonicity = {}", g12(self.max_harmonicity));
        let _ = writeln!(o, "pass = {}", self.harmonicity_pass());
        for (block, value, tol) in [
            ("implicit", self.max_implicit, TOL_IMPLICIT),
            ("parametrization", self.max_parametrization, TOL_PARAMETRIZATION),
            ("pregeodesic", self.max_pregeodesic, TOL_PREGEODESIC),
        ] {
            if let Some(v) = value {
                let _ = writeln!(o, "\n[{block}]\nmax_residual = {}\npass = {}", g12(v), v < tol);
            }
        }
        let _ = writeln!(o, "\n[verdict]\npass = {}", self.pass());
        o
    }
}

/// Parses the `[block]` / `key = value` text of [`VerificationReport::to_text`].
/// Repeated blocks (several reports in one file) are returned in order.
pub fn parse_report_text(text: &str) -> Vec<(String, BTreeMap<String, String>)> {
    let mut out: Vec<(String, BTreeMap<String, String>)> = Vec::new();
    for line in text.lines().map(str::trim) {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push((name.to_string(), BTreeMap::new()));
        } else if let Some((k, v)) = line.split_once(" = ") {
            if let Some(last) = out.last_mut() {
                last.1.insert(k.to_string(), v.to_string());
            }
        }
    }
    out
}

/// Runs the full suite on `psi` over `points`.
pub fn verify(
    psi: &Immersion,
    name: &str,
    points: &[(f64, f64)],
    extras: Extras<'_>,
) -> Result<VerificationReport, VerifyError> {
    if points.is_empty() {
        return Err(DomainError::EmptyDomain.into());
    }
    let per_point: Vec<(MetricSample, CurvatureSample, Option<f64>, Option<f64>)> = points
        .par_iter()
        .map(|&(s, t)| {
            let d = derivatives(psi, s, t)?;
            let m = metric_from(psi.character, s, t, d.du, d.dv)?;
            let c = curvature_from(&m, &d)?;
            let x = eval(psi, s, t)?;
            let imp = extras.implicit.map(|eq| eq.relative_residual(&x));
            let par = match extras.parametrization {
                Some(other) => {
                    let y = eval(other, s, t)?;
                    Some((0..3).map(|k| (x[k] - y[k]).abs() / (1.0 + x[k].abs())).fold(0.0, f64::max))
                }
                None => None,
            };
            Ok((m, c, imp, par))
        })
        .collect::<Result<_, VerifyError>>()?;

    let max_pregeodesic = match &extras.pregeodesic {
        Some(check) => {
            let mut worst = 0.0f64;
            for &p in &check.params {
                let (s, t) = (check.chart_point)(p);
                let x = eval(psi, s, t)?;
                let c = (check.curve)(p);
                for k in 0..3 {
                    worst = worst.max((x[k] - c[k]).abs() / (1.0 + c[k].abs()));
                }
            }
            Some(worst)
        }
        None => None,
    };

    let fold_max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    let metric: Vec<MetricSample> = per_point.iter().map(|p| p.0).collect();
    let curvature: Vec<CurvatureSample> = per_point.iter().map(|p| p.1).collect();
    let lambda_sign = if metric.iter().all(|m| m.lambda > 0.0) {
        Some(1.0)
    } else if metric.iter().all(|m| m.lambda < 0.0) {
        Some(-1.0)
    } else {
        None
    };
    let implicit: Vec<f64> = per_point.iter().filter_map(|p| p.2).collect();
    let param: Vec<f64> = per_point.iter().filter_map(|p| p.3).collect();
    Ok(VerificationReport {
        name: name.to_string(),
        character: psi.character,
        max_conformality: fold_max(&mut metric.iter().map(|m| m.conformality())),
        max_harmonicity: fold_max(&mut curvature.iter().map(|c| c.harmonicity)),
        max_abs_h: fold_max(&mut curvature.iter().map(|c| c.h.abs())),
        max_normal_residual: fold_max(&mut curvature.iter().map(|c| c.normal_residual)),
        min_abs_lambda: metric.iter().map(|m| m.lambda.abs()).fold(f64::INFINITY, f64::min),
        lambda_sign,
        causal_consistent: metric.iter().all(|m| m.causal_consistent()),
        max_implicit: extras.implicit.map(|_| implicit.iter().copied().fold(0.0, f64::max)),
        max_parametrization: extras.parametrization.map(|_| param.iter().copied().fold(0.0, f64::max)),
        max_pregeodesic,
        validation: extras.validation,
        metric,
        curvature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DomainSpec, Rect};
    use crate::expr::real::RealExpr;

    fn param(character: CausalCharacter, xs: [&str; 3]) -> Immersion {
        let coords = xs.map(|s| RealExpr::parse(s, &["u", "v"]).unwrap());
        Immersion::parametric(character, DomainSpec::rect(Rect::new(-1.0, 1.0, -1.0, 1.0)), coords)
    }

    #[test]
    fn plane() {
        let psi = param(CausalCharacter::Spacelike, ["u", "v", "0"]);
        let m = metric_at(&psi, 0.3, 0.2).unwrap();
        assert!((m.e - 1.0).abs() < 1e-10 && (m.g - 1.0).abs() < 1e-10 && m.f.abs() < 1e-10);
        let c = mean_curvature_at(&psi, 0.3, 0.2).unwrap();
        assert!(c.h.abs() < 1e-9);
        assert!(harmonicity_residual(&psi, 0.3, 0.2).unwrap() < 1e-9);
    }

    #[test]
    fn lorentzian_catenoid_metric() {
        let psi = param(CausalCharacter::Timelike, ["u", "cosh(u)*cosh(v)", "-cosh(u)*sinh(v)"]);
        for u in [0.0, 0.4, -0.9] {
            let m = metric_at(&psi, u, 0.0).unwrap();
            let c2 = u.cosh().powi(2);
            assert!((m.lambda - c2).abs() < 1e-9);
            assert!((m.e - c2).abs() < 1e-9 && (m.g + c2).abs() < 1e-9);
            assert!(m.causal_consistent());
            assert!(mean_curvature_at(&psi, u, 0.3).unwrap().h.abs() < 1e-7);
        }
    }

    #[test]
    fn sphere_like_surface_is_not_minimal() {
        let psi = param(CausalCharacter::Spacelike, ["u", "v", "0.5*(u^2+v^2)"]);
        let c = mean_curvature_at(&psi, 0.1, 0.2).unwrap();
        assert!(c.h.abs() > 0.1);
    }

    #[test]
    fn null_normal_detected() {
        let psi = param(CausalCharacter::Spacelike, ["u", "v", "v"]);
        assert!(matches!(mean_curvature_at(&psi, 0.0, 0.0), Err(VerifyError::NullNormal { .. })));
    }

    #[test]
    fn report_round_trip() {
        let psi = param(CausalCharacter::Spacelike, ["u", "v", "0"]);
        let pts = psi.domain.samples(crate::kalgebra::Algebra::Complex).unwrap();
        let r = verify(&psi, "plane", &pts, Extras::default()).unwrap();
        assert!(r.pass());
        let blocks = parse_report_text(&r.to_text());
        assert_eq!(blocks[0].1["name"], "plane");
        assert_eq!(blocks.last().unwrap().1["pass"], "true");
        assert!(blocks.iter().any(|(b, kv)| b == "curvature" && kv.contains_key("max|H|")));
    }
}
