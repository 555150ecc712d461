use super::{at, to_weierstrass, CausalCharacter, ClosedForm, EnneperData, EnneperError};
use crate::domain::DomainSpec;
use crate::expr::real::RealExpr;
use crate::expr::{eval, Expr};
use crate::kalgebra::KScalar;
use crate::quadrature::integrate;

/// Points checked per path segment when testing that a path stays in the domain.
pub const PATH_SAMPLES: usize = 64;

/// Finite-difference stencils may reach a few step lengths past the sampled
/// region, so path checks allow this much slack outside the rect.
const RECT_SLACK: f64 = 5e-3;

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    /// `L`, `P` and `h = Re/Im H` in closed form.
    ClosedForm(ClosedForm),
    /// An explicit parametrization in the chart coordinates `(u, v)`.
    Parametric(Box<[RealExpr; 3]>),
    /// `2 Re` of the integral of the Weierstrass data from the basepoint.
    PathIntegral([Expr; 3]),
}

/// An evaluable map from chart coordinates into Lorentz–Minkowski space.
#[derive(Clone, Debug, PartialEq)]
pub struct Immersion {
    pub character: CausalCharacter,
    pub domain: DomainSpec,
    pub backend: Backend,
    pub offset: [f64; 3],
}

impl Immersion {
    pub fn closed(data: &EnneperData) -> Result<Immersion, EnneperError> {
        let closed = data.closed.clone().ok_or(EnneperError::MissingClosedForm)?;
        Ok(Immersion {
            character: data.character,
            domain: data.domain.clone(),
            backend: Backend::ClosedForm(closed),
            offset: [0.0; 3],
        })
    }

    pub fn integral(data: &EnneperData) -> Immersion {
        Immersion {
            character: data.character,
            domain: data.domain.clone(),
            backend: Backend::PathIntegral(to_weierstrass(data).phi),
            offset: [0.0; 3],
        }
    }

    /// Expressions must be in the variables `u, v`.
    pub fn parametric(character: CausalCharacter, domain: DomainSpec, coords: [RealExpr; 3]) -> Immersion {
        Immersion { character, domain, backend: Backend::Parametric(Box::new(coords)), offset: [0.0; 3] }
    }

    /// Shifts the map so that the basepoint goes to the origin.
    pub fn normalized(mut self) -> Result<Immersion, EnneperError> {
        if let Backend::PathIntegral(_) = self.backend {
            return Ok(self);
        }
        self.offset = [0.0; 3];
        let (s, t) = self.domain.basepoint;
        let p = self.eval(s, t)?;
        self.offset = p;
        Ok(self)
    }

    pub fn eval(&self, s: f64, t: f64) -> Result<[f64; 3], EnneperError> {
        let raw = match &self.backend {
            Backend::ClosedForm(c) => self.eval_closed(c, s, t)?,
            Backend::Parametric(p) => [p[0].eval(&[s, t]), p[1].eval(&[s, t]), p[2].eval(&[s, t])],
            Backend::PathIntegral(phi) => {
                let path = self.default_path(s, t)?;
                self.integrate_path(phi, &path)?
            }
        };
        Ok([raw[0] - self.offset[0], raw[1] - self.offset[1], raw[2] - self.offset[2]])
    }

    /// Integrates along `path` (chart coordinates, starting at the basepoint).
    /// Other backends ignore the path and evaluate at its endpoint.
    pub fn eval_along(&self, path: &[(f64, f64)]) -> Result<[f64; 3], EnneperError> {
        let &(s, t) = path.last().unwrap_or(&self.domain.basepoint);
        match &self.backend {
            Backend::PathIntegral(phi) => {
                if path.first() != Some(&self.domain.basepoint) {
                    let (s0, t0) = path.first().copied().unwrap_or(self.domain.basepoint);
                    return Err(EnneperError::PathLeavesDomain { s: s0, t: t0 });
                }
                self.check_path(path)?;
                self.integrate_path(phi, path)
            }
            _ => self.eval(s, t),
        }
    }

    fn eval_closed(&self, c: &ClosedForm, s: f64, t: f64) -> Result<[f64; 3], EnneperError> {
        let z = self.domain.z_at(self.character.algebra(), s, t);
        let f = at(s, t);
        let l = eval(&c.l, z).map_err(&f)?;
        let p = eval(&c.p, z).map_err(&f)?;
        let h = c.h.eval(z).map_err(&f)?;
        Ok(layout(self.character, l, p, h))
    }

    fn point_ok(&self, s: f64, t: f64) -> bool {
        let r = self.domain.rect;
        let inside = s >= r.u_min - RECT_SLACK
            && s <= r.u_max + RECT_SLACK
            && t >= r.v_min - RECT_SLACK
            && t <= r.v_max + RECT_SLACK;
        inside && self.domain.clearance(self.character.algebra(), s, t) >= 0.25 * self.domain.margin
    }

    fn check_path(&self, path: &[(f64, f64)]) -> Result<(), EnneperError> {
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            for k in 0..=PATH_SAMPLES {
                let x = k as f64 / PATH_SAMPLES as f64;
                let (s, t) = (a.0 + (b.0 - a.0) * x, a.1 + (b.1 - a.1) * x);
                if !self.point_ok(s, t) {
                    return Err(EnneperError::PathLeavesDomain { s, t });
                }
            }
        }
        Ok(())
    }

    /// Straight segment from the basepoint, or an axis-aligned L-shaped path if
    /// the segment leaves the domain.
    fn default_path(&self, s: f64, t: f64) -> Result<Vec<(f64, f64)>, EnneperError> {
        let z0 = self.domain.basepoint;
        let candidates = [vec![z0, (s, t)], vec![z0, (s, z0.1), (s, t)], vec![z0, (z0.0, t), (s, t)]];
        let mut first_err = None;
        for path in candidates {
            match self.check_path(&path) {
                Ok(()) => return Ok(path),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        Err(first_err.expect("at least one candidate"))
    }

    fn integrate_path(&self, phi: &[Expr; 3], path: &[(f64, f64)]) -> Result<[f64; 3], EnneperError> {
        let alg = self.character.algebra();
        let chart = self.domain.chart;
        let zero = KScalar::zero(alg);
        let mut total = [zero; 3];
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                continue;
            }
            let dw = KScalar::new(alg, b.0 - a.0, b.1 - a.1);
            let integrand = |x: f64| -> Result<[KScalar; 3], EnneperError> {
                let (s, t) = (a.0 + (b.0 - a.0) * x, a.1 + (b.1 - a.1) * x);
                let z = chart.to_z(alg, s, t);
                let scale = chart.jacobian(alg, s, t) * dw;
                let f = at(s, t);
                Ok([
                    eval(&phi[0], z).map_err(&f)? * scale,
                    eval(&phi[1], z).map_err(&f)? * scale,
                    eval(&phi[2], z).map_err(&f)? * scale,
                ])
            };
            let seg = integrate(integrand, [zero; 3])??;
            for k in 0..3 {
                total[k] = total[k] + seg[k];
            }
        }
        Ok(total.map(|v| 2.0 * v.re))
    }
}

/// Places `(L, P, h)` into ambient coordinates for the given character.
pub fn layout(character: CausalCharacter, l: KScalar, p: KScalar, h: f64) -> [f64; 3] {
    match character {
        CausalCharacter::Spacelike => [l.re + p.re, l.im - p.im, h],
        CausalCharacter::Timelike => [h, l.re - p.re, l.im + p.im],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Rect;
    use crate::enneper::Harmonic;
    use crate::expr::parse;
    use crate::kalgebra::Algebra;

    fn enneper_first() -> EnneperData {
        let alg = Algebra::Complex;
        let mut d = DomainSpec::rect(Rect::new(-0.7, 1.2, -0.7, 0.7));
        d.basepoint = (0.0, 0.0);
        EnneperData::parse("e", CausalCharacter::Spacelike, "z^2", "1", "-z", d)
            .unwrap()
            .with_closed_form(ClosedForm {
                l: parse("z^3/3", alg).unwrap(),
                p: parse("z", alg).unwrap(),
                h: Harmonic::parse("re(-z^2)", alg).unwrap(),
            })
            .unwrap()
    }

    #[test]
    fn closed_form_value() {
        let psi = Immersion::closed(&enneper_first()).unwrap();
        let p = psi.eval(1.0, 0.0).unwrap();
        assert!((p[0] - 4.0 / 3.0).abs() < 1e-15 && p[1].abs() < 1e-15 && (p[2] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn integral_matches_closed() {
        let data = enneper_first();
        let integ = Immersion::integral(&data);
        let p = integ.eval(1.0, 0.0).unwrap();
        assert!((p[0] - 4.0 / 3.0).abs() < 1e-12 && p[1].abs() < 1e-12 && (p[2] + 1.0).abs() < 1e-12);
        assert_eq!(integ.eval(0.0, 0.0).unwrap(), [0.0; 3]);
        let a = integ.eval_along(&[(0.0, 0.0), (0.5, 0.6), (1.0, 0.3)]).unwrap();
        let b = integ.eval_along(&[(0.0, 0.0), (0.9, -0.5), (1.0, 0.3)]).unwrap();
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn path_outside_rejected() {
        let integ = Immersion::integral(&enneper_first());
        let e = integ.eval_along(&[(0.0, 0.0), (0.0, 3.0), (1.0, 0.3)]).unwrap_err();
        assert!(matches!(e, EnneperError::PathLeavesDomain { .. }));
    }
}
