use super::{Expr, Func};
use crate::kalgebra::{ArithError, KScalar};

/// Evaluates `e` at `z`. Constants must share the algebra of `z`.
pub fn eval(e: &Expr, z: KScalar) -> Result<KScalar, ArithError> {
    Ok(match e {
        Expr::Const(c) => {
            if c.algebra != z.algebra {
                return Err(ArithError::AlgebraMismatch { left: c.algebra, right: z.algebra });
            }
            *c
        }
        Expr::Var => z,
        Expr::Neg(a) => -eval(a, z)?,
        Expr::Add(a, b) => eval(a, z)?.checked_add(eval(b, z)?)?,
        Expr::Sub(a, b) => eval(a, z)?.checked_sub(eval(b, z)?)?,
        Expr::Mul(a, b) => eval(a, z)?.checked_mul(eval(b, z)?)?,
        Expr::Div(a, b) => eval(a, z)?.checked_div(eval(b, z)?)?,
        Expr::Pow(a, n) => eval(a, z)?.powi(*n)?,
        Expr::Call(f, a) => f.apply(eval(a, z)?)?,
    })
}

/// Value together with its `z`-derivative, by forward-mode dual numbers.
pub fn eval_with_deriv(e: &Expr, z: KScalar) -> Result<(KScalar, KScalar), ArithError> {
    let d = dual(e, KDual { v: z, d: KScalar::one(z.algebra) })?;
    Ok((d.v, d.d))
}

#[derive(Clone, Copy, Debug)]
struct KDual {
    v: KScalar,
    d: KScalar,
}

fn dual(e: &Expr, z: KDual) -> Result<KDual, ArithError> {
    let alg = z.v.algebra;
    Ok(match e {
        Expr::Const(c) => {
            if c.algebra != alg {
                return Err(ArithError::AlgebraMismatch { left: c.algebra, right: alg });
            }
            KDual { v: *c, d: KScalar::zero(alg) }
        }
        Expr::Var => z,
        Expr::Neg(a) => {
            let a = dual(a, z)?;
            KDual { v: -a.v, d: -a.d }
        }
        Expr::Add(a, b) => {
            let (a, b) = (dual(a, z)?, dual(b, z)?);
            KDual { v: a.v + b.v, d: a.d + b.d }
        }
        Expr::Sub(a, b) => {
            let (a, b) = (dual(a, z)?, dual(b, z)?);
            KDual { v: a.v - b.v, d: a.d - b.d }
        }
        Expr::Mul(a, b) => {
            let (a, b) = (dual(a, z)?, dual(b, z)?);
            KDual { v: a.v * b.v, d: a.d * b.v + a.v * b.d }
        }
        Expr::Div(a, b) => {
            let (a, b) = (dual(a, z)?, dual(b, z)?);
            let inv = b.v.inv()?;
            let q = a.v * inv;
            KDual { v: q, d: (a.d - q * b.d) * inv }
        }
        Expr::Pow(a, n) => {
            let a = dual(a, z)?;
            if *n == 0 {
                KDual { v: KScalar::one(alg), d: KScalar::zero(alg) }
            } else {
                let p = a.v.powi(n - 1)?;
                KDual { v: p * a.v, d: p.scale(*n as f64) * a.d }
            }
        }
        Expr::Call(f, a) => {
            let a = dual(a, z)?;
            let (v, dv) = match f {
                Func::Exp => {
                    let e = a.v.exp();
                    (e, e)
                }
                Func::Sin => (a.v.sin(), a.v.cos()),
                Func::Cos => (a.v.cos(), -a.v.sin()),
                Func::Sinh => (a.v.sinh(), a.v.cosh()),
                Func::Cosh => (a.v.cosh(), a.v.sinh()),
                Func::Ln => (a.v.ln()?, a.v.inv()?),
            };
            KDual { v, d: dv * a.d }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::kalgebra::Algebra;

    #[test]
    fn evaluates_examples() {
        let e = parse("-1/(2*z)", Algebra::Complex).unwrap();
        let v = eval(&e, KScalar::complex(0.0, 1.0)).unwrap();
        assert!((v - KScalar::complex(0.0, 0.5)).magnitude() < 1e-15);

        let e = parse("tau*z", Algebra::Lorentz).unwrap();
        let v = eval(&e, KScalar::lorentz(1.0, 1.0)).unwrap();
        assert_eq!(v, KScalar::lorentz(1.0, 1.0));
    }

    #[test]
    fn zero_divisor_surfaces_as_error() {
        let e = parse("1/z", Algebra::Lorentz).unwrap();
        assert!(matches!(eval(&e, KScalar::lorentz(1.0, 1.0)), Err(ArithError::ZeroDivisor { .. })));
        assert!(eval_with_deriv(&e, KScalar::lorentz(2.0, -2.0)).is_err());
    }

    #[test]
    fn mismatch_is_error() {
        let e = parse("i*z", Algebra::Complex).unwrap();
        assert!(matches!(eval(&e, KScalar::lorentz(0.3, 0.1)), Err(ArithError::AlgebraMismatch { .. })));
    }

    #[test]
    fn dual_matches_symbolic() {
        for (alg, src, z) in [
            (Algebra::Complex, "sin(z)^2*exp(-z)/(z+3)", KScalar::complex(0.3, 0.8)),
            (Algebra::Lorentz, "ln(z)^3-tau*cosh(2*z)", KScalar::lorentz(1.5, -0.4)),
            (Algebra::Complex, "z^-2", KScalar::complex(0.3, 0.8)),
        ] {
            let e = parse(src, alg).unwrap();
            let (v, d) = eval_with_deriv(&e, z).unwrap();
            assert!((v - eval(&e, z).unwrap()).magnitude() < 1e-14);
            assert!((d - eval(&e.deriv(alg), z).unwrap()).magnitude() < 1e-12);
        }
    }
}
