use super::{add, call, div, mul, neg, pow, sub, Expr, Func};
use crate::kalgebra::Algebra;

pub(super) fn deriv(e: &Expr, alg: Algebra) -> Expr {
    match e {
        Expr::Const(_) => Expr::real(alg, 0.0),
        Expr::Var => Expr::real(alg, 1.0),
        Expr::Neg(a) => neg(deriv(a, alg)),
        Expr::Add(a, b) => add(deriv(a, alg), deriv(b, alg)),
        Expr::Sub(a, b) => sub(deriv(a, alg), deriv(b, alg)),
        Expr::Mul(a, b) => add(mul(deriv(a, alg), (**b).clone()), mul((**a).clone(), deriv(b, alg))),
        Expr::Div(a, b) if b.as_const().is_some() => div(deriv(a, alg), (**b).clone()),
        Expr::Div(a, b) => {
            div(sub(mul(deriv(a, alg), (**b).clone()), mul((**a).clone(), deriv(b, alg))), pow((**b).clone(), 2))
        }
        Expr::Pow(a, n) => {
            if *n == 0 {
                return Expr::real(alg, 0.0);
            }
            mul(mul(Expr::real(alg, *n as f64), pow((**a).clone(), n - 1)), deriv(a, alg))
        }
        Expr::Call(f, a) => {
            let inner = (**a).clone();
            let da = deriv(a, alg);
            match f {
                Func::Exp => mul(call(Func::Exp, inner), da),
                Func::Sin => mul(call(Func::Cos, inner), da),
                Func::Cos => mul(neg(call(Func::Sin, inner)), da),
                Func::Sinh => mul(call(Func::Cosh, inner), da),
                Func::Cosh => mul(call(Func::Sinh, inner), da),
                Func::Ln => div(da, inner),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{eval, parse};
    use crate::kalgebra::{Algebra, KScalar};

    #[test]
    fn symbolic_matches_finite_difference() {
        let cases = [
            (Algebra::Complex, "z^3/3-exp(z)*sin(z)", KScalar::complex(0.4, 0.3)),
            (Algebra::Complex, "-1/(2*z)+ln(z)", KScalar::complex(0.7, -0.2)),
            (Algebra::Lorentz, "tau*cosh(z)^2/(1+z^2)", KScalar::lorentz(0.5, 0.2)),
            (Algebra::Lorentz, "ln(z)*cos(z)-sinh(z)", KScalar::lorentz(1.2, 0.3)),
        ];
        for (alg, src, z) in cases {
            let e = parse(src, alg).unwrap();
            let d = e.deriv(alg);
            let h = 1e-6;
            let step = KScalar::real(alg, h);
            let fd = (eval(&e, z + step).unwrap() - eval(&e, z - step).unwrap()).scale(0.5 / h);
            let sym = eval(&d, z).unwrap();
            assert!((fd - sym).magnitude() < 1e-7, "{src}: {fd} vs {sym}");
        }
    }

    #[test]
    fn simple_forms() {
        let alg = Algebra::Complex;
        assert_eq!(parse("z^3/3", alg).unwrap().deriv(alg).folded().to_string(), "3*z^2/3");
        assert_eq!(parse("z", alg).unwrap().deriv(alg).to_string(), "1");
    }
}
