//! A small expression language over one (para)complex variable `z`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := number | 'z' | 'i' | 'tau' | func '(' expr ')' | '(' expr ')'
//! func   := exp | sin | cos | sinh | cosh | ln
//! ```
//!
//! `i` is only accepted in complex mode and `tau` only in Lorentz mode.
//! Exponents are integers; `^` binds tighter than unary minus.

mod deriv;
mod eval;
mod lexer;
mod parser;
pub mod poly;
pub mod real;

use std::fmt;

pub use eval::{eval, eval_with_deriv};
pub use lexer::ParseError;
pub use parser::parse;

use crate::kalgebra::{Algebra, KScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Ln,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh, Func::Ln];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn apply(self, z: KScalar) -> Result<KScalar, crate::kalgebra::ArithError> {
        Ok(match self {
            Func::Exp => z.exp(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Sinh => z.sinh(),
            Func::Cosh => z.cosh(),
            Func::Ln => z.ln()?,
        })
    }
}

/// Expression tree over the variable `z`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(KScalar),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn real(algebra: Algebra, value: f64) -> Expr {
        Expr::Const(KScalar::real(algebra, value))
    }

    pub fn unit(algebra: Algebra) -> Expr {
        Expr::Const(KScalar::unit(algebra))
    }

    /// Algebra of the first constant in the tree, if any.
    pub fn algebra(&self) -> Option<Algebra> {
        match self {
            Expr::Const(c) => Some(c.algebra),
            Expr::Var => None,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.algebra(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.algebra().or_else(|| b.algebra())
            }
        }
    }

    /// True if every constant in the tree is tagged with `algebra`.
    pub fn uses_only(&self, algebra: Algebra) -> bool {
        match self {
            Expr::Const(c) => c.algebra == algebra,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.uses_only(algebra),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_only(algebra) && b.uses_only(algebra)
            }
        }
    }

    pub fn as_const(&self) -> Option<KScalar> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_const_value(&self, re: f64) -> bool {
        matches!(self, Expr::Const(c) if c.re == re && c.im == 0.0)
    }

    /// Derivative with respect to `z`.
    pub fn deriv(&self, algebra: Algebra) -> Expr {
        deriv::deriv(self, algebra)
    }

    /// Constant folding: evaluates constant subtrees and drops neutral elements.
    pub fn folded(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var => self.clone(),
            Expr::Neg(a) => neg(a.folded()),
            Expr::Add(a, b) => add(a.folded(), b.folded()),
            Expr::Sub(a, b) => sub(a.folded(), b.folded()),
            Expr::Mul(a, b) => mul(a.folded(), b.folded()),
            Expr::Div(a, b) => div(a.folded(), b.folded()),
            Expr::Pow(a, n) => pow(a.folded(), *n),
            Expr::Call(f, a) => call(*f, a.folded()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if c.re < 0.0 && c.im == 0.0 => 3,
            Expr::Const(c) if c.re != 0.0 && c.im != 0.0 => 1,
            Expr::Const(c) if c.im != 0.0 && c.im != 1.0 => 2,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_bare(f)?;
            f.write_str(")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => f.write_str("z"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 3)
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                f.write_str("+")?;
                b.write_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str("-")?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("*")?;
                b.write_at(f, 3)
            }
            Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("/")?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, n) => {
                a.write_at(f, 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_bare(f)?;
                f.write_str(")")
            }
        }
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: KScalar) -> fmt::Result {
    let unit = c.algebra.unit_symbol();
    match (c.re, c.im) {
        (re, 0.0) => write!(f, "{re}"),
        (0.0, 1.0) => f.write_str(unit),
        (0.0, im) => write!(f, "{im}*{unit}"),
        (re, im) if im < 0.0 => write!(f, "{re}-{}*{unit}", -im),
        (re, im) => write!(f, "{re}+{im}*{unit}"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_bare(f)
    }
}

// Smart constructors with light simplification. They are used by `deriv` and
// by the Enneper transforms so that generated trees stay readable.

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if x.algebra == y.algebra => Expr::Const(*x + *y),
        _ if a.is_const_value(0.0) => b,
        _ if b.is_const_value(0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if x.algebra == y.algebra => Expr::Const(*x - *y),
        _ if b.is_const_value(0.0) => a,
        _ if a.is_const_value(0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if x.algebra == y.algebra => Expr::Const(*x * *y),
        _ if a.is_const_value(0.0) => a,
        _ if b.is_const_value(0.0) => b,
        _ if a.is_const_value(1.0) => b,
        _ if b.is_const_value(1.0) => a,
        _ if a.is_const_value(-1.0) => neg(b),
        _ if b.is_const_value(-1.0) => neg(a),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if x.algebra == y.algebra => match *x / *y {
            Ok(q) => Expr::Const(q),
            Err(_) => Expr::Div(Box::new(a), Box::new(b)),
        },
        _ if a.is_const_value(0.0) => a,
        _ if b.is_const_value(1.0) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub fn pow(a: Expr, n: i32) -> Expr {
    match (&a, n) {
        (_, 1) => a,
        (Expr::Const(c), _) => match c.powi(n) {
            Ok(v) => Expr::Const(v),
            Err(_) => Expr::Pow(Box::new(a), n),
        },
        (_, 0) => match a.algebra() {
            Some(alg) => Expr::real(alg, 1.0),
            None => Expr::Pow(Box::new(a), 0),
        },
        _ => Expr::Pow(Box::new(a), n),
    }
}

pub fn call(f: Func, a: Expr) -> Expr {
    match (&a, f) {
        (Expr::Const(c), Func::Ln) => match c.ln() {
            Ok(v) => Expr::Const(v),
            Err(_) => Expr::Call(f, Box::new(a)),
        },
        (Expr::Const(c), _) => Expr::Const(f.apply(*c).expect("total function")),
        _ => Expr::Call(f, Box::new(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_minimal_and_reparses() {
        let alg = Algebra::Complex;
        for src in [
            "-1/(2*z)",
            "(1+cos(z))/2",
            "z^3/3",
            "z-(z+1)",
            "-z^2",
            "(-z)^2",
            "i*(1-z)^2/2",
            "z/(2*z)",
            "exp(z)*sin(z^2)",
            "(z^2)^3",
        ] {
            let e = parse(src, alg).unwrap();
            assert_eq!(e.to_string(), src);
            assert_eq!(parse(&e.to_string(), alg).unwrap(), e);
        }
    }

    #[test]
    fn composite_constants_print_with_parens() {
        let c = Expr::Const(KScalar::lorentz(1.0, -2.0));
        let e = Expr::Mul(Box::new(c), Box::new(Expr::Var));
        assert_eq!(e.to_string(), "(1-2*tau)*z");
        let back = parse(&e.to_string(), Algebra::Lorentz).unwrap().folded();
        assert_eq!(back, e);
    }

    #[test]
    fn algebra_tags() {
        let e = parse("tau*cosh(z)", Algebra::Lorentz).unwrap();
        assert_eq!(e.algebra(), Some(Algebra::Lorentz));
        assert!(e.uses_only(Algebra::Lorentz));
        assert!(!e.uses_only(Algebra::Complex));
    }
}
