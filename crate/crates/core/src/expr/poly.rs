//! Laurent-polynomial normal form over opaque atoms.
//!
//! `z`, every function call and every non-constant denominator become atoms.
//! Two expressions that differ only by ring identities normalise to the same
//! polynomial, which is enough to decide identities such as
//! `(f*h)^2 - (f*L)*(f*P) - f^2*(h^2 - L*P) == 0` without evaluating anything.

use std::collections::BTreeMap;
use std::fmt;

use super::Expr;
use crate::kalgebra::{Algebra, KScalar};

/// Sorted `(atom, exponent)` pairs with non-zero exponents.
type Monomial = Vec<(String, i32)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    algebra: Algebra,
    terms: BTreeMap<Monomial, KScalar>,
}

impl Poly {
    pub fn constant(c: KScalar) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), c);
        Poly { algebra: c.algebra, terms }.pruned(0.0)
    }

    fn atom(algebra: Algebra, key: String, exp: i32) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(key, exp)], KScalar::one(algebra));
        Poly { algebra, terms }
    }

    pub fn from_expr(e: &Expr, algebra: Algebra) -> Poly {
        match e {
            Expr::Const(c) => Poly::constant(*c),
            Expr::Var => Poly::atom(algebra, "z".into(), 1),
            Expr::Neg(a) => Poly::from_expr(a, algebra).scale(KScalar::real(algebra, -1.0)),
            Expr::Add(a, b) => Poly::from_expr(a, algebra).add(&Poly::from_expr(b, algebra)),
            Expr::Sub(a, b) => {
                Poly::from_expr(a, algebra).add(&Poly::from_expr(b, algebra).scale(KScalar::real(algebra, -1.0)))
            }
            Expr::Mul(a, b) => Poly::from_expr(a, algebra).mul(&Poly::from_expr(b, algebra)),
            Expr::Div(a, b) => {
                let num = Poly::from_expr(a, algebra);
                let den = Poly::from_expr(b, algebra);
                match den.inverse() {
                    Some(inv) => num.mul(&inv),
                    None => num.mul(&Poly::atom(algebra, format!("({den})"), -1)),
                }
            }
            Expr::Pow(a, n) => {
                let base = Poly::from_expr(a, algebra);
                if *n >= 0 {
                    base.powu(*n as u32)
                } else {
                    match base.inverse() {
                        Some(inv) => inv.powu(n.unsigned_abs()),
                        None => Poly::atom(algebra, format!("({base})"), *n),
                    }
                }
            }
            Expr::Call(f, a) => {
                let inner = Poly::from_expr(a, algebra);
                Poly::atom(algebra, format!("{}({inner})", f.name()), 1)
            }
        }
    }

    /// Inverse when the polynomial is a single invertible monomial.
    fn inverse(&self) -> Option<Poly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (mono, c) = self.terms.iter().next()?;
        let c = c.inv().ok()?;
        let mono: Monomial = mono.iter().map(|(k, e)| (k.clone(), -e)).collect();
        let mut terms = BTreeMap::new();
        terms.insert(mono, c);
        Some(Poly { algebra: self.algebra, terms })
    }

    fn scale(mut self, k: KScalar) -> Poly {
        for c in self.terms.values_mut() {
            *c = *c * k;
        }
        self.pruned(0.0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let slot = terms.entry(m.clone()).or_insert_with(|| KScalar::zero(self.algebra));
            *slot = *slot + *c;
        }
        Poly { algebra: self.algebra, terms }.pruned(0.0)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms: BTreeMap<Monomial, KScalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = merge(ma, mb);
                let slot = terms.entry(m).or_insert_with(|| KScalar::zero(self.algebra));
                *slot = *slot + *ca * *cb;
            }
        }
        Poly { algebra: self.algebra, terms }.pruned(0.0)
    }

    fn powu(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(KScalar::one(self.algebra));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn pruned(mut self, tol: f64) -> Poly {
        self.terms.retain(|_, c| c.magnitude() > tol);
        self
    }

    /// True when every coefficient is below `tol` in magnitude.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.magnitude() <= tol)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

fn merge(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<String, i32> = a.iter().cloned().collect();
    for (k, e) in b {
        *map.entry(k.clone()).or_insert(0) += e;
    }
    map.into_iter().filter(|(_, e)| *e != 0).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]")?;
            for (k, e) in m {
                write!(f, "*{k}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Normal form of `a - b` is zero.
pub fn identical(a: &Expr, b: &Expr, algebra: Algebra, tol: f64) -> bool {
    let d = Poly::from_expr(a, algebra).add(&Poly::from_expr(b, algebra).scale(KScalar::real(algebra, -1.0)));
    d.is_zero(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn p(s: &str, alg: Algebra) -> Expr {
        parse(s, alg).unwrap()
    }

    #[test]
    fn ring_identities() {
        let c = Algebra::Complex;
        assert!(identical(&p("(z+1)^2", c), &p("z^2+2*z+1", c), c, 1e-12));
        assert!(identical(&p("sin(z)*cos(z)", c), &p("cos(z)*sin(z)", c), c, 1e-12));
        assert!(identical(&p("i*i*z", c), &p("-z", c), c, 1e-12));
        assert!(identical(&p("1/(2*z)", c), &p("0.5*z^-1", c), c, 1e-12));
        assert!(identical(&p("sin(z+1)", c), &p("sin(1+z)", c), c, 1e-12));
        assert!(!identical(&p("sin(z)", c), &p("cos(z)", c), c, 1e-12));

        let l = Algebra::Lorentz;
        assert!(identical(&p("tau*tau", l), &p("1", l), l, 1e-12));
        assert!(identical(&p("(cosh(z)+1)/(z-1)", l), &p("cosh(z)/(z-1)+1/(z-1)", l), l, 1e-12));
    }

    #[test]
    fn scaled_condition_folds() {
        let alg = Algebra::Lorentz;
        let (lz, pz, hz, f) =
            (p("tau*(1+cos(z))/2", alg), p("tau*(1-cos(z))/2", alg), p("-sin(z)/2", alg), p("exp(z)+z^2", alg));
        let m = |a: &Expr, b: &Expr| Expr::Mul(Box::new(a.clone()), Box::new(b.clone()));
        let fh = m(&f, &hz);
        let lhs = Expr::Sub(Box::new(m(&fh, &fh)), Box::new(m(&m(&f, &lz), &m(&f, &pz))));
        let rhs = m(&m(&f, &f), &Expr::Sub(Box::new(m(&hz, &hz)), Box::new(m(&lz, &pz))));
        assert!(identical(&lhs, &rhs, alg, 1e-12));
    }
}
