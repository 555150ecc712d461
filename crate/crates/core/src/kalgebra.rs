//! Arithmetic over the complex numbers and the Lorentz (paracomplex) numbers.
//!
//! Both algebras are two-dimensional over the reals with a unit `e` that
//! squares to `-1` (complex, written `i`) or `+1` (Lorentz, written `tau`).
//! A [`KScalar`] carries its algebra tag and operations between scalars of
//! different algebras are rejected.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Numbers with `|z conj(z)|` below this are treated as non-invertible.
pub const TOL_ZERO: f64 = 1e-12;

/// Which two-dimensional algebra a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    /// `i^2 = -1`
    Complex,
    /// `tau^2 = +1`
    Lorentz,
}

impl Algebra {
    /// Square of the imaginary unit.
    pub fn unit_square(self) -> f64 {
        match self {
            Algebra::Complex => -1.0,
            Algebra::Lorentz => 1.0,
        }
    }

    /// Name of the imaginary unit in the expression grammar.
    pub fn unit_symbol(self) -> &'static str {
        match self {
            Algebra::Complex => "i",
            Algebra::Lorentz => "tau",
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::Complex => "complex",
            Algebra::Lorentz => "lorentz",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ArithError {
    #[error("algebra mismatch: {left} vs {right}")]
    AlgebraMismatch { left: Algebra, right: Algebra },
    #[error("{value} is a zero divisor ({operation})")]
    ZeroDivisor { value: KScalar, operation: &'static str },
    #[error("division by zero ({operation})")]
    DivisionByZero { operation: &'static str },
    #[error("{value} lies on the branch cut of ln")]
    LnBranch { value: KScalar },
}

/// A number `re + e*im` in either algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KScalar {
    pub algebra: Algebra,
    pub re: f64,
    pub im: f64,
}

impl KScalar {
    pub const fn new(algebra: Algebra, re: f64, im: f64) -> Self {
        KScalar { algebra, re, im }
    }

    pub const fn real(algebra: Algebra, re: f64) -> Self {
        KScalar { algebra, re, im: 0.0 }
    }

    pub const fn zero(algebra: Algebra) -> Self {
        Self::real(algebra, 0.0)
    }

    pub const fn one(algebra: Algebra) -> Self {
        Self::real(algebra, 1.0)
    }

    /// The imaginary unit of `algebra`.
    pub const fn unit(algebra: Algebra) -> Self {
        KScalar { algebra, re: 0.0, im: 1.0 }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Self::new(Algebra::Complex, re, im)
    }

    pub fn lorentz(re: f64, im: f64) -> Self {
        Self::new(Algebra::Lorentz, re, im)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn same(&self, other: &KScalar) -> Result<(), ArithError> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(ArithError::AlgebraMismatch { left: self.algebra, right: other.algebra })
        }
    }

    pub fn checked_add(self, rhs: KScalar) -> Result<KScalar, ArithError> {
        self.same(&rhs)?;
        Ok(KScalar::new(self.algebra, self.re + rhs.re, self.im + rhs.im))
    }

    pub fn checked_sub(self, rhs: KScalar) -> Result<KScalar, ArithError> {
        self.same(&rhs)?;
        Ok(KScalar::new(self.algebra, self.re - rhs.re, self.im - rhs.im))
    }

    pub fn checked_mul(self, rhs: KScalar) -> Result<KScalar, ArithError> {
        self.same(&rhs)?;
        let s = self.algebra.unit_square();
        Ok(KScalar::new(self.algebra, self.re * rhs.re + s * self.im * rhs.im, self.re * rhs.im + self.im * rhs.re))
    }

    pub fn checked_div(self, rhs: KScalar) -> Result<KScalar, ArithError> {
        self.same(&rhs)?;
        self.checked_mul(rhs.inv()?)
    }

    pub fn scale(self, k: f64) -> KScalar {
        KScalar::new(self.algebra, k * self.re, k * self.im)
    }

    pub fn conj(self) -> KScalar {
        KScalar::new(self.algebra, self.re, -self.im)
    }

    /// `z conj(z)`, which is real in both algebras: `re^2 + im^2` or `re^2 - im^2`.
    pub fn norm_sq(self) -> f64 {
        self.re * self.re - self.algebra.unit_square() * self.im * self.im
    }

    /// `|z conj(z)|^(1/2)`; vanishes on the null cone in the Lorentz algebra.
    pub fn modulus(self) -> f64 {
        self.norm_sq().abs().sqrt()
    }

    /// Euclidean length of the coefficient vector, used for residual sizes.
    pub fn magnitude(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `Re(z conj(w))`.
    pub fn inner(self, w: KScalar) -> Result<f64, ArithError> {
        Ok(self.checked_mul(w.conj())?.re)
    }

    pub fn inv(self) -> Result<KScalar, ArithError> {
        let n = self.norm_sq();
        match self.algebra {
            Algebra::Complex if self.magnitude() < TOL_ZERO => Err(ArithError::DivisionByZero { operation: "inv" }),
            Algebra::Lorentz if n.abs() < TOL_ZERO => Err(ArithError::ZeroDivisor { value: self, operation: "inv" }),
            _ => Ok(self.conj().scale(1.0 / n)),
        }
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn powi(self, n: i32) -> Result<KScalar, ArithError> {
        let mut base = if n < 0 { self.inv()? } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = KScalar::one(self.algebra);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn exp(self) -> KScalar {
        let (u, v) = (self.re, self.im);
        let r = u.exp();
        match self.algebra {
            Algebra::Complex => KScalar::complex(r * v.cos(), r * v.sin()),
            Algebra::Lorentz => KScalar::lorentz(r * v.cosh(), r * v.sinh()),
        }
    }

    pub fn sin(self) -> KScalar {
        let (u, v) = (self.re, self.im);
        match self.algebra {
            Algebra::Complex => KScalar::complex(u.sin() * v.cosh(), u.cos() * v.sinh()),
            Algebra::Lorentz => KScalar::lorentz(u.sin() * v.cos(), u.cos() * v.sin()),
        }
    }

    pub fn cos(self) -> KScalar {
        let (u, v) = (self.re, self.im);
        match self.algebra {
            Algebra::Complex => KScalar::complex(u.cos() * v.cosh(), -u.sin() * v.sinh()),
            Algebra::Lorentz => KScalar::lorentz(u.cos() * v.cos(), -u.sin() * v.sin()),
        }
    }

    pub fn sinh(self) -> KScalar {
        let (u, v) = (self.re, self.im);
        match self.algebra {
            Algebra::Complex => KScalar::complex(u.sinh() * v.cos(), u.cosh() * v.sin()),
            Algebra::Lorentz => KScalar::lorentz(u.sinh() * v.cosh(), u.cosh() * v.sinh()),
        }
    }

    pub fn cosh(self) -> KScalar {
        let (u, v) = (self.re, self.im);
        match self.algebra {
            Algebra::Complex => KScalar::complex(u.cosh() * v.cos(), u.sinh() * v.sin()),
            Algebra::Lorentz => KScalar::lorentz(u.cosh() * v.cosh(), u.sinh() * v.sinh()),
        }
    }

    /// Principal logarithm. Complex: cut along the non-positive reals.
    /// Lorentz: defined on `re > |im|`, computed componentwise through [`phi_iso`].
    pub fn ln(self) -> Result<KScalar, ArithError> {
        match self.algebra {
            Algebra::Complex => {
                if self.im.abs() <= TOL_ZERO && self.re <= 0.0 {
                    return Err(ArithError::LnBranch { value: self });
                }
                Ok(KScalar::complex(self.magnitude().ln(), self.im.atan2(self.re)))
            }
            Algebra::Lorentz => {
                let (a, b) = phi_iso(self)?;
                if a <= 0.0 || b <= 0.0 {
                    return Err(ArithError::LnBranch { value: self });
                }
                Ok(phi_iso_inv(a.ln(), b.ln()))
            }
        }
    }
}

/// The algebra isomorphism `a + tau b -> (a + b, a - b)` onto `R (+) R`.
pub fn phi_iso(z: KScalar) -> Result<(f64, f64), ArithError> {
    if z.algebra != Algebra::Lorentz {
        return Err(ArithError::AlgebraMismatch { left: z.algebra, right: Algebra::Lorentz });
    }
    Ok((z.re + z.im, z.re - z.im))
}

pub fn phi_iso_inv(a: f64, b: f64) -> KScalar {
    KScalar::lorentz(0.5 * (a + b), 0.5 * (a - b))
}

// The operator impls panic on mixed algebras; use the `checked_*` forms when
// the operands come from user input.
impl Add for KScalar {
    type Output = KScalar;
    fn add(self, rhs: KScalar) -> KScalar {
        self.checked_add(rhs).expect("KScalar addition across algebras")
    }
}

impl Sub for KScalar {
    type Output = KScalar;
    fn sub(self, rhs: KScalar) -> KScalar {
        self.checked_sub(rhs).expect("KScalar subtraction across algebras")
    }
}

impl Mul for KScalar {
    type Output = KScalar;
    fn mul(self, rhs: KScalar) -> KScalar {
        self.checked_mul(rhs).expect("KScalar multiplication across algebras")
    }
}

impl Mul<f64> for KScalar {
    type Output = KScalar;
    fn mul(self, rhs: f64) -> KScalar {
        self.scale(rhs)
    }
}

impl Div for KScalar {
    type Output = Result<KScalar, ArithError>;
    fn div(self, rhs: KScalar) -> Result<KScalar, ArithError> {
        self.checked_div(rhs)
    }
}

impl Neg for KScalar {
    type Output = KScalar;
    fn neg(self) -> KScalar {
        KScalar::new(self.algebra, -self.re, -self.im)
    }
}

impl fmt::Display for KScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*{}", self.re, sign, self.im.abs(), self.algebra.unit_symbol())
    }
}
