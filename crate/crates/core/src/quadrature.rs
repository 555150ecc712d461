//! Composite Gauss–Legendre quadrature on `[0, 1]` with panel doubling.

use std::sync::OnceLock;

use thiserror::Error;

use crate::kalgebra::KScalar;

pub const GL_ORDER: usize = 16;
pub const MAX_REFINEMENTS: u32 = 12;
pub const QUAD_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Error)]
#[error("quadrature did not converge: estimated error {estimate:e} after {refinements} refinements")]
pub struct NonConvergence {
    pub estimate: f64,
    pub refinements: u32,
}

/// Nodes and weights on `[-1, 1]`, computed once by Newton iteration on P_n.
pub fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(GL_ORDER))
}

fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates a vector-valued `f` over `[0, 1]` with `panels` equal panels.
fn composite<const N: usize, E>(
    f: &mut impl FnMut(f64) -> Result<[KScalar; N], E>,
    zero: [KScalar; N],
    panels: usize,
) -> Result<[KScalar; N], E> {
    let rule = gauss_legendre();
    let width = 1.0 / panels as f64;
    let mut acc = zero;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for &(x, w) in rule {
            let vals = f(mid + 0.5 * width * x)?;
            for (a, v) in acc.iter_mut().zip(vals) {
                *a = *a + v.scale(0.5 * width * w);
            }
        }
    }
    Ok(acc)
}

/// Doubles the panel count until successive estimates agree to
/// `QUAD_TOL * max(1, |I|)` in every component.
pub fn integrate<const N: usize, E>(
    mut f: impl FnMut(f64) -> Result<[KScalar; N], E>,
    zero: [KScalar; N],
) -> Result<Result<[KScalar; N], NonConvergence>, E> {
    let mut prev = composite(&mut f, zero, 1)?;
    let mut estimate = f64::INFINITY;
    for level in 1..=MAX_REFINEMENTS {
        let next = composite(&mut f, zero, 1 << level)?;
        estimate =
            prev.iter().zip(&next).map(|(a, b)| (*a - *b).magnitude() / b.magnitude().max(1.0)).fold(0.0, f64::max);
        if estimate < QUAD_TOL {
            return Ok(Ok(next));
        }
        prev = next;
    }
    Ok(Err(NonConvergence { estimate, refinements: MAX_REFINEMENTS }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kalgebra::Algebra;
    use std::convert::Infallible;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        let rule = gauss_legendre();
        assert_eq!(rule.len(), GL_ORDER);
        let s: f64 = rule.iter().map(|r| r.1).sum();
        assert!((s - 2.0).abs() < 1e-14);
        for k in 0..GL_ORDER {
            assert!((rule[k].0 + rule[GL_ORDER - 1 - k].0).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_for_degree_31() {
        let rule = gauss_legendre();
        let s: f64 = rule.iter().map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_oscillatory() {
        let z = KScalar::zero(Algebra::Complex);
        let r = integrate(|t| Ok::<_, Infallible>([KScalar::complex((40.0 * t).cos(), 0.0)]), [z]).unwrap().unwrap();
        assert!((r[0].re - (40.0f64).sin() / 40.0).abs() < 1e-12);
    }

    #[test]
    fn reports_nonconvergence() {
        let z = KScalar::zero(Algebra::Complex);
        let r =
            integrate(|t| Ok::<_, Infallible>([KScalar::complex((t - 0.3).abs().sqrt().recip(), 0.0)]), [z]).unwrap();
        assert!(r.is_err());
    }
}
