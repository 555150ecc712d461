use rayon::prelude::*;

use super::{condition_a, CausalCharacter, EnneperError, Immersion};
use crate::kalgebra::{Algebra, KScalar};

/// Central-difference step for the Wirtinger derivatives.
pub const RECOVER_STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveredSample {
    pub point: (f64, f64),
    pub lz: KScalar,
    pub pz: KScalar,
    pub hz: KScalar,
}

/// Pointwise tables of recovered Enneper data.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredData {
    pub character: CausalCharacter,
    pub samples: Vec<RecoveredSample>,
    pub max_condition_a: f64,
}

fn minkowski(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// Recovers `(L_z, P_z, h_z)` from an immersion by finite-difference
/// Wirtinger derivatives of its coordinates.
pub fn recover(psi: &Immersion, points: &[(f64, f64)]) -> Result<RecoveredData, EnneperError> {
    let samples = points.par_iter().map(|&(s, t)| recover_at(psi, s, t)).collect::<Result<Vec<_>, _>>()?;
    let max_condition_a = samples.iter().map(|r| condition_a(r.lz, r.pz, r.hz)).fold(0.0, f64::max);
    Ok(RecoveredData { character: psi.character, samples, max_condition_a })
}

fn recover_at(psi: &Immersion, s: f64, t: f64) -> Result<RecoveredSample, EnneperError> {
    let h = RECOVER_STEP;
    let (a, b) = (psi.eval(s + h, t)?, psi.eval(s - h, t)?);
    let (c, d) = (psi.eval(s, t + h)?, psi.eval(s, t - h)?);
    let du: [f64; 3] = std::array::from_fn(|k| (a[k] - b[k]) / (2.0 * h));
    let dv: [f64; 3] = std::array::from_fn(|k| (c[k] - d[k]) / (2.0 * h));
    if minkowski(du, du).abs() < 1e-12 && minkowski(dv, dv).abs() < 1e-12 {
        return Err(EnneperError::DegenerateSample { s, t });
    }
    let alg = psi.character.algebra();
    let jac_inv = psi.domain.chart.jacobian(alg, s, t).inv().map_err(super::at(s, t))?;
    // d/dw = (d/du - i d/dv)/2 over the complex numbers, (d/du + tau d/dv)/2 over the Lorentz numbers.
    let wirtinger = |k: usize| -> KScalar {
        let dw = match alg {
            Algebra::Complex => KScalar::complex(0.5 * du[k], -0.5 * dv[k]),
            Algebra::Lorentz => KScalar::lorentz(0.5 * du[k], 0.5 * dv[k]),
        };
        dw * jac_inv
    };
    let (p1, p2, p3) = (wirtinger(0), wirtinger(1), wirtinger(2));
    let e = KScalar::unit(alg);
    let (lz, pz, hz) = match psi.character {
        CausalCharacter::Spacelike => (p1 + e * p2, p1 - e * p2, p3),
        CausalCharacter::Timelike => (p2 + e * p3, -p2 + e * p3, p1),
    };
    Ok(RecoveredSample { point: (s, t), lz, pz, hz })
}
