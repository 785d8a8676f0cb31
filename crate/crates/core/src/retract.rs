//! The tempering retraction `z -> z/|z|` on twists and stratum coordinates,
//! and the straight-line homotopy `z -> z |z|^{-t}` connecting it to the identity.

use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::parameters::{LParameter, OrbitDescriptor};
use crate::qproj::StratumPoint;
use crate::scalars::{QScalar, Rational};

pub fn temper_parameter(phi: &LParameter) -> LParameter {
    phi.map_twists(QScalar::unit_part)
}

fn check_time(t: Rational) -> Result<()> {
    if t < Rational::zero() || t > Rational::one() {
        return Err(invalid(format!("homotopy time {t} is outside [0, 1]")));
    }
    Ok(())
}

fn scale_modulus(z: QScalar, t: Rational) -> QScalar {
    QScalar::new(z.q_exp() * (Rational::one() - t), z.turn())
}

/// Twist moduli scaled by `1 - t`; `t = 0` is the identity and `t = 1` is
/// [`temper_parameter`].
pub fn homotopy(phi: &LParameter, t: Rational) -> Result<LParameter> {
    check_time(t)?;
    Ok(phi.map_twists(|z| scale_modulus(z, t)))
}

pub fn temper_point(p: &StratumPoint) -> StratumPoint {
    p.map_coords(QScalar::unit_part)
}

pub fn homotopy_point(p: &StratumPoint, t: Rational) -> Result<StratumPoint> {
    check_time(t)?;
    Ok(p.map_coords(|z| scale_modulus(z, t)))
}

/// Multiplicities `(l_1, ..., l_k)` describing the compact orbit
/// `Sym^{l_1} T x ... x Sym^{l_k} T`.
pub fn compact_orbit(o: &OrbitDescriptor) -> Result<Vec<usize>> {
    if let Some(e) = o.entries().iter().find(|e| !e.class.rho.unitary_det) {
        return Err(invalid(format!(
            "class '{}' has non-unitary determinant; the compact orbit is undefined",
            e.class.rho.id
        )));
    }
    Ok(o.multiplicities().collect())
}
