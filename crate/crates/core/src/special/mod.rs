//! Bessel functions of the first kind, their zeros, and the boundary-layer
//! asymptotics of the first zero.

mod bessel;
mod zeros;

pub use bessel::{bessel_j, poisson_integral_check, scaled_bessel_peak, BesselPoint, MAX_ORDER};
pub use zeros::{
    bessel_deriv_zero, bessel_zero, bessel_zeros_upto, whispering_constant_estimate, BesselZero,
    WhisperingEstimate, ZeroKind, WHISPERING_CONSTANT,
};

pub(crate) use bessel::jn;
