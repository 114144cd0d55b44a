//! Exact Laplace eigenfunctions on flat model domains (torus, rectangle, disk,
//! radial ball) and the numerical machinery for measuring their sup-norm
//! growth, concentration, multiplicities and smoothed spectral sums.

pub mod boundary_layer;
pub mod counting;
pub mod eigenbasis;
pub mod error;
pub mod exec;
pub mod extremal;
mod fit;
mod lattice;
pub mod norms;
pub mod quadrature;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Execution;

/// Formats `x` with at most 15 significant digits, shortest form, `.` decimal
/// point; exponent notation outside `[1e-4, 1e15)`.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("float round trip");
    let a = rounded.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}
