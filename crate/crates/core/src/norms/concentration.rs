use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::{RadialRule, DEFAULT_NODES_PER_WAVELENGTH};
use crate::eigenbasis::{BoundaryCondition, DomainSpec, Eigenmode, ModeIndex};
use crate::error::{invalid, Result};
use crate::exec::compensated_sum;
use crate::fit::least_squares_line;
use crate::special::jn;

/// Fraction of `int u^2` carried by `{x : dist(x, boundary) < width}`.
pub fn boundary_strip_mass(mode: &Eigenmode, width: f64) -> Result<f64> {
    let domain = mode.domain();
    if !domain.has_boundary() {
        return invalid("the torus has no boundary strip");
    }
    if !(width >= 0.0 && width <= domain.inradius()) {
        return invalid(format!("strip width {width} outside [0, {}]", domain.inradius()));
    }
    match (domain, mode.index()) {
        (DomainSpec::Rectangle { width: w, height: h }, ModeIndex::Rectangle { p, q }) => {
            let fx = inner_fraction(mode.bc(), p, w, width);
            let fy = inner_fraction(mode.bc(), q, h, width);
            Ok((1.0 - fx * fy).clamp(0.0, 1.0))
        }
        _ => {
            let rule = RadialRule::new(mode.lambda().max(1.0), DEFAULT_NODES_PER_WAVELENGTH);
            let jac = domain.dimension() as i32 - 1;
            let cut = 1.0 - width;
            let mass = |a: f64, b: f64| {
                compensated_sum(
                    rule.nodes_on(a, b, &[]).iter().map(|&(r, w)| w * mode.radial_factor(r).powi(2) * r.powi(jac)),
                )
            };
            let inner = if cut > 0.0 { mass(0.0, cut) } else { 0.0 };
            let outer = if cut < 1.0 { mass(cut, 1.0) } else { 0.0 };
            Ok(outer / (inner + outer))
        }
    }
}

/// Share of `int_0^L f(j pi x / L)^2 dx` on `[d, L - d]`, `f` = sin or cos.
fn inner_fraction(bc: BoundaryCondition, j: u32, len: f64, d: f64) -> f64 {
    if j == 0 {
        return (len - 2.0 * d) / len;
    }
    let k = j as f64 * PI / len;
    let sign = if bc == BoundaryCondition::Dirichlet { -1.0 } else { 1.0 };
    let prim = |x: f64| 0.5 * x + sign * (2.0 * k * x).sin() / (4.0 * k);
    (prim(len - d) - prim(d)) / (0.5 * len)
}

/// Bounds on `g(t) = m^{1/3} J_m(m + t m^{1/3})` near the turning point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhisperingBounds {
    pub order: u32,
    /// `min g` over grid points in `[-a/2, a/2]`.
    pub kappa: f64,
    /// Whether `g >= 1` there, i.e. `J_m >= m^{-1/3}` with constant one.
    pub lower_ok: bool,
    /// `max g(t) e^{c |t|^{3/2}}` over grid points in `[-5, 2a]`.
    pub big_c: f64,
    /// Decay rate from a least-squares fit of `log g` against `|t|^{3/2}`
    /// over the grid points in `[-5, 0)`.
    pub small_c: f64,
    /// `g(0) = m^{1/3} J_m(m)`.
    pub at_turning_point: f64,
}

pub const MIN_WHISPERING_ORDER: u32 = 50;

/// `n` equally spaced points on `[-5, 2a]`.
pub fn default_t_grid(a: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (-5.0, 2.0 * a);
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn whispering_bessel_bounds(m: u32, a: f64, t_grid: &[f64]) -> Result<WhisperingBounds> {
    if m < MIN_WHISPERING_ORDER {
        return invalid(format!("order {m} below {MIN_WHISPERING_ORDER}"));
    }
    if !(a > 0.0 && a.is_finite()) {
        return invalid(format!("whispering constant must be positive, got {a}"));
    }
    let mf = m as f64;
    let s = mf.cbrt();
    let g = |t: f64| s * jn(m, (mf + t * s).max(0.0));
    let window: Vec<f64> = t_grid.iter().copied().filter(|t| t.abs() <= 0.5 * a).collect();
    if window.is_empty() {
        return invalid("t grid has no point in [-a/2, a/2]");
    }
    let kappa = window.iter().map(|&t| g(t)).fold(f64::INFINITY, f64::min);

    let (xs, ys): (Vec<f64>, Vec<f64>) = t_grid
        .iter()
        .copied()
        .filter(|&t| (-5.0..0.0).contains(&t))
        .filter_map(|t| {
            let v = g(t);
            (v > 0.0).then(|| ((-t).powf(1.5), v.ln()))
        })
        .unzip();
    let small_c = least_squares_line(&xs, &ys).map_or(f64::NAN, |(slope, _, _)| -slope);
    let big_c = t_grid
        .iter()
        .copied()
        .filter(|&t| (-5.0..=2.0 * a).contains(&t))
        .map(|t| g(t).abs() * (small_c * t.abs().powf(1.5)).exp())
        .fold(0.0, f64::max);
    Ok(WhisperingBounds { order: m, kappa, lower_ok: kappa >= 1.0, big_c, small_c, at_turning_point: g(0.0) })
}
