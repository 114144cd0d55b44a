//! Maximum principle in the boundary layer `{dist(x, boundary) < 1/lambda}`
//! of the unit disk, with the explicit comparison functions of the layer
//! argument.

use serde::Serialize;

use crate::eigenbasis::{enumerate_modes_with, BoundaryCondition, DomainSpec, Eigenmode, ModeIndex};
use crate::error::{ensure_finite, invalid, Error, Result};
use crate::exec::Execution;
use crate::norms::dense_max;

/// Multiplier allowed on the inner-boundary maximum.
pub const DIRICHLET_FACTOR: f64 = 1.0;
pub const NEUMANN_FACTOR: f64 = 20.0;
/// Smallest frequency accepted by [`max_principle_check`].
pub const MIN_LAYER_LAMBDA: f64 = 10.0;
/// Radial samples across the layer before refinement.
pub const LAYER_SAMPLES: usize = 64;

const SLOPE: f64 = 1.5;

fn check_strip(lambda: f64, x_n: f64) -> Result<()> {
    ensure_finite("lambda", lambda)?;
    ensure_finite("x_n", x_n)?;
    if lambda <= 0.0 {
        return invalid(format!("lambda must be positive, got {lambda}"));
    }
    if !(0.0..=1.0 / lambda).contains(&x_n) {
        return invalid(format!("x_n = {x_n} lies outside the strip [0, {}]", 1.0 / lambda));
    }
    Ok(())
}

/// `sin(pi/2 + 3/2 (lambda x_n - 1))`, which is `cos(3/2)` at the boundary
/// and 1 on the inner edge of the strip.
pub fn comparison_dirichlet(lambda: f64, x_n: f64) -> Result<f64> {
    check_strip(lambda, x_n)?;
    Ok((SLOPE * (lambda * x_n - 1.0)).cos())
}

/// `sin(pi/2 + 3/2 lambda x_n)`, with zero normal derivative at the boundary.
pub fn comparison_neumann(lambda: f64, x_n: f64) -> Result<f64> {
    check_strip(lambda, x_n)?;
    Ok((SLOPE * lambda * x_n).cos())
}

pub fn comparison(bc: BoundaryCondition, lambda: f64, x_n: f64) -> Result<f64> {
    match bc {
        BoundaryCondition::Dirichlet => comparison_dirichlet(lambda, x_n),
        BoundaryCondition::Neumann => comparison_neumann(lambda, x_n),
        BoundaryCondition::None => invalid("comparison functions need a boundary condition"),
    }
}

/// `(Delta + lambda^2) v` on the disk strip, with `x_n = 1 - r`:
/// `-(5/4) lambda^2 v - v'(x_n) / (1 - x_n)`.
pub fn disk_comparison_residual(bc: BoundaryCondition, lambda: f64, x_n: f64) -> Result<f64> {
    let v = comparison(bc, lambda, x_n)?;
    let phase = match bc {
        BoundaryCondition::Dirichlet => SLOPE * (lambda * x_n - 1.0),
        _ => SLOPE * lambda * x_n,
    };
    let dv = -SLOPE * lambda * phase.sin();
    Ok(-1.25 * lambda * lambda * v - dv / (1.0 - x_n))
}

/// Whether `(Delta + lambda^2) v < 0` at `samples + 1` points across the strip.
pub fn disk_sign_condition(bc: BoundaryCondition, lambda: f64, samples: usize) -> Result<bool> {
    let n = samples.max(1);
    for i in 0..=n {
        let x_n = i as f64 / n as f64 / lambda;
        if disk_comparison_residual(bc, lambda, x_n.min(1.0 / lambda))? >= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `lambda` in the sorted scan from which the sign condition holds
/// at every later scan point, or `None` if it fails at the last one.
pub fn sign_condition_threshold(bc: BoundaryCondition, lambdas: &[f64]) -> Result<Option<f64>> {
    let mut threshold = None;
    for &lambda in lambdas.iter().rev() {
        if disk_sign_condition(bc, lambda, 400)? {
            threshold = Some(lambda);
        } else {
            break;
        }
    }
    Ok(threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerCheck {
    pub mode: Eigenmode,
    pub lambda: f64,
    pub width: f64,
    /// `max |u|` over `dist < 1/lambda`.
    pub max_inside: f64,
    /// `max |u|` over `dist = 1/lambda`.
    pub max_inner: f64,
    pub factor: f64,
    pub holds: bool,
}

impl LayerCheck {
    /// `max_inside / max_inner`, the sharpest factor the mode allows.
    pub fn empirical_factor(&self) -> f64 {
        self.max_inside / self.max_inner
    }
}

/// Compares `|u|` in the boundary layer with its maximum on the inner edge.
///
/// Disk modes separate as `R(r) Theta(theta)` with `max |Theta| = 1` on every
/// circle, so both maxima reduce to radial ones.
pub fn max_principle_check(mode: &Eigenmode) -> Result<LayerCheck> {
    match mode.domain() {
        DomainSpec::Disk => {}
        DomainSpec::Torus { .. } => return invalid("the torus has no boundary layer"),
        other => return Err(Error::Unsupported(format!("boundary layer checks are implemented on the disk, not the {}", other.name()))),
    }
    let lambda = mode.lambda();
    if lambda < MIN_LAYER_LAMBDA {
        return invalid(format!("lambda = {lambda} is below {MIN_LAYER_LAMBDA}"));
    }
    let width = 1.0 / lambda;
    let inner_r = 1.0 - width;
    let g = |r: f64| mode.radial_factor(r).abs();
    let max_inner = g(inner_r);
    let (_, sampled) = dense_max(g, inner_r, 1.0, LAYER_SAMPLES);
    // the open layer excludes the inner circle, but |u| is continuous there
    let max_inside = sampled.max(max_inner);
    let factor = if mode.bc() == BoundaryCondition::Neumann { NEUMANN_FACTOR } else { DIRICHLET_FACTOR };
    Ok(LayerCheck {
        mode: mode.clone(),
        lambda,
        width,
        max_inside,
        max_inner,
        factor,
        holds: max_inside <= factor * max_inner + 1e-10,
    })
}

/// Layer checks for every disk mode with `lambda` in `[lo, hi]`.
pub fn layer_sweep(exec: Execution, bc: BoundaryCondition, lo: f64, hi: f64) -> Result<Vec<LayerCheck>> {
    if lo < MIN_LAYER_LAMBDA {
        return invalid(format!("sweep must start at lambda >= {MIN_LAYER_LAMBDA}"));
    }
    let modes: Vec<Eigenmode> = enumerate_modes_with(exec, DomainSpec::Disk, bc, hi)?
        .into_iter()
        .filter(|m| m.lambda() >= lo)
        .collect();
    exec.map_slice(&modes, max_principle_check).into_iter().collect()
}

pub fn layer_csv(rows: &[LayerCheck]) -> String {
    let mut out = String::from("bc,m,k,lambda,max_inside,max_inner,factor,holds\n");
    for c in rows {
        let (m, k) = match c.mode.index() {
            ModeIndex::Disk { m, k } => (m, k),
            _ => (0, 0),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.mode.bc().name(),
            m,
            k,
            crate::fmt_sig(c.lambda),
            crate::fmt_sig(c.max_inside),
            crate::fmt_sig(c.max_inner),
            crate::fmt_sig(c.factor),
            c.holds
        ));
    }
    out
}
