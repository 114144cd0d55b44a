use serde::{Deserialize, Serialize};

use super::grid::QuadratureGrid;
use super::norm::{lp_norm, sup_norm};
use crate::eigenbasis::{Eigenmode, ModeFamily};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::fit::least_squares_line;

/// Least-squares fit `log value = exponent * log lambda + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Largest absolute deviation in `log value` from the fitted line.
    pub residual: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Which norm of each mode is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum NormSelector {
    Sup,
    Lp(f64),
    SupOverL2,
    LpOverL2(f64),
}

/// Minimum family size and `lambda_max / lambda_min` spread for a fit.
pub const MIN_FIT_MODES: usize = 10;
pub const MIN_FIT_RATIO: f64 = 4.0;
/// Fraction of the family, counted from the top, used by the fit.
pub const FIT_FRACTION: f64 = 0.8;

pub fn mode_norm(mode: &Eigenmode, selector: NormSelector) -> Result<f64> {
    let grid = || QuadratureGrid::new(mode.domain(), mode.lambda());
    Ok(match selector {
        NormSelector::Sup => sup_norm(mode).value,
        NormSelector::Lp(p) => lp_norm(mode, p, &grid()?)?,
        NormSelector::SupOverL2 => sup_norm(mode).value / lp_norm(mode, 2.0, &grid()?)?,
        NormSelector::LpOverL2(p) => {
            let g = grid()?;
            lp_norm(mode, p, &g)? / lp_norm(mode, 2.0, &g)?
        }
    })
}

/// Power law through `(lambda, value)` pairs.
pub fn fit_power_law(lambdas: &[f64], values: &[f64]) -> Result<GrowthFit> {
    if lambdas.len() != values.len() {
        return invalid("lambda and value lists differ in length");
    }
    if lambdas.iter().chain(values).any(|&v| !(v > 0.0 && v.is_finite())) {
        return invalid("power-law fit needs positive finite lambdas and values");
    }
    let x: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (exponent, intercept, residual) =
        least_squares_line(&x, &y).ok_or_else(|| crate::Error::InvalidArgument("degenerate fit: no lambda spread".into()))?;
    let lambda_min = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let lambda_max = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(GrowthFit { exponent, intercept, residual, lambda_min, lambda_max })
}

/// Fits the selected norm over the last 80% of the family.
pub fn growth_exponent_fit(family: &ModeFamily, selector: NormSelector) -> Result<GrowthFit> {
    growth_exponent_fit_with(Execution::default(), family, selector)
}

pub fn growth_exponent_fit_with(exec: Execution, family: &ModeFamily, selector: NormSelector) -> Result<GrowthFit> {
    let modes = &family.modes;
    if modes.len() < MIN_FIT_MODES {
        return invalid(format!("family has {} modes, a fit needs {MIN_FIT_MODES}", modes.len()));
    }
    let lmin = modes.iter().map(Eigenmode::lambda).fold(f64::INFINITY, f64::min);
    let lmax = modes.iter().map(Eigenmode::lambda).fold(f64::NEG_INFINITY, f64::max);
    if lmax == lmin {
        return invalid("degenerate fit: no lambda spread");
    }
    if !(lmax >= MIN_FIT_RATIO * lmin) {
        return invalid(format!("lambda ratio {} below {MIN_FIT_RATIO}", lmax / lmin));
    }
    let skip = modes.len() - (FIT_FRACTION * modes.len() as f64).round() as usize;
    let window = &modes[skip..];
    let values = exec.map_slice(window, |u| mode_norm(u, selector)).into_iter().collect::<Result<Vec<_>>>()?;
    let lambdas: Vec<f64> = window.iter().map(Eigenmode::lambda).collect();
    fit_power_law(&lambdas, &values)
}
