//! L^p and sup norms of eigenmodes, growth-exponent fits and boundary
//! concentration diagnostics.

mod concentration;
mod grid;
mod growth;
mod norm;

pub use concentration::{
    boundary_strip_mass, default_t_grid, whispering_bessel_bounds, WhisperingBounds, MIN_WHISPERING_ORDER,
};
pub use grid::{QuadratureGrid, DEFAULT_NODES_PER_WAVELENGTH, MIN_NODES_PER_WAVELENGTH};
pub use growth::{
    fit_power_law, growth_exponent_fit, growth_exponent_fit_with, mode_norm, GrowthFit, NormSelector, FIT_FRACTION,
    MIN_FIT_MODES, MIN_FIT_RATIO,
};
pub use norm::{
    lp_norm, lp_norm_of, mean_abs_cos_pow, norm_row, norm_table, norm_table_csv, sup_norm, NormRow, SupNorm,
    SUP_SAMPLES_PER_WAVELENGTH,
};
pub(crate) use norm::dense_max;

#[cfg(test)]
mod tests;
