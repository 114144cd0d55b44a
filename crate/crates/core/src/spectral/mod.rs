//! Smoothed spectral sums: compactly supported windows in time, lattice and
//! mode sums against the Euclidean continuum, band functions and the local
//! Weyl (Carleman) ratio.

mod sums;
mod window;

pub use sums::{
    band_csv, band_function, band_function_with, band_window_inequality, carleman_constant, carleman_ratio,
    continuum_prediction, continuum_terms, continuum_terms_with, locality_csv, locality_table, smoothed_local_sum,
    smoothed_local_sum_with, smoothed_mode_sum, torus_band_table, BandRow, BandWindowCheck, LocalityRow,
    CARLEMAN_MIN_DISTANCE, CARLEMAN_MIN_SCALE, DEFAULT_TAIL_TOL, MAX_SUM_LAMBDA,
};
pub use window::{make_window, SpectralWindow};
