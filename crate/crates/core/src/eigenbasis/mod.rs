//! Separable eigenfunctions of the Laplacian on the flat model domains.

mod domain;
mod enumerate;
mod family;
mod mode;

pub use domain::{unit_ball_volume, unit_sphere_area, BoundaryCondition, DomainSpec};
pub(crate) use domain::norm;
pub use enumerate::{enumerate_modes, enumerate_modes_with, MAX_ENUMERATION_LAMBDA, MAX_MODES};
pub use family::{make_family, make_family_range, modes_csv, FamilyLabel, ModeFamily, MAX_FAMILY_INDEX, STANDARD_RECTANGLE};
pub use mode::{evaluate_mode, torus_complex_value, Eigenmode, ModeIndex};
