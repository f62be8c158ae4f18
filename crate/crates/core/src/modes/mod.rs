//! Cavity mode families.
//!
//! The static cavity carries the sine modes of a Dirichlet box in Minkowski
//! coordinates. The uniformly accelerated cavity is described in Rindler
//! coordinates (τ, χ), where the Klein-Gordon equation separates into
//! χ² F'' + χ F' + (ν² − m²χ²) F = 0 with solutions built from I_{±iν}(mχ).

mod inertial;
mod params;
mod rindler;

pub use inertial::{
    inertial_frequency, inertial_mode, inertial_normalization, InertialModeSet,
    InertialNormalization,
};
pub use params::PhysicalParams;
pub use rindler::{
    conformal_order, rindler_boundaries, rindler_normalization, rindler_spectrum, RindlerModeSet,
    CONFORMAL_MASS_THRESHOLD, MAX_SCAN_ORDER, ROOT_TOL,
};
