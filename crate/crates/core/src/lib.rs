//! Click probabilities of an Unruh-DeWitt detector coupled to a massive scalar
//! field in a one-dimensional cavity, for an accelerated detector crossing a
//! static cavity and for an inertial detector crossing a uniformly
//! accelerated cavity.
//!
//! Natural units (c = ħ = 1). The overall coupling constant is set to one, so
//! probabilities carry an arbitrary common scale and only ratios and curve
//! shapes are meaningful.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod kinematics;
pub mod modes;
pub mod quadrature;
pub mod response;
pub mod specfun;

pub use error::{Error, Result};
pub use kinematics::Scenario;
pub use modes::PhysicalParams;
