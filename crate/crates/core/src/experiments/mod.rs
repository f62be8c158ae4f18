//! Probability-versus-acceleration sweeps comparing the two scenarios, the
//! nearly-massless consistency check, and inversion of a measured click
//! probability into an acceleration.

mod grid;
mod inference;
mod sweep;

pub use grid::{GridSpec, Spacing, MIN_SWEEP_AL};
pub use inference::{
    discriminate_frame, estimate_acceleration, AccelerationEstimate, Bracket, FrameClass,
    FrameDiscrimination, ReferenceCurve, DEFAULT_ADMISSION_BAND, DEFAULT_CURVE_POINTS,
};
pub use sweep::{
    compare_scenarios, conformal_check, profile_report, relative_deviation, sweep, ConformalReport,
    Panel, RowFlags, SweepConfig, SweepMode, SweepRow, SweepTable, CONFORMAL_MAX_MASS,
    CONFORMAL_WINDOW_AL,
};
