use rayon::prelude::*;

use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::kinematics::Scenario;
use crate::modes::{inertial_frequency, PhysicalParams};
use crate::response::{
    stimulated_only_probability, transition_probability, ProbabilityBreakdown, ResponseOptions,
};

/// Which part of the click probability a sweep reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Field in its vacuum (n₁ = 0), truncated vacuum mode sum.
    Vacuum,
    /// Stimulated terms per quantum in the lowest mode (n₁ ≫ 1 regime).
    StimulatedPerPhoton,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Vacuum => "vacuum",
            SweepMode::StimulatedPerPhoton => "stimulated_per_photon",
        }
    }
}

/// Everything that defines a probability curve except the acceleration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub length: f64,
    pub mass: f64,
    /// Detector gap; `None` tunes it to ω₁(L, m).
    pub gap: Option<f64>,
    pub mode: SweepMode,
    pub response: ResponseOptions,
}

/// The three acceleration sweeps compared in the original study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    /// m = 0.2, vacuum.
    A,
    /// m = 0.2, stimulated per photon.
    B,
    /// m = 2, stimulated per photon.
    C,
}

impl Panel {
    pub const ALL: [Panel; 3] = [Panel::A, Panel::B, Panel::C];

    pub fn config(self) -> SweepConfig {
        let (mass, mode) = match self {
            Panel::A => (0.2, SweepMode::Vacuum),
            Panel::B => (0.2, SweepMode::StimulatedPerPhoton),
            Panel::C => (2.0, SweepMode::StimulatedPerPhoton),
        };
        SweepConfig {
            length: 1.0,
            mass,
            gap: None,
            mode,
            response: ResponseOptions::default(),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Panel::A => 'a',
            Panel::B => 'b',
            Panel::C => 'c',
        }
    }
}

impl SweepConfig {
    pub fn resolved_gap(&self) -> f64 {
        self.gap.unwrap_or_else(|| {
            let probe = PhysicalParams {
                length: self.length,
                mass: self.mass,
                gap: 1.0,
                n1: 0,
                accel: 0.0,
            };
            inertial_frequency(1, &probe)
        })
    }

    /// Physical parameters at acceleration `a`. n₁ is zero in both modes:
    /// the stimulated mode reports the per-quantum coefficient instead.
    pub fn params_at(&self, accel: f64) -> Result<PhysicalParams> {
        PhysicalParams::new(self.length, self.mass, self.resolved_gap(), 0, accel)
    }

    /// Click probability for one scenario at one acceleration.
    pub fn evaluate(&self, scenario: Scenario, accel: f64) -> Result<ProbabilityBreakdown> {
        let p = self.params_at(accel)?;
        match self.mode {
            SweepMode::Vacuum => transition_probability(scenario, &p, &self.response),
            SweepMode::StimulatedPerPhoton => {
                stimulated_only_probability(scenario, &p, &self.response)
            }
        }
    }
}

/// Diagnostics attached to one sweep row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RowFlags {
    pub left_truncation: bool,
    pub right_truncation: bool,
    pub left_error: Option<String>,
    pub right_error: Option<String>,
    pub ratio_undefined: bool,
}

impl RowFlags {
    pub fn is_clean(&self) -> bool {
        *self == RowFlags::default()
    }

    /// `ok`, or `;`-separated flag names.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.left_truncation {
            parts.push("rob_tail".to_string());
        }
        if self.right_truncation {
            parts.push("bob_tail".to_string());
        }
        if let Some(e) = &self.left_error {
            parts.push(format!("rob_error={}", e.replace([',', ';'], " ")));
        }
        if let Some(e) = &self.right_error {
            parts.push(format!("bob_error={}", e.replace([',', ';'], " ")));
        }
        if self.ratio_undefined {
            parts.push("ratio_undefined".to_string());
        }
        if parts.is_empty() {
            "ok".to_string()
        } else {
            parts.join(";")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub accel: f64,
    /// Probability in the left scenario (Rob for a standard sweep); NaN on error.
    pub p_rob: f64,
    /// Probability in the right scenario (Bob for a standard sweep); NaN on error.
    pub p_bob: f64,
    /// p_bob / p_rob, when p_rob > 0.
    pub ratio: Option<f64>,
    pub rob_tail: f64,
    pub bob_tail: f64,
    pub flags: RowFlags,
}

impl SweepRow {
    /// |p_bob − p_rob| / max(p_rob, p_bob).
    pub fn deviation(&self) -> Option<f64> {
        relative_deviation(self.p_rob, self.p_bob)
    }
}

pub fn relative_deviation(p: f64, q: f64) -> Option<f64> {
    let scale = p.max(q);
    (p.is_finite() && q.is_finite() && scale > 0.0).then(|| (q - p).abs() / scale)
}

/// Probability-versus-acceleration curves for two scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub config: SweepConfig,
    pub grid: GridSpec,
    pub scenarios: (Scenario, Scenario),
    pub rows: Vec<SweepRow>,
}

/// Standard Rob-versus-Bob sweep.
pub fn sweep(config: &SweepConfig, grid: &GridSpec) -> Result<SweepTable> {
    compare_scenarios(
        config,
        grid,
        Scenario::AcceleratedDetector,
        Scenario::AcceleratedCavity,
    )
}

/// Sweeps two scenarios over the grid. Grid points run in parallel; rows come
/// back in grid order. Failures at individual points are recorded in the row
/// flags.
pub fn compare_scenarios(
    config: &SweepConfig,
    grid: &GridSpec,
    left: Scenario,
    right: Scenario,
) -> Result<SweepTable> {
    let accels = grid.accelerations(config.length)?;
    config.params_at(accels[0])?;
    let rows = accels
        .par_iter()
        .map(|&a| {
            let (l, r) = rayon::join(|| config.evaluate(left, a), || config.evaluate(right, a));
            assemble_row(a, l, r)
        })
        .collect();
    Ok(SweepTable {
        config: *config,
        grid: *grid,
        scenarios: (left, right),
        rows,
    })
}

fn assemble_row(
    accel: f64,
    left: Result<ProbabilityBreakdown>,
    right: Result<ProbabilityBreakdown>,
) -> SweepRow {
    let mut flags = RowFlags::default();
    let mut unpack = |r: Result<ProbabilityBreakdown>, is_left: bool| match r {
        Ok(b) => {
            if b.truncation_flagged() {
                if is_left {
                    flags.left_truncation = true;
                } else {
                    flags.right_truncation = true;
                }
            }
            (b.total, b.tail_estimate)
        }
        Err(e) => {
            if is_left {
                flags.left_error = Some(e.to_string());
            } else {
                flags.right_error = Some(e.to_string());
            }
            (f64::NAN, f64::NAN)
        }
    };
    let (p_rob, rob_tail) = unpack(left, true);
    let (p_bob, bob_tail) = unpack(right, false);
    let ratio = (p_rob > 0.0 && p_bob.is_finite()).then(|| p_bob / p_rob);
    flags.ratio_undefined = ratio.is_none();
    SweepRow {
        accel,
        p_rob,
        p_bob,
        ratio,
        rob_tail,
        bob_tail,
        flags,
    }
}

/// Result of comparing the two scenarios for a nearly massless field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalReport {
    /// Largest relative deviation over grid points with a·L ≤ 0.3.
    pub max_deviation: f64,
    /// (a, relative deviation) over the whole grid.
    pub profile: Vec<(f64, f64)>,
}

/// Upper a·L of the window in which the conformal comparison is scored.
pub const CONFORMAL_WINDOW_AL: f64 = 0.3;
/// Largest mass accepted by [`conformal_check`].
pub const CONFORMAL_MAX_MASS: f64 = 0.05;

/// Rob-versus-Bob comparison in the nearly conformal regime.
pub fn conformal_check(grid: &GridSpec, mass: f64, base: &SweepConfig) -> Result<ConformalReport> {
    if !(0.0..=CONFORMAL_MAX_MASS).contains(&mass) {
        return Err(Error::domain(
            "conformal_check",
            format!("mass {mass} must lie in [0, {CONFORMAL_MAX_MASS}]"),
        ));
    }
    let config = SweepConfig { mass, ..*base };
    let table = sweep(&config, grid)?;
    profile_report(&table)
}

/// Deviation profile of an existing sweep.
pub fn profile_report(table: &SweepTable) -> Result<ConformalReport> {
    let mut profile = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let d = row.deviation().ok_or(Error::NonFinite {
            what: "conformal_check deviation",
        })?;
        profile.push((row.accel, d));
    }
    let max_deviation = profile
        .iter()
        .filter(|(a, _)| a * table.config.length <= CONFORMAL_WINDOW_AL * (1.0 + 1e-12))
        .fold(0.0f64, |m, &(_, d)| m.max(d));
    Ok(ConformalReport {
        max_deviation,
        profile,
    })
}
