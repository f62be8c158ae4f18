//! Detector worldlines and coupling windows for the two scenarios.
//!
//! Rob rides the hyperbola x(τ) = −(cosh aτ − 1)/a through a static cavity.
//! Bob is inertial and crosses a cavity that accelerates uniformly; in the
//! cavity's Rindler frame his path is χ(t) = √(a⁻² − t²). In both cases the
//! coupling is switched on sharply while the detector is inside the cavity,
//! i.e. for evolution parameter s ∈ [−T, T]. The detector enters at a wall,
//! reaches the cavity centre at s = 0 and leaves through the same wall.

use crate::error::{Error, Result};
use crate::modes::PhysicalParams;

/// Which twin carries the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Rob: uniformly accelerated detector, static cavity.
    AcceleratedDetector,
    /// Bob: inertial detector, uniformly accelerated cavity.
    AcceleratedCavity,
}

impl Scenario {
    pub const ALL: [Scenario; 2] = [Scenario::AcceleratedDetector, Scenario::AcceleratedCavity];

    pub fn short_name(self) -> &'static str {
        match self {
            Scenario::AcceleratedDetector => "rob",
            Scenario::AcceleratedCavity => "bob",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rob" => Ok(Scenario::AcceleratedDetector),
            "bob" => Ok(Scenario::AcceleratedCavity),
            other => Err(Error::domain(
                "Scenario",
                format!("unknown scenario '{other}'"),
            )),
        }
    }
}

/// Rob's position as a function of his proper time: (t, x).
pub fn rob_worldline(a: f64, tau: f64) -> (f64, f64) {
    let at = a * tau;
    (at.sinh() / a, -(at.cosh() - 1.0) / a)
}

/// Half-width of Rob's coupling window, T = a⁻¹ arccosh(1 + aL/2).
pub fn rob_window(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    params.require_positive_accel("rob_window")?;
    let a = params.accel;
    Ok((0.5 * a * params.length + 1.0).acosh() / a)
}

/// Bob's position in the cavity's Rindler frame as a function of his proper
/// time: (τ, χ).
pub fn bob_worldline(a: f64, t: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) {
        return Err(Error::domain("bob_worldline", "acceleration must be > 0"));
    }
    let at = a * t;
    if !(at.abs() < 1.0) {
        return Err(Error::Horizon { al: 2.0 * at.abs() });
    }
    Ok((at.atanh() / a, (1.0 - at * at).sqrt() / a))
}

/// Half-width of Bob's coupling window, T = a⁻¹ √(aL (1 − aL/4)) < 1/a.
pub fn bob_window(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    params.require_positive_accel("bob_window")?;
    params.check_horizon()?;
    let al = params.accel * params.length;
    Ok((al * (1.0 - 0.25 * al)).sqrt() / params.accel)
}

/// Minkowski (t, x) → Rindler (τ, χ) in the right wedge x > |t|.
pub fn rindler_transform(t: f64, x: f64, a: f64) -> Result<(f64, f64)> {
    if !(x > t.abs()) {
        return Err(Error::Wedge { t, x });
    }
    Ok(((t / x).atanh() / a, ((x - t) * (x + t)).sqrt()))
}

/// Rindler (τ, χ) → Minkowski (t, x).
pub fn inverse_rindler_transform(tau: f64, chi: f64, a: f64) -> (f64, f64) {
    let at = a * tau;
    (chi * at.sinh(), chi * at.cosh())
}

/// ξ = a⁻¹ ln(aχ), in which the massless field looks inertial.
pub fn conformal_coordinate(chi: f64, a: f64) -> Result<f64> {
    if !(chi > 0.0) {
        return Err(Error::domain(
            "conformal_coordinate",
            format!("chi = {chi} must be > 0"),
        ));
    }
    Ok((a * chi).ln() / a)
}

/// A detector trajectory together with its coupling window [−T, T].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedWorldline {
    pub scenario: Scenario,
    pub params: PhysicalParams,
    pub half_window: f64,
}

/// Where the detector is, in the coordinates its cavity's modes are written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldlinePoint {
    /// Time variable of the cavity modes: t for Rob, τ for Bob.
    pub field_time: f64,
    /// Position variable of the cavity modes: x for Rob, χ for Bob.
    pub position: f64,
}

impl WindowedWorldline {
    pub fn new(scenario: Scenario, params: PhysicalParams) -> Result<Self> {
        let half_window = match scenario {
            Scenario::AcceleratedDetector => rob_window(&params)?,
            Scenario::AcceleratedCavity => bob_window(&params)?,
        };
        Ok(Self {
            scenario,
            params,
            half_window,
        })
    }

    /// Position and field time at detector proper time `s`.
    pub fn point(&self, s: f64) -> Result<WorldlinePoint> {
        let a = self.params.accel;
        match self.scenario {
            Scenario::AcceleratedDetector => {
                let (t, x) = rob_worldline(a, s);
                Ok(WorldlinePoint {
                    field_time: t,
                    position: x,
                })
            }
            Scenario::AcceleratedCavity => {
                let (tau, chi) = bob_worldline(a, s)?;
                Ok(WorldlinePoint {
                    field_time: tau,
                    position: chi,
                })
            }
        }
    }

    /// d(field time)/ds: cosh(as) for Rob, 1/(1 − a²s²) for Bob.
    pub fn field_time_rate(&self, s: f64) -> f64 {
        let as_ = self.params.accel * s;
        match self.scenario {
            Scenario::AcceleratedDetector => as_.cosh(),
            Scenario::AcceleratedCavity => 1.0 / (1.0 - as_ * as_),
        }
    }

    /// ε(s): one inside the window, zero outside.
    pub fn window(&self, s: f64) -> f64 {
        if s.abs() <= self.half_window {
            1.0
        } else {
            0.0
        }
    }
}
