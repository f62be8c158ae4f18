use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Configuration of one detector experiment, in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Proper length L of the cavity.
    pub length: f64,
    /// Field mass m.
    pub mass: f64,
    /// Detector energy gap ω.
    pub gap: f64,
    /// Occupation n₁ of the lowest cavity mode.
    pub n1: u64,
    /// Proper acceleration a.
    pub accel: f64,
}

impl PhysicalParams {
    pub fn new(length: f64, mass: f64, gap: f64, n1: u64, accel: f64) -> Result<Self> {
        let p = Self {
            length,
            mass,
            gap,
            n1,
            accel,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with the detector gap tuned to the lowest inertial cavity
    /// frequency ω₁(L, m).
    pub fn resonant(length: f64, mass: f64, n1: u64, accel: f64) -> Result<Self> {
        let gap = ((PI / length).powi(2) + mass * mass).sqrt();
        Self::new(length, mass, gap, n1, accel)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |detail: String| Err(Error::domain("PhysicalParams", detail));
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad(format!("cavity length L = {} must be > 0", self.length));
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return bad(format!("field mass m = {} must be >= 0", self.mass));
        }
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return bad(format!("detector gap omega = {} must be > 0", self.gap));
        }
        if !(self.accel >= 0.0 && self.accel.is_finite()) {
            return bad(format!("acceleration a = {} must be >= 0", self.accel));
        }
        Ok(())
    }

    /// The accelerated cavity must lie entirely in front of the Rindler
    /// horizon: a·L < 2.
    pub fn check_horizon(&self) -> Result<()> {
        let al = self.accel * self.length;
        if al >= 2.0 {
            return Err(Error::Horizon { al });
        }
        Ok(())
    }

    pub(crate) fn require_positive_accel(&self, what: &'static str) -> Result<()> {
        if self.accel > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(what, "acceleration must be > 0"))
        }
    }

    pub fn with_accel(&self, accel: f64) -> Self {
        Self { accel, ..*self }
    }

    pub fn with_n1(&self, n1: u64) -> Self {
        Self { n1, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid() {
        assert!(PhysicalParams::new(0.0, 0.2, 1.0, 0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -0.1, 1.0, 0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.2, 0.0, 0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.2, 1.0, 0, -1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.2, 1.0, 0, f64::NAN).is_err());
    }

    #[test]
    fn horizon() {
        let p = PhysicalParams::resonant(1.0, 0.2, 0, 2.0).unwrap();
        assert_eq!(p.check_horizon(), Err(Error::Horizon { al: 2.0 }));
        assert!(p.with_accel(1.99).check_horizon().is_ok());
    }

    #[test]
    fn resonant_gap() {
        let p = PhysicalParams::resonant(1.0, 0.2, 0, 1.0).unwrap();
        assert!((p.gap - (PI * PI + 0.04f64).sqrt()).abs() < 1e-15);
    }
}
