use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest a·L a sweep may contain; the sharp-window integrals grow like
/// √(L/a) and are ill-posed at a = 0.
pub const MIN_SWEEP_AL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Acceleration grid, with bounds given as a·L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    /// 60 log-spaced points, a·L ∈ [0.02, 1.8].
    fn default() -> Self {
        Self {
            lo: 0.02,
            hi: 1.8,
            n: 60,
            spacing: Spacing::Log,
        }
    }
}

impl GridSpec {
    /// Grid values of a·L.
    pub fn values(&self) -> Result<Vec<f64>> {
        let bad = |d: String| Err(Error::domain("GridSpec", d));
        if self.n == 0 {
            return bad("grid needs at least one point".into());
        }
        if !(self.lo >= MIN_SWEEP_AL && self.hi < 2.0 && self.lo <= self.hi) {
            return bad(format!(
                "a*L range [{}, {}] must satisfy {MIN_SWEEP_AL} <= lo <= hi < 2",
                self.lo, self.hi
            ));
        }
        if self.n > 1 && self.lo == self.hi {
            return bad("grid bounds must differ when n > 1".into());
        }
        if self.n == 1 {
            return Ok(vec![self.lo]);
        }
        let last = (self.n - 1) as f64;
        let mut v: Vec<f64> = (0..self.n)
            .map(|i| {
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.lo + f * (self.hi - self.lo),
                    Spacing::Log => self.lo * (self.hi / self.lo).powf(f),
                }
            })
            .collect();
        v[self.n - 1] = self.hi;
        Ok(v)
    }

    /// Grid values converted to accelerations for cavity length `length`.
    pub fn accelerations(&self, length: f64) -> Result<Vec<f64>> {
        Ok(self.values()?.into_iter().map(|al| al / length).collect())
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
        };
        write!(f, "{}:{}:{}:{}", self.lo, self.hi, self.n, sp)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `lo:hi:n:log|lin`
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain("GridSpec", format!("expected lo:hi:n:log|lin, got '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let lo = parts[0].parse().map_err(|_| bad())?;
        let hi = parts[1].parse().map_err(|_| bad())?;
        let n = parts[2].parse().map_err(|_| bad())?;
        let spacing = match parts[3] {
            "log" => Spacing::Log,
            "lin" => Spacing::Linear,
            _ => return Err(bad()),
        };
        let g = GridSpec { lo, hi, n, spacing };
        g.values()?;
        Ok(g)
    }
}
