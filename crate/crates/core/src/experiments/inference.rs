use rayon::prelude::*;

use super::grid::MIN_SWEEP_AL;
use super::sweep::SweepConfig;
use crate::error::{Error, Result};
use crate::kinematics::Scenario;

/// Reference-curve density used when none is given.
pub const DEFAULT_CURVE_POINTS: usize = 64;
/// Relative slack by which a measurement may exceed a curve's range and
/// still count as admitted by it.
pub const DEFAULT_ADMISSION_BAND: f64 = 1e-3;
const BISECTION_REL_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 60;

/// Acceleration interval `[lo, hi]` searched by the inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn validate(&self, length: f64) -> Result<()> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && self.lo < self.hi
            && self.lo * length >= MIN_SWEEP_AL * (1.0 - 1e-12)
            && self.hi * length < 2.0;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(
                "acceleration bracket",
                format!(
                    "[{}, {}] must satisfy {MIN_SWEEP_AL} <= a*L, a*L < 2 and lo < hi (L = {length})",
                    self.lo, self.hi
                ),
            ))
        }
    }
}

/// Click probability sampled on an evenly spaced acceleration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCurve {
    pub scenario: Scenario,
    pub config: SweepConfig,
    pub bracket: Bracket,
    pub points: Vec<(f64, f64)>,
}

impl ReferenceCurve {
    pub fn build(
        scenario: Scenario,
        config: &SweepConfig,
        bracket: Bracket,
        n: usize,
    ) -> Result<Self> {
        bracket.validate(config.length)?;
        if n < 2 {
            return Err(Error::domain("reference curve", "needs at least 2 points"));
        }
        let step = (bracket.hi - bracket.lo) / (n - 1) as f64;
        let points = (0..n)
            .into_par_iter()
            .map(|i| {
                let a = if i + 1 == n {
                    bracket.hi
                } else {
                    bracket.lo + step * i as f64
                };
                let p = config.evaluate(scenario, a)?.total;
                if p.is_finite() {
                    Ok((a, p))
                } else {
                    Err(Error::NonFinite {
                        what: "reference curve",
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            scenario,
            config: *config,
            bracket,
            points,
        })
    }

    /// (min, max) of the sampled probabilities.
    pub fn range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, p)| {
                (lo.min(p), hi.max(p))
            })
    }

    fn admits(&self, p: f64, band: f64) -> bool {
        let (lo, hi) = self.range();
        p >= lo * (1.0 - band) && p <= hi * (1.0 + band)
    }

    /// Every acceleration at which the model reproduces `p`.
    pub fn invert(&self, p: f64) -> Result<AccelerationEstimate> {
        let (lo, hi) = self.range();
        if !p.is_finite() || p < lo || p > hi {
            return Err(Error::OutOfRange { p, lo, hi });
        }
        let mut candidates: Vec<f64> = Vec::new();
        for w in self.points.windows(2) {
            let ((a0, p0), (a1, p1)) = (w[0], w[1]);
            if (p0 - p) * (p1 - p) > 0.0 {
                continue;
            }
            let root = if p0 == p {
                a0
            } else if p1 == p {
                a1
            } else {
                self.bisect(a0, p0 - p, a1, p)?
            };
            // a sampled value equal to p is shared by two adjacent cells
            if candidates
                .last()
                .is_none_or(|&c| (root - c).abs() > BISECTION_REL_TOL * root.abs().max(1.0))
            {
                candidates.push(root);
            }
        }
        Ok(AccelerationEstimate {
            multi_valued: candidates.len() > 1,
            candidates,
            curve_range: (lo, hi),
        })
    }

    fn bisect(&self, mut lo: f64, mut g_lo: f64, mut hi: f64, p: f64) -> Result<f64> {
        for _ in 0..MAX_BISECTIONS {
            if hi - lo <= BISECTION_REL_TOL * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let g = self.config.evaluate(self.scenario, mid)?.total - p;
            if g == 0.0 {
                return Ok(mid);
            }
            if (g < 0.0) == (g_lo < 0.0) {
                lo = mid;
                g_lo = g;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationEstimate {
    /// Matching accelerations in increasing order.
    pub candidates: Vec<f64>,
    /// More than one monotone segment of the curve matched.
    pub multi_valued: bool,
    pub curve_range: (f64, f64),
}

/// Accelerations at which `scenario` under `config` gives click probability
/// `p_measured`.
pub fn estimate_acceleration(
    p_measured: f64,
    scenario: Scenario,
    config: &SweepConfig,
    bracket: Bracket,
) -> Result<AccelerationEstimate> {
    ReferenceCurve::build(scenario, config, bracket, DEFAULT_CURVE_POINTS)?.invert(p_measured)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    /// Only the accelerated-detector, static-cavity curve explains the measurement.
    InertialCavityFrame,
    /// Only the inertial-detector, accelerated-cavity curve explains it.
    AcceleratedCavityFrame,
    Indistinguishable,
}

impl FrameClass {
    pub fn name(self) -> &'static str {
        match self {
            FrameClass::InertialCavityFrame => "inertial-cavity-frame",
            FrameClass::AcceleratedCavityFrame => "accelerated-cavity-frame",
            FrameClass::Indistinguishable => "indistinguishable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameDiscrimination {
    pub class: FrameClass,
    pub p_measured: f64,
    /// Candidates on the accelerated-detector curve, if it admits the measurement.
    pub rob: Option<AccelerationEstimate>,
    /// Candidates on the accelerated-cavity curve, if it admits the measurement.
    pub bob: Option<AccelerationEstimate>,
}

/// Decides which scenario can produce `p_measured` somewhere in the bracket.
///
/// A curve admits the measurement when it lies within the curve's sampled
/// range widened by `band` (relative). Measurements admitted by both curves,
/// and non-positive measurements, are indistinguishable.
pub fn discriminate_frame(
    p_measured: f64,
    config: &SweepConfig,
    bracket: Bracket,
    band: f64,
) -> Result<FrameDiscrimination> {
    if !p_measured.is_finite() {
        return Err(Error::NonFinite {
            what: "measured probability",
        });
    }
    if !(0.0..1.0).contains(&band) {
        return Err(Error::domain(
            "discriminate_frame",
            format!("band {band} must lie in [0, 1)"),
        ));
    }
    bracket.validate(config.length)?;
    if p_measured <= 0.0 {
        return Ok(FrameDiscrimination {
            class: FrameClass::Indistinguishable,
            p_measured,
            rob: None,
            bob: None,
        });
    }
    let (rob_curve, bob_curve) = rayon::join(
        || {
            ReferenceCurve::build(
                Scenario::AcceleratedDetector,
                config,
                bracket,
                DEFAULT_CURVE_POINTS,
            )
        },
        || {
            ReferenceCurve::build(
                Scenario::AcceleratedCavity,
                config,
                bracket,
                DEFAULT_CURVE_POINTS,
            )
        },
    );
    let (rob_curve, bob_curve) = (rob_curve?, bob_curve?);
    let rob = admitted(&rob_curve, p_measured, band)?;
    let bob = admitted(&bob_curve, p_measured, band)?;
    let class = match (&rob, &bob) {
        (Some(_), Some(_)) => FrameClass::Indistinguishable,
        (Some(_), None) => FrameClass::InertialCavityFrame,
        (None, Some(_)) => FrameClass::AcceleratedCavityFrame,
        (None, None) => {
            let (r0, r1) = rob_curve.range();
            let (b0, b1) = bob_curve.range();
            return Err(Error::OutOfRange {
                p: p_measured,
                lo: r0.min(b0),
                hi: r1.max(b1),
            });
        }
    };
    Ok(FrameDiscrimination {
        class,
        p_measured,
        rob,
        bob,
    })
}

fn admitted(curve: &ReferenceCurve, p: f64, band: f64) -> Result<Option<AccelerationEstimate>> {
    if !curve.admits(p, band) {
        return Ok(None);
    }
    let (lo, hi) = curve.range();
    // inside the band but just past an end: pin to that end
    curve.invert(p.clamp(lo, hi)).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Panel;

    fn bracket() -> Bracket {
        Bracket::new(0.05, 0.4)
    }

    #[test]
    fn round_trip_on_grid_points() {
        let cfg = Panel::C.config();
        let curve =
            ReferenceCurve::build(Scenario::AcceleratedDetector, &cfg, bracket(), 12).unwrap();
        let cell = (bracket().hi - bracket().lo) / 11.0;
        for &(a, p) in &curve.points[1..11] {
            let est = curve.invert(p).unwrap();
            assert!(
                est.candidates.iter().any(|c| (c - a).abs() <= cell),
                "{a} {:?}",
                est.candidates
            );
        }
    }

    #[test]
    fn off_grid_round_trip_is_tight() {
        let cfg = Panel::C.config();
        let a = 0.1234;
        let p = cfg
            .evaluate(Scenario::AcceleratedDetector, a)
            .unwrap()
            .total;
        let est = estimate_acceleration(p, Scenario::AcceleratedDetector, &cfg, bracket()).unwrap();
        assert_eq!(est.candidates.len(), 1);
        assert!((est.candidates[0] - a).abs() < 1e-6 * a);
    }

    #[test]
    fn out_of_range_measurement() {
        let cfg = Panel::C.config();
        let curve =
            ReferenceCurve::build(Scenario::AcceleratedDetector, &cfg, bracket(), 8).unwrap();
        let (_, hi) = curve.range();
        assert!(matches!(
            curve.invert(2.0 * hi),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            curve.invert(f64::NAN),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn multi_valued_curves_return_every_crossing() {
        let curve = ReferenceCurve {
            scenario: Scenario::AcceleratedDetector,
            config: Panel::C.config(),
            bracket: Bracket::new(0.1, 0.5),
            points: vec![(0.1, 1.0), (0.2, 3.0), (0.3, 2.0), (0.4, 3.0), (0.5, 1.0)],
        };
        // exact sample hits do not trigger model evaluations
        let est = curve.invert(3.0).unwrap();
        assert_eq!(est.candidates, vec![0.2, 0.4]);
        assert!(est.multi_valued);
        let single = curve.invert(1.0).unwrap();
        assert_eq!(single.candidates, vec![0.1, 0.5]);
    }

    #[test]
    fn bracket_domain() {
        let cfg = Panel::C.config();
        for b in [
            Bracket::new(0.01, 0.5),
            Bracket::new(0.5, 0.1),
            Bracket::new(0.1, 2.0),
        ] {
            assert!(matches!(
                estimate_acceleration(1.0, Scenario::AcceleratedCavity, &cfg, b),
                Err(Error::Domain { .. })
            ));
        }
    }

    #[test]
    fn zero_measurement_is_indistinguishable() {
        let d =
            discriminate_frame(0.0, &Panel::C.config(), bracket(), DEFAULT_ADMISSION_BAND).unwrap();
        assert_eq!(d.class, FrameClass::Indistinguishable);
    }
}
