use std::f64::consts::PI;

use super::PhysicalParams;
use crate::error::{Error, Result};
use crate::quadrature;

/// Normalization convention for the static-cavity sine modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InertialNormalization {
    /// 1/√(kπ), exact Klein-Gordon normalization only for a massless field.
    #[default]
    Massless,
    /// 1/√(ω_k L), Klein-Gordon normalized for any mass.
    KleinGordon,
}

/// Tolerated overshoot of |x| past L/2, relative to L, before a domain error.
const WALL_SLACK: f64 = 1e-12;

/// ω_k = √((kπ/L)² + m²).
pub fn inertial_frequency(k: usize, params: &PhysicalParams) -> f64 {
    let kl = k as f64 * PI / params.length;
    kl.hypot(params.mass)
}

/// Amplitude of the k-th sine mode under the chosen convention.
pub fn inertial_normalization(
    k: usize,
    params: &PhysicalParams,
    normalization: InertialNormalization,
) -> f64 {
    match normalization {
        InertialNormalization::Massless => 1.0 / (k as f64 * PI).sqrt(),
        InertialNormalization::KleinGordon => {
            1.0 / (inertial_frequency(k, params) * params.length).sqrt()
        }
    }
}

/// Static-cavity mode F_k(x) with Dirichlet walls at x = ±L/2.
pub fn inertial_mode(
    k: usize,
    x: f64,
    params: &PhysicalParams,
    normalization: InertialNormalization,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("inertial_mode", "mode index starts at 1"));
    }
    let half = 0.5 * params.length;
    if !(x.abs() <= half * (1.0 + WALL_SLACK)) {
        return Err(Error::domain(
            "inertial_mode",
            format!("x = {x} outside the cavity [-{half}, {half}]"),
        ));
    }
    let x = x.clamp(-half, half);
    let amp = inertial_normalization(k, params, normalization);
    Ok(amp * (k as f64 * PI * (x + half) / params.length).sin())
}

/// The static-cavity mode family truncated at `k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct InertialModeSet {
    pub params: PhysicalParams,
    pub k_max: usize,
    pub normalization: InertialNormalization,
}

impl InertialModeSet {
    pub fn new(
        params: PhysicalParams,
        k_max: usize,
        normalization: InertialNormalization,
    ) -> Result<Self> {
        params.validate()?;
        if k_max == 0 {
            return Err(Error::domain("InertialModeSet", "k_max must be >= 1"));
        }
        Ok(Self {
            params,
            k_max,
            normalization,
        })
    }

    pub fn frequency(&self, k: usize) -> f64 {
        inertial_frequency(k, &self.params)
    }

    pub fn normalization(&self, k: usize) -> f64 {
        inertial_normalization(k, &self.params, self.normalization)
    }

    pub fn mode(&self, k: usize, x: f64) -> Result<f64> {
        inertial_mode(k, x, &self.params, self.normalization)
    }

    /// ∫ (ω_j + ω_k) F_j F_k dx over the cavity.
    pub fn kg_inner_product(&self, j: usize, k: usize) -> Result<f64> {
        let half = 0.5 * self.params.length;
        let weight = self.frequency(j) + self.frequency(k);
        let panels = 2 * j.max(k) + 2;
        quadrature::integrate_real(
            |x| Ok(weight * self.mode(j, x)? * self.mode(k, x)?),
            -half,
            half,
            panels,
            1e-12,
            1 << 20,
            1.0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mass: f64) -> PhysicalParams {
        PhysicalParams::resonant(1.0, mass, 0, 0.5).unwrap()
    }

    #[test]
    fn frequencies() {
        assert!((inertial_frequency(1, &params(0.0)) - PI).abs() < 1e-15);
        assert!((inertial_frequency(1, &params(0.2)) - 3.147_952_414_044_621).abs() < 1e-14);
        assert!((inertial_frequency(2, &params(2.0)) - 6.593_816_618_951_23).abs() < 1e-14);
        let p = params(0.7);
        for k in 1..30 {
            assert!(inertial_frequency(k + 1, &p) > inertial_frequency(k, &p));
        }
    }

    #[test]
    fn mode_values() {
        let p = params(0.2);
        let n = InertialNormalization::Massless;
        assert!(inertial_mode(1, -0.5, &p, n).unwrap().abs() < 1e-15);
        assert!((inertial_mode(1, 0.0, &p, n).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!(inertial_mode(2, 0.0, &p, n).unwrap().abs() < 1e-15);
        for k in 1..=15 {
            for x in [-0.5, 0.5] {
                assert!(inertial_mode(k, x, &p, n).unwrap().abs() < 1e-12);
                assert!(
                    inertial_mode(k, x, &p, InertialNormalization::KleinGordon)
                        .unwrap()
                        .abs()
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn outside_cavity_is_domain_error() {
        let p = params(0.2);
        let n = InertialNormalization::Massless;
        assert!(matches!(
            inertial_mode(1, 0.51, &p, n),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            inertial_mode(0, 0.0, &p, n),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn kg_orthonormality_depends_on_convention() {
        let massive =
            InertialModeSet::new(params(2.0), 6, InertialNormalization::KleinGordon).unwrap();
        let verbatim =
            InertialModeSet::new(params(2.0), 6, InertialNormalization::Massless).unwrap();
        let massless =
            InertialModeSet::new(params(0.0), 6, InertialNormalization::Massless).unwrap();
        for j in 1..=6 {
            for k in 1..=6 {
                let delta = if j == k { 1.0 } else { 0.0 };
                assert!((massive.kg_inner_product(j, k).unwrap() - delta).abs() < 1e-12);
                assert!((massless.kg_inner_product(j, k).unwrap() - delta).abs() < 1e-12);
                if j != k {
                    assert!(verbatim.kg_inner_product(j, k).unwrap().abs() < 1e-12);
                }
            }
            // with mass the verbatim norm is ω_k L / (kπ) > 1
            assert!(verbatim.kg_inner_product(j, j).unwrap() - 1.0 > 1e-3);
        }
    }
}
