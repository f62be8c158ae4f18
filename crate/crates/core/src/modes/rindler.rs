use std::f64::consts::PI;

use super::{inertial_frequency, PhysicalParams};
use crate::error::{Error, Result};
use crate::quadrature;
use crate::specfun::ScaledBracket;

/// Below this mass the accelerated cavity uses the exact conformal modes.
pub const CONFORMAL_MASS_THRESHOLD: f64 = 1e-6;
/// Bisection stops once the bracketing interval is this narrow.
pub const ROOT_TOL: f64 = 1e-10;
/// Largest Bessel order the root scan will reach before giving up.
pub const MAX_SCAN_ORDER: f64 = 1e6;
const NORM_QUAD_TOL: f64 = 1e-12;
const WALL_SLACK: f64 = 1e-12;

/// Rindler radii of the cavity walls, (χ₁, χ₂) = (1/a + L/2, 1/a − L/2).
/// χ₁ is the far wall.
pub fn rindler_boundaries(params: &PhysicalParams) -> Result<(f64, f64)> {
    params.validate()?;
    params.require_positive_accel("rindler_boundaries")?;
    params.check_horizon()?;
    let inv_a = 1.0 / params.accel;
    let half = 0.5 * params.length;
    Ok((inv_a + half, inv_a - half))
}

/// Orders ν_k = kπ / ln(χ₁/χ₂) of the massless accelerated cavity.
pub fn conformal_order(k: usize, chi1: f64, chi2: f64) -> f64 {
    k as f64 * PI / (chi1 / chi2).ln()
}

fn bracket_at_near_wall(nu: f64, mass: f64, chi1: f64, chi2: f64) -> Result<f64> {
    ScaledBracket::new(nu, mass, chi1)?.eval(chi2)
}

fn bisect(mass: f64, chi1: f64, chi2: f64, mut lo: f64, mut hi: f64, mut g_lo: f64) -> Result<f64> {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = bracket_at_near_wall(mid, mass, chi1, chi2)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First `k_max` Bessel orders ν_k at which the mode bracket, anchored at the
/// far wall, vanishes at the near wall. The physical Rindler frequencies are
/// Ω_k = a ν_k.
///
/// The scan starts at χ₂ ω₁, a lower bound on ν₁ from the Rayleigh quotient
/// of the radial operator, and steps by min(0.1, ν₁ᶜ/20) where ν₁ᶜ is the
/// massless order. Each sign change is refined by bisection.
pub fn rindler_spectrum(params: &PhysicalParams, k_max: usize) -> Result<Vec<f64>> {
    let (chi1, chi2) = rindler_boundaries(params)?;
    if !(params.mass > 0.0) {
        return Err(Error::domain("rindler_spectrum", "field mass must be > 0"));
    }
    if k_max == 0 {
        return Err(Error::domain("rindler_spectrum", "k_max must be >= 1"));
    }
    let mass = params.mass;
    let step = (0.1f64).min(conformal_order(1, chi1, chi2) / 20.0);
    let lower = 0.999 * chi2 * inertial_frequency(1, params);
    // Rayleigh-quotient upper bound for the last wanted root
    let mut limit = 1.01 * chi1 * inertial_frequency(k_max, params) + 2.0 * step;

    let mut roots = Vec::with_capacity(k_max);
    let mut index = 0u64;
    let mut nu_prev = lower;
    let mut g_prev = bracket_at_near_wall(nu_prev, mass, chi1, chi2)?;
    loop {
        while roots.len() < k_max {
            index += 1;
            let nu = lower + index as f64 * step;
            if nu > limit {
                break;
            }
            let g = bracket_at_near_wall(nu, mass, chi1, chi2)?;
            if g == 0.0 {
                roots.push(nu);
            } else if g_prev != 0.0 && (g > 0.0) != (g_prev > 0.0) {
                roots.push(bisect(mass, chi1, chi2, nu_prev, nu, g_prev)?);
            }
            nu_prev = nu;
            g_prev = g;
        }
        if roots.len() == k_max {
            return Ok(roots);
        }
        if limit >= MAX_SCAN_ORDER {
            return Err(Error::RootScan {
                found: roots.len(),
                wanted: k_max,
                limit,
            });
        }
        limit = (2.0 * limit).min(MAX_SCAN_ORDER);
    }
}

/// Normalization in the scaled bracket convention: Ñ with
/// 2ν ∫ Ñ² B̃(χ)² dχ/χ = 1.
fn scaled_normalization(
    bracket: &ScaledBracket,
    chi1: f64,
    chi2: f64,
    k_hint: usize,
) -> Result<f64> {
    let integral = quadrature::integrate_real(
        |u: f64| {
            let b = bracket.eval(u.exp())?;
            Ok(b * b)
        },
        chi2.ln(),
        chi1.ln(),
        2 * k_hint + 4,
        NORM_QUAD_TOL,
        1 << 20,
        0.0,
    )?;
    Ok(1.0 / (2.0 * bracket.order() * integral).sqrt())
}

/// N_k for the bracket of order ν_k, under the Klein-Gordon convention
/// ∫ (2Ω_k / (aχ)) N_k² B_k(χ)² dχ = 1.
///
/// N_k scales like e^{-πν}; orders above roughly 225 underflow and are
/// reported as [`Error::NonFinite`]. [`RindlerModeSet`] works with the scaled
/// constants and has no such limit.
pub fn rindler_normalization(params: &PhysicalParams, nu: f64) -> Result<f64> {
    let (chi1, chi2) = rindler_boundaries(params)?;
    let bracket = ScaledBracket::new(nu, params.mass, chi1)?;
    let k_hint = (nu / conformal_order(1, chi1, chi2)).ceil() as usize;
    let scaled = scaled_normalization(&bracket, chi1, chi2, k_hint)?;
    let value = (scaled.ln() - bracket.ln_unscale()).exp();
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            what: "rindler_normalization",
        })
    }
}

#[derive(Debug, Clone)]
enum Family {
    /// Massive field: Ñ_k B̃_k(χ).
    Bessel {
        brackets: Vec<ScaledBracket>,
        scaled_norms: Vec<f64>,
    },
    /// m below [`CONFORMAL_MASS_THRESHOLD`]: sin(ν_k ln(χ/χ₁)) / √(kπ).
    Conformal,
}

/// Mode family of a uniformly accelerated cavity, in Rindler coordinates
/// (τ, χ). Immutable once built, and safe to share between threads.
#[derive(Debug, Clone)]
pub struct RindlerModeSet {
    pub params: PhysicalParams,
    pub k_max: usize,
    /// Far wall 1/a + L/2.
    pub chi1: f64,
    /// Near wall 1/a − L/2.
    pub chi2: f64,
    /// Dimensionless Bessel orders ν_k.
    pub orders: Vec<f64>,
    /// Rindler frequencies Ω_k = a ν_k, conjugate to τ.
    pub frequencies: Vec<f64>,
    family: Family,
}

impl RindlerModeSet {
    pub fn new(params: PhysicalParams, k_max: usize) -> Result<Self> {
        let (chi1, chi2) = rindler_boundaries(&params)?;
        if k_max == 0 {
            return Err(Error::domain("RindlerModeSet", "k_max must be >= 1"));
        }
        let (orders, family) = if params.mass < CONFORMAL_MASS_THRESHOLD {
            let orders = (1..=k_max)
                .map(|k| conformal_order(k, chi1, chi2))
                .collect();
            (orders, Family::Conformal)
        } else {
            let orders = rindler_spectrum(&params, k_max)?;
            let brackets = orders
                .iter()
                .map(|&nu| ScaledBracket::new(nu, params.mass, chi1))
                .collect::<Result<Vec<_>>>()?;
            let scaled_norms = brackets
                .iter()
                .enumerate()
                .map(|(i, b)| scaled_normalization(b, chi1, chi2, i + 1))
                .collect::<Result<Vec<_>>>()?;
            (
                orders,
                Family::Bessel {
                    brackets,
                    scaled_norms,
                },
            )
        };
        let frequencies = orders.iter().map(|nu| params.accel * nu).collect();
        Ok(Self {
            params,
            k_max,
            chi1,
            chi2,
            orders,
            frequencies,
            family,
        })
    }

    pub fn is_conformal(&self) -> bool {
        matches!(self.family, Family::Conformal)
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.k_max {
            return Err(Error::domain(
                "RindlerModeSet",
                format!("mode index {k} outside 1..={}", self.k_max),
            ));
        }
        Ok(())
    }

    /// ν_k
    pub fn order(&self, k: usize) -> f64 {
        self.orders[k - 1]
    }

    /// Ω_k = a ν_k
    pub fn frequency(&self, k: usize) -> f64 {
        self.frequencies[k - 1]
    }

    /// ln N_k in the unscaled bracket convention.
    pub fn ln_normalization(&self, k: usize) -> f64 {
        match &self.family {
            Family::Bessel {
                brackets,
                scaled_norms,
            } => scaled_norms[k - 1].ln() - brackets[k - 1].ln_unscale(),
            // B → 2 sin(ν ln(χ/χ₁)) / |Γ(1 + iν)|² as m → 0
            Family::Conformal => {
                let nu = self.order(k);
                let ln_gamma_sq = crate::specfun::ln_abs_gamma_one_plus_i_sq(nu);
                ln_gamma_sq - (4.0 * k as f64 * PI).sqrt().ln()
            }
        }
    }

    /// N_k in the unscaled bracket convention; zero when it underflows.
    pub fn normalization(&self, k: usize) -> f64 {
        self.ln_normalization(k).exp()
    }

    /// F_k(χ), defined on [χ₂, χ₁].
    pub fn mode(&self, k: usize, chi: f64) -> Result<f64> {
        self.check_index(k)?;
        let inside = chi >= self.chi2 * (1.0 - WALL_SLACK) && chi <= self.chi1 * (1.0 + WALL_SLACK);
        if !inside {
            return Err(Error::domain(
                "rindler_mode",
                format!("chi = {chi} outside [{}, {}]", self.chi2, self.chi1),
            ));
        }
        let chi = chi.clamp(self.chi2, self.chi1);
        match &self.family {
            Family::Bessel {
                brackets,
                scaled_norms,
            } => Ok(scaled_norms[k - 1] * brackets[k - 1].eval(chi)?),
            Family::Conformal => {
                let nu = self.order(k);
                Ok((nu * (chi / self.chi1).ln()).sin() / (k as f64 * PI).sqrt())
            }
        }
    }

    /// ∫ ((Ω_j + Ω_k) / (aχ)) F_j F_k dχ over the cavity.
    pub fn kg_inner_product(&self, j: usize, k: usize) -> Result<f64> {
        self.check_index(j)?;
        self.check_index(k)?;
        let weight = self.order(j) + self.order(k);
        quadrature::integrate_real(
            |u: f64| {
                let chi = u.exp();
                Ok(weight * self.mode(j, chi)? * self.mode(k, chi)?)
            },
            self.chi2.ln(),
            self.chi1.ln(),
            2 * j.max(k) + 4,
            NORM_QUAD_TOL,
            1 << 20,
            1.0,
        )
    }

    /// Full k_max × k_max Klein-Gordon Gram matrix. Every mode is sampled once
    /// per quadrature level; the level is doubled until the matrix is stable
    /// to 1e-10.
    pub fn gram_matrix(&self) -> Result<Vec<Vec<f64>>> {
        let (lo, hi) = (self.chi2.ln(), self.chi1.ln());
        let build = |panels: usize| -> Result<Vec<Vec<f64>>> {
            let rule = quadrature::composite_rule(lo, hi, panels);
            let samples = (1..=self.k_max)
                .map(|k| {
                    rule.iter()
                        .map(|&(u, _)| self.mode(k, u.exp()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut gram = vec![vec![0.0; self.k_max]; self.k_max];
            for j in 0..self.k_max {
                for k in 0..=j {
                    let s: f64 = rule
                        .iter()
                        .zip(samples[j].iter().zip(&samples[k]))
                        .map(|((_, w), (fj, fk))| w * fj * fk)
                        .sum();
                    let v = (self.orders[j] + self.orders[k]) * s;
                    gram[j][k] = v;
                    gram[k][j] = v;
                }
            }
            Ok(gram)
        };
        let mut panels = 2 * self.k_max + 4;
        let mut prev = build(panels)?;
        for _ in 0..8 {
            panels *= 2;
            let next = build(panels)?;
            let diff = prev
                .iter()
                .flatten()
                .zip(next.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if diff < 1e-10 {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::QuadratureNonConvergence {
            tol: 1e-10,
            nodes: panels * quadrature::PANEL_ORDER,
        })
    }
}
