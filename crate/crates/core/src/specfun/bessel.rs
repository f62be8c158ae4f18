use num_complex::Complex64;

use super::gamma::{complex_gamma, ln_abs_gamma_one_plus_i_sq};
use crate::error::{Error, Result};

/// Hard cap on the number of power-series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;
const SERIES_REL_EPS: f64 = 1e-16;

/// Power series Σ_j (z/2)^{2j} / (j! (1 + iν)_j), the regular part of
/// Γ(1 + iν) (z/2)^{-iν} I_{iν}(z).
fn regular_series(nu: f64, z: f64) -> Result<Complex64> {
    let q = 0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..=MAX_SERIES_TERMS {
        let jf = j as f64;
        let step = q / (jf * jf.hypot(nu));
        term = term * q / (jf * Complex64::new(jf, nu));
        sum += term;
        // terms decrease monotonically once the ratio drops below one
        if step < 0.5 && term.norm() <= SERIES_REL_EPS * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence {
        what: "bessel_i_imag_order",
        terms: MAX_SERIES_TERMS,
    })
}

fn check_argument(z: f64) -> Result<()> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(
            "bessel_i_imag_order",
            format!("argument z = {z} must be positive and finite"),
        ));
    }
    Ok(())
}

/// Modified Bessel function of the first kind of purely imaginary order,
/// I_{iν}(z), for real ν and real z > 0.
///
/// The magnitude grows like e^{π|ν|/2}; for |ν| beyond roughly 450 the value
/// is not representable and a [`Error::NonFinite`] is returned. Use
/// [`bessel_i_imag_order_scaled`] in that regime.
pub fn bessel_i_imag_order(nu: f64, z: f64) -> Result<Complex64> {
    check_argument(z)?;
    let series = regular_series(nu, z)?;
    let power = Complex64::new(0.0, nu * (0.5 * z).ln()).exp();
    let value = power * series / complex_gamma(Complex64::new(1.0, nu))?;
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            what: "bessel_i_imag_order",
        })
    }
}

/// Γ(1 + iν) · I_{iν}(z), which stays of order one in the oscillatory region
/// z < ν for any ν.
pub fn bessel_i_imag_order_scaled(nu: f64, z: f64) -> Result<Complex64> {
    check_argument(z)?;
    let series = regular_series(nu, z)?;
    Ok(Complex64::new(0.0, nu * (0.5 * z).ln()).exp() * series)
}

/// Evaluator for the Rindler mode bracket at fixed order, mass and reference
/// wall. The reference-wall series is computed once.
///
/// Values are returned in the scaled normalization
/// B̃(χ) = |Γ(1 + iν)|² · B(χ) = 2 Im[ conj(Ĩ(mχ_ref)) Ĩ(mχ) ].
#[derive(Debug, Clone, Copy)]
pub struct ScaledBracket {
    nu: f64,
    mass: f64,
    chi_ref: f64,
    ref_series_conj: Complex64,
}

impl ScaledBracket {
    pub fn new(nu: f64, mass: f64, chi_ref: f64) -> Result<Self> {
        check_bracket_args(nu, mass, chi_ref, chi_ref)?;
        let ref_series_conj = regular_series(nu, mass * chi_ref)?.conj();
        Ok(Self {
            nu,
            mass,
            chi_ref,
            ref_series_conj,
        })
    }

    pub fn order(&self) -> f64 {
        self.nu
    }

    pub fn eval(&self, chi: f64) -> Result<f64> {
        if !(chi > 0.0 && chi.is_finite()) {
            return Err(Error::domain(
                "rindler_bracket",
                format!("chi = {chi} must be positive"),
            ));
        }
        let series = regular_series(self.nu, self.mass * chi)?;
        // the (z/2)^{iν} factors combine into a phase depending only on χ/χ_ref
        let phase = Complex64::new(0.0, self.nu * (chi / self.chi_ref).ln()).exp();
        Ok(2.0 * (phase * self.ref_series_conj * series).im)
    }

    /// ln of the factor B / B̃ = 1 / |Γ(1 + iν)|².
    pub fn ln_unscale(&self) -> f64 {
        -ln_abs_gamma_one_plus_i_sq(self.nu)
    }
}

fn check_bracket_args(nu: f64, mass: f64, chi_ref: f64, chi: f64) -> Result<()> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::domain(
            "rindler_bracket",
            format!("order nu = {nu} must be >= 0"),
        ));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::domain(
            "rindler_bracket",
            format!("mass m = {mass} must be > 0"),
        ));
    }
    if !(chi_ref > 0.0 && chi > 0.0 && chi_ref.is_finite() && chi.is_finite()) {
        return Err(Error::domain(
            "rindler_bracket",
            format!("radii chi_ref = {chi_ref}, chi = {chi} must be positive"),
        ));
    }
    Ok(())
}

/// Relative size of the real part discarded by [`rindler_bracket`].
pub const BRACKET_REALITY_TOL: f64 = 1e-10;

/// The Rindler mode bracket
/// B(χ) = −i [ I_{−iν}(mχ_ref) I_{iν}(mχ) − I_{iν}(mχ_ref) I_{−iν}(mχ) ],
/// a real function vanishing at χ = χ_ref.
///
/// Both signs of the order are evaluated from their own series so that the
/// reality of the bracket is checked rather than assumed.
pub fn rindler_bracket(nu: f64, mass: f64, chi_ref: f64, chi: f64) -> Result<f64> {
    check_bracket_args(nu, mass, chi_ref, chi)?;
    let plus_ref = bessel_i_imag_order(nu, mass * chi_ref)?;
    let minus_ref = bessel_i_imag_order(-nu, mass * chi_ref)?;
    let plus = bessel_i_imag_order(nu, mass * chi)?;
    let minus = bessel_i_imag_order(-nu, mass * chi)?;
    let raw = minus_ref * plus - plus_ref * minus;
    let scale = (minus_ref * plus).norm() + (plus_ref * minus).norm();
    if raw.re.abs() > BRACKET_REALITY_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonFinite {
            what: "rindler_bracket (real residue above tolerance)",
        });
    }
    Ok(raw.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn order_zero_is_real_i0() {
        let v = bessel_i_imag_order(0.0, 1.0).unwrap();
        assert!((v.re - 1.266_065_877_752_008_4).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn argument_domain() {
        assert!(matches!(
            bessel_i_imag_order(1.0, 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            bessel_i_imag_order(1.0, -2.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            bessel_i_imag_order_scaled(1.0, f64::NAN),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn large_order_overflows_unscaled_only() {
        assert!(matches!(
            bessel_i_imag_order(600.0, 1.0),
            Err(Error::NonFinite { .. })
        ));
        let s = bessel_i_imag_order_scaled(600.0, 1.0).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn series_cap_reports_non_convergence() {
        // (z/2)^2 / j^2 stays above one for about 5e5 terms
        let err = bessel_i_imag_order_scaled(0.0, 1e6).unwrap_err();
        assert!(matches!(
            err,
            Error::SeriesNonConvergence {
                terms: MAX_SERIES_TERMS,
                ..
            }
        ));
    }

    #[test]
    fn scaled_bracket_matches_unscaled() {
        let (nu, m, chi_ref) = (3.7, 0.8, 1.9);
        let scaled = ScaledBracket::new(nu, m, chi_ref).unwrap();
        for chi in [0.4, 0.9, 1.3, 1.85] {
            let b = rindler_bracket(nu, m, chi_ref, chi).unwrap();
            let bs = scaled.eval(chi).unwrap() * scaled.ln_unscale().exp();
            assert!((b - bs).abs() < 1e-11 * b.abs().max(1.0), "{b} vs {bs}");
        }
    }

    #[test]
    fn bracket_vanishes_at_reference() {
        assert_eq!(rindler_bracket(2.0, 0.5, 1.2, 1.2).unwrap(), 0.0);
        let s = ScaledBracket::new(2.0, 0.5, 1.2).unwrap();
        assert_eq!(s.eval(1.2).unwrap(), 0.0);
    }

    #[test]
    fn massless_limit_is_log_sine() {
        // Ĩ → (z/2)^{iν} as m → 0, so B̃ → 2 sin(ν ln(χ/χ_ref))
        let nu = PI / 3f64.ln();
        let s = ScaledBracket::new(nu, 1e-7, 1.5).unwrap();
        for chi in [0.5, 0.7, 1.0, 1.4] {
            let expected = 2.0 * (nu * (chi / 1.5f64).ln()).sin();
            assert!((s.eval(chi).unwrap() - expected).abs() < 1e-12);
        }
    }
}
