//! Special functions needed by the Rindler cavity modes: the complex gamma
//! function and modified Bessel functions of the first kind with purely
//! imaginary order, evaluated by their power series.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod gamma;
mod table;

use num_complex::Complex64;

pub use bessel::{
    bessel_i_imag_order, bessel_i_imag_order_scaled, rindler_bracket, ScaledBracket,
    BRACKET_REALITY_TOL, MAX_SERIES_TERMS,
};
pub use gamma::{complex_gamma, ln_abs_gamma_one_plus_i_sq};
pub use table::{ORACLE_ARGUMENTS, ORACLE_ORDERS, ORACLE_TABLE};

/// Complex scalar used throughout the crate.
pub type ComplexValue = Complex64;

/// One row of the comparison between [`bessel_i_imag_order`] and the stored
/// reference table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub nu: f64,
    pub z: f64,
    pub computed: ComplexValue,
    pub reference: ComplexValue,
    pub rel_error: f64,
}

/// Evaluates every grid point of [`ORACLE_TABLE`] and reports the relative
/// error of each.
pub fn oracle_comparison() -> crate::Result<Vec<OracleComparison>> {
    ORACLE_TABLE
        .iter()
        .map(|&(nu, z, re, im)| {
            let computed = bessel_i_imag_order(nu, z)?;
            let reference = ComplexValue::new(re, im);
            Ok(OracleComparison {
                nu,
                z,
                computed,
                reference,
                rel_error: (computed - reference).norm() / reference.norm(),
            })
        })
        .collect()
}
