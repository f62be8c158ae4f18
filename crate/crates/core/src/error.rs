use thiserror::Error;

/// Errors produced by the numerical kernels.
///
/// The variants fall into two families that the command-line driver maps to
/// distinct exit codes: domain errors (the caller asked for something outside
/// the physical or mathematical domain) and numerical errors (a series,
/// quadrature or root scan failed to converge).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("argument outside the domain of {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("cavity crosses the Rindler horizon: a*L = {al} must be < 2")]
    Horizon { al: f64 },

    #[error("point (t = {t}, x = {x}) lies outside the right Rindler wedge")]
    Wedge { t: f64, x: f64 },

    #[error("series for {what} did not converge within {terms} terms")]
    SeriesNonConvergence { what: &'static str, terms: usize },

    #[error("quadrature did not reach tolerance {tol:e} within {nodes} nodes")]
    QuadratureNonConvergence { tol: f64, nodes: usize },

    #[error("root scan found {found} of {wanted} eigenfrequencies below nu = {limit}")]
    RootScan {
        found: usize,
        wanted: usize,
        limit: f64,
    },

    #[error("non-finite value produced by {what}")]
    NonFinite { what: &'static str },

    #[error("measured probability {p:e} lies outside the reference curve range [{lo:e}, {hi:e}]")]
    OutOfRange { p: f64, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    /// True for failures of an iterative numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SeriesNonConvergence { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::RootScan { .. }
                | Error::NonFinite { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
