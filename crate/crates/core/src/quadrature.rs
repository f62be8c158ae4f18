//! Composite Gauss-Legendre quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes per Gauss-Legendre panel.
pub const PANEL_ORDER: usize = 16;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// found by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Nodes and weights of the composite rule with `panels` equal panels on
/// [lo, hi].
pub fn composite_rule(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = panel_rule();
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * PANEL_ORDER);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

/// Integrates a real function over [lo, hi], doubling the number of panels
/// until successive estimates agree to `rel_tol` (relative to the larger of
/// the estimate and `abs_floor`).
pub fn integrate_real<F>(
    f: F,
    lo: f64,
    hi: f64,
    start_panels: usize,
    rel_tol: f64,
    max_nodes: usize,
    abs_floor: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let eval = |panels: usize| -> Result<f64> {
        let mut acc = 0.0;
        for (x, w) in composite_rule(lo, hi, panels) {
            acc += w * f(x)?;
        }
        Ok(acc)
    };
    let mut panels = start_panels.max(1);
    let mut prev = eval(panels)?;
    while 2 * panels * PANEL_ORDER <= max_nodes {
        panels *= 2;
        let next = eval(panels)?;
        if (next - prev).abs() <= rel_tol * next.abs().max(abs_floor) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence {
        tol: rel_tol,
        nodes: panels * PANEL_ORDER,
    })
}

/// Integrates a complex function, same doubling rule as [`integrate_real`].
pub fn integrate_complex<F>(
    f: F,
    lo: f64,
    hi: f64,
    start_panels: usize,
    rel_tol: f64,
    max_nodes: usize,
    abs_floor: f64,
) -> Result<(Complex64, usize)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let eval = |panels: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in composite_rule(lo, hi, panels) {
            acc += w * f(x)?;
        }
        Ok(acc)
    };
    let mut panels = start_panels.max(1);
    let mut prev = eval(panels)?;
    while 2 * panels * PANEL_ORDER <= max_nodes {
        panels *= 2;
        let next = eval(panels)?;
        if (next - prev).norm() <= rel_tol * next.norm().max(abs_floor) {
            return Ok((next, panels * PANEL_ORDER));
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence {
        tol: rel_tol,
        nodes: panels * PANEL_ORDER,
    })
}
