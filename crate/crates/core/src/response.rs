//! First-order click probability of an Unruh-DeWitt detector.
//!
//! For a detector that starts in its ground state and a field with n₁ quanta
//! in the lowest cavity mode, the excitation probability (coupling set to 1) is
//!
//! P = Σ_k |∫ ε F_k e^{i(ωs + ω̃_k s̃)} ds|²
//!     + n₁ |∫ ε F_1 e^{i(ωs + ω̃_1 s̃)} ds|²
//!     + n₁ |∫ ε F_1 e^{i(ωs − ω̃_1 s̃)} ds|²
//!
//! where s is the detector's proper time, s̃(s) is the time conjugate to the
//! cavity mode frequencies ω̃_k along the worldline, and F_k is evaluated on
//! the worldline. For Rob (s, s̃, ω̃) = (τ, t, ω_k); for Bob (t, τ, Ω_k).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kinematics::{Scenario, WindowedWorldline};
use crate::modes::{InertialModeSet, InertialNormalization, PhysicalParams, RindlerModeSet};
use crate::quadrature;

/// Default truncation of the vacuum mode sum.
pub const DEFAULT_K_MAX: usize = 15;
/// Default relative tolerance of every oscillatory integral.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default cap on quadrature nodes per integral.
pub const DEFAULT_NODE_CAP: usize = 1 << 20;
/// Minimum number of nodes of the first quadrature level.
pub const MIN_BASE_NODES: usize = 256;
/// Nodes per period of the fastest phase on the first level.
pub const NODES_PER_PERIOD: usize = 20;
/// Tail-to-total ratio above which a result is flagged.
pub const TAIL_FLAG_RATIO: f64 = 0.01;
/// Above this a·L, Bob's window is sampled with nodes clustered at the edges.
pub const GRADED_WINDOW_AL: f64 = 1.5;
/// Integrals smaller than this fraction of ∫|amplitude| are converged in
/// absolute rather than relative terms.
const ABS_FLOOR_FRACTION: f64 = 1e-6;

/// Node placement for [`oscillatory_integral_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub tol: f64,
    pub node_cap: usize,
    /// Multiplies the first-level node count.
    pub node_scale: usize,
    /// Map s = T sin(πu/2), which clusters nodes near ±T.
    pub graded: bool,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            node_cap: DEFAULT_NODE_CAP,
            node_scale: 1,
            graded: false,
        }
    }
}

/// ∫_{−T}^{T} amplitude(s) e^{i phase(s)} ds with default node placement.
pub fn oscillatory_integral<A, P>(
    amplitude: A,
    phase: P,
    half_window: f64,
    tol: f64,
) -> Result<Complex64>
where
    A: Fn(f64) -> Result<f64> + Sync,
    P: Fn(f64) -> f64 + Sync,
{
    let opts = QuadratureOptions {
        tol,
        ..QuadratureOptions::default()
    };
    oscillatory_integral_with(amplitude, phase, half_window, &opts)
}

/// ∫_{−T}^{T} amplitude(s) e^{i phase(s)} ds.
///
/// The first level places at least [`NODES_PER_PERIOD`] nodes per period of
/// the fastest local oscillation (estimated by sampling the phase), then the
/// node count doubles until two levels agree to `opts.tol`.
pub fn oscillatory_integral_with<A, P>(
    amplitude: A,
    phase: P,
    half_window: f64,
    opts: &QuadratureOptions,
) -> Result<Complex64>
where
    A: Fn(f64) -> Result<f64> + Sync,
    P: Fn(f64) -> f64 + Sync,
{
    if !(half_window > 0.0 && half_window.is_finite()) {
        return Err(Error::domain(
            "oscillatory_integral",
            format!("half window T = {half_window} must be positive and finite"),
        ));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::domain(
            "oscillatory_integral",
            "tolerance must be > 0",
        ));
    }
    let t = half_window;
    let graded = opts.graded;
    // s(u) and ds/du on u ∈ [−1, 1]
    let map = move |u: f64| -> (f64, f64) {
        if graded {
            let arg = 0.5 * PI * u;
            (t * arg.sin(), 0.5 * PI * t * arg.cos())
        } else {
            (t * u, t)
        }
    };

    const SAMPLES: usize = 512;
    let mut max_rate = 0.0f64;
    let mut prev = phase(map(-1.0).0);
    for i in 1..=SAMPLES {
        let u = -1.0 + 2.0 * i as f64 / SAMPLES as f64;
        let cur = phase(map(u).0);
        max_rate = max_rate.max((cur - prev).abs() * SAMPLES as f64 / 2.0);
        prev = cur;
    }
    let periods = (2.0 * max_rate / (2.0 * PI)).ceil() as usize;
    let base_nodes = MIN_BASE_NODES.max(NODES_PER_PERIOD * periods) * opts.node_scale.max(1);
    let start_panels = base_nodes.div_ceil(quadrature::PANEL_ORDER);
    if start_panels * quadrature::PANEL_ORDER > opts.node_cap {
        return Err(Error::QuadratureNonConvergence {
            tol: opts.tol,
            nodes: start_panels * quadrature::PANEL_ORDER,
        });
    }

    let mut l1 = 0.0;
    for (u, w) in quadrature::composite_rule(-1.0, 1.0, start_panels) {
        let (s, ds) = map(u);
        l1 += w * ds * amplitude(s)?.abs();
    }
    let (value, _) = quadrature::integrate_complex(
        |u| {
            let (s, ds) = map(u);
            Ok(amplitude(s)? * ds * Complex64::from_polar(1.0, phase(s)))
        },
        -1.0,
        1.0,
        start_panels,
        opts.tol,
        opts.node_cap,
        ABS_FLOOR_FRACTION * l1,
    )?;
    Ok(value)
}

/// Options shared by both probability operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseOptions {
    pub k_max: usize,
    pub tol: f64,
    pub normalization: InertialNormalization,
    pub node_cap: usize,
    pub node_scale: usize,
}

impl Default for ResponseOptions {
    fn default() -> Self {
        Self {
            k_max: DEFAULT_K_MAX,
            tol: DEFAULT_TOL,
            normalization: InertialNormalization::default(),
            node_cap: DEFAULT_NODE_CAP,
            node_scale: 1,
        }
    }
}

/// The three contributions to the click probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityBreakdown {
    pub scenario: Scenario,
    pub params: PhysicalParams,
    /// |∫ ε F_k e^{i(ωs + ω̃_k s̃)}|² for k = 1..k_max (all zero in the
    /// stimulated-only evaluation).
    pub vacuum_terms: Vec<f64>,
    pub stimulated_corotating: f64,
    pub stimulated_counterrotating: f64,
    pub total: f64,
    pub k_max: usize,
    /// Last retained vacuum term.
    pub tail_estimate: f64,
}

impl ProbabilityBreakdown {
    /// True when the truncated mode sum may be unreliable.
    pub fn truncation_flagged(&self) -> bool {
        self.total > 0.0 && self.tail_estimate / self.total >= TAIL_FLAG_RATIO
    }
}

enum FieldModes {
    Inertial(InertialModeSet),
    Rindler(RindlerModeSet),
}

impl FieldModes {
    fn build(
        scenario: Scenario,
        params: PhysicalParams,
        k_max: usize,
        opts: &ResponseOptions,
    ) -> Result<Self> {
        Ok(match scenario {
            Scenario::AcceleratedDetector => {
                FieldModes::Inertial(InertialModeSet::new(params, k_max, opts.normalization)?)
            }
            Scenario::AcceleratedCavity => FieldModes::Rindler(RindlerModeSet::new(params, k_max)?),
        })
    }

    fn frequency(&self, k: usize) -> f64 {
        match self {
            FieldModes::Inertial(set) => set.frequency(k),
            FieldModes::Rindler(set) => set.frequency(k),
        }
    }

    fn mode(&self, k: usize, position: f64) -> Result<f64> {
        match self {
            FieldModes::Inertial(set) => set.mode(k, position),
            FieldModes::Rindler(set) => set.mode(k, position),
        }
    }
}

struct Evaluator {
    worldline: WindowedWorldline,
    modes: FieldModes,
    quad: QuadratureOptions,
}

impl Evaluator {
    fn new(
        scenario: Scenario,
        params: PhysicalParams,
        k_max: usize,
        opts: &ResponseOptions,
    ) -> Result<Self> {
        params.validate()?;
        if k_max == 0 {
            return Err(Error::domain(
                "transition_probability",
                "k_max must be >= 1",
            ));
        }
        let worldline = WindowedWorldline::new(scenario, params)?;
        let modes = FieldModes::build(scenario, params, k_max, opts)?;
        let graded = scenario == Scenario::AcceleratedCavity
            && params.accel * params.length > GRADED_WINDOW_AL;
        Ok(Self {
            worldline,
            modes,
            quad: QuadratureOptions {
                tol: opts.tol,
                node_cap: opts.node_cap,
                node_scale: opts.node_scale,
                graded,
            },
        })
    }

    /// ∫ ε F_k e^{i(ωs + sign·ω̃_k s̃(s))} ds over the coupling window.
    fn amplitude(&self, k: usize, sign: f64) -> Result<Complex64> {
        let gap = self.worldline.params.gap;
        let field_freq = sign * self.modes.frequency(k);
        let wl = &self.worldline;
        oscillatory_integral_with(
            |s| {
                let p = wl.point(s)?;
                self.modes.mode(k, p.position)
            },
            |s| {
                let ft = wl.point(s).map(|p| p.field_time).unwrap_or(f64::NAN);
                gap * s + field_freq * ft
            },
            wl.half_window,
            &self.quad,
        )
    }
}

fn validate_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "transition_probability",
            format!("tolerance {tol} must be > 0"),
        ))
    }
}

/// Full click probability with the vacuum sum truncated at `opts.k_max`.
pub fn transition_probability(
    scenario: Scenario,
    params: &PhysicalParams,
    opts: &ResponseOptions,
) -> Result<ProbabilityBreakdown> {
    validate_tol(opts.tol)?;
    let eval = Evaluator::new(scenario, *params, opts.k_max, opts)?;
    // per-mode integrals in parallel, summed below in fixed k order
    let amplitudes = (1..=opts.k_max)
        .into_par_iter()
        .map(|k| eval.amplitude(k, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let vacuum_terms: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let n1 = params.n1 as f64;
    let (co, counter) = if params.n1 == 0 {
        (0.0, 0.0)
    } else {
        let counter_unit = eval.amplitude(1, -1.0)?.norm_sqr();
        (n1 * vacuum_terms[0], n1 * counter_unit)
    };
    let mut total = 0.0;
    for v in &vacuum_terms {
        total += v;
    }
    total += co + counter;
    Ok(ProbabilityBreakdown {
        scenario,
        params: *params,
        tail_estimate: *vacuum_terms.last().unwrap_or(&0.0),
        vacuum_terms,
        stimulated_corotating: co,
        stimulated_counterrotating: counter,
        total,
        k_max: opts.k_max,
    })
}

/// Stimulated terms per quantum in the lowest mode, i.e. the n₁ ≫ 1 limit
/// divided by n₁. The vacuum sum is dropped and only mode 1 is constructed.
pub fn stimulated_only_probability(
    scenario: Scenario,
    params: &PhysicalParams,
    opts: &ResponseOptions,
) -> Result<ProbabilityBreakdown> {
    validate_tol(opts.tol)?;
    let eval = Evaluator::new(scenario, *params, 1, opts)?;
    let (co, counter) = rayon::join(|| eval.amplitude(1, 1.0), || eval.amplitude(1, -1.0));
    let co = co?.norm_sqr();
    let counter = counter?.norm_sqr();
    Ok(ProbabilityBreakdown {
        scenario,
        params: *params,
        vacuum_terms: vec![0.0; opts.k_max],
        stimulated_corotating: co,
        stimulated_counterrotating: counter,
        total: co + counter,
        k_max: opts.k_max,
        tail_estimate: 0.0,
    })
}
