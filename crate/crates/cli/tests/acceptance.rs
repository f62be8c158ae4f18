//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any of them fails.
//!
//! Run with `cargo test --release -p udw-cli --test acceptance`.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udw_core::experiments::{
    relative_deviation, sweep, Bracket, GridSpec, Panel, ReferenceCurve, SweepConfig,
    DEFAULT_CURVE_POINTS,
};
use udw_core::kinematics::{bob_window, bob_worldline, rob_window, rob_worldline};
use udw_core::modes::{rindler_boundaries, rindler_spectrum, RindlerModeSet};
use udw_core::response::{stimulated_only_probability, transition_probability, ResponseOptions};
use udw_core::specfun::oracle_comparison;
use udw_core::{PhysicalParams, Result, Scenario};

type Criterion = (&'static str, Option<f64>, fn() -> Result<Outcome>);

const SEED: u64 = 0x5eed_0ac7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Runs `f`, adding the runtime limit (if any) to the verdict.
fn timed(limit: Option<f64>, f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    let start = Instant::now();
    let res = f();
    let took = secs(start.elapsed());
    match res {
        Ok(mut o) => {
            if let Some(limit) = limit {
                o.pass &= took < limit;
                o.detail += &format!("; {took:.2} s (limit {limit} s)");
            } else {
                o.detail += &format!("; {took:.2} s");
            }
            o
        }
        Err(e) => Outcome {
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn max_abs_dev_from_identity(g: &[Vec<f64>]) -> f64 {
    let mut dev = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            dev = dev.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    dev
}

fn c1_specfun() -> Result<Outcome> {
    let rows = oracle_comparison()?;
    let worst = rows.iter().fold(0.0f64, |m, r| m.max(r.rel_error));
    outcome(
        rows.len() == 49 && worst <= 1e-10,
        format!(
            "{} grid points, max rel error {worst:.2e} (<= 1e-10)",
            rows.len()
        ),
    )
}

fn c2_conformal_spectrum() -> Result<Outcome> {
    let p = PhysicalParams::resonant(1.0, 1e-4, 0, 1.0)?;
    let nu = rindler_spectrum(&p, 10)?;
    let worst = nu
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let exact = (i + 1) as f64 * PI / 3f64.ln();
            (v - exact).abs() / exact
        })
        .fold(0.0f64, f64::max);
    outcome(
        worst <= 1e-3,
        format!("k = 1..10, max rel error {worst:.2e} (<= 1e-3)"),
    )
}

fn c3_orthonormality() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (a, m) in [(0.5, 0.2), (1.0, 2.0)] {
        let p = PhysicalParams::resonant(1.0, m, 0, a)?;
        let dev = max_abs_dev_from_identity(&RindlerModeSet::new(p, 15)?.gram_matrix()?);
        pass &= dev <= 1e-6;
        parts.push(format!("(a={a}, m={m}) {dev:.2e}"));
    }
    outcome(pass, format!("max |G - I| {} (<= 1e-6)", parts.join(", ")))
}

fn c4_walls() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut rob_worst, mut bob_worst) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let length = 10f64.powf(rng.gen_range(-1.0..1.0));
        let al = rng.gen_range(0.01..1.99);
        let a = al / length;
        let p = PhysicalParams::resonant(length, 0.2, 0, a)?;
        let t_rob = rob_window(&p)?;
        let (_, x) = rob_worldline(a, t_rob);
        rob_worst = rob_worst.max((x + 0.5 * length).abs() / length);
        let t_bob = bob_window(&p)?;
        let (_, chi) = bob_worldline(a, t_bob)?;
        let (_, chi2) = rindler_boundaries(&p)?;
        bob_worst = bob_worst.max((chi - chi2).abs() / chi2);
    }
    outcome(
        rob_worst <= 1e-12 && bob_worst <= 1e-12,
        format!("100 random (a, L): |x(T) + L/2|/L {rob_worst:.1e}, |chi(T) - chi2|/chi2 {bob_worst:.1e} (<= 1e-12)"),
    )
}

fn c5_structure() -> Result<Outcome> {
    let opts = ResponseOptions::default();
    let mut pass = true;
    for scenario in Scenario::ALL {
        for (m, a) in [(0.2, 0.3), (2.0, 1.0)] {
            let base = PhysicalParams::resonant(1.0, m, 0, a)?;
            let vac = transition_probability(scenario, &base, &opts)?;
            pass &= vac.stimulated_corotating == 0.0 && vac.stimulated_counterrotating == 0.0;
            let one = transition_probability(scenario, &base.with_n1(1), &opts)?;
            for n in [2u64, 7, 1000] {
                let b = transition_probability(scenario, &base.with_n1(n), &opts)?;
                pass &= b.stimulated_corotating == n as f64 * one.stimulated_corotating;
                pass &= b.stimulated_counterrotating == n as f64 * one.stimulated_counterrotating;
                pass &= b.vacuum_terms == vac.vacuum_terms;
            }
        }
    }
    outcome(
        pass,
        "n1 = 0 gives zero stimulated terms; n1 in {2, 7, 1000} scales them exactly".into(),
    )
}

const TRUNCATION_INDICES: [usize; 5] = [0, 15, 30, 44, 59];

fn c6_truncation() -> Result<Outcome> {
    let grid = GridSpec::default().accelerations(1.0)?;
    let mut parts = Vec::new();
    let mut pass = true;
    for panel in Panel::ALL {
        let short = panel.config();
        let long = SweepConfig {
            response: ResponseOptions {
                k_max: 30,
                ..short.response
            },
            ..short
        };
        let mut worst = 0.0f64;
        for &i in &TRUNCATION_INDICES {
            for s in Scenario::ALL {
                let p15 = short.evaluate(s, grid[i])?.total;
                let p30 = long.evaluate(s, grid[i])?.total;
                worst = worst.max((p15 - p30).abs() / p30);
            }
        }
        pass &= worst < 0.01;
        parts.push(format!("{} {worst:.2e}", panel.letter()));
    }
    outcome(
        pass,
        format!(
            "max |P15 - P30|/P30 per panel: {} (< 1e-2)",
            parts.join(", ")
        ),
    )
}

fn c7_panel_a() -> Result<Outcome> {
    let table = sweep(&Panel::A.config(), &GridSpec::default())?;
    let profile: Vec<(f64, f64)> = table
        .rows
        .iter()
        .map(|r| (r.accel, r.deviation().unwrap_or(f64::NAN)))
        .collect();
    let low = profile
        .iter()
        .filter(|(a, _)| *a <= 0.3)
        .fold(0.0f64, |m, &(_, d)| m.max(d));
    // growth up to a*L = 1: a drop is tolerated only if undone one cell later
    let d: Vec<f64> = profile
        .iter()
        .filter(|(a, _)| *a <= 1.0)
        .map(|&(_, d)| d)
        .collect();
    let mut trend = d.last() > d.first();
    for i in 0..d.len().saturating_sub(2) {
        if d[i + 1] < d[i] && d[i + 2] < d[i] {
            trend = false;
        }
    }
    let at_one = d.last().copied().unwrap_or(f64::NAN);
    outcome(
        low <= 0.02 && trend,
        format!(
            "max deviation a*L <= 0.3 {low:.4} (<= 0.02); growth toward a*L = 1 {} ({:.4} -> {at_one:.4})",
            if trend { "yes" } else { "no" },
            d[0]
        ),
    )
}

fn c8_panel_c_vs_b() -> Result<Outcome> {
    let dev = |panel: Panel| -> Result<f64> {
        let cfg = panel.config();
        let rob = cfg.evaluate(Scenario::AcceleratedDetector, 0.2)?.total;
        let bob = cfg.evaluate(Scenario::AcceleratedCavity, 0.2)?.total;
        Ok(relative_deviation(rob, bob).unwrap_or(f64::NAN))
    };
    let (b, c) = (dev(Panel::B)?, dev(Panel::C)?);
    let factor = c / b;
    outcome(
        factor >= 5.0,
        format!("deviation at a*L = 0.2: m = 2 {c:.4}, m = 0.2 {b:.4}, factor {factor:.2} (>= 5)"),
    )
}

fn c9_inversion() -> Result<Outcome> {
    let cfg = Panel::C.config();
    let bracket = Bracket::new(0.02, 1.8);
    let curve = ReferenceCurve::build(
        Scenario::AcceleratedDetector,
        &cfg,
        bracket,
        DEFAULT_CURVE_POINTS,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut errors = Vec::new();
    let mut multi = 0;
    for _ in 0..20 {
        let a = rng.gen_range(bracket.lo.ln()..bracket.hi.ln()).exp();
        let p = cfg.evaluate(Scenario::AcceleratedDetector, a)?.total;
        let est = curve.invert(p)?;
        multi += usize::from(est.multi_valued);
        let err = est
            .candidates
            .iter()
            .map(|c| (c - a).abs() / a)
            .fold(f64::INFINITY, f64::min);
        errors.push(err);
    }
    errors.sort_by(f64::total_cmp);
    let median = 0.5 * (errors[9] + errors[10]);
    outcome(
        median < 0.01,
        format!(
            "20 random a, median rel error {median:.2e} (< 1e-2), worst {:.2e}, {multi} multi-valued",
            errors[19]
        ),
    )
}

fn c10_determinism() -> Result<Outcome> {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut pass = true;
    let mut checked = Vec::new();
    for panel in ["a", "c"] {
        let mut bodies = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{panel}{run}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_udw"))
                .args(["sweep", "--panel", panel, "--out", path.to_str().unwrap()])
                .status()
                .expect("spawn udw");
            pass &= status.success();
            let text = std::fs::read_to_string(&path).unwrap_or_default();
            let body: String = text
                .lines()
                .filter(|l| !l.starts_with('#'))
                .collect::<Vec<_>>()
                .join("\n");
            pass &= body.lines().count() == 61;
            bodies.push(body);
        }
        pass &= bodies[0] == bodies[1];
        checked.push(panel);
    }
    let cfg = Panel::B.config();
    pass &= sweep(&cfg, &GridSpec::default())? == sweep(&cfg, &GridSpec::default())?;
    outcome(
        pass,
        format!(
            "udw sweep panels {} run twice, CSV bodies byte-identical; library sweep equal",
            checked.join(", ")
        ),
    )
}

fn c11_node_doubling() -> Result<Outcome> {
    let grid = GridSpec::default().accelerations(1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let panel = Panel::ALL[rng.gen_range(0..3)];
        let a = grid[rng.gen_range(0..grid.len())];
        let cfg = panel.config();
        let fine = SweepConfig {
            response: ResponseOptions {
                node_scale: 2,
                ..cfg.response
            },
            ..cfg
        };
        for s in Scenario::ALL {
            let p = cfg.evaluate(s, a)?.total;
            let q = fine.evaluate(s, a)?.total;
            worst = worst.max((p - q).abs() / p);
        }
    }
    outcome(
        worst < 1e-3,
        format!("10 random sweep points, max rel change {worst:.2e} (< 1e-3)"),
    )
}

fn main() -> ExitCode {
    // stimulated evaluation is part of the public surface exercised above via
    // the panel configs; referenced here so a signature change breaks the build
    let _ = stimulated_only_probability;
    let criteria: [Criterion; 11] = [
        ("special-function oracle", Some(1.0), c1_specfun),
        (
            "conformal spectrum limit",
            Some(10.0),
            c2_conformal_spectrum,
        ),
        ("Rindler mode orthonormality", Some(30.0), c3_orthonormality),
        ("kinematic wall identities", Some(1.0), c4_walls),
        ("click probability structure in n1", None, c5_structure),
        ("mode-sum truncation", Some(300.0), c6_truncation),
        (
            "vacuum deviation small then growing (m = 0.2)",
            Some(600.0),
            c7_panel_a,
        ),
        (
            "stimulated deviation m = 2 vs m = 0.2",
            Some(600.0),
            c8_panel_c_vs_b,
        ),
        ("acceleration inversion round trip", None, c9_inversion),
        ("determinism", None, c10_determinism),
        ("quadrature node doubling", None, c11_node_doubling),
    ];
    let mut passed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let o = timed(*limit, f);
        passed += usize::from(o.pass);
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
