use udw_core::experiments::{self, Bracket, FrameDiscrimination, GridSpec, SweepConfig, SweepMode};
use udw_core::modes::{rindler_boundaries, InertialModeSet, RindlerModeSet};
use udw_core::response::{transition_probability, ProbabilityBreakdown};
use udw_core::specfun::oracle_comparison;
use udw_core::{Error, Scenario};

use crate::output::{num, Document};
use crate::plot::sweep_plot_script;
use crate::settings::RunConfig;
use crate::CliError;

/// Specfun table agreement required by `validate`.
const ORACLE_TOL: f64 = 1e-10;
/// Gram-matrix deviation from identity accepted by `validate`.
const GRAM_TOL: f64 = 1e-6;
/// Bound on the nearly massless Rob/Bob deviation for a*L <= 0.3.
pub const CONFORMAL_BOUND: f64 = 0.02;
const CONFORMAL_MASS: f64 = 0.01;
const CONFORMAL_GRID: &str = "0.05:0.3:6:lin";

pub fn modes(cfg: &RunConfig) -> Result<Document, CliError> {
    let scenario = cfg.scenario.unwrap_or(Scenario::AcceleratedCavity);
    let k_max = cfg.sweep.response.k_max;
    if cfg.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let mut doc = Document::new(cfg);
    let n = cfg.samples;
    let spread = |lo: f64, hi: f64| -> Vec<f64> {
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    };
    let mut header: Vec<String> = ["k", "nu", "omega", "N", "ln_N"].map(String::from).to_vec();
    header.extend((0..n).map(|i| format!("F_{i}")));
    match scenario {
        Scenario::AcceleratedDetector => {
            let p = cfg.params(cfg.accel.unwrap_or(0.0))?;
            let set = InertialModeSet::new(p, k_max, cfg.sweep.response.normalization)?;
            let xs = spread(-0.5 * p.length, 0.5 * p.length);
            doc.comment("sample_coordinate", "x");
            doc.comment(
                "sample_points",
                xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" "),
            );
            doc.line(&header);
            for k in 1..=k_max {
                let norm = set.normalization(k);
                let mut row = vec![
                    k.to_string(),
                    String::new(),
                    num(set.frequency(k)),
                    num(norm),
                    num(norm.ln()),
                ];
                for &x in &xs {
                    row.push(num(set.mode(k, x)?));
                }
                doc.line(row);
            }
        }
        Scenario::AcceleratedCavity => {
            let p = cfg.params_for(scenario, cfg.require_accel()?)?;
            let (chi1, chi2) = rindler_boundaries(&p)?;
            let set = RindlerModeSet::new(p, k_max)?;
            let chis = spread(chi2, chi1);
            doc.comment("sample_coordinate", "chi");
            doc.comment(
                "sample_points",
                chis.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" "),
            );
            doc.line(&header);
            for k in 1..=k_max {
                let mut row = vec![
                    k.to_string(),
                    num(set.order(k)),
                    num(set.frequency(k)),
                    num(set.normalization(k)),
                    num(set.ln_normalization(k)),
                ];
                for &c in &chis {
                    row.push(num(set.mode(k, c)?));
                }
                doc.line(row);
            }
        }
    }
    Ok(doc)
}

pub fn probability(cfg: &RunConfig) -> Result<Document, CliError> {
    let a = cfg.require_accel()?;
    let scenarios: Vec<Scenario> = match cfg.scenario {
        Some(s) => vec![s],
        None => Scenario::ALL.to_vec(),
    };
    // every scenario is checked before any evaluation starts
    let params = scenarios
        .iter()
        .map(|&s| cfg.params_for(s, a))
        .collect::<Result<Vec<_>, Error>>()?;
    let k_max = cfg.sweep.response.k_max;
    let mut doc = Document::new(cfg);
    let mut header: Vec<String> = [
        "scenario",
        "a",
        "total",
        "vacuum_sum",
        "stimulated_corotating",
        "stimulated_counterrotating",
        "tail_estimate",
        "truncation_flag",
    ]
    .map(String::from)
    .to_vec();
    header.extend((1..=k_max).map(|k| format!("vacuum_{k}")));
    doc.line(&header);
    for (s, p) in scenarios.iter().zip(&params) {
        let b = transition_probability(*s, p, &cfg.sweep.response)?;
        doc.line(breakdown_row(&b));
    }
    Ok(doc)
}

fn breakdown_row(b: &ProbabilityBreakdown) -> Vec<String> {
    let mut row = vec![
        b.scenario.short_name().to_string(),
        num(b.params.accel),
        num(b.total),
        num(b.vacuum_terms.iter().sum()),
        num(b.stimulated_corotating),
        num(b.stimulated_counterrotating),
        num(b.tail_estimate),
        b.truncation_flagged().to_string(),
    ];
    row.extend(b.vacuum_terms.iter().map(|&v| num(v)));
    row
}

pub fn sweep(cfg: &RunConfig) -> Result<(Document, Option<String>), CliError> {
    let table = experiments::sweep(&cfg.sweep, &cfg.grid)?;
    let mut doc = Document::new(cfg);
    doc.line([
        "a", "p_rob", "p_bob", "ratio", "rob_tail", "bob_tail", "flags", "abs_diff",
    ]);
    for r in &table.rows {
        doc.line([
            num(r.accel),
            num(r.p_rob),
            num(r.p_bob),
            r.ratio.map_or(String::new(), num),
            num(r.rob_tail),
            num(r.bob_tail),
            r.flags.render(),
            num((r.p_bob - r.p_rob).abs()),
        ]);
    }
    let script = cfg.out.as_ref().map(|p| {
        let name = p
            .file_name()
            .map_or("sweep.csv".into(), |n| n.to_string_lossy().into_owned());
        sweep_plot_script(&name)
    });
    Ok((doc, script))
}

pub fn distinguish(cfg: &RunConfig) -> Result<Document, CliError> {
    let p = cfg
        .p_measured
        .ok_or_else(|| CliError::Usage("distinguish needs --p".into()))?;
    let l = cfg.sweep.length;
    let bracket = Bracket::new(cfg.bracket.lo / l, cfg.bracket.hi / l);
    let d = experiments::discriminate_frame(p, &cfg.sweep, bracket, cfg.band)?;
    let mut doc = Document::new(cfg);
    doc.raw(&render_discrimination(&d));
    Ok(doc)
}

fn render_discrimination(d: &FrameDiscrimination) -> String {
    let mut s = format!(
        "class: {}\np_measured: {}\n",
        d.class.name(),
        num(d.p_measured)
    );
    for (name, est) in [("rob", &d.rob), ("bob", &d.bob)] {
        match est {
            Some(e) => {
                let c: Vec<String> = e.candidates.iter().map(|&a| num(a)).collect();
                s += &format!("{name}_candidates: {}\n", c.join(" "));
                s += &format!("{name}_multi_valued: {}\n", e.multi_valued);
                s += &format!(
                    "{name}_curve_range: {} {}\n",
                    num(e.curve_range.0),
                    num(e.curve_range.1)
                );
            }
            None => s += &format!("{name}_candidates: none\n"),
        }
    }
    s
}

pub struct CheckLine {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

pub fn validate(cfg: &RunConfig) -> Result<(Document, bool), CliError> {
    let mut checks = Vec::new();

    let table = oracle_comparison()?;
    let worst = table.iter().fold(0.0f64, |m, r| m.max(r.rel_error));
    checks.push(CheckLine {
        name: "specfun_oracle",
        pass: worst <= ORACLE_TOL,
        detail: format!("{} points, max rel error {}", table.len(), num(worst)),
    });

    for (a, m) in [(0.5, 0.2), (1.0, 2.0)] {
        let p = udw_core::PhysicalParams::resonant(1.0, m, 0, a)?;
        let gram = RindlerModeSet::new(p, 15)?.gram_matrix()?;
        let mut dev = 0.0f64;
        for (i, row) in gram.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                dev = dev.max((g - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        checks.push(CheckLine {
            name: "mode_orthonormality",
            pass: dev <= GRAM_TOL,
            detail: format!("a = {a} m = {m} kmax = 15, max |G - I| {}", num(dev)),
        });
    }

    let grid: GridSpec = CONFORMAL_GRID.parse()?;
    let base = SweepConfig {
        mode: SweepMode::Vacuum,
        gap: None,
        ..cfg.sweep
    };
    let report = experiments::conformal_check(&grid, CONFORMAL_MASS, &base)?;
    checks.push(CheckLine {
        name: "conformal_check",
        pass: report.max_deviation <= CONFORMAL_BOUND,
        detail: format!(
            "m = {CONFORMAL_MASS} a*L in {CONFORMAL_GRID}, max deviation {} (bound {CONFORMAL_BOUND})",
            num(report.max_deviation)
        ),
    });

    let mut doc = Document::new(cfg);
    let all = checks.iter().all(|c| c.pass);
    for c in &checks {
        doc.raw(&format!(
            "{} {}: {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    doc.raw(&format!(
        "{} {}/{} checks passed\n",
        if all { "PASS" } else { "FAIL" },
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    ));
    Ok((doc, all))
}

pub fn validate_specfun(cfg: &RunConfig) -> Result<Document, CliError> {
    let mut doc = Document::new(cfg);
    doc.line(["nu", "z", "re", "im", "ref_re", "ref_im", "rel_error"]);
    for r in oracle_comparison()? {
        doc.line(
            [
                r.nu,
                r.z,
                r.computed.re,
                r.computed.im,
                r.reference.re,
                r.reference.im,
                r.rel_error,
            ]
            .map(num),
        );
    }
    Ok(doc)
}
