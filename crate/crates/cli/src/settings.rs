use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, ValueEnum};
use udw_core::experiments::{GridSpec, Panel, SweepConfig, SweepMode, DEFAULT_ADMISSION_BAND};
use udw_core::modes::InertialNormalization;
use udw_core::{Error, PhysicalParams, Scenario};

use crate::CliError;

const DEFAULT_BRACKET: &str = "0.02:0.3";
const DEFAULT_SAMPLES: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PanelArg {
    A,
    B,
    C,
}

impl From<PanelArg> for Panel {
    fn from(p: PanelArg) -> Self {
        match p {
            PanelArg::A => Panel::A,
            PanelArg::B => Panel::B,
            PanelArg::C => Panel::C,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    /// Accelerated detector, static cavity.
    Rob,
    /// Inertial detector, accelerated cavity.
    Bob,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Rob => Scenario::AcceleratedDetector,
            ScenarioArg::Bob => Scenario::AcceleratedCavity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    /// 1/sqrt(k*pi)
    Paper,
    /// 1/sqrt(omega_k L)
    Kg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Vacuum,
    Stimulated,
}

/// `lo:hi` pair of a*L values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlRange {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for AlRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected lo:hi, got '{s}'");
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        Ok(Self {
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for AlRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Options shared by every subcommand. Each may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Proper acceleration (of the detector or of the cavity centre).
    #[arg(long = "a", allow_negative_numbers = true)]
    pub accel: Option<f64>,
    /// Cavity proper length [default: 1].
    #[arg(long = "L", allow_negative_numbers = true)]
    pub length: Option<f64>,
    /// Field mass [default: panel value, 0.2 without a panel].
    #[arg(long = "m", allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Detector gap [default: lowest cavity frequency].
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Quanta in the lowest cavity mode [default: 0].
    #[arg(long)]
    pub n1: Option<u64>,
    /// Number of retained field modes [default: 15].
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Relative quadrature tolerance [default: 1e-6].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Preset sweep configuration [default: a].
    #[arg(long, value_enum)]
    pub panel: Option<PanelArg>,
    /// Restrict to one scenario.
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioArg>,
    /// Static-cavity mode normalization [default: paper].
    #[arg(long, value_enum)]
    pub norm: Option<NormArg>,
    /// Sweep quantity, overriding the panel [vacuum | stimulated].
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Acceleration grid in units of 1/L [default: 0.02:1.8:60:log].
    #[arg(long, value_name = "lo:hi:n:log|lin")]
    pub grid: Option<GridSpec>,
    /// Measured click probability (distinguish).
    #[arg(long = "p", allow_negative_numbers = true)]
    pub p_measured: Option<f64>,
    /// Search interval in units of 1/L (distinguish) [default: 0.02:0.3].
    #[arg(long, value_name = "lo:hi")]
    pub bracket: Option<AlRange>,
    /// Relative admission band (distinguish) [default: 1e-3].
    #[arg(long)]
    pub band: Option<f64>,
    /// Sample points per mode across the cavity (modes) [default: 11].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key = value file supplying defaults for the options above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Parser)]
#[command(no_binary_name = true)]
struct FileEntry {
    #[command(flatten)]
    settings: Settings,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($field:ident),*) => {
        Settings { $($field: $top.$field.or($base.$field),)* }
    };
}

impl Settings {
    /// Values from `self` win; missing ones are taken from `base`.
    pub fn overlay(self, base: Settings) -> Settings {
        overlay!(
            self, base, accel, length, mass, omega, n1, kmax, tol, panel, scenario, norm, mode,
            grid, p_measured, bracket, band, samples, out, config
        )
    }

    /// Reads `key = value` lines. `#` starts a comment. Keys are the long
    /// flag names without dashes.
    pub fn parse_file_text(text: &str, origin: &Path) -> Result<Settings, CliError> {
        let mut acc = Settings::default();
        let mut seen = BTreeSet::new();
        for (no, raw) in text.lines().enumerate() {
            let at =
                |msg: String| CliError::Usage(format!("{}:{}: {msg}", origin.display(), no + 1));
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "config" || key.starts_with('-') {
                return Err(at(format!("unknown key '{key}'")));
            }
            if !seen.insert(key.to_string()) {
                return Err(at(format!("duplicate key '{key}'")));
            }
            let entry =
                FileEntry::try_parse_from([format!("--{key}={value}")]).map_err(|e| {
                    match e.kind() {
                        ErrorKind::UnknownArgument => at(format!("unknown key '{key}'")),
                        _ => at(format!("invalid value '{value}' for key '{key}'")),
                    }
                })?;
            acc = entry.settings.overlay(acc);
        }
        Ok(acc)
    }

    /// Merges the config file, if any, under the command-line values.
    pub fn with_file(self) -> Result<Settings, CliError> {
        match &self.config {
            None => Ok(self),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                Ok(self
                    .clone()
                    .overlay(Settings::parse_file_text(&text, path)?))
            }
        }
    }
}

/// Settings after defaults are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub panel: Option<Panel>,
    pub sweep: SweepConfig,
    pub n1: u64,
    pub accel: Option<f64>,
    pub scenario: Option<Scenario>,
    pub grid: GridSpec,
    pub p_measured: Option<f64>,
    pub bracket: AlRange,
    pub band: f64,
    pub samples: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(command: &'static str, s: Settings) -> Result<RunConfig, CliError> {
        let panel = s.panel.map(Panel::from);
        let mut sweep = panel.unwrap_or(Panel::A).config();
        if panel.is_none() {
            sweep.mass = 0.2;
        }
        if let Some(l) = s.length {
            sweep.length = l;
        }
        if let Some(m) = s.mass {
            sweep.mass = m;
        }
        sweep.gap = s.omega;
        if let Some(mode) = s.mode {
            sweep.mode = match mode {
                ModeArg::Vacuum => SweepMode::Vacuum,
                ModeArg::Stimulated => SweepMode::StimulatedPerPhoton,
            };
        }
        if let Some(k) = s.kmax {
            sweep.response.k_max = k;
        }
        if let Some(t) = s.tol {
            sweep.response.tol = t;
        }
        if let Some(n) = s.norm {
            sweep.response.normalization = match n {
                NormArg::Paper => InertialNormalization::Massless,
                NormArg::Kg => InertialNormalization::KleinGordon,
            };
        }
        let cfg = RunConfig {
            command,
            panel,
            sweep,
            n1: s.n1.unwrap_or(0),
            accel: s.accel,
            scenario: s.scenario.map(Scenario::from),
            grid: s.grid.unwrap_or_default(),
            p_measured: s.p_measured,
            bracket: s
                .bracket
                .unwrap_or_else(|| DEFAULT_BRACKET.parse().expect("default bracket")),
            band: s.band.unwrap_or(DEFAULT_ADMISSION_BAND),
            samples: s.samples.unwrap_or(DEFAULT_SAMPLES),
            out: s.out,
        };
        // validates L, m and omega even for commands that never build params
        PhysicalParams::new(
            cfg.sweep.length,
            cfg.sweep.mass,
            cfg.sweep.resolved_gap(),
            cfg.n1,
            0.0,
        )?;
        Ok(cfg)
    }

    pub fn require_accel(&self) -> Result<f64, CliError> {
        self.accel
            .ok_or_else(|| CliError::Usage(format!("{} needs --a", self.command)))
    }

    pub fn params(&self, accel: f64) -> Result<PhysicalParams, Error> {
        PhysicalParams::new(
            self.sweep.length,
            self.sweep.mass,
            self.sweep.resolved_gap(),
            self.n1,
            accel,
        )
    }

    /// Parameters for a scenario, refusing a cavity that would cross the
    /// horizon before anything is computed.
    pub fn params_for(&self, scenario: Scenario, accel: f64) -> Result<PhysicalParams, Error> {
        let p = self.params(accel)?;
        if scenario == Scenario::AcceleratedCavity {
            p.check_horizon()?;
        }
        Ok(p)
    }

    fn mode_name(&self) -> &'static str {
        self.sweep.mode.name()
    }

    /// `key = value` pairs echoed at the top of every output file.
    pub fn metadata(&self) -> Vec<(&'static str, String)> {
        let r = &self.sweep.response;
        let mut m = vec![
            ("tool", format!("udw {}", env!("CARGO_PKG_VERSION"))),
            ("command", self.command.to_string()),
            ("L", self.sweep.length.to_string()),
            ("m", self.sweep.mass.to_string()),
            ("omega", self.sweep.resolved_gap().to_string()),
        ];
        let norm = match r.normalization {
            InertialNormalization::Massless => "paper",
            InertialNormalization::KleinGordon => "kg",
        };
        let scenario = self.scenario.map_or("both", |s| s.short_name());
        match self.command {
            "modes" => {
                m.push(("a", opt(self.accel)));
                m.push(("kmax", r.k_max.to_string()));
                m.push(("norm", norm.into()));
                m.push((
                    "scenario",
                    self.scenario
                        .unwrap_or(Scenario::AcceleratedCavity)
                        .short_name()
                        .into(),
                ));
                m.push(("samples", self.samples.to_string()));
            }
            "probability" => {
                m.push(("a", opt(self.accel)));
                m.push(("n1", self.n1.to_string()));
                m.push(("kmax", r.k_max.to_string()));
                m.push(("tol", r.tol.to_string()));
                m.push(("norm", norm.into()));
                m.push(("scenario", scenario.into()));
            }
            "sweep" | "distinguish" => {
                m.push((
                    "panel",
                    self.panel.map_or("none".into(), |p| p.letter().to_string()),
                ));
                m.push(("mode", self.mode_name().into()));
                m.push(("kmax", r.k_max.to_string()));
                m.push(("tol", r.tol.to_string()));
                m.push(("norm", norm.into()));
                if self.command == "sweep" {
                    m.push(("grid", self.grid.to_string()));
                } else {
                    m.push(("p", opt(self.p_measured)));
                    m.push(("bracket", self.bracket.to_string()));
                    m.push(("band", self.band.to_string()));
                }
            }
            _ => {}
        }
        m
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or("none".into(), |x| x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> Result<Settings, CliError> {
        Settings::parse_file_text(text, Path::new("test.conf"))
    }

    #[test]
    fn file_values_and_comments() {
        let s = file("# cavity\nm = 0.2\nL=1.5 # trailing\n\npanel = c\ngrid = 0.1:0.5:3:lin\n")
            .unwrap();
        assert_eq!(s.mass, Some(0.2));
        assert_eq!(s.length, Some(1.5));
        assert_eq!(s.panel, Some(PanelArg::C));
        assert_eq!(s.grid.unwrap().n, 3);
    }

    #[test]
    fn flags_override_file() {
        let from_file = file("m = 0.2\nn1 = 4").unwrap();
        let flags = Settings {
            mass: Some(2.0),
            ..Settings::default()
        };
        let merged = flags.overlay(from_file);
        assert_eq!(merged.mass, Some(2.0));
        assert_eq!(merged.n1, Some(4));
    }

    #[test]
    fn file_errors_are_usage_errors() {
        for bad in [
            "mass = 2",
            "m = heavy",
            "m 2",
            "m = 1\nm = 2",
            "config = x",
            "panel = d",
        ] {
            let err = file(bad).unwrap_err();
            assert!(matches!(err, CliError::Usage(_)), "{bad}");
        }
        let CliError::Usage(msg) = file("\n\nmass = 2").unwrap_err() else {
            unreachable!()
        };
        assert!(
            msg.contains(":3:") && msg.contains("unknown key 'mass'"),
            "{msg}"
        );
    }

    #[test]
    fn negative_file_values_reach_validation() {
        let s = file("a = -1").unwrap();
        assert_eq!(s.accel, Some(-1.0));
    }

    #[test]
    fn panel_defaults_and_overrides() {
        let c = RunConfig::resolve(
            "sweep",
            Settings {
                panel: Some(PanelArg::C),
                ..Settings::default()
            },
        )
        .unwrap();
        assert_eq!(c.sweep.mass, 2.0);
        assert_eq!(c.sweep.mode, SweepMode::StimulatedPerPhoton);
        let d = RunConfig::resolve(
            "sweep",
            Settings {
                panel: Some(PanelArg::C),
                mass: Some(0.5),
                mode: Some(ModeArg::Vacuum),
                ..Settings::default()
            },
        )
        .unwrap();
        assert_eq!(d.sweep.mass, 0.5);
        assert_eq!(d.sweep.mode, SweepMode::Vacuum);
    }

    #[test]
    fn bracket_parse() {
        assert_eq!(
            "0.1:0.2".parse::<AlRange>().unwrap(),
            AlRange { lo: 0.1, hi: 0.2 }
        );
        assert!("0.1".parse::<AlRange>().is_err());
    }
}
