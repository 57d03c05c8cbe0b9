//! Command-line harness for the alternating-CSIT X-channel schemes.
//!
//! [`Cli`] is the raw argument surface, [`RunConfig`] the validated form and
//! [`run`] executes one command, writing its report to the `--out` file (or
//! the supplied writer when no path is given).

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use icr_core::channel::{draw_channel, C64, DEFAULT_EPS};
use icr_core::classifier::{classify, enumerate_patterns, AtlasSummary, PatternReport, Verdict};
use icr_core::csit::{CsitPattern, SLOTS};
use icr_core::dof::estimate_dof;
use icr_core::error::{
    DecodeError, DofError, ParseError, ReportError, SchemeError, SimulationError,
};
use icr_core::report::{now_stamp, sweep_rows, to_csv, to_json, trace_rows};
use icr_core::scheme::{build_plan, select_scheme, CsitView, SchemeId};
use icr_core::sim::{simulate_trial, SimulationTrace, TrialRequest};
use icr_core::Symbol;

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_TRIALS: u64 = 2000;
pub const DEFAULT_POWERS_LOG2: [f64; 5] = [20.0, 25.0, 30.0, 35.0, 40.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Classify one CSIT pattern.
    Classify,
    /// Run one end-to-end block and dump its trace.
    Simulate,
    /// Sum-rate sweep and DoF slope fit.
    DofSweep,
    /// Classify all 729 patterns.
    Enumerate,
    /// Walk through Schemes 1, 2 and 3 slot by slot.
    Demo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "icr-lab",
    version,
    about = "Interference creation-resurrection schemes on the two-user X-channel"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// CSIT pattern, e.g. "DD,PN,NP" (first letter of each slot is receiver 1).
    #[arg(long)]
    pub pattern: Option<String>,
    /// scheme1, scheme1-mirror, scheme2, scheme2-mirror, scheme3, scheme3-mirror or tdm.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    /// Comma-separated log2 transmit powers.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub powers: Option<Vec<f64>>,
    /// Receiver noise power.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub noise: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Leave the generation timestamp out of every report.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } | CliError::Report(_) => 1,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::Scheme(e) => e.into(),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SimulationError> for CliError {
    fn from(e: SimulationError) -> Self {
        match e {
            SimulationError::Scheme(e) => e.into(),
            SimulationError::Decode(e) => e.into(),
            SimulationError::Channel(e) => CliError::Validation(e.to_string()),
        }
    }
}

impl From<DofError> for CliError {
    fn from(e: DofError) -> Self {
        match e {
            DofError::RedrawBudget { .. } => CliError::Numeric(e.to_string()),
            DofError::Decode(e) => e.into(),
            e => CliError::Validation(e.to_string()),
        }
    }
}

/// What the command runs on: an explicit scheme, or the scheme selected for
/// a pattern. The plan is always built under `pattern`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub scheme: SchemeId,
    pub pattern: CsitPattern,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub pattern: Option<CsitPattern>,
    pub scheme: Option<SchemeId>,
    pub seed: u64,
    pub trials: u64,
    pub powers_log2: Option<Vec<f64>>,
    pub noise_power: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timestamp: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let pattern = cli
            .pattern
            .as_deref()
            .map(str::parse::<CsitPattern>)
            .transpose()?;
        let scheme = cli
            .scheme
            .as_deref()
            .map(str::parse::<SchemeId>)
            .transpose()?;
        if cli.trials == 0 {
            return Err(CliError::Validation("--trials must be at least 1".into()));
        }
        if !(cli.noise.is_finite() && cli.noise >= 0.0) {
            return Err(CliError::Validation(format!(
                "--noise must be finite and non-negative, got {}",
                cli.noise
            )));
        }
        if let Some(ps) = &cli.powers {
            if ps.is_empty() || ps.iter().any(|p| !p.is_finite()) {
                return Err(CliError::Validation(format!(
                    "--powers must be finite log2 values, got {ps:?}"
                )));
            }
        }
        let cfg = RunConfig {
            command: cli.command,
            pattern,
            scheme,
            seed: cli.seed,
            trials: cli.trials,
            powers_log2: cli.powers,
            noise_power: cli.noise,
            out: cli.out,
            format: cli.format,
            timestamp: !cli.no_timestamp,
        };
        match cfg.command {
            Command::Classify if cfg.pattern.is_none() => {
                Err(CliError::Validation("classify needs --pattern".into()))
            }
            Command::Simulate | Command::DofSweep => cfg.target().map(|_| cfg),
            _ => Ok(cfg),
        }
    }

    /// Resolve `--scheme`/`--pattern` into the scheme to run and the CSIT it
    /// runs under.
    pub fn target(&self) -> Result<Target, CliError> {
        match (self.scheme, self.pattern) {
            (Some(scheme), pattern) => Ok(Target {
                scheme,
                pattern: pattern.unwrap_or_else(|| scheme.binding()),
            }),
            (None, Some(pattern)) => select_scheme(&pattern)
                .map(|e| Target {
                    scheme: e.scheme,
                    pattern,
                })
                .ok_or_else(|| {
                    CliError::Validation(format!("pattern {pattern} is not covered by any scheme"))
                }),
            (None, None) => Err(CliError::Validation("give --scheme or --pattern".into())),
        }
    }

    fn stamp(&self) -> Option<u64> {
        self.timestamp.then(now_stamp)
    }
}

/// Classifier output as a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasDocument {
    pub summary: AtlasSummary,
    pub reports: Vec<PatternReport>,
}

/// Path of a side file next to `out`, e.g. `atlas.csv` -> `atlas.summary.json`.
pub fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(format!("{suffix}.json"))
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(cfg: &RunConfig, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => write_file(path, body),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// Check that `target.scheme` can build its plan under `target.pattern`.
pub fn check_target(target: &Target, seed: u64) -> Result<(), CliError> {
    let h = draw_channel(seed, DEFAULT_EPS).map_err(|e| CliError::Validation(e.to_string()))?;
    build_plan(target.scheme, &mut CsitView::new(&h, target.pattern))?;
    Ok(())
}

/// Execute one command. The report goes to `--out` when set and to `stdout`
/// otherwise; the returned line is a short human summary.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<String, CliError> {
    let stamp = cfg.stamp();
    match cfg.command {
        Command::Classify => {
            let p = cfg.pattern.expect("validated");
            let report = classify(&p);
            let body = match cfg.format {
                Format::Csv => to_csv(&[report], stamp)?,
                Format::Json => to_json(&report, stamp)?,
            };
            emit(cfg, &body, stdout)?;
            Ok(match (report.verdict, report.scheme) {
                (Verdict::Synergistic, Some(s)) => format!(
                    "{p}: Synergistic, {s} on minimal pattern {}",
                    report.matched_minimal.expect("set with scheme")
                ),
                _ => format!("{p}: NotCovered"),
            })
        }
        Command::Enumerate => {
            let atlas = enumerate_patterns();
            match cfg.format {
                Format::Csv => {
                    emit(cfg, &to_csv(&atlas.reports, stamp)?, stdout)?;
                    if let Some(out) = &cfg.out {
                        write_file(
                            &sidecar_path(out, "summary"),
                            &to_json(&atlas.summary, stamp)?,
                        )?;
                    }
                }
                Format::Json => {
                    let doc = AtlasDocument {
                        summary: atlas.summary.clone(),
                        reports: atlas.reports,
                    };
                    emit(cfg, &to_json(&doc, stamp)?, stdout)?;
                }
            }
            let c = &atlas.summary.counts;
            Ok(format!(
                "{} patterns, {} synergistic, {} meet the requirements, {} disagreements",
                c.total, c.synergistic, c.satisfies_requirements, c.disagreements
            ))
        }
        Command::Simulate => {
            let target = cfg.target()?;
            let mut req = TrialRequest::new(target.scheme, cfg.seed);
            req.pattern = target.pattern;
            req.noise_power = cfg.noise_power;
            match cfg.powers_log2.as_deref() {
                None => {}
                Some([p]) => req.power = p.exp2(),
                Some(ps) => {
                    return Err(CliError::Validation(format!(
                        "simulate takes a single --powers value, got {}",
                        ps.len()
                    )))
                }
            }
            let trace = simulate_trial(&req)?;
            let body = match cfg.format {
                Format::Csv => to_csv(&trace_rows(&trace), stamp)?,
                Format::Json => to_json(&trace, stamp)?,
            };
            emit(cfg, &body, stdout)?;
            Ok(format!(
                "{} under {}: relative error {:.3e}",
                trace.scheme, trace.pattern, trace.relative_error
            ))
        }
        Command::DofSweep => {
            let target = cfg.target()?;
            check_target(&target, cfg.seed)?;
            let powers: Vec<f64> = cfg
                .powers_log2
                .clone()
                .unwrap_or_else(|| DEFAULT_POWERS_LOG2.to_vec())
                .iter()
                .map(|x| x.exp2())
                .collect();
            let est = estimate_dof(target.scheme, &powers, cfg.trials, cfg.seed)?;
            match cfg.format {
                Format::Csv => {
                    emit(cfg, &to_csv(&sweep_rows(&est), stamp)?, stdout)?;
                    if let Some(out) = &cfg.out {
                        write_file(&sidecar_path(out, "fit"), &to_json(&est, stamp)?)?;
                    }
                }
                Format::Json => emit(cfg, &to_json(&est, stamp)?, stdout)?,
            }
            Ok(format!(
                "{} under {}: slope {:.4}, intercept {:.4}",
                est.scheme, target.pattern, est.slope, est.intercept
            ))
        }
        Command::Demo => {
            let mut text = String::new();
            for scheme in [SchemeId::Scheme1, SchemeId::Scheme2, SchemeId::Scheme3] {
                let trace = simulate_trial(&TrialRequest::new(scheme, cfg.seed))?;
                text.push_str(&walkthrough(&trace));
                text.push('\n');
            }
            emit(cfg, &text, stdout)?;
            Ok(format!("three walkthroughs, seed {}", cfg.seed))
        }
    }
}

fn c(z: C64) -> String {
    format!("({:+.4}{:+.4}i)", z.re, z.im)
}

/// Slot-by-slot account of one block: precoders, transmit and receive
/// equations, combining and recovery.
pub fn walkthrough(trace: &SimulationTrace) -> String {
    let mut s = String::new();
    let h = &trace.channel;
    let _ = writeln!(
        s,
        "== {} under ({}), seed {} ==",
        trace.scheme, trace.pattern, trace.seed
    );
    let sym = &trace.symbols;
    let _ = writeln!(
        s,
        "symbols: u1 = {}, u2 = {}, v1 = {}, v2 = {}",
        c(sym.u[0]),
        c(sym.u[1]),
        c(sym.v[0]),
        c(sym.v[1])
    );
    for t in 0..SLOTS {
        let _ = writeln!(s, "slot {} [CSIT {}]", t + 1, trace.pattern.slots[t]);
        let _ = writeln!(
            s,
            "  H({}) = [[{}, {}], [{}, {}]]",
            t + 1,
            c(h.coef(0, 0, t)),
            c(h.coef(0, 1, t)),
            c(h.coef(1, 0, t)),
            c(h.coef(1, 1, t))
        );
        for j in 0..2 {
            let _ = writeln!(
                s,
                "  X{j1}({t1}) = {} u{j1} + {} v{j1} = {}",
                c(trace.plan.coef(0, j, t)),
                c(trace.plan.coef(1, j, t)),
                c(trace.transmit.x[t][j]),
                j1 = j + 1,
                t1 = t + 1
            );
        }
        for i in 0..2 {
            let _ = writeln!(
                s,
                "  Y{i1}({t1}) = h{i1}1({t1}) X1({t1}) + h{i1}2({t1}) X2({t1}) = {}",
                c(trace.received.y[i][t]),
                i1 = i + 1,
                t1 = t + 1
            );
        }
    }
    for rx in 0..2 {
        let _ = writeln!(s, "receiver {}:", rx + 1);
        for row in &trace.recipe.rows[rx] {
            let z: C64 = (0..SLOTS)
                .map(|t| trace.received.y[rx][t] * row.weights[t] as f64)
                .sum();
            let _ = writeln!(s, "  {} = {}", row.describe(rx), c(z));
        }
        let recovered: Vec<String> = trace.recipe.desired[rx]
            .iter()
            .map(|d: &Symbol| {
                let v = trace.decoded.get(*d).unwrap_or_default();
                format!("{} = {}", d.name(), c(v))
            })
            .collect();
        let _ = writeln!(s, "  recovered {}", recovered.join(", "));
    }
    let _ = writeln!(s, "relative error {:.3e}", trace.relative_error);
    s
}
