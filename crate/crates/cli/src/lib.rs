//! Command-line pipeline over the `tailscope` library.
//!
//! Every data command writes one file per (asset, frequency) named
//! `{asset}_{frequency}_{target}_{command}.{csv|json}`; `report` writes a
//! single `report.{csv|json}` table and `synth` writes `{asset}_synth.csv`.
//! A failing asset is reported on stderr and does not stop the others.

pub mod args;
pub mod config;
pub mod input;
mod output;

use std::fs;
use std::path::PathBuf;

use thiserror::Error;

use args::{Cli, Command, FamilyArg, SynthArgs};
use config::{AnalysisConfig, ConfigError, Target};
use input::{Dataset, Frame};
use tailscope::synth::{self, Family, GeneratorSpec};

pub use output::ReportRow;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Series(#[from] tailscope::SeriesError),
    #[error(transparent)]
    Stats(#[from] tailscope::StatsError),
    #[error(transparent)]
    Apen(#[from] tailscope::ApenError),
    #[error(transparent)]
    Evt(#[from] tailscope::EvtError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Other(String),
}

/// Outcome of a run that got past configuration checks.
#[derive(Debug, Default)]
pub struct RunSummary {
    pub written: Vec<PathBuf>,
    pub failures: Vec<String>,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }

    fn fail(&mut self, what: &str, err: impl std::fmt::Display) {
        let line = format!("{what}: {err}");
        eprintln!("error: {line}");
        self.failures.push(line);
    }
}

pub fn run(cli: &Cli) -> Result<RunSummary, ConfigError> {
    let (kind, args) = match &cli.command {
        Command::Synth(args) => return run_synth(args),
        Command::Ingest(a) => (CommandKind::Ingest, a),
        Command::Report(a) => (CommandKind::Report, a),
        Command::Stats(a) => (CommandKind::Stats, a),
        Command::Apen(a) => (CommandKind::Apen, a),
        Command::Mef(a) => (CommandKind::Mef, a),
        Command::Maxsum(a) => (CommandKind::Maxsum, a),
        Command::Rolling(a) => (CommandKind::Rolling, a),
    };
    let config = AnalysisConfig::from_args(args)?;
    if kind == CommandKind::Rolling {
        config.check_windows()?;
    }
    fs::create_dir_all(&config.out_dir)
        .map_err(|e| ConfigError(format!("cannot create {}: {e}", config.out_dir.display())))?;
    Ok(run_data(kind, &config))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CommandKind {
    Ingest,
    Report,
    Stats,
    Apen,
    Mef,
    Maxsum,
    Rolling,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Ingest => "ingest",
            CommandKind::Report => "report",
            CommandKind::Stats => "stats",
            CommandKind::Apen => "apen",
            CommandKind::Mef => "mef",
            CommandKind::Maxsum => "maxsum",
            CommandKind::Rolling => "rolling",
        }
    }
}

fn run_data(kind: CommandKind, config: &AnalysisConfig) -> RunSummary {
    let mut summary = RunSummary::default();
    let mut report_rows = Vec::new();
    for spec in &config.inputs {
        let dataset = match input::load(spec, config.source_frequency) {
            Ok(d) => d,
            Err(e) => {
                summary.fail(&spec.asset_id, e);
                continue;
            }
        };
        if let Dataset::Prices { dropped, .. } = &dataset {
            if *dropped > 0 {
                eprintln!("note: {}: dropped {dropped} null rows", spec.asset_id);
            }
        }
        for frame in input::frames(&spec.asset_id, &dataset, config) {
            let frame = match frame {
                Ok(f) => f,
                Err(e) => {
                    summary.fail(&spec.asset_id, e);
                    continue;
                }
            };
            let what = format!("{} {}", frame.asset_id, frame.label);
            if kind == CommandKind::Report {
                match output::report_rows(&frame, config) {
                    Ok(rows) => report_rows.extend(rows),
                    Err(e) => summary.fail(&what, e),
                }
                continue;
            }
            let path = config.output_path(&frame.asset_id, &frame.label, config.target, kind.name());
            match render(kind, &frame, config).and_then(|bytes| Ok(fs::write(&path, bytes)?)) {
                Ok(()) => summary.written.push(path),
                Err(e) => summary.fail(&what, e),
            }
        }
    }
    if kind == CommandKind::Report && !report_rows.is_empty() {
        let path = config.out_dir.join(format!("report.{}", config.format.ext()));
        match output::render_report(&report_rows, config.format).and_then(|b| Ok(fs::write(&path, b)?)) {
            Ok(()) => summary.written.push(path),
            Err(e) => summary.fail("report", e),
        }
    }
    summary
}

fn render(kind: CommandKind, frame: &Frame, config: &AnalysisConfig) -> Result<Vec<u8>, RunError> {
    let data = frame.target(config.target)?;
    match kind {
        CommandKind::Ingest => output::render_series(&data, config),
        CommandKind::Stats => output::render_stats(&data, config),
        CommandKind::Apen => output::render_apen(&data, config),
        CommandKind::Mef => {
            if config.target == Target::Returns {
                return Err(RunError::Other(
                    "mean excess needs nonnegative values; use --target abs-returns".into(),
                ));
            }
            output::render_mef(&data, config)
        }
        CommandKind::Maxsum => output::render_maxsum(&data, config),
        CommandKind::Rolling => {
            let window = match frame.frequency() {
                Some(f) => config.window_for(f),
                None => config.window.unwrap_or(config::default_window(tailscope::Frequency::Daily)),
            };
            output::render_rolling(&data, window, config)
        }
        CommandKind::Report => unreachable!("report rows are rendered together"),
    }
}

fn run_synth(args: &SynthArgs) -> Result<RunSummary, ConfigError> {
    let family = match args.family {
        FamilyArg::Gaussian => Family::Gaussian {
            mu: args.mu,
            sigma: args.sigma,
        },
        FamilyArg::Exponential => Family::Exponential { lambda: args.lambda },
        FamilyArg::Gpd => Family::Gpd {
            xi: args.xi,
            beta: args.beta,
        },
        FamilyArg::Lognormal => Family::Lognormal {
            mu: args.mu,
            sigma: args.sigma,
        },
        FamilyArg::Pareto => Family::Pareto {
            alpha: args.alpha,
            x_min: args.x_min,
        },
    };
    let spec = GeneratorSpec::new(family, args.seed, args.n);
    let values = synth::generate(&spec).map_err(|e| ConfigError(e.to_string()))?;
    let asset = args.asset.clone().unwrap_or_else(|| family.name().to_string());
    fs::create_dir_all(&args.out).map_err(|e| ConfigError(format!("cannot create {}: {e}", args.out.display())))?;
    let path = args.out.join(format!("{asset}_synth.csv"));
    let mut summary = RunSummary::default();
    match fs::write(&path, output::render_sample(&values)) {
        Ok(()) => summary.written.push(path),
        Err(e) => summary.fail(&asset, e),
    }
    Ok(summary)
}
