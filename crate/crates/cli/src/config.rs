use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use tailscope::apen::ApenParams;
use tailscope::series::{Frequency, ReturnKind};
use tailscope::stats::Statistic;
use thiserror::Error;

use crate::args::{DataArgs, FormatArg, StatisticArg, TargetArg};

#[derive(Debug, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Prices,
    Returns,
    AbsReturns,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::Prices => "prices",
            Target::Returns => "returns",
            Target::AbsReturns => "abs_returns",
        }
    }

    pub fn return_kind(self) -> Option<ReturnKind> {
        match self {
            Target::Prices => None,
            Target::Returns => Some(ReturnKind::Signed),
            Target::AbsReturns => Some(ReturnKind::Absolute),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InputSpec {
    pub asset_id: String,
    pub path: PathBuf,
}

/// Default rolling window per frequency: 100 days, 20 weeks, 3 months.
pub fn default_window(frequency: Frequency) -> usize {
    match frequency {
        Frequency::Daily => 100,
        Frequency::Weekly => 20,
        Frequency::Monthly => 3,
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub inputs: Vec<InputSpec>,
    pub frequencies: Vec<Frequency>,
    pub source_frequency: Frequency,
    pub fill_weekend: HashSet<String>,
    pub target: Target,
    pub window: Option<usize>,
    pub statistic: Statistic,
    pub apen: ApenParams,
    pub trim_fraction: f64,
    pub p: Option<u32>,
    pub format: Format,
    pub out_dir: PathBuf,
}

impl AnalysisConfig {
    pub fn from_args(args: &DataArgs) -> Result<Self, ConfigError> {
        let inputs = args.inputs.iter().map(|s| parse_input(s)).collect::<Result<Vec<_>, _>>()?;
        let mut seen = HashSet::new();
        for input in &inputs {
            if !seen.insert(input.asset_id.as_str()) {
                return Err(ConfigError(format!("duplicate asset id `{}`", input.asset_id)));
            }
        }
        for id in &args.fill_weekend {
            if !seen.contains(id.as_str()) {
                return Err(ConfigError(format!("--fill-weekend names unknown asset `{id}`")));
            }
        }

        let apen = ApenParams {
            m: args.m,
            r_mode: args.r_mode,
            r_value: args.r,
        };
        apen.validate().map_err(|e| ConfigError(e.to_string()))?;
        if !(0.0..0.5).contains(&args.trim) {
            return Err(ConfigError(format!("--trim must lie in [0, 0.5), got {}", args.trim)));
        }
        if let Some(p) = args.p {
            if !(1..=4).contains(&p) {
                return Err(ConfigError(format!("--p must be in 1..=4, got {p}")));
            }
        }

        let mut frequencies = args.frequency.clone();
        frequencies.dedup();
        if args.source_frequency != Frequency::Daily
            && frequencies.iter().any(|&f| f != args.source_frequency)
        {
            return Err(ConfigError(format!(
                "{} inputs cannot be resampled; only daily sources can",
                args.source_frequency
            )));
        }

        let statistic = match args.statistic {
            StatisticArg::StdDev => Statistic::StdDev,
            StatisticArg::CoeffVariation => Statistic::CoeffVariation,
            StatisticArg::Apen => Statistic::Apen(apen),
        };

        Ok(Self {
            inputs,
            frequencies,
            source_frequency: args.source_frequency,
            fill_weekend: args.fill_weekend.iter().cloned().collect(),
            target: match args.target {
                TargetArg::Prices => Target::Prices,
                TargetArg::Returns => Target::Returns,
                TargetArg::AbsReturns => Target::AbsReturns,
            },
            window: args.window,
            statistic,
            apen,
            trim_fraction: args.trim,
            p: args.p,
            format: match args.format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            },
            out_dir: args.out.clone(),
        })
    }

    pub fn window_for(&self, frequency: Frequency) -> usize {
        self.window.unwrap_or_else(|| default_window(frequency))
    }

    /// Checks every window the rolling command will use against the statistic's minimum.
    pub fn check_windows(&self) -> Result<(), ConfigError> {
        let min = self.statistic.min_window();
        for &f in &self.frequencies {
            let w = self.window_for(f);
            if w < min {
                return Err(ConfigError(format!(
                    "{} window {w} is below the minimum {min} for {}; pass --window",
                    f,
                    self.statistic.name()
                )));
            }
        }
        Ok(())
    }

    pub fn output_path(&self, asset: &str, frequency: &str, target: Target, command: &str) -> PathBuf {
        self.out_dir
            .join(format!("{asset}_{frequency}_{target}_{command}.{}", self.format.ext()))
    }
}

fn parse_input(raw: &str) -> Result<InputSpec, ConfigError> {
    let (asset_id, path) = match raw.split_once('=') {
        Some((id, path)) => (id.to_string(), PathBuf::from(path)),
        None => {
            let path = PathBuf::from(raw);
            let stem = Path::new(raw)
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| ConfigError(format!("cannot derive an asset id from `{raw}`")))?
                .to_string();
            (stem, path)
        }
    };
    if asset_id.is_empty() {
        return Err(ConfigError(format!("empty asset id in `{raw}`")));
    }
    Ok(InputSpec { asset_id, path })
}
