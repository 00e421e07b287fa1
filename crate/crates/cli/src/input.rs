//! Loading input files and deriving the series a command operates on.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};

use chrono::NaiveDate;
use tailscope::series::{self, Frequency, PriceSeries};

use crate::config::{AnalysisConfig, InputSpec, Target};
use crate::RunError;

/// A parsed input file.
#[derive(Debug, Clone)]
pub enum Dataset {
    /// A `Date,…,Close,…` price file.
    Prices { series: PriceSeries, dropped: usize },
    /// A one-column sample (as written by `synth`) or a `date,value` file.
    Sample {
        dates: Option<Vec<NaiveDate>>,
        values: Vec<f64>,
    },
}

/// One (asset, frequency) view of a dataset.
#[derive(Debug, Clone)]
pub struct Frame {
    pub asset_id: String,
    /// Frequency label used in file names; `raw` for samples.
    pub label: String,
    pub prices: Option<PriceSeries>,
    pub sample: Option<TargetData>,
}

/// The values a command analyzes, with dates when the source had them.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetData {
    pub dates: Option<Vec<NaiveDate>>,
    pub values: Vec<f64>,
}

pub fn load(input: &InputSpec, source_frequency: Frequency) -> Result<Dataset, RunError> {
    let mut content = String::new();
    File::open(&input.path)
        .and_then(|f| BufReader::new(f).read_to_string(&mut content))
        .map_err(|e| RunError::Other(format!("cannot read {}: {e}", input.path.display())))?;
    let header: Vec<String> = content
        .lines()
        .next()
        .unwrap_or("")
        .split(',')
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let has = |name: &str| header.iter().any(|h| h == name);

    if has("date") && has("close") {
        let ingested = series::read_price_csv(content.as_bytes(), &input.asset_id, source_frequency)?;
        return Ok(Dataset::Prices {
            series: ingested.series,
            dropped: ingested.dropped,
        });
    }
    if has("date") && has("value") {
        return read_dated_values(content.as_bytes());
    }
    if header.len() == 1 {
        return read_single_column(content.as_bytes());
    }
    Err(RunError::Other(format!(
        "{}: expected Date/Close columns, date/value columns, or a single value column",
        input.path.display()
    )))
}

fn parse_value(raw: &str, line: usize) -> Result<f64, RunError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| RunError::Other(format!("line {line}: cannot parse `{raw}` as a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(RunError::Other(format!("line {line}: non-finite value")))
    }
}

fn read_single_column<R: Read>(reader: R) -> Result<Dataset, RunError> {
    let mut values = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate().skip(1) {
        let line = line.map_err(|e| RunError::Other(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        values.push(parse_value(&line, i + 1)?);
    }
    Ok(Dataset::Sample { dates: None, values })
}

fn read_dated_values<R: Read>(reader: R) -> Result<Dataset, RunError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| RunError::Other(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name)).expect("checked by caller");
    let (dc, vc) = (col("date"), col("value"));
    let (mut dates, mut values) = (Vec::new(), Vec::new());
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| RunError::Other(e.to_string()))?;
        let line = i + 2;
        let raw_date = record.get(dc).unwrap_or("");
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|_| RunError::Other(format!("line {line}: bad date `{raw_date}`")))?;
        if let Some(&prev) = dates.last() {
            if date <= prev {
                return Err(RunError::Other(format!("line {line}: dates must be strictly increasing")));
            }
        }
        dates.push(date);
        values.push(parse_value(record.get(vc).unwrap_or(""), line)?);
    }
    Ok(Dataset::Sample {
        dates: Some(dates),
        values,
    })
}

/// Expands a dataset into the frames requested by the configuration.
pub fn frames(asset_id: &str, dataset: &Dataset, config: &AnalysisConfig) -> Vec<Result<Frame, RunError>> {
    match dataset {
        Dataset::Sample { dates, values } => vec![Ok(Frame {
            asset_id: asset_id.to_string(),
            label: "raw".into(),
            prices: None,
            sample: Some(TargetData {
                dates: dates.clone(),
                values: values.clone(),
            }),
        })],
        Dataset::Prices { series, .. } => {
            let base = if config.fill_weekend.contains(asset_id) {
                series::fill_weekend(series).map_err(RunError::from)
            } else {
                Ok(series.clone())
            };
            config
                .frequencies
                .iter()
                .map(|&f| {
                    let base = base.as_ref().map_err(|e| RunError::Other(e.to_string()))?;
                    let prices = if base.frequency() == f {
                        base.clone()
                    } else {
                        series::resample(base, f)?
                    };
                    Ok(Frame {
                        asset_id: asset_id.to_string(),
                        label: f.as_str().to_string(),
                        prices: Some(prices),
                        sample: None,
                    })
                })
                .collect()
        }
    }
}

impl Frame {
    pub fn frequency(&self) -> Option<Frequency> {
        self.label.parse().ok()
    }

    /// Prices, log-returns or absolute log-returns of this frame.
    pub fn target(&self, target: Target) -> Result<TargetData, RunError> {
        if let Some(prices) = &self.prices {
            return Ok(match target.return_kind() {
                None => TargetData {
                    dates: Some(prices.points().iter().map(|p| p.date).collect()),
                    values: prices.closes(),
                },
                Some(kind) => {
                    let r = series::log_returns(prices, kind)?;
                    TargetData {
                        dates: Some(r.points.iter().map(|o| o.date).collect()),
                        values: r.values(),
                    }
                }
            });
        }
        let sample = self.sample.as_ref().expect("frame holds prices or a sample");
        let Some(kind) = target.return_kind() else {
            return Ok(sample.clone());
        };
        if sample.values.len() < 2 {
            return Err(RunError::Other("log-returns need at least 2 values".into()));
        }
        if let Some(i) = sample.values.iter().position(|&v| v <= 0.0) {
            return Err(RunError::Other(format!("log-returns need positive values (index {i})")));
        }
        let values = sample
            .values
            .windows(2)
            .map(|w| {
                let r = (w[1] / w[0]).ln();
                match kind {
                    series::ReturnKind::Signed => r,
                    series::ReturnKind::Absolute => r.abs(),
                }
            })
            .collect();
        Ok(TargetData {
            dates: sample.dates.as_ref().map(|d| d[1..].to_vec()),
            values,
        })
    }
}
