//! Descriptive statistics and the rolling-window engine.

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apen::{self, ApenError, ApenParams};
use crate::series::Observation;

/// Below this absolute mean the coefficient of variation is reported as undefined.
pub const CV_MEAN_EPSILON: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least 2 values, got {0}")]
    TooShort(usize),
    #[error("window {window} is below the minimum of {min}")]
    WindowTooSmall { window: usize, min: usize },
    #[error("window {window} exceeds series length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("dates and values differ in length ({dates} vs {values})")]
    LengthMismatch { dates: usize, values: usize },
    #[error(transparent)]
    Apen(#[from] ApenError),
}

/// Mean, sample standard deviation, coefficient of variation and excess
/// kurtosis of a sample.
///
/// `coeff_variation` is `None` when `|mean| < 1e-12`; `excess_kurtosis` is
/// `None` when `n < 4` or the sample has zero spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub coeff_variation: Option<f64>,
    pub excess_kurtosis: Option<f64>,
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Bessel-corrected sample standard deviation. Requires at least two values.
pub fn sample_std_dev(values: &[f64]) -> Result<f64, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::TooShort(values.len()));
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|x| (x - m) * (x - m)).sum();
    Ok((ss / (values.len() - 1) as f64).sqrt())
}

pub fn summarize(values: &[f64]) -> Result<StatsSummary, StatsError> {
    let n = values.len();
    if n < 2 {
        return Err(StatsError::TooShort(n));
    }
    let nf = n as f64;
    let mean = mean(values);
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in values {
        let d2 = (x - mean) * (x - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    let var = m2 / (nf - 1.0);
    let std_dev = var.sqrt();
    let coeff_variation = (mean.abs() >= CV_MEAN_EPSILON).then(|| std_dev / mean);
    // Sample-adjusted excess kurtosis (G2), zero in expectation for a normal population.
    let excess_kurtosis = (n >= 4 && var > 0.0).then(|| {
        let lead = nf * (nf + 1.0) / ((nf - 1.0) * (nf - 2.0) * (nf - 3.0));
        let tail = 3.0 * (nf - 1.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0));
        lead * m4 / (var * var) - tail
    });
    Ok(StatsSummary {
        n,
        mean,
        std_dev,
        coeff_variation,
        excess_kurtosis,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "statistic")]
pub enum Statistic {
    StdDev,
    CoeffVariation,
    Apen(ApenParams),
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::StdDev => "std_dev",
            Statistic::CoeffVariation => "coeff_variation",
            Statistic::Apen(_) => "apen",
        }
    }

    pub fn min_window(&self) -> usize {
        match self {
            Statistic::StdDev | Statistic::CoeffVariation => 2,
            Statistic::Apen(p) => p.min_len(),
        }
    }

    fn eval(&self, window: &[f64]) -> Result<Option<f64>, StatsError> {
        Ok(match self {
            Statistic::StdDev => Some(sample_std_dev(window)?),
            Statistic::CoeffVariation => summarize(window)?.coeff_variation,
            Statistic::Apen(p) => Some(apen::apen(window, p)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RollingPoint {
    /// Index of the window's last observation in the source series.
    pub end: usize,
    pub date: Option<NaiveDate>,
    /// `None` when the statistic is undefined on this window (e.g. CV with zero mean).
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingSeries {
    pub window: usize,
    pub statistic: Statistic,
    pub points: Vec<RollingPoint>,
}

impl RollingSeries {
    pub fn values(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.value).collect()
    }
}

/// Evaluates `statistic` on every full window of dated observations.
pub fn rolling(
    series: &[Observation],
    window: usize,
    statistic: Statistic,
) -> Result<RollingSeries, StatsError> {
    let values: Vec<f64> = series.iter().map(|o| o.value).collect();
    let dates: Vec<NaiveDate> = series.iter().map(|o| o.date).collect();
    rolling_impl(&values, Some(&dates), window, statistic)
}

/// Same as [`rolling`] for values without dates; points are identified by index only.
pub fn rolling_values(
    values: &[f64],
    window: usize,
    statistic: Statistic,
) -> Result<RollingSeries, StatsError> {
    rolling_impl(values, None, window, statistic)
}

pub(crate) fn rolling_impl(
    values: &[f64],
    dates: Option<&[NaiveDate]>,
    window: usize,
    statistic: Statistic,
) -> Result<RollingSeries, StatsError> {
    if let Some(d) = dates {
        if d.len() != values.len() {
            return Err(StatsError::LengthMismatch {
                dates: d.len(),
                values: values.len(),
            });
        }
    }
    let min = statistic.min_window();
    if window < min {
        return Err(StatsError::WindowTooSmall { window, min });
    }
    if window > values.len() {
        return Err(StatsError::WindowTooLarge {
            window,
            len: values.len(),
        });
    }
    let points = values
        .par_windows(window)
        .enumerate()
        .map(|(start, w)| {
            let end = start + window - 1;
            Ok(RollingPoint {
                end,
                date: dates.map(|d| d[end]),
                value: statistic.eval(w)?,
            })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;
    Ok(RollingSeries {
        window,
        statistic,
        points,
    })
}
