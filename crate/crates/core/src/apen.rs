//! Approximate Entropy, `ApEn(m, r, N) = Φ^m(r) − Φ^{m+1}(r)`.
//!
//! For each template `x(i) = [u(i), …, u(i+m−1)]`, `C_i^m(r)` is the share of
//! templates within Chebyshev distance `r` of `x(i)`, the template itself
//! included, so every `C_i` is at least `1/(N−m+1)` and all logarithms are
//! finite. `Φ^m(r)` is the mean of `ln C_i^m(r)` over the `N−m+1` templates.
//! The tolerance test is `d ≤ r` on the raw values with no slack.
//!
//! In relative mode `r = r_value × SD`, using the Bessel-corrected standard
//! deviation of the analyzed values. The usual choice is `m = 2`,
//! `r = 0.2 × SD`, which is [`ApenParams::default`].
//!
//! Matching templates are located by sorting on the first coordinate and
//! scanning only the band `|u(j) − u(i)| ≤ r`. The band edges are found with
//! the same floating-point subtraction used by the distance test, so the
//! counts are identical to a full pairwise scan.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::Observation;
use crate::stats::{self, RollingSeries, Statistic, StatsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApenError {
    #[error("need at least {min} values for m = {m}, got {len}")]
    TooShort { len: usize, m: usize, min: usize },
    #[error("relative tolerance resolves to zero on a constant series")]
    ZeroTolerance,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("input contains a non-finite value at index {0}")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RMode {
    /// `r = r_value × sample SD` of the analyzed values.
    Relative,
    Absolute,
}

impl fmt::Display for RMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RMode::Relative => "relative",
            RMode::Absolute => "absolute",
        })
    }
}

impl FromStr for RMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "relative" | "rel" => Ok(RMode::Relative),
            "absolute" | "abs" => Ok(RMode::Absolute),
            other => Err(format!("unknown r mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApenParams {
    pub m: usize,
    pub r_mode: RMode,
    pub r_value: f64,
}

impl Default for ApenParams {
    fn default() -> Self {
        Self {
            m: 2,
            r_mode: RMode::Relative,
            r_value: 0.2,
        }
    }
}

impl ApenParams {
    pub fn relative(m: usize, fraction: f64) -> Self {
        Self {
            m,
            r_mode: RMode::Relative,
            r_value: fraction,
        }
    }

    pub fn absolute(m: usize, r: f64) -> Self {
        Self {
            m,
            r_mode: RMode::Absolute,
            r_value: r,
        }
    }

    /// Smallest input length for which both Φ^m and Φ^{m+1} exist.
    pub fn min_len(&self) -> usize {
        self.m + 2
    }

    pub fn validate(&self) -> Result<(), ApenError> {
        if self.m < 1 {
            return Err(ApenError::InvalidParams("m must be at least 1".into()));
        }
        if !(self.r_value > 0.0 && self.r_value.is_finite()) {
            return Err(ApenError::InvalidParams(format!(
                "r must be positive and finite, got {}",
                self.r_value
            )));
        }
        Ok(())
    }

    /// Absolute tolerance for `values`.
    pub fn resolve_r(&self, values: &[f64]) -> Result<f64, ApenError> {
        let r = match self.r_mode {
            RMode::Absolute => self.r_value,
            RMode::Relative => {
                let sd = stats::sample_std_dev(values).map_err(|_| ApenError::TooShort {
                    len: values.len(),
                    m: self.m,
                    min: self.min_len(),
                })?;
                self.r_value * sd
            }
        };
        if r > 0.0 {
            Ok(r)
        } else {
            Err(ApenError::ZeroTolerance)
        }
    }
}

pub fn apen(values: &[f64], params: &ApenParams) -> Result<f64, ApenError> {
    params.validate()?;
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(ApenError::NonFinite(i));
    }
    if values.len() < params.min_len() {
        return Err(ApenError::TooShort {
            len: values.len(),
            m: params.m,
            min: params.min_len(),
        });
    }
    let r = params.resolve_r(values)?;
    Ok(phi(values, params.m, r) - phi(values, params.m + 1, r))
}

fn phi(u: &[f64], m: usize, r: f64) -> f64 {
    let templates = u.len() - m + 1;
    let mut order: Vec<usize> = (0..templates).collect();
    order.sort_by(|&a, &b| u[a].total_cmp(&u[b]));
    let firsts: Vec<f64> = order.iter().map(|&i| u[i]).collect();

    let total = templates as f64;
    let mut sum = 0.0;
    for i in 0..templates {
        let ui = u[i];
        let lo = firsts.partition_point(|&v| ui - v > r);
        let hi = firsts.partition_point(|&v| v - ui <= r);
        let count = order[lo..hi]
            .iter()
            .filter(|&&j| (1..m).all(|k| (u[i + k] - u[j + k]).abs() <= r))
            .count();
        sum += (count as f64 / total).ln();
    }
    sum / total
}

/// ApEn over every full window; relative tolerances use each window's own SD.
pub fn rolling_apen(
    series: &[Observation],
    window: usize,
    params: &ApenParams,
) -> Result<RollingSeries, StatsError> {
    params.validate()?;
    let values: Vec<f64> = series.iter().map(|o| o.value).collect();
    let dates: Vec<NaiveDate> = series.iter().map(|o| o.date).collect();
    stats::rolling_impl(&values, Some(&dates), window, Statistic::Apen(*params))
}

pub fn rolling_apen_values(
    values: &[f64],
    window: usize,
    params: &ApenParams,
) -> Result<RollingSeries, StatsError> {
    params.validate()?;
    stats::rolling_impl(values, None, window, Statistic::Apen(*params))
}
