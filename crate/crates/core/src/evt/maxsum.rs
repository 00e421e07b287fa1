use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{check_nonnegative, EvtError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converging,
    NotConverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::NotConverging => "not_converging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Heuristic cutoffs for the advisory verdict. The full trace is always kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxSumConfig {
    pub converging_final: f64,
    pub converging_tail_mean: f64,
    pub diverging_final: f64,
}

impl Default for MaxSumConfig {
    fn default() -> Self {
        Self {
            converging_final: 0.02,
            converging_tail_mean: 0.05,
            diverging_final: 0.10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxSumPoint {
    /// Prefix length.
    pub n: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxSumTrace {
    pub p: u32,
    pub points: Vec<MaxSumPoint>,
    pub verdict: Verdict,
}

impl MaxSumTrace {
    pub fn final_ratio(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.ratio)
    }
}

pub fn max_to_sum(values: &[f64], p: u32) -> Result<MaxSumTrace, EvtError> {
    max_to_sum_with(values, p, &MaxSumConfig::default())
}

/// Traces for p = 1..=4.
pub fn max_to_sum_all(values: &[f64], config: &MaxSumConfig) -> Result<Vec<MaxSumTrace>, EvtError> {
    (1..=4).map(|p| max_to_sum_with(values, p, config)).collect()
}

/// `t^p` by repeated multiplication. For `t` in `[0, 1]` the result is
/// nonincreasing in `p` under rounding, which keeps traces ordered in `p`.
fn pow_by_steps(t: f64, p: u32) -> f64 {
    (1..p).fold(t, |acc, _| acc * t)
}

/// Running `max(x_i^p) / Σ x_i^p` over prefixes in input order.
///
/// The sum is held relative to the running maximum, so large prices raised
/// to the fourth power do not overflow. Prefixes made only of zeros have no
/// defined ratio and produce no point.
pub fn max_to_sum_with(values: &[f64], p: u32, config: &MaxSumConfig) -> Result<MaxSumTrace, EvtError> {
    if !(1..=4).contains(&p) {
        return Err(EvtError::InvalidOrder(p));
    }
    if values.len() < 2 {
        return Err(EvtError::TooShort {
            len: values.len(),
            min: 2,
        });
    }
    check_nonnegative(values)?;
    if values.iter().all(|&x| x == 0.0) {
        return Err(EvtError::AllZero);
    }

    let mut max = 0.0;
    // Σ (x_i / max)^p
    let mut scaled = 0.0;
    let mut points = Vec::with_capacity(values.len());
    for (i, &x) in values.iter().enumerate() {
        if x > max {
            scaled = scaled * pow_by_steps(max / x, p) + 1.0;
            max = x;
        } else if max > 0.0 {
            scaled += pow_by_steps(x / max, p);
        } else {
            continue;
        }
        points.push(MaxSumPoint {
            n: i + 1,
            ratio: 1.0 / scaled,
        });
    }

    let verdict = verdict(&points, config);
    Ok(MaxSumTrace { p, points, verdict })
}

fn verdict(points: &[MaxSumPoint], config: &MaxSumConfig) -> Verdict {
    let last = points.last().expect("at least one positive value").ratio;
    let tail = points.len().div_ceil(10);
    let tail_mean = points[points.len() - tail..].iter().map(|p| p.ratio).sum::<f64>() / tail as f64;
    if last < config.converging_final && tail_mean < config.converging_tail_mean {
        Verdict::Converging
    } else if last > config.diverging_final {
        Verdict::NotConverging
    } else {
        Verdict::Inconclusive
    }
}

/// Writes `p,n,ratio` rows for each trace in turn.
pub fn write_maxsum_csv<W: Write>(traces: &[MaxSumTrace], writer: W) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(writer);
    writeln!(w, "p,n,ratio")?;
    for t in traces {
        for pt in &t.points {
            writeln!(w, "{},{},{}", t.p, pt.n, pt.ratio)?;
        }
    }
    w.flush()
}
