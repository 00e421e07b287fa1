use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{check_nonnegative, EvtError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailShape {
    /// Thin tail with memory (Gaussian-like).
    Decreasing,
    /// Memoryless (exponential-like).
    Constant,
    /// Generalized Pareto-like.
    IncreasingLinear,
    /// Lognormal-like.
    IncreasingConvex,
    Unclassified,
}

impl TailShape {
    pub fn as_str(self) -> &'static str {
        match self {
            TailShape::Decreasing => "decreasing",
            TailShape::Constant => "constant",
            TailShape::IncreasingLinear => "increasing_linear",
            TailShape::IncreasingConvex => "increasing_convex",
            TailShape::Unclassified => "unclassified",
        }
    }
}

/// Cutoffs for [`classify_shape`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeConfig {
    /// Normalized slopes with magnitude below this are `Constant`.
    pub flat_slope: f64,
    /// Increasing curves whose upper-half slope exceeds the lower-half slope
    /// by at least this fraction of the overall slope are `IncreasingConvex`.
    pub convexity_gain: f64,
    pub min_points: usize,
}

impl Default for ShapeConfig {
    fn default() -> Self {
        Self {
            flat_slope: 0.10,
            convexity_gain: 0.20,
            min_points: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MefConfig {
    pub trim_fraction: f64,
    /// Minimum number of top order statistics discarded.
    pub min_trim: usize,
    pub shape: ShapeConfig,
}

impl Default for MefConfig {
    fn default() -> Self {
        Self {
            trim_fraction: 0.02,
            min_trim: 3,
            shape: ShapeConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MefPoint {
    pub threshold: f64,
    pub mean_excess: f64,
    pub exceedances: usize,
}

/// Line-fit diagnostics behind a shape verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeFit {
    pub slope: f64,
    /// `slope × threshold range / mean(mean_excess)`.
    pub normalized_slope: f64,
    /// `(upper-half slope − lower-half slope) / |slope|`.
    pub convexity_gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MefCurve {
    pub points: Vec<MefPoint>,
    pub trimmed: usize,
    pub shape: TailShape,
    pub fit: Option<ShapeFit>,
}

impl MefCurve {
    pub fn thresholds(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.threshold).collect()
    }
}

/// Mean excess `Σ (x − a)·1{x > a} / #{x > a}`, or `None` without exceedances.
pub fn mean_excess_at(values: &[f64], threshold: f64) -> Option<f64> {
    let (sum, count) = values
        .iter()
        .filter(|&&x| x > threshold)
        .fold((0.0, 0usize), |(s, c), &x| (s + (x - threshold), c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn mean_excess(values: &[f64], trim_fraction: f64) -> Result<MefCurve, EvtError> {
    mean_excess_with(
        values,
        &MefConfig {
            trim_fraction,
            ..MefConfig::default()
        },
    )
}

/// Empirical mean excess curve over the distinct order statistics, with the
/// top `max(min_trim, ⌈trim_fraction·n⌉)` order statistics discarded.
pub fn mean_excess_with(values: &[f64], config: &MefConfig) -> Result<MefCurve, EvtError> {
    const MIN_LEN: usize = 10;
    if !(0.0..0.5).contains(&config.trim_fraction) {
        return Err(EvtError::InvalidTrim(config.trim_fraction));
    }
    if values.len() < MIN_LEN {
        return Err(EvtError::TooShort {
            len: values.len(),
            min: MIN_LEN,
        });
    }
    check_nonnegative(values)?;

    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let trimmed = config
        .min_trim
        .max((config.trim_fraction * n as f64).ceil() as usize);

    // above[i] = sum of sorted[i..], accumulated from the top.
    let mut above = vec![0.0; n + 1];
    for i in (0..n).rev() {
        above[i] = above[i + 1] + sorted[i];
    }

    let last = n.saturating_sub(trimmed + 1);
    let mut points = Vec::with_capacity(last);
    for i in 0..last {
        let a = sorted[i];
        // A threshold is the last copy of a tied value, so all later entries exceed it.
        if sorted[i + 1] == a {
            continue;
        }
        let exceedances = n - i - 1;
        let excess = above[i + 1] - exceedances as f64 * a;
        points.push(MefPoint {
            threshold: a,
            mean_excess: excess / exceedances as f64,
            exceedances,
        });
    }

    let weighted: Vec<(f64, f64, f64)> = points
        .iter()
        .map(|p| (p.threshold, p.mean_excess, inverse_variance_weight(p)))
        .collect();
    let (shape, fit) = if weighted.len() >= config.shape.min_points {
        classify_weighted(&weighted, &config.shape)
    } else {
        (TailShape::Unclassified, None)
    };
    Ok(MefCurve {
        points,
        trimmed,
        shape,
        fit,
    })
}

/// The sampling variance of a mean excess estimate scales like `me² / count`.
fn inverse_variance_weight(p: &MefPoint) -> f64 {
    if p.mean_excess > 0.0 {
        p.exceedances as f64 / (p.mean_excess * p.mean_excess)
    } else {
        0.0
    }
}

/// Classifies an unweighted `(threshold, mean_excess)` curve.
pub fn classify_shape(points: &[(f64, f64)]) -> Result<TailShape, EvtError> {
    classify_shape_with(points, &ShapeConfig::default())
}

pub fn classify_shape_with(points: &[(f64, f64)], config: &ShapeConfig) -> Result<TailShape, EvtError> {
    if points.len() < config.min_points {
        return Err(EvtError::TooFewPoints {
            len: points.len(),
            min: config.min_points,
        });
    }
    let weighted: Vec<_> = points.iter().map(|&(a, me)| (a, me, 1.0)).collect();
    Ok(classify_weighted(&weighted, config).0)
}

/// Weighted least-squares slope of `y` on `x`.
fn wls_slope(points: &[(f64, f64, f64)]) -> Option<f64> {
    let w: f64 = points.iter().map(|p| p.2).sum();
    if !(w > 0.0) {
        return None;
    }
    let mx = points.iter().map(|p| p.2 * p.0).sum::<f64>() / w;
    let my = points.iter().map(|p| p.2 * p.1).sum::<f64>() / w;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y, wi) in points {
        sxy += wi * (x - mx) * (y - my);
        sxx += wi * (x - mx) * (x - mx);
    }
    let s = sxy / sxx;
    s.is_finite().then_some(s)
}

fn classify_weighted(points: &[(f64, f64, f64)], config: &ShapeConfig) -> (TailShape, Option<ShapeFit>) {
    let unclassified = (TailShape::Unclassified, None);
    if points.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return unclassified;
    }
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let w: f64 = points.iter().map(|p| p.2).sum();
    let mean_me = points.iter().map(|p| p.2 * p.1).sum::<f64>() / w;
    let Some(slope) = wls_slope(points) else {
        return unclassified;
    };
    if !(hi > lo && mean_me > 0.0) {
        return unclassified;
    }
    let normalized_slope = slope * (hi - lo) / mean_me;

    let half = points.len() / 2;
    let gain = match (wls_slope(&points[..half]), wls_slope(&points[half..])) {
        (Some(lower), Some(upper)) => (upper - lower) / slope.abs(),
        _ => f64::NAN,
    };
    let fit = Some(ShapeFit {
        slope,
        normalized_slope,
        convexity_gain: gain,
    });

    let shape = if normalized_slope.abs() < config.flat_slope {
        TailShape::Constant
    } else if normalized_slope <= -config.flat_slope {
        TailShape::Decreasing
    } else if gain >= config.convexity_gain {
        TailShape::IncreasingConvex
    } else if gain < config.convexity_gain {
        TailShape::IncreasingLinear
    } else {
        TailShape::Unclassified
    };
    (shape, fit)
}

/// Writes `threshold,mean_excess,exceedances` rows.
pub fn write_mef_csv<W: Write>(curve: &MefCurve, writer: W) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(writer);
    writeln!(w, "threshold,mean_excess,exceedances")?;
    for p in &curve.points {
        writeln!(w, "{},{},{}", p.threshold, p.mean_excess, p.exceedances)?;
    }
    w.flush()
}
