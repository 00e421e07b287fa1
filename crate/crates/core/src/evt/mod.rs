//! Extreme-value diagnostics: empirical mean excess curves and
//! maximum-to-sum ratio traces.

mod maxsum;
mod mef;

use thiserror::Error;

pub use maxsum::{max_to_sum, max_to_sum_all, max_to_sum_with, write_maxsum_csv, MaxSumConfig, MaxSumPoint, MaxSumTrace, Verdict};
pub use mef::{
    classify_shape, classify_shape_with, mean_excess, mean_excess_at, mean_excess_with, write_mef_csv, MefConfig,
    MefCurve, MefPoint, ShapeConfig, ShapeFit, TailShape,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvtError {
    #[error("need at least {min} values, got {len}")]
    TooShort { len: usize, min: usize },
    #[error("negative value {value} at index {index}; pass prices or absolute returns")]
    NegativeValue { index: usize, value: f64 },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("all values are zero")]
    AllZero,
    #[error("shape classification needs at least {min} points, got {len}")]
    TooFewPoints { len: usize, min: usize },
    #[error("moment order must be in 1..=4, got {0}")]
    InvalidOrder(u32),
    #[error("trim fraction must lie in [0, 0.5), got {0}")]
    InvalidTrim(f64),
}

/// Rejects negative and non-finite entries.
fn check_nonnegative(values: &[f64]) -> Result<(), EvtError> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(EvtError::NonFinite(index));
        }
        if value < 0.0 {
            return Err(EvtError::NegativeValue { index, value });
        }
    }
    Ok(())
}
