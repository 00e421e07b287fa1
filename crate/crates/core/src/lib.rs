//! Volatility diagnostics for financial price series.
//!
//! * [`series`]: CSV ingestion, weekend filling, log-returns, resampling.
//! * [`stats`]: descriptive statistics and rolling windows.
//! * [`apen`]: Approximate Entropy.
//! * [`evt`]: mean excess curves and maximum-to-sum traces.
//! * [`synth`]: seeded generators used as reference distributions.

pub mod apen;
pub mod evt;
pub mod series;
pub mod stats;
pub mod synth;

pub use apen::{apen, rolling_apen, ApenError, ApenParams, RMode};
pub use evt::{max_to_sum, mean_excess, EvtError, MaxSumTrace, MefCurve, TailShape, Verdict};
pub use series::{
    fill_weekend, ingest_csv, log_returns, resample, Frequency, Observation, PricePoint, PriceSeries, ReturnKind,
    ReturnSeries, SeriesError,
};
pub use stats::{rolling, summarize, RollingSeries, Statistic, StatsError, StatsSummary};
pub use synth::{generate, Family, GeneratorSpec};
