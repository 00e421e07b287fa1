//! Price ingestion, calendar normalization, log-returns and resampling.
//!
//! Input files follow the Yahoo Finance export layout
//! (`Date,Open,High,Low,Close,Adj Close,Volume`). Only `Date` and `Close`
//! are read, so the normalized `date,close` files written by
//! [`write_price_csv`] load back through the same path.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, Days, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("missing required column `{0}`")]
    MissingColumn(&'static str),
    #[error("unparsable row at line {line}: {reason}")]
    UnparsableRow { line: u64, reason: String },
    #[error("non-positive price {close} on {date}")]
    NonPositivePrice { date: NaiveDate, close: f64 },
    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),
    #[error("dates must be strictly increasing ({prev} then {next})")]
    Unordered { prev: NaiveDate, next: NaiveDate },
    #[error("{frequency} series has two points in the same period ({prev}, {next})")]
    SpacingMismatch {
        frequency: Frequency,
        prev: NaiveDate,
        next: NaiveDate,
    },
    #[error("operation requires a {expected} series, got {actual}")]
    WrongFrequency {
        expected: Frequency,
        actual: Frequency,
    },
    #[error("series is empty")]
    EmptySeries,
    #[error("series has {0} points, at least 2 are needed")]
    TooShort(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Daily,
    Weekly,
    Monthly,
}

impl Frequency {
    pub const ALL: [Frequency; 3] = [Frequency::Daily, Frequency::Weekly, Frequency::Monthly];

    pub fn as_str(self) -> &'static str {
        match self {
            Frequency::Daily => "daily",
            Frequency::Weekly => "weekly",
            Frequency::Monthly => "monthly",
        }
    }

    /// Key identifying the sampling period a date falls into.
    fn period(self, date: NaiveDate) -> (i32, u32) {
        match self {
            Frequency::Daily => (date.year(), date.ordinal()),
            Frequency::Weekly => {
                let w = date.iso_week();
                (w.year(), w.week())
            }
            Frequency::Monthly => (date.year(), date.month()),
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Frequency {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "daily" | "d" => Ok(Frequency::Daily),
            "weekly" | "w" => Ok(Frequency::Weekly),
            "monthly" | "m" => Ok(Frequency::Monthly),
            other => Err(format!("unknown frequency `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReturnKind {
    Signed,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricePoint {
    pub date: NaiveDate,
    pub close: f64,
}

/// A dated real value: a log-return, or any other per-observation quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub date: NaiveDate,
    pub value: f64,
}

/// Closing prices of one asset at a declared sampling frequency.
///
/// Dates are strictly increasing and every close is finite and positive.
/// Weekly and monthly series hold at most one point per ISO week or
/// calendar month. Daily series may have gaps until [`fill_weekend`] is
/// applied.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    asset_id: String,
    frequency: Frequency,
    points: Vec<PricePoint>,
}

impl PriceSeries {
    pub fn new(
        asset_id: impl Into<String>,
        frequency: Frequency,
        points: Vec<PricePoint>,
    ) -> Result<Self, SeriesError> {
        for p in &points {
            if !(p.close > 0.0 && p.close.is_finite()) {
                return Err(SeriesError::NonPositivePrice {
                    date: p.date,
                    close: p.close,
                });
            }
        }
        for w in points.windows(2) {
            let (prev, next) = (w[0].date, w[1].date);
            if next == prev {
                return Err(SeriesError::DuplicateDate(next));
            }
            if next < prev {
                return Err(SeriesError::Unordered { prev, next });
            }
            if frequency != Frequency::Daily && frequency.period(prev) == frequency.period(next) {
                return Err(SeriesError::SpacingMismatch {
                    frequency,
                    prev,
                    next,
                });
            }
        }
        Ok(Self {
            asset_id: asset_id.into(),
            frequency,
            points,
        })
    }

    pub fn asset_id(&self) -> &str {
        &self.asset_id
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn points(&self) -> &[PricePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn closes(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.close).collect()
    }

    pub fn observations(&self) -> Vec<Observation> {
        self.points
            .iter()
            .map(|p| Observation {
                date: p.date,
                value: p.close,
            })
            .collect()
    }

    fn require(&self, expected: Frequency) -> Result<(), SeriesError> {
        if self.frequency == expected {
            Ok(())
        } else {
            Err(SeriesError::WrongFrequency {
                expected,
                actual: self.frequency,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub asset_id: String,
    pub frequency: Frequency,
    pub kind: ReturnKind,
    pub points: Vec<Observation>,
}

impl ReturnSeries {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Result of [`ingest_csv`]: the parsed series plus the number of rows
/// skipped because their close was empty or `null`.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub series: PriceSeries,
    pub dropped: usize,
}

/// Parses a daily Yahoo-style CSV file.
pub fn ingest_csv(path: impl AsRef<Path>, asset_id: &str) -> Result<Ingested, SeriesError> {
    let file = std::fs::File::open(path)?;
    read_price_csv(file, asset_id, Frequency::Daily)
}

/// Parses price CSV content from any reader, tagging it with `frequency`.
pub fn read_price_csv<R: Read>(
    reader: R,
    asset_id: &str,
    frequency: Frequency,
) -> Result<Ingested, SeriesError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &'static str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or(SeriesError::MissingColumn(name))
    };
    let date_col = find("Date")?;
    let close_col = find("Close")?;

    let mut points = Vec::new();
    let mut dropped = 0;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let unparsable = |reason: String| SeriesError::UnparsableRow { line, reason };
        let raw_date = record
            .get(date_col)
            .ok_or_else(|| unparsable("missing Date field".into()))?;
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .map_err(|e| unparsable(format!("bad date `{raw_date}`: {e}")))?;
        let raw_close = record.get(close_col).unwrap_or("");
        if raw_close.is_empty() || raw_close.eq_ignore_ascii_case("null") {
            dropped += 1;
            continue;
        }
        let close: f64 = raw_close
            .parse()
            .map_err(|e| unparsable(format!("bad close `{raw_close}`: {e}")))?;
        if !(close > 0.0 && close.is_finite()) {
            return Err(SeriesError::NonPositivePrice { date, close });
        }
        points.push(PricePoint { date, close });
    }

    points.sort_by_key(|p| p.date);
    let mut seen = HashSet::with_capacity(points.len());
    for p in &points {
        if !seen.insert(p.date) {
            return Err(SeriesError::DuplicateDate(p.date));
        }
    }
    let series = PriceSeries::new(asset_id, frequency, points)?;
    Ok(Ingested { series, dropped })
}

/// Writes a `date,close` CSV.
pub fn write_price_csv<W: Write>(series: &PriceSeries, writer: W) -> Result<(), SeriesError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "close"])?;
    for p in series.points() {
        w.write_record([p.date.to_string(), p.close.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a `date,value` CSV.
pub fn write_observation_csv<W: Write>(points: &[Observation], writer: W) -> Result<(), SeriesError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "value"])?;
    for p in points {
        w.write_record([p.date.to_string(), p.value.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Inserts every missing calendar day, carrying the previous close forward.
///
/// Only meant for assets that do not trade on weekends; a 7-day market
/// such as Bitcoin should not be filled.
pub fn fill_weekend(series: &PriceSeries) -> Result<PriceSeries, SeriesError> {
    series.require(Frequency::Daily)?;
    let (first, rest) = series.points.split_first().ok_or(SeriesError::EmptySeries)?;
    let mut filled = Vec::with_capacity(series.len());
    filled.push(*first);
    for p in rest {
        let last = *filled.last().expect("non-empty");
        let mut day = last.date;
        loop {
            day = day + Days::new(1);
            if day >= p.date {
                break;
            }
            filled.push(PricePoint {
                date: day,
                close: last.close,
            });
        }
        filled.push(*p);
    }
    Ok(PriceSeries {
        asset_id: series.asset_id.clone(),
        frequency: Frequency::Daily,
        points: filled,
    })
}

/// Log-returns `ln(close[i+1] / close[i])`, dated at the later observation.
pub fn log_returns(series: &PriceSeries, kind: ReturnKind) -> Result<ReturnSeries, SeriesError> {
    if series.len() < 2 {
        return Err(SeriesError::TooShort(series.len()));
    }
    let points = series
        .points
        .windows(2)
        .map(|w| {
            let r = (w[1].close / w[0].close).ln();
            Observation {
                date: w[1].date,
                value: match kind {
                    ReturnKind::Signed => r,
                    ReturnKind::Absolute => r.abs(),
                },
            }
        })
        .collect();
    Ok(ReturnSeries {
        asset_id: series.asset_id.clone(),
        frequency: series.frequency,
        kind,
        points,
    })
}

/// Keeps the last close of each ISO week or calendar month, dated on that
/// observation. Partial leading and trailing periods are kept.
pub fn resample(series: &PriceSeries, target: Frequency) -> Result<PriceSeries, SeriesError> {
    series.require(Frequency::Daily)?;
    if series.is_empty() {
        return Err(SeriesError::EmptySeries);
    }
    if target == Frequency::Daily {
        return Ok(series.clone());
    }
    let mut out: Vec<PricePoint> = Vec::new();
    let mut current = None;
    for p in &series.points {
        let key = target.period(p.date);
        if current == Some(key) {
            *out.last_mut().expect("period already opened") = *p;
        } else {
            out.push(*p);
            current = Some(key);
        }
    }
    Ok(PriceSeries {
        asset_id: series.asset_id.clone(),
        frequency: target,
        points: out,
    })
}
