use serde::Serialize;
use tailscope::apen::{self, ApenParams, RMode};
use tailscope::evt::{self, MaxSumConfig, MefConfig};
use tailscope::series::Observation;
use tailscope::stats::{self, StatsSummary};

use crate::config::{AnalysisConfig, Format, Target};
use crate::input::{Frame, TargetData};
use crate::RunError;

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, RunError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn render_sample(values: &[f64]) -> Vec<u8> {
    let mut out = String::from("value\n");
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out.into_bytes()
}

#[derive(Serialize)]
struct SeriesRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    date: Option<String>,
    value: f64,
}

pub fn render_series(data: &TargetData, config: &AnalysisConfig) -> Result<Vec<u8>, RunError> {
    let Some(dates) = &data.dates else {
        return match config.format {
            Format::Csv => Ok(render_sample(&data.values)),
            Format::Json => json(&data.values),
        };
    };
    match config.format {
        Format::Csv => {
            let column = if config.target == Target::Prices { "close" } else { "value" };
            let mut out = format!("date,{column}\n");
            for (d, v) in dates.iter().zip(&data.values) {
                out.push_str(&format!("{d},{v}\n"));
            }
            Ok(out.into_bytes())
        }
        Format::Json => {
            let rows: Vec<SeriesRow> = dates
                .iter()
                .zip(&data.values)
                .map(|(d, &value)| SeriesRow {
                    date: Some(d.to_string()),
                    value,
                })
                .collect();
            json(&rows)
        }
    }
}

const STATS_HEADER: &str = "n,mean,std_dev,coeff_variation,excess_kurtosis";

fn stats_line(s: &StatsSummary) -> String {
    format!(
        "{},{},{},{},{}",
        s.n,
        s.mean,
        s.std_dev,
        opt(s.coeff_variation),
        opt(s.excess_kurtosis)
    )
}

pub fn render_stats(data: &TargetData, config: &AnalysisConfig) -> Result<Vec<u8>, RunError> {
    let s = stats::summarize(&data.values)?;
    match config.format {
        Format::Csv => Ok(format!("{STATS_HEADER}\n{}\n", stats_line(&s)).into_bytes()),
        Format::Json => json(&s),
    }
}

#[derive(Serialize)]
struct ApenRecord {
    m: usize,
    r_mode: RMode,
    r_value: f64,
    r: f64,
    n: usize,
    apen: f64,
}

pub fn render_apen(data: &TargetData, config: &AnalysisConfig) -> Result<Vec<u8>, RunError> {
    let params: ApenParams = config.apen;
    let value = apen::apen(&data.values, &params)?;
    let rec = ApenRecord {
        m: params.m,
        r_mode: params.r_mode,
        r_value: params.r_value,
        r: params.resolve_r(&data.values)?,
        n: data.values.len(),
        apen: value,
    };
    match config.format {
        Format::Csv => Ok(format!(
            "m,r_mode,r_value,r,n,apen\n{},{},{},{},{},{}\n",
            rec.m, rec.r_mode, rec.r_value, rec.r, rec.n, rec.apen
        )
        .into_bytes()),
        Format::Json => json(&rec),
    }
}

pub fn render_mef(data: &TargetData, config: &AnalysisConfig) -> Result<Vec<u8>, RunError> {
    let curve = evt::mean_excess_with(
        &data.values,
        &MefConfig {
            trim_fraction: config.trim_fraction,
            ..MefConfig::default()
        },
    )?;
    match config.format {
        Format::Csv => {
            let mut buf = Vec::new();
            evt::write_mef_csv(&curve, &mut buf)?;
            Ok(buf)
        }
        Format::Json => json(&curve),
    }
}

pub fn render_maxsum(data: &TargetData, config: &AnalysisConfig) -> Result<Vec<u8>, RunError> {
    let cfg = MaxSumConfig::default();
    let traces = match config.p {
        Some(p) => vec![evt::max_to_sum_with(&data.values, p, &cfg)?],
        None => evt::max_to_sum_all(&data.values, &cfg)?,
    };
    match config.format {
        Format::Csv => {
            let mut buf = Vec::new();
            evt::write_maxsum_csv(&traces, &mut buf)?;
            Ok(buf)
        }
        Format::Json => json(&traces),
    }
}

pub fn render_rolling(data: &TargetData, window: usize, config: &AnalysisConfig) -> Result<Vec<u8>, RunError> {
    let rolled = match &data.dates {
        Some(dates) => {
            let obs: Vec<Observation> = dates
                .iter()
                .zip(&data.values)
                .map(|(&date, &value)| Observation { date, value })
                .collect();
            stats::rolling(&obs, window, config.statistic)?
        }
        None => stats::rolling_values(&data.values, window, config.statistic)?,
    };
    match config.format {
        Format::Csv => {
            let mut out = String::from("end,date,value\n");
            for p in &rolled.points {
                let date = p.date.map(|d| d.to_string()).unwrap_or_default();
                out.push_str(&format!("{},{},{}\n", p.end, date, opt(p.value)));
            }
            Ok(out.into_bytes())
        }
        Format::Json => json(&rolled),
    }
}

/// One line of the descriptive-statistics report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub asset: String,
    pub frequency: String,
    pub series: &'static str,
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub coeff_variation: Option<f64>,
    pub apen: Option<f64>,
    pub excess_kurtosis: Option<f64>,
}

pub fn report_rows(frame: &Frame, config: &AnalysisConfig) -> Result<Vec<ReportRow>, RunError> {
    [Target::Prices, Target::Returns]
        .into_iter()
        .map(|target| {
            let data = frame.target(target)?;
            let s = stats::summarize(&data.values)?;
            let apen = match apen::apen(&data.values, &config.apen) {
                Ok(v) => Some(v),
                Err(e) => {
                    eprintln!(
                        "warning: {} {} {}: apen undefined: {e}",
                        frame.asset_id, frame.label, target
                    );
                    None
                }
            };
            Ok(ReportRow {
                asset: frame.asset_id.clone(),
                frequency: frame.label.clone(),
                series: target.as_str(),
                n: s.n,
                mean: s.mean,
                std_dev: s.std_dev,
                coeff_variation: s.coeff_variation,
                apen,
                excess_kurtosis: s.excess_kurtosis,
            })
        })
        .collect()
}

pub fn render_report(rows: &[ReportRow], format: Format) -> Result<Vec<u8>, RunError> {
    match format {
        Format::Csv => {
            let mut out = String::from("asset,frequency,series,n,mean,std_dev,coeff_variation,apen,excess_kurtosis\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.asset,
                    r.frequency,
                    r.series,
                    r.n,
                    r.mean,
                    r.std_dev,
                    opt(r.coeff_variation),
                    opt(r.apen),
                    opt(r.excess_kurtosis)
                ));
            }
            Ok(out.into_bytes())
        }
        Format::Json => json(rows),
    }
}
