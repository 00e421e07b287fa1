#![allow(dead_code)]

use chrono::{Days, NaiveDate};
use tailscope::series::{Frequency, PricePoint, PriceSeries};
use tailscope::synth::UniformStream;

/// Direct O(N²·m) ApEn: every template against every template, no pruning.
pub fn apen_oracle(u: &[f64], m: usize, r: f64) -> f64 {
    fn phi(u: &[f64], m: usize, r: f64) -> f64 {
        let n = u.len() - m + 1;
        let mut total = 0.0;
        for i in 0..n {
            let mut count = 0usize;
            for j in 0..n {
                let mut dist: f64 = 0.0;
                for k in 0..m {
                    dist = dist.max((u[i + k] - u[j + k]).abs());
                }
                if dist <= r {
                    count += 1;
                }
            }
            total += (count as f64 / n as f64).ln();
        }
        total / n as f64
    }
    phi(u, m, r) - phi(u, m + 1, r)
}

pub fn sample_sd(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

pub fn uniforms(seed: u64, n: usize) -> Vec<f64> {
    UniformStream::new(seed).take(n).collect()
}

/// Random daily series with occasional gaps of up to 4 days.
pub fn random_daily(seed: u64, len: usize) -> PriceSeries {
    let mut u = UniformStream::new(seed);
    let mut date = NaiveDate::from_ymd_opt(2014, 9, 17).unwrap();
    let mut close = 100.0 + 900.0 * u.next_uniform();
    let mut points = Vec::with_capacity(len);
    for _ in 0..len {
        points.push(PricePoint { date, close });
        let gap = if u.next_uniform() < 0.2 { 1 + (u.next_uniform() * 4.0) as u64 } else { 1 };
        date = date + Days::new(gap);
        close *= (0.05 * (u.next_uniform() - 0.5)).exp();
    }
    PriceSeries::new(format!("rand{seed}"), Frequency::Daily, points).unwrap()
}
