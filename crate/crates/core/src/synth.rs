//! Seeded sample generators with known tail behaviour.
//!
//! # Random stream
//!
//! All families draw from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`. Each uniform is built from one
//! `next_u64()` call as `(x >> 11) · 2⁻⁵³`, which lies in `[0, 1)`.
//!
//! * exponential(λ): `−ln(1 − u) / λ`
//! * gpd(ξ, β): `(β/ξ)((1 − u)^(−ξ) − 1)`, and `β · (−ln(1 − u))` when `ξ = 0`
//! * pareto(α, x_min): `x_min · (1 − u)^(−1/α)`
//! * gaussian(μ, σ) and lognormal(μ, σ): Box–Muller on consecutive uniform
//!   pairs `(u₁, u₂)`, producing `ρ cos θ` then `ρ sin θ` with
//!   `ρ = √(−2 ln(1 − u₁))`, `θ = 2π u₂`. An odd `n` discards the final sine.
//!   Lognormal draws are `exp(μ + σ z)`.
//!
//! The one-uniform-per-draw families consume the same stream, so
//! `gpd(0, β)` and `exponential(1/β)` with equal seeds agree.

use std::f64::consts::TAU;
use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid parameter: {0}")]
pub struct InvalidParameter(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    Gaussian { mu: f64, sigma: f64 },
    Exponential { lambda: f64 },
    Gpd { xi: f64, beta: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Pareto { alpha: f64, x_min: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian { .. } => "gaussian",
            Family::Exponential { .. } => "exponential",
            Family::Gpd { .. } => "gpd",
            Family::Lognormal { .. } => "lognormal",
            Family::Pareto { .. } => "pareto",
        }
    }

    pub fn validate(&self) -> Result<(), InvalidParameter> {
        fn positive(name: &str, v: f64) -> Result<(), InvalidParameter> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(InvalidParameter(format!("{name} must be positive and finite, got {v}")))
            }
        }
        fn finite(name: &str, v: f64) -> Result<(), InvalidParameter> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(InvalidParameter(format!("{name} must be finite, got {v}")))
            }
        }
        match *self {
            Family::Gaussian { mu, sigma } | Family::Lognormal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)
            }
            Family::Exponential { lambda } => positive("lambda", lambda),
            Family::Gpd { xi, beta } => {
                finite("xi", xi)?;
                positive("beta", beta)
            }
            Family::Pareto { alpha, x_min } => {
                positive("alpha", alpha)?;
                positive("x_min", x_min)
            }
        }
    }

    /// Analytic CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Family::Gaussian { mu, sigma } => normal_cdf((x - mu) / sigma),
            Family::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    normal_cdf((x.ln() - mu) / sigma)
                }
            }
            Family::Exponential { lambda } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - (-lambda * x).exp()
                }
            }
            Family::Gpd { xi, beta } => {
                if x <= 0.0 {
                    0.0
                } else if xi == 0.0 {
                    1.0 - (-x / beta).exp()
                } else {
                    let base = 1.0 + xi * x / beta;
                    if base <= 0.0 {
                        1.0
                    } else {
                        1.0 - base.powf(-1.0 / xi)
                    }
                }
            }
            Family::Pareto { alpha, x_min } => {
                if x <= x_min {
                    0.0
                } else {
                    1.0 - (x_min / x).powf(alpha)
                }
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Gaussian { mu, sigma } => write!(f, "gaussian(mu={mu}, sigma={sigma})"),
            Family::Exponential { lambda } => write!(f, "exponential(lambda={lambda})"),
            Family::Gpd { xi, beta } => write!(f, "gpd(xi={xi}, beta={beta})"),
            Family::Lognormal { mu, sigma } => write!(f, "lognormal(mu={mu}, sigma={sigma})"),
            Family::Pareto { alpha, x_min } => write!(f, "pareto(alpha={alpha}, x_min={x_min})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
    pub n: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64, n: usize) -> Self {
        Self { family, seed, n }
    }
}

/// Uniform `[0, 1)` stream over ChaCha20.
pub struct UniformStream(ChaCha20Rng);

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed))
    }

    pub fn next_uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl Iterator for UniformStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_uniform())
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Vec<f64>, InvalidParameter> {
    spec.family.validate()?;
    let mut uniforms = UniformStream::new(spec.seed);
    let n = spec.n;
    let out = match spec.family {
        Family::Exponential { lambda } => uniforms.take(n).map(|u| -(1.0 - u).ln() / lambda).collect(),
        Family::Gpd { xi, beta } => uniforms.take(n).map(|u| gpd_quantile(u, xi, beta)).collect(),
        Family::Pareto { alpha, x_min } => uniforms.take(n).map(|u| x_min * (1.0 - u).powf(-1.0 / alpha)).collect(),
        Family::Gaussian { mu, sigma } => standard_normals(&mut uniforms, n)
            .into_iter()
            .map(|z| mu + sigma * z)
            .collect(),
        Family::Lognormal { mu, sigma } => standard_normals(&mut uniforms, n)
            .into_iter()
            .map(|z| (mu + sigma * z).exp())
            .collect(),
    };
    Ok(out)
}

fn gpd_quantile(u: f64, xi: f64, beta: f64) -> f64 {
    if xi == 0.0 {
        beta * -(1.0 - u).ln()
    } else {
        beta / xi * ((1.0 - u).powf(-xi) - 1.0)
    }
}

fn standard_normals(uniforms: &mut UniformStream, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    while out.len() < n {
        let radius = (-2.0 * (1.0 - uniforms.next_uniform()).ln()).sqrt();
        let angle = TAU * uniforms.next_uniform();
        out.push(radius * angle.cos());
        out.push(radius * angle.sin());
    }
    out.truncate(n);
    out
}

/// Standard normal CDF via `erfc`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

// Complementary error function, Numerical Recipes `erfcc` (|error| < 1.2e-7).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.265_512_23
        + t * (1.000_023_68
            + t * (0.374_091_96
                + t * (0.096_784_18
                    + t * (-0.186_288_06
                        + t * (0.278_868_07
                            + t * (-1.135_203_98 + t * (1.488_515_87 + t * (-0.822_152_23 + t * 0.170_872_77))))))));
    let r = t * poly.exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}
