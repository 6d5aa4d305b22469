//! Closed-form thresholds and size bounds for threshold dynamics on
//! expanders, in terms of n, α or r, the degrees and σ.
//!
//! Nothing here is clamped. A bound whose hypothesis fails (a logarithm base
//! ≤ 1, a threshold outside `[0, n]`, σ ≥ γ) is still reported, with its
//! `*_meaningful` flag cleared.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rule::{Alpha, ThresholdRule};
use crate::spectral::SpectralProfile;

/// Multiplier applied to `log_base n` when a round bound is used as a hard cap.
pub const ROUND_CAP_FACTOR: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaBounds {
    pub n: usize,
    pub alpha: Alpha,
    pub sigma: f64,
    pub gamma: f64,
    /// At most this many initial blue nodes ⇒ all red.
    pub b_low: f64,
    /// At least this many initial blue nodes ⇒ all blue.
    pub b_high: f64,
    /// ⌊b_low⌋: the largest usable red-guarantee seed size.
    pub b_low_floor: i64,
    /// ⌈b_high⌉: the smallest usable blue-guarantee seed size.
    pub b_high_ceil: i64,
    pub red_round_base: f64,
    pub blue_round_base: f64,
    /// `log_{red_round_base} n` when the base exceeds 1.
    pub red_round_log: Option<f64>,
    pub blue_round_log: Option<f64>,
    pub red_meaningful: bool,
    pub blue_meaningful: bool,
}

impl AlphaBounds {
    /// `ROUND_CAP_FACTOR · log_base n` for the all-red statement.
    pub fn red_round_cap(&self) -> Option<f64> {
        self.red_round_log.map(|l| ROUND_CAP_FACTOR * l)
    }

    pub fn blue_round_cap(&self) -> Option<f64> {
        self.blue_round_log.map(|l| ROUND_CAP_FACTOR * l)
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma must be finite and ≥ 0, got {sigma}"
        )));
    }
    Ok(())
}

fn log_base(base: f64, n: usize) -> Option<f64> {
    (base > 1.0).then(|| (n as f64).ln() / base.ln())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    n: usize,
    alpha: Alpha,
    sigma: f64,
    gamma: f64,
    b_low: f64,
    b_high: f64,
    red_round_base: f64,
    blue_round_base: f64,
) -> AlphaBounds {
    let red_round_log = log_base(red_round_base, n);
    let blue_round_log = log_base(blue_round_base, n);
    AlphaBounds {
        n,
        alpha,
        sigma,
        gamma,
        b_low,
        b_high,
        b_low_floor: b_low.floor() as i64,
        b_high_ceil: b_high.ceil() as i64,
        red_round_base,
        blue_round_base,
        red_round_log,
        blue_round_log,
        red_meaningful: red_round_log.is_some() && b_low >= 0.0,
        blue_meaningful: blue_round_log.is_some() && b_high <= n as f64,
    }
}

/// Regular-graph thresholds: `αn ∓ √(2/α)σn`, `αn + √(2/(1−α))σn`, with round
/// bases `α²/(4σ²)` and `(1−α)²/(4σ²)`.
pub fn alpha_bounds(n: usize, alpha: Alpha, sigma: f64) -> Result<AlphaBounds> {
    check_sigma(sigma)?;
    let a = alpha.value();
    let nf = n as f64;
    let b_low = a * nf - (2.0 / a).sqrt() * sigma * nf;
    let b_high = a * nf + (2.0 / (1.0 - a)).sqrt() * sigma * nf;
    let s2 = 4.0 * sigma * sigma;
    Ok(finish(
        n,
        alpha,
        sigma,
        1.0,
        b_low,
        b_high,
        a * a / s2,
        (1.0 - a) * (1.0 - a) / s2,
    ))
}

/// Thresholds for graphs with degree ratio γ = δ/Δ:
///
/// ```text
/// b̲ = γ³·αn / (αγ³ + 1 − α)  −  √(2/α)·σn / (αγ³ + 1 − α)
/// b̄ = αn / ((1−α)γ³ + α)    +  √(2/(1−α))·σn / ((1−α)γ³ + α)
/// ```
///
/// with round bases `α²γ²/(4σ²)` and `(1−α)²γ²/(4σ²)`. At γ = 1 both
/// denominators are exactly 1 and the regular thresholds come back bit for bit.
pub fn irregular_alpha_bounds(n: usize, alpha: Alpha, sigma: f64, gamma: f64) -> Result<AlphaBounds> {
    check_sigma(sigma)?;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1], got {gamma}"
        )));
    }
    let a = alpha.value();
    let nf = n as f64;
    let g3 = gamma * gamma * gamma;
    // αγ³ + (1−α) and (1−α)γ³ + α, written so that γ = 1 yields exactly 1.
    let low_den = 1.0 - a * (1.0 - g3);
    let high_den = 1.0 - (1.0 - a) * (1.0 - g3);
    let b_low = g3 * a * nf / low_den - (2.0 / a).sqrt() * sigma * nf / low_den;
    let b_high = a * nf / high_den + (2.0 / (1.0 - a)).sqrt() * sigma * nf / high_den;
    let s2 = 4.0 * sigma * sigma;
    let g2 = gamma * gamma;
    Ok(finish(
        n,
        alpha,
        sigma,
        gamma,
        b_low,
        b_high,
        a * a * g2 / s2,
        (1.0 - a) * (1.0 - a) * g2 / s2,
    ))
}

/// β = r / ((1 − σ)·d).
pub fn beta(r: usize, d: usize, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if d == 0 || r == 0 {
        return Err(Error::InvalidParameter("r and d must be at least 1".into()));
    }
    if sigma >= 1.0 {
        return Err(Error::BoundUndefined(format!("beta needs sigma < 1, got {sigma}")));
    }
    Ok(r as f64 / ((1.0 - sigma) * d as f64))
}

/// β′ = r / ((1 − σ/γ)·δ) with γ = δ/Δ.
pub fn beta_prime(r: usize, min_degree: usize, max_degree: usize, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if min_degree == 0 || r == 0 || max_degree < min_degree {
        return Err(Error::InvalidParameter(
            "need r ≥ 1 and 1 ≤ min degree ≤ max degree".into(),
        ));
    }
    let gamma = min_degree as f64 / max_degree as f64;
    if sigma >= gamma {
        return Err(Error::BoundUndefined(format!(
            "beta' needs sigma < gamma, got sigma={sigma}, gamma={gamma}"
        )));
    }
    Ok(r as f64 / ((1.0 - sigma / gamma) * min_degree as f64))
}

/// 2βn + 1/β.
pub fn target_size_bound(beta: f64, n: usize) -> f64 {
    2.0 * beta * n as f64 + 1.0 / beta
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RBounds {
    pub r: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub sigma: f64,
    pub gamma: f64,
    /// β′; equals β on regular graphs. `None` when σ ≥ γ.
    pub beta: Option<f64>,
    pub target_size_bound: Option<f64>,
    /// β ≤ 1/2, the regime in which the stable-set construction applies.
    pub constructive: bool,
}

pub fn r_bounds(n: usize, r: usize, min_degree: usize, max_degree: usize, sigma: f64) -> Result<RBounds> {
    let beta = match beta_prime(r, min_degree, max_degree, sigma) {
        Ok(b) => Some(b),
        Err(Error::BoundUndefined(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(RBounds {
        r,
        min_degree,
        max_degree,
        sigma,
        gamma: min_degree as f64 / max_degree as f64,
        beta,
        target_size_bound: beta.map(|b| target_size_bound(b, n)),
        constructive: beta.is_some_and(|b| b <= 0.5),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub rule: ThresholdRule,
    pub sigma: f64,
    pub gamma: f64,
    pub regular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<RBounds>,
}

/// Every bound that applies to `g` under `rule`, using the given spectrum.
pub fn bounds_for_graph(g: &Graph, rule: ThresholdRule, profile: &SpectralProfile) -> Result<BoundsReport> {
    let regular = g.regular_degree().is_some();
    let (alpha, r) = match rule {
        ThresholdRule::AlphaThreshold { alpha } => {
            let b = if regular {
                alpha_bounds(g.n(), alpha, profile.sigma)?
            } else {
                irregular_alpha_bounds(g.n(), alpha, profile.sigma, profile.gamma)?
            };
            (Some(b), None)
        }
        ThresholdRule::RThreshold { r } => (
            None,
            Some(r_bounds(g.n(), r, g.min_degree(), g.max_degree(), profile.sigma)?),
        ),
    };
    Ok(BoundsReport {
        n: g.n(),
        m: g.m(),
        rule,
        sigma: profile.sigma,
        gamma: profile.gamma,
        regular,
        alpha,
        r,
    })
}
