use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Binomial confidence interval construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalMethod {
    #[default]
    Wilson,
    ClopperPearson,
}

impl IntervalMethod {
    pub fn interval(self, successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
        match self {
            IntervalMethod::Wilson => wilson_interval(successes, trials, confidence),
            IntervalMethod::ClopperPearson => clopper_pearson_interval(successes, trials, confidence),
        }
    }
}

fn check_counts(successes: u64, trials: u64, confidence: f64) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("confidence interval needs at least one trial"));
    }
    if successes > trials {
        return Err(Error::invalid(format!("{successes} successes out of {trials} trials")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::invalid(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    Ok(())
}

/// Two-sided standard-normal quantile for `confidence` (1.959964 at 0.95).
pub fn normal_quantile(confidence: f64) -> f64 {
    let std = Normal::new(0.0, 1.0).expect("standard normal");
    std.inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    check_counts(successes, trials, confidence)?;
    let z = normal_quantile(confidence);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let radius = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 { 0.0 } else { ((center - radius) / denom).clamp(0.0, p) };
    let high = if successes == trials { 1.0 } else { ((center + radius) / denom).clamp(p, 1.0) };
    Ok((low, high))
}

/// Exact (Clopper–Pearson) interval from beta quantiles.
pub fn clopper_pearson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    check_counts(successes, trials, confidence)?;
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let beta = |a: f64, b: f64| {
        Beta::new(a, b).map_err(|e| Error::NumericalFailure(format!("beta({a}, {b}): {e}")))
    };
    let low = if successes == 0 { 0.0 } else { beta(k, n - k + 1.0)?.inverse_cdf(alpha / 2.0) };
    let high = if successes == trials { 1.0 } else { beta(k + 1.0, n - k)?.inverse_cdf(1.0 - alpha / 2.0) };
    let p = k / n;
    Ok((low.clamp(0.0, p), high.clamp(p, 1.0)))
}

/// Success statistics for one batch of trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessSummary {
    pub label: String,
    pub n_spins: usize,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SuccessSummary {
    pub const CONFIDENCE: f64 = 0.95;

    pub fn new(
        label: impl Into<String>,
        n_spins: usize,
        trials: u64,
        successes: u64,
        method: IntervalMethod,
    ) -> Result<Self> {
        let (ci_low, ci_high) = method.interval(successes, trials, Self::CONFIDENCE)?;
        Ok(Self {
            label: label.into(),
            n_spins,
            trials,
            successes,
            p_hat: successes as f64 / trials as f64,
            ci_low,
            ci_high,
        })
    }

    pub fn overlaps(&self, other: &SuccessSummary) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}
