//! Optical Ising machines built on [`GaussianState`](crate::gaussian::GaussianState).

pub mod mif;
pub mod odl;

pub use mif::{mif_threshold_r, run_mif_trial, run_mif_trial_with, MifConfig, MifMachine, MifTrialRecord};
pub use odl::{evolve_odl, run_odl, OdlConfig, OdlResult, PairMode};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SqueezeVariant};

/// Per-round-trip amplification applied to every pulse.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GainMode {
    /// Single-mode squeezing with the configured `squeeze_r`.
    #[default]
    Squeeze,
    None,
    /// Phase-insensitive amplifier with the given two-mode squeezing parameter.
    PhaseInsensitive(f64),
}

impl GainMode {
    fn validate(&self, squeeze_r: f64) -> Result<()> {
        match *self {
            GainMode::Squeeze if !squeeze_r.is_finite() => {
                Err(Error::invalid(format!("squeeze_r must be finite, got {squeeze_r}")))
            }
            GainMode::PhaseInsensitive(r) if !(r.is_finite() && r >= 0.0) => {
                Err(Error::invalid(format!("phase-insensitive gain parameter must be >= 0, got {r}")))
            }
            _ => Ok(()),
        }
    }

    fn apply(
        &self,
        state: &mut GaussianState,
        mode: usize,
        squeeze_r: f64,
        variant: SqueezeVariant,
    ) -> Result<()> {
        match *self {
            GainMode::Squeeze => state.squeeze(mode, squeeze_r, variant),
            GainMode::None => Ok(()),
            GainMode::PhaseInsensitive(r) => state.phase_insensitive_gain(mode, r),
        }
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    crate::gaussian::check_fraction(name, v)
}
