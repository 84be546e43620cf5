//! Measurement-and-injection-feedback (MIF) machine.
//!
//! Each round trip every pulse is amplified, attenuated, and tapped; the tapped
//! light is homodyned along x and the pulses are displaced along x by
//! `m * eta * J c`, where `m` is the 1-based loop index and `c` the vector of
//! outcomes. After the last loop the signs of the x means are the spins.
//!
//! Every Gaussian operation here touches a single pulse (plus a private ancilla
//! that is measured right away) and the feedback is a pure displacement, so the
//! pulses never become correlated. The machine therefore keeps one single-mode
//! state per pulse; `tests::joint_state_reference_agrees` checks this against a
//! run on the full joint state.

use serde::{Deserialize, Serialize};

use super::{check_unit_interval, GainMode};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, QuadratureAxis, SqueezeVariant};
use crate::ising::{ising_energy, CouplingMatrix, GroundTruth, SpinConfig};
use crate::rng::{NormalSource, RandomStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MifConfig {
    pub n_loops: usize,
    pub squeeze_r: f64,
    pub loss_fraction: f64,
    pub tap_fraction: f64,
    pub eta: f64,
    /// Per-element bound on each loop's feedback increment.
    pub saturation_cap: Option<f64>,
    pub squeeze_variant: SqueezeVariant,
    pub gain_mode: GainMode,
    pub seed: u64,
}

impl Default for MifConfig {
    fn default() -> Self {
        Self {
            n_loops: 300,
            squeeze_r: 0.2,
            loss_fraction: 0.30,
            tap_fraction: 0.10,
            eta: 0.001,
            saturation_cap: None,
            squeeze_variant: SqueezeVariant::Canonical,
            gain_mode: GainMode::Squeeze,
            seed: 0,
        }
    }
}

impl MifConfig {
    /// Coherent-state machine: no amplification, doubled feedback.
    pub fn no_squeeze() -> Self {
        Self { gain_mode: GainMode::None, eta: 0.002, ..Self::default() }
    }

    pub fn with_saturation(mut self, cap: f64) -> Self {
        self.saturation_cap = Some(cap);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_loops == 0 {
            return Err(Error::invalid("n_loops must be at least 1"));
        }
        check_unit_interval("loss_fraction", self.loss_fraction)?;
        check_unit_interval("tap_fraction", self.tap_fraction)?;
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::invalid(format!("eta must be finite and >= 0, got {}", self.eta)));
        }
        if let Some(cap) = self.saturation_cap {
            if cap.is_nan() || cap <= 0.0 {
                return Err(Error::invalid(format!("saturation_cap must be positive, got {cap}")));
            }
        }
        self.gain_mode.validate(self.squeeze_r)
    }

    /// Feedback increment actually injected for a computed value `f`.
    pub fn saturate(&self, f: f64) -> f64 {
        match self.saturation_cap {
            Some(cap) => f.clamp(-cap, cap),
            None => f,
        }
    }
}

/// Result of one MIF run.
#[derive(Debug, Clone, PartialEq)]
pub struct MifTrialRecord {
    pub spins: SpinConfig,
    pub energy: f64,
    pub success: bool,
    pub final_disp_x: Vec<f64>,
}

/// Loop-by-loop MIF simulation.
#[derive(Debug, Clone)]
pub struct MifMachine<'a> {
    couplings: &'a CouplingMatrix,
    cfg: MifConfig,
    pulses: Vec<GaussianState>,
    outcomes: Vec<f64>,
    loop_index: usize,
}

impl<'a> MifMachine<'a> {
    pub fn new(couplings: &'a CouplingMatrix, cfg: &MifConfig) -> Result<Self> {
        cfg.validate()?;
        let n = couplings.n();
        if n == 0 {
            return Err(Error::invalid("no spins"));
        }
        Ok(Self {
            couplings,
            cfg: cfg.clone(),
            pulses: vec![GaussianState::vacuum(1)?; n],
            outcomes: vec![0.0; n],
            loop_index: 0,
        })
    }

    /// Runs one round trip and returns the feedback increments applied.
    pub fn step<S: NormalSource + ?Sized>(&mut self, src: &mut S) -> Result<Vec<f64>> {
        self.loop_index += 1;
        let cfg = &self.cfg;
        let keep = 1.0 - cfg.loss_fraction;
        let pass = 1.0 - cfg.tap_fraction;
        for (pulse, c) in self.pulses.iter_mut().zip(self.outcomes.iter_mut()) {
            cfg.gain_mode.apply(pulse, 0, cfg.squeeze_r, cfg.squeeze_variant)?;
            pulse.loss(0, keep)?;
            *c = pulse.tap_homodyne(0, pass, QuadratureAxis::X, src)?;
        }

        let drive = self.loop_index as f64 * cfg.eta;
        let feedback: Vec<f64> = self
            .couplings
            .apply(&self.outcomes)
            .into_iter()
            .map(|jc| cfg.saturate(drive * jc))
            .collect();
        for (i, (pulse, &f)) in self.pulses.iter_mut().zip(&feedback).enumerate() {
            if !f.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "feedback on pulse {i} diverged at loop {}",
                    self.loop_index
                )));
            }
            pulse.displace_mode(0, f, 0.0)?;
        }
        Ok(feedback)
    }

    pub fn loop_index(&self) -> usize {
        self.loop_index
    }

    pub fn pulses(&self) -> &[GaussianState] {
        &self.pulses
    }

    /// Homodyne outcomes of the most recent loop.
    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn disp_x(&self) -> Vec<f64> {
        self.pulses.iter().map(|p| p.disp()[0]).collect()
    }
}

/// Runs a full MIF trial drawing noise from `src`.
pub fn run_mif_trial_with<S: NormalSource + ?Sized>(
    j: &CouplingMatrix,
    cfg: &MifConfig,
    truth: &GroundTruth,
    src: &mut S,
) -> Result<MifTrialRecord> {
    let mut machine = MifMachine::new(j, cfg)?;
    for _ in 0..cfg.n_loops {
        machine.step(src)?;
    }
    let final_disp_x = machine.disp_x();
    let spins = SpinConfig::from_signs(&final_disp_x);
    let energy = ising_energy(j, &spins)?;
    Ok(MifTrialRecord { success: energy == truth.energy, spins, energy, final_disp_x })
}

/// Runs trial `trial_index` using the stream `(cfg.seed, trial_index)`.
pub fn run_mif_trial(
    j: &CouplingMatrix,
    cfg: &MifConfig,
    truth: &GroundTruth,
    trial_index: u64,
) -> Result<MifTrialRecord> {
    run_mif_trial_with(j, cfg, truth, &mut RandomStream::new(cfg.seed, trial_index))
}

/// Squeezing parameter at which the round-trip x gain `e^r sqrt(T)` reaches one,
/// with `T = (1 - loss)(1 - tap)`.
pub fn mif_threshold_r(loss_fraction: f64, tap_fraction: f64) -> Result<f64> {
    for (name, v) in [("loss_fraction", loss_fraction), ("tap_fraction", tap_fraction)] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::invalid(format!("{name} must lie in [0, 1), got {v}")));
        }
    }
    let transmission = (1.0 - loss_fraction) * (1.0 - tap_fraction);
    Ok(-0.5 * transmission.ln())
}
