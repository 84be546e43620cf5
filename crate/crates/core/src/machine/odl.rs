//! Optical-delay-line (ODL) machine.
//!
//! The evolution is deterministic: every round trip amplifies each pulse and then,
//! for each coupled pair `(i, k)` in row-major order, taps part of pulse `i` into a
//! vacuum ancilla, flips its phase by pi and injects it into pulse `k`. Randomness
//! only enters when the final state is sampled to emulate repeated experiments.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{check_unit_interval, GainMode};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, SqueezeVariant};
use crate::ising::{ising_energy, CouplingMatrix, GroundTruth, SpinConfig};
use crate::rng::RandomStream;

/// Which coupled pairs are visited each round trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairMode {
    /// Both `(i, k)` and `(k, i)`.
    #[default]
    Ordered,
    /// Only `(i, k)` with `i < k`.
    Unordered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdlConfig {
    pub n_loops: usize,
    pub squeeze_r: f64,
    /// Power fraction of the source pulse sent into the delay line.
    pub pickoff_fraction: f64,
    /// Power fraction of the delayed light injected into the receiving pulse;
    /// the receiver keeps `1 - inject_fraction` of its own power.
    pub inject_fraction: f64,
    pub gain_mode: GainMode,
    pub squeeze_variant: SqueezeVariant,
    pub pairs: PairMode,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for OdlConfig {
    fn default() -> Self {
        Self {
            n_loops: 100,
            squeeze_r: 0.2,
            pickoff_fraction: 0.10,
            inject_fraction: 0.10,
            gain_mode: GainMode::Squeeze,
            squeeze_variant: SqueezeVariant::Canonical,
            pairs: PairMode::Ordered,
            n_samples: 1000,
            seed: 0,
        }
    }
}

impl OdlConfig {
    /// Phase-insensitive amplification with `r = 0.6` (amplitude gain ~1.19).
    pub fn phase_insensitive() -> Self {
        Self { gain_mode: GainMode::PhaseInsensitive(0.6), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_loops == 0 {
            return Err(Error::invalid("n_loops must be at least 1"));
        }
        if self.n_samples == 0 {
            return Err(Error::invalid("n_samples must be at least 1"));
        }
        check_unit_interval("pickoff_fraction", self.pickoff_fraction)?;
        check_unit_interval("inject_fraction", self.inject_fraction)?;
        self.gain_mode.validate(self.squeeze_r)
    }
}

#[derive(Debug, Clone)]
pub struct OdlResult {
    pub final_state: GaussianState,
    pub samples: Vec<SpinConfig>,
    pub energies: Vec<f64>,
    pub success_count: usize,
}

impl OdlResult {
    pub fn success_rate(&self) -> f64 {
        self.success_count as f64 / self.samples.len() as f64
    }
}

fn check_couplings(j: &CouplingMatrix) -> Result<()> {
    for i in 0..j.n() {
        for k in 0..j.n() {
            let w = j.get(i, k);
            if w != 0.0 && w != -1.0 {
                return Err(Error::UnsupportedCoupling { i, k, value: w });
            }
        }
    }
    Ok(())
}

/// Deterministic round-trip evolution from vacuum; returns the `n`-mode final state.
pub fn evolve_odl(j: &CouplingMatrix, cfg: &OdlConfig) -> Result<GaussianState> {
    cfg.validate()?;
    check_couplings(j)?;
    let n = j.n();
    if n == 0 {
        return Err(Error::invalid("no spins"));
    }

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .filter(|&(i, k)| i != k && j.get(i, k) == -1.0)
        .filter(|&(i, k)| cfg.pairs == PairMode::Ordered || i < k)
        .collect();

    // One reusable ancilla slot after the pulses; resetting it is the same as
    // tracing out the old ancilla and appending a fresh vacuum.
    let mut state = GaussianState::vacuum(n + 1)?;
    let anc = n;
    let keep_source = 1.0 - cfg.pickoff_fraction;
    let keep_target = 1.0 - cfg.inject_fraction;
    for _ in 0..cfg.n_loops {
        for mode in 0..n {
            cfg.gain_mode.apply(&mut state, mode, cfg.squeeze_r, cfg.squeeze_variant)?;
        }
        for &(i, k) in &pairs {
            state.reset_mode_to_vacuum(anc)?;
            // ancilla <- +sqrt(pickoff) x_i
            state.beam_splitter(anc, i, keep_source)?;
            state.phase_shift(anc, PI)?;
            // x_k <- sqrt(1 - inject) x_k + sqrt(inject) x_anc
            state.beam_splitter(k, anc, keep_target)?;
        }
    }
    state.remove_mode(anc)?;
    Ok(state)
}

/// Evolves the machine and scores `cfg.n_samples` joint x-quadrature samples of
/// the final state. Sample `s` uses the stream `(cfg.seed, s)`.
pub fn run_odl(j: &CouplingMatrix, cfg: &OdlConfig, truth: &GroundTruth) -> Result<OdlResult> {
    let final_state = evolve_odl(j, cfg)?;
    let sampler = final_state.x_sampler()?;
    let mut samples = Vec::with_capacity(cfg.n_samples);
    let mut energies = Vec::with_capacity(cfg.n_samples);
    let mut success_count = 0;
    for s in 0..cfg.n_samples {
        let x = sampler.sample(&mut RandomStream::new(cfg.seed, s as u64));
        let spins = SpinConfig::from_signs(x.as_slice());
        let e = ising_energy(j, &spins)?;
        if e == truth.energy {
            success_count += 1;
        }
        samples.push(spins);
        energies.push(e);
    }
    Ok(OdlResult { final_state, samples, energies, success_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{brute_force_ground, mobius_ladder};

    #[test]
    fn uncoupled_pulses_always_succeed() {
        let j = CouplingMatrix::zeros(3);
        let t = brute_force_ground(&j).unwrap();
        let cfg = OdlConfig { n_samples: 200, ..OdlConfig::default() };
        let res = run_odl(&j, &cfg, &t).unwrap();
        assert_eq!(res.success_count, 200);
        let c0 = res.final_state.mode_cov(0).unwrap();
        for m in 1..3 {
            assert_eq!(res.final_state.mode_cov(m).unwrap(), c0);
        }
        assert_eq!(res.final_state.cov()[(0, 2)], 0.0);
    }

    #[test]
    fn antiferromagnetic_pair_anticorrelates() {
        let j = CouplingMatrix::from_edges(2, &[(0, 1, -1.0)]).unwrap();
        let state = evolve_odl(&j, &OdlConfig::default()).unwrap();
        assert!(state.cov()[(0, 2)] < 0.0);
    }

    #[test]
    fn evolution_is_deterministic() {
        let j = mobius_ladder(8).unwrap();
        let a = evolve_odl(&j, &OdlConfig::default()).unwrap();
        let b = evolve_odl(&j, &OdlConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reused_ancilla_matches_fresh_ancilla_per_pair() {
        let j = mobius_ladder(6).unwrap();
        let cfg = OdlConfig { n_loops: 5, ..OdlConfig::default() };
        let fast = evolve_odl(&j, &cfg).unwrap();

        let mut s = GaussianState::vacuum(6).unwrap();
        for _ in 0..cfg.n_loops {
            for m in 0..6 {
                s.squeeze(m, cfg.squeeze_r, SqueezeVariant::Canonical).unwrap();
            }
            for i in 0..6 {
                for k in 0..6 {
                    if j.get(i, k) == -1.0 {
                        let anc = s.add_vacuum_mode();
                        s.beam_splitter(anc, i, 0.9).unwrap();
                        s.phase_shift(anc, PI).unwrap();
                        s.beam_splitter(k, anc, 0.9).unwrap();
                        s.remove_mode(anc).unwrap();
                    }
                }
            }
        }
        assert!((fast.cov() - s.cov()).abs().max() < 1e-12);
    }

    #[test]
    fn rejects_positive_couplings() {
        let j = CouplingMatrix::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            evolve_odl(&j, &OdlConfig::default()),
            Err(Error::UnsupportedCoupling { .. })
        ));
    }

    #[test]
    fn unordered_pairs_visit_half_the_couplings() {
        let j = mobius_ladder(6).unwrap();
        let ordered = evolve_odl(&j, &OdlConfig { n_loops: 3, ..OdlConfig::default() }).unwrap();
        let unordered = evolve_odl(
            &j,
            &OdlConfig { n_loops: 3, pairs: PairMode::Unordered, ..OdlConfig::default() },
        )
        .unwrap();
        assert_ne!(ordered, unordered);
        assert!(unordered.is_physical(1e-9));
    }

    #[test]
    fn flipped_samples_score_the_same() {
        let j = mobius_ladder(8).unwrap();
        let t = brute_force_ground(&j).unwrap();
        let res = run_odl(&j, &OdlConfig { n_samples: 100, ..OdlConfig::default() }, &t).unwrap();
        for (s, e) in res.samples.iter().zip(&res.energies) {
            assert_eq!(ising_energy(&j, &s.flipped()).unwrap(), *e);
        }
    }
}
