//! Quick invariant checks across every module, run by `gim selftest`.

use rand::{Rng, RngCore};

use crate::gaussian::{GaussianState, QuadratureAxis, SqueezeVariant};
use crate::harness::{wilson_interval, IntervalMethod};
use crate::ising::{brute_force_ground, mobius_ground_dp, mobius_ladder, random_cubic_graph};
use crate::machine::{evolve_odl, mif_threshold_r, run_mif_trial, MifConfig, OdlConfig};
use crate::rng::RandomStream;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Applies `len` random symplectic, lossy, amplifying or measurement operations
/// to a random-size vacuum. Every operation maps physical states to physical states.
pub fn random_operation_sequence(rng: &mut RandomStream, len: usize) -> Result<GaussianState> {
    let n = rng.random_range(1..=4);
    let mut s = GaussianState::vacuum(n)?;
    for _ in 0..len {
        let m = rng.random_range(0..n);
        match rng.random_range(0..8) {
            0 => s.squeeze(m, rng.random_range(-0.6..0.6), SqueezeVariant::Canonical)?,
            1 => s.loss(m, rng.random_range(0.0..=1.0))?,
            2 if n > 1 => {
                let other = (m + rng.random_range(1..n)) % n;
                s.beam_splitter(m, other, rng.random_range(0.0..=1.0))?
            }
            3 => s.phase_shift(m, rng.random_range(-3.2..3.2))?,
            4 => s.displace_mode(m, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))?,
            5 => s.phase_insensitive_gain(m, rng.random_range(0.0..0.6))?,
            6 => {
                let axis = QuadratureAxis::new(rng.random_range(0.0..std::f64::consts::PI));
                s.tap_homodyne(m, rng.random_range(0.0..=1.0), axis, rng)?;
            }
            7 if n > 1 => {
                let axis = QuadratureAxis::new(rng.random_range(0.0..std::f64::consts::PI));
                s = s.homodyne(m, axis, rng)?.conditioned;
                s.add_vacuum_mode();
            }
            _ => s.squeeze(m, rng.random_range(-0.6..0.6), SqueezeVariant::Canonical)?,
        }
    }
    Ok(s)
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn physicality() -> Result<(bool, String)> {
    let mut rng = RandomStream::new(0x5e1f, 0);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let s = random_operation_sequence(&mut rng, 12)?;
        worst = s.symplectic_eigenvalues()?.into_iter().fold(worst, f64::min);
    }
    Ok((worst >= 0.5 - 1e-9, format!("min symplectic eigenvalue {worst:.12}")))
}

fn loss_matches_beam_splitter() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for t in [0.0, 0.25, 0.7, 1.0] {
        let mut a = GaussianState::vacuum(1)?;
        a.squeeze(0, 0.7, SqueezeVariant::Canonical)?;
        a.displace_mode(0, 1.0, -0.5)?;
        let mut b = a.clone();
        a.loss(0, t)?;
        let env = b.add_vacuum_mode();
        b.beam_splitter(0, env, t)?;
        b.remove_mode(env)?;
        worst = worst.max((a.cov() - b.cov()).amax()).max((a.disp() - b.disp()).amax());
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.3e}")))
}

fn homodyne_outcome_independence() -> Result<(bool, String)> {
    let mut s = GaussianState::vacuum(2)?;
    s.squeeze(0, 0.9, SqueezeVariant::Canonical)?;
    s.beam_splitter(0, 1, 0.5)?;
    let a = s.condition_on_homodyne(0, QuadratureAxis::X, -3.0)?;
    let b = s.condition_on_homodyne(0, QuadratureAxis::X, 2.5)?;
    Ok((a.cov() == b.cov(), "conditioned covariance identical for two outcomes".into()))
}

fn oracles_agree() -> Result<(bool, String)> {
    for n in (4..=16).step_by(2) {
        let dp = mobius_ground_dp(n)?;
        let bf = brute_force_ground(&mobius_ladder(n)?)?;
        if dp.energy != bf.energy {
            return Ok((false, format!("n = {n}: dp {} vs brute force {}", dp.energy, bf.energy)));
        }
    }
    let e4 = brute_force_ground(&mobius_ladder(4)?)?.energy;
    Ok((e4 == -2.0, format!("mobius n = 4 ground energy {e4}")))
}

fn cubic_graphs_are_cubic() -> Result<(bool, String)> {
    let mut rng = RandomStream::new(11, 0);
    for _ in 0..50 {
        let j = random_cubic_graph(16, &mut rng)?;
        if (0..16).any(|i| j.degree(i) != 3) {
            return Ok((false, "vertex with degree other than 3".into()));
        }
    }
    Ok((true, "50 graphs on 16 vertices".into()))
}

fn threshold() -> Result<(bool, String)> {
    let r = mif_threshold_r(0.30, 0.10)?;
    let ratio = (0.2 / r).powi(2);
    Ok(((r + 0.5 * 0.63f64.ln()).abs() < 1e-12, format!("r_th {r:.12}, (0.2 / r_th)^2 {ratio:.4}")))
}

fn intervals_bracket() -> Result<(bool, String)> {
    for n in [1u64, 10, 300] {
        for k in 0..=n {
            for method in [IntervalMethod::Wilson, IntervalMethod::ClopperPearson] {
                let (lo, hi) = method.interval(k, n, 0.95)?;
                let p = k as f64 / n as f64;
                if !(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0) {
                    return Ok((false, format!("{method:?} {k}/{n}: ({lo}, {hi})")));
                }
            }
        }
    }
    let (lo, hi) = wilson_interval(300, 300, 0.95)?;
    Ok(((lo - 0.9873).abs() < 1e-4 && hi == 1.0, format!("wilson(300, 300) = ({lo:.4}, {hi})")))
}

fn mif_small_problem() -> Result<(bool, String)> {
    let j = mobius_ladder(8)?;
    let truth = brute_force_ground(&j)?;
    let cfg = MifConfig { seed: 1, ..MifConfig::default() };
    let wins = (0..20).map(|t| run_mif_trial(&j, &cfg, &truth, t)).filter(|r| matches!(r, Ok(r) if r.success)).count();
    Ok((wins >= 15, format!("{wins}/20 trials reach the ground state")))
}

fn odl_stays_physical() -> Result<(bool, String)> {
    let j = mobius_ladder(16)?;
    let state = evolve_odl(&j, &OdlConfig { n_loops: 40, ..OdlConfig::default() })?;
    let nu = state.symplectic_eigenvalues()?[0];
    Ok((nu >= 0.5 - 1e-9, format!("min symplectic eigenvalue after 40 loops {nu:.9}")))
}

fn streams_are_reproducible() -> Result<(bool, String)> {
    let mut a = RandomStream::new(5, 9);
    let mut b = RandomStream::new(5, 9);
    let same = (0..100).all(|_| a.next_u64() == b.next_u64());
    Ok((same, "identical (seed, stream) pairs give identical draws".into()))
}

/// Runs every check; a failing check never stops the others.
pub fn run_all() -> Vec<Check> {
    vec![
        check("gaussian: physicality after random operation sequences", physicality),
        check("gaussian: loss equals beam splitter with vacuum", loss_matches_beam_splitter),
        check("gaussian: conditioned covariance ignores the outcome", homodyne_outcome_independence),
        check("rng: streams are reproducible", streams_are_reproducible),
        check("ising: transfer-matrix and exhaustive oracles agree", oracles_agree),
        check("ising: random cubic graphs are 3-regular", cubic_graphs_are_cubic),
        check("mif: threshold squeezing", threshold),
        check("mif: small ladder is solved", mif_small_problem),
        check("odl: evolved state is physical", odl_stays_physical),
        check("harness: intervals bracket the estimate", intervals_bracket),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
