//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use gaussian_ising::gaussian::{GaussianState, QuadratureAxis, SqueezeVariant};
use gaussian_ising::harness::{
    CubicStudy, ExperimentSpec, GraphSpec, IntervalMethod, MachineSpec, Runner, SuccessSummary,
};
use gaussian_ising::ising::{brute_force_ground, mobius_ground_dp, mobius_ladder};
use gaussian_ising::machine::{mif_threshold_r, MifConfig, OdlConfig};
use gaussian_ising::rng::RandomStream;
use gaussian_ising::selftest::random_operation_sequence;

const SEED: u64 = 1;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn runner() -> Runner {
    Runner::new(0, IntervalMethod::Wilson).expect("worker pool")
}

fn mif(cfg: MifConfig, n: usize, trials: u64) -> SuccessSummary {
    let spec = ExperimentSpec::new(MachineSpec::Mif(cfg), GraphSpec::Mobius(n), trials);
    runner().run(&spec).expect("mif experiment").summary
}

fn odl(cfg: OdlConfig, n: usize, samples: u64) -> SuccessSummary {
    let spec = ExperimentSpec::new(MachineSpec::Odl(cfg), GraphSpec::Mobius(n), samples);
    runner().run(&spec).expect("odl experiment").summary
}

fn show(s: &SuccessSummary) -> String {
    format!("{} {}/{} [{:.3}, {:.3}]", s.label, s.successes, s.trials, s.ci_low, s.ci_high)
}

fn threshold() -> Outcome {
    let r = mif_threshold_r(0.30, 0.10).map_err(|e| e.to_string())?;
    let err = (r - (-0.5 * 0.63f64.ln())).abs();
    let ratio = (0.2 / r).powi(2);
    ensure(
        err <= 1e-12 && (0.73..=0.77).contains(&ratio),
        format!("r_th = {r:.12} (error {err:.1e}), (0.2/r_th)^2 = {ratio:.4}"),
    )
}

fn mif_small() -> Outcome {
    let s = mif(MifConfig { seed: SEED, ..MifConfig::default() }, 16, 300);
    ensure(s.ci_low > 0.5, show(&s))
}

fn mif_trend() -> Outcome {
    let cfg = MifConfig { seed: SEED, ..MifConfig::default() };
    let p: Vec<SuccessSummary> = [16, 64, 120].iter().map(|&n| mif(cfg.clone(), n, 300)).collect();
    ensure(
        p[0].p_hat >= p[1].p_hat && p[1].p_hat >= p[2].p_hat - 0.05,
        format!("p(16) = {:.3}, p(64) = {:.3}, p(120) = {:.3}", p[0].p_hat, p[1].p_hat, p[2].p_hat),
    )
}

fn no_squeeze() -> Outcome {
    let squeezed = mif(MifConfig { seed: SEED, ..MifConfig::default() }, 16, 300);
    let coherent = mif(MifConfig { seed: SEED, ..MifConfig::no_squeeze() }, 16, 300);
    let diff = (squeezed.p_hat - coherent.p_hat).abs();
    ensure(
        diff <= 0.15 && squeezed.overlaps(&coherent),
        format!("squeezed {}, no squeeze {}, |diff| = {diff:.3}", show(&squeezed), show(&coherent)),
    )
}

fn odl_small() -> Outcome {
    let s = odl(OdlConfig { seed: SEED, ..OdlConfig::default() }, 16, 1000);
    ensure(s.ci_low > 0.5, show(&s))
}

fn odl_gain_variants() -> Outcome {
    let sq = odl(OdlConfig { seed: SEED, ..OdlConfig::default() }, 16, 1000);
    let pi = odl(OdlConfig { seed: SEED, ..OdlConfig::phase_insensitive() }, 16, 1000);
    ensure(sq.overlaps(&pi), format!("squeeze {}, phase-insensitive {}", show(&sq), show(&pi)))
}

fn saturation() -> Outcome {
    let study = CubicStudy { base: MifConfig { seed: SEED, ..MifConfig::default() }, ..CubicStudy::default() };
    let report = runner().run_cubic_histogram(&study).map_err(|e| e.to_string())?;
    let min_u = report.min_uncapped();
    let min_c = report.min_capped().ok_or("no capped run")?;
    let frac = report.improved_fraction().ok_or("no capped run")?;
    ensure(
        min_c >= min_u && (0.3..=0.8).contains(&frac),
        format!("min success {min_u:.2} uncapped, {min_c:.2} capped; improved on {frac:.2} of 50 graphs"),
    )
}

fn gaussian_core() -> Outcome {
    // physicality over random operation sequences
    let mut rng = RandomStream::new(SEED, 0);
    let mut worst_nu = f64::INFINITY;
    let mut worst_loss = 0.0f64;
    for case in 0..1000 {
        let s = random_operation_sequence(&mut rng, 12).map_err(|e| format!("case {case}: {e}"))?;
        let nu = s.symplectic_eigenvalues().map_err(|e| format!("case {case}: {e}"))?;
        worst_nu = nu.into_iter().fold(worst_nu, f64::min);

        let mode = case % s.n_modes();
        let t = (case as f64 * 0.618).fract();
        let mut a = s.clone();
        a.loss(mode, t).map_err(|e| e.to_string())?;
        let mut b = s.clone();
        let env = b.add_vacuum_mode();
        b.beam_splitter(mode, env, t).map_err(|e| e.to_string())?;
        b.remove_mode(env).map_err(|e| e.to_string())?;
        worst_loss = worst_loss.max((a.cov() - b.cov()).amax()).max((a.disp() - b.disp()).amax());
    }

    // conditioned covariance does not depend on the outcome
    let mut s = GaussianState::vacuum(3).map_err(|e| e.to_string())?;
    s.squeeze(0, 0.9, SqueezeVariant::Canonical).map_err(|e| e.to_string())?;
    s.squeeze(2, -0.5, SqueezeVariant::Canonical).map_err(|e| e.to_string())?;
    s.beam_splitter(0, 1, 0.4).map_err(|e| e.to_string())?;
    s.beam_splitter(1, 2, 0.7).map_err(|e| e.to_string())?;
    s.displace(&[1.0, -0.3, 0.2, 0.5, -2.0, 0.0]).map_err(|e| e.to_string())?;
    let axis = QuadratureAxis::new(0.4);
    let covs: Vec<_> = [-4.0, 0.0, 1.7, 9.0]
        .iter()
        .map(|&c| s.condition_on_homodyne(1, axis, c).map(|st| st.cov().clone()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let independent = covs.windows(2).all(|w| w[0] == w[1]);

    // homodyne outcome moments
    let draws = 100_000;
    let n = draws as f64;
    let (mu, var) = s.homodyne_marginal(1, axis).map_err(|e| e.to_string())?;
    let mut src = RandomStream::new(SEED, 1);
    let xs: Vec<f64> = (0..draws)
        .map(|_| s.homodyne(1, axis, &mut src).map(|h| h.outcome))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    let z_mean = (m - mu).abs() / (var / n).sqrt();
    let z_var = (v - var).abs() / (var * (2.0 / (n - 1.0)).sqrt());

    // joint x sampling moments
    let (xmu, xcov) = s.x_marginal();
    let samples = s.sample_x_quadratures(draws, &mut RandomStream::new(SEED, 2)).map_err(|e| e.to_string())?;
    let mut z_sample = 0.0f64;
    for i in 0..3 {
        let mean = samples.iter().map(|x| x[i]).sum::<f64>() / n;
        z_sample = z_sample.max((mean - xmu[i]).abs() / (xcov[(i, i)] / n).sqrt());
        for k in 0..3 {
            let c = samples.iter().map(|x| (x[i] - xmu[i]) * (x[k] - xmu[k])).sum::<f64>() / n;
            let se = ((xcov[(i, i)] * xcov[(k, k)] + xcov[(i, k)].powi(2)) / n).sqrt();
            z_sample = z_sample.max((c - xcov[(i, k)]).abs() / se);
        }
    }

    ensure(
        worst_nu >= 0.5 - 1e-9 && worst_loss <= 1e-12 && independent && z_mean < 5.0 && z_var < 5.0 && z_sample < 5.0,
        format!(
            "min nu {worst_nu:.12} over 1000 sequences; loss/beam-splitter deviation {worst_loss:.1e}; \
             outcome-independent {independent}; homodyne z = {z_mean:.2}, {z_var:.2}; sampling max z = {z_sample:.2}"
        ),
    )
}

fn oracles() -> Outcome {
    for n in (4..=24).step_by(2) {
        let dp = mobius_ground_dp(n).map_err(|e| e.to_string())?;
        let bf = brute_force_ground(&mobius_ladder(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if dp.energy != bf.energy {
            return Err(format!("n = {n}: transfer matrix {} vs exhaustive {}", dp.energy, bf.energy));
        }
    }
    let e4 = mobius_ground_dp(4).map_err(|e| e.to_string())?.energy;
    ensure(e4 == -2.0, format!("agree for all even n in [4, 24]; n = 4 ground energy {e4}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str], name: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_gim"))
            .args(args)
            .args(["--out", path.to_str().unwrap()])
            .stderr(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("gim {args:?} exited with {status}"));
        }
        std::fs::read(path).map_err(|e| e.to_string())
    };
    let seed = SEED.to_string();
    let mut lines = Vec::new();
    for (cmd, trials) in [("mif", "300"), ("odl", "1000")] {
        let outputs: Vec<Vec<u8>> = ["1", "1", "4", "0"]
            .iter()
            .enumerate()
            .map(|(i, threads)| {
                run(
                    &[cmd, "--graph", "mobius:16", "--trials", trials, "--seed", &seed, "--threads", threads],
                    &format!("{cmd}-{i}.csv"),
                )
            })
            .collect::<Result<_, _>>()?;
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{cmd}: output differs between runs or thread counts"));
        }
        lines.push(format!("{cmd} identical over 4 runs ({} bytes)", outputs[0].len()));
    }
    Ok(lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "threshold consistency", threshold),
        (2, "MIF small-size success", mif_small),
        (3, "MIF trend with size", mif_trend),
        (4, "MIF without squeezing", no_squeeze),
        (5, "ODL small-size success", odl_small),
        (6, "ODL gain-variant equivalence", odl_gain_variants),
        (7, "saturation study", saturation),
        (8, "Gaussian-core property suite", gaussian_core),
        (9, "oracle cross-validation", oracles),
        (10, "determinism", determinism),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
