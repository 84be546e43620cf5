use std::fmt;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{write_experiment, OutputFormat};
use super::stats::{IntervalMethod, SuccessSummary};
use crate::error::{Error, Result};
use crate::ising::{
    ground_truth, ising_energy, mobius_ladder, random_cubic_graph, read_edge_list, CouplingMatrix,
    GroundTruth, SpinConfig, BRUTE_FORCE_LIMIT,
};
use crate::machine::{evolve_odl, run_mif_trial, MifConfig, OdlConfig};
use crate::rng::{derive_seed, RandomStream};

/// Salt separating graph-generation streams from trial streams.
pub const GRAPH_SALT: u64 = 0x6772_6170_6873;

/// The seed-`seed` random cubic graph number `index`.
pub fn seeded_cubic_graph(n: usize, seed: u64, index: u64) -> Result<CouplingMatrix> {
    random_cubic_graph(n, &mut RandomStream::new(derive_seed(seed, GRAPH_SALT), index))
}

/// Benchmark problem, written `mobius:N`, `cubic:N[:SEED]` or `file:PATH`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphSpec {
    Mobius(usize),
    /// `seed: None` takes the experiment seed.
    Cubic { n: usize, seed: Option<u64> },
    File(PathBuf),
}

impl GraphSpec {
    pub fn n_spins_hint(&self) -> Option<usize> {
        match self {
            GraphSpec::Mobius(n) | GraphSpec::Cubic { n, .. } => Some(*n),
            GraphSpec::File(_) => None,
        }
    }

    /// Short identifier used in result rows.
    pub fn id(&self, default_seed: u64) -> String {
        match self {
            GraphSpec::Mobius(n) => format!("mobius-{n}"),
            GraphSpec::Cubic { n, seed } => format!("cubic-{n}-s{}", seed.unwrap_or(default_seed)),
            GraphSpec::File(path) => match path.file_stem() {
                Some(stem) => format!("file-{}", stem.to_string_lossy()),
                None => "file".to_owned(),
            },
        }
    }

    pub fn build(&self, default_seed: u64) -> Result<CouplingMatrix> {
        match self {
            GraphSpec::Mobius(n) => mobius_ladder(*n),
            GraphSpec::Cubic { n, seed } => {
                if *n > BRUTE_FORCE_LIMIT {
                    return Err(Error::SizeLimit { n: *n, limit: BRUTE_FORCE_LIMIT });
                }
                seeded_cubic_graph(*n, seed.unwrap_or(default_seed), 0)
            }
            GraphSpec::File(path) => {
                let file = File::open(path).map_err(|e| {
                    Error::invalid(format!("cannot open graph file {}: {e}", path.display()))
                })?;
                read_edge_list(BufReader::new(file))
            }
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Mobius(n) => write!(f, "mobius:{n}"),
            GraphSpec::Cubic { n, seed: Some(s) } => write!(f, "cubic:{n}:{s}"),
            GraphSpec::Cubic { n, seed: None } => write!(f, "cubic:{n}"),
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_n = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse(format!("bad spin count {t:?} in graph {s:?}")))
        };
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("graph {s:?} is not of the form KIND:ARGS")))?;
        match kind {
            "mobius" => Ok(GraphSpec::Mobius(parse_n(rest)?)),
            "cubic" => {
                let (n, seed) = match rest.split_once(':') {
                    Some((n, seed)) => {
                        let seed = seed
                            .parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad seed {seed:?} in graph {s:?}")))?;
                        (n, Some(seed))
                    }
                    None => (rest, None),
                };
                Ok(GraphSpec::Cubic { n: parse_n(n)?, seed })
            }
            "file" if !rest.is_empty() => Ok(GraphSpec::File(PathBuf::from(rest))),
            _ => Err(Error::Parse(format!("unknown graph {s:?}; expected mobius:N, cubic:N[:SEED] or file:PATH"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MachineSpec {
    Mif(MifConfig),
    /// `n_samples` is replaced by the experiment's trial count.
    Odl(OdlConfig),
}

impl MachineSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MachineSpec::Mif(_) => "mif",
            MachineSpec::Odl(_) => "odl",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            MachineSpec::Mif(c) => c.seed,
            MachineSpec::Odl(c) => c.seed,
        }
    }
}

/// One batch of trials of one machine on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub label: String,
    pub machine: MachineSpec,
    pub graph: GraphSpec,
    pub trials: u64,
}

impl ExperimentSpec {
    /// Spec labelled `<machine>-<graph id>`.
    pub fn new(machine: MachineSpec, graph: GraphSpec, trials: u64) -> Self {
        let label = format!("{}-{}", machine.name(), graph.id(machine.seed()));
        Self { label, machine, graph, trials }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if let GraphSpec::Cubic { n, .. } = self.graph {
            if n > BRUTE_FORCE_LIMIT {
                return Err(Error::SizeLimit { n, limit: BRUTE_FORCE_LIMIT });
            }
        }
        match &self.machine {
            MachineSpec::Mif(c) => c.validate(),
            MachineSpec::Odl(c) => OdlConfig { n_samples: 1, ..c.clone() }.validate(),
        }
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub graph_id: String,
    pub trial: u64,
    pub energy: f64,
    pub ground_energy: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub summary: SuccessSummary,
    pub rows: Vec<TrialRow>,
}

/// Per-graph success statistics of the cubic-graph saturation study.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicStudy {
    pub n: usize,
    pub n_graphs: usize,
    pub trials_per_graph: u64,
    pub cap: Option<f64>,
    pub base: MifConfig,
}

impl Default for CubicStudy {
    fn default() -> Self {
        Self { n: 16, n_graphs: 50, trials_per_graph: 100, cap: Some(1000.0), base: MifConfig::default() }
    }
}

/// Number of graphs per success-probability bin `[low, high)`; the last bin is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_low: f64,
    pub bin_high: f64,
    pub uncapped: u64,
    pub capped: Option<u64>,
}

pub const HISTOGRAM_BINS: u64 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct CubicReport {
    pub uncapped: Vec<SuccessSummary>,
    /// Present when the study has a cap; graph `g` is the same problem and uses the
    /// same noise streams in both runs.
    pub capped: Option<Vec<SuccessSummary>>,
    pub histogram: Vec<HistogramBin>,
}

fn min_p_hat(s: &[SuccessSummary]) -> f64 {
    s.iter().map(|s| s.p_hat).fold(f64::INFINITY, f64::min)
}

impl CubicReport {
    pub fn min_uncapped(&self) -> f64 {
        min_p_hat(&self.uncapped)
    }

    pub fn min_capped(&self) -> Option<f64> {
        self.capped.as_deref().map(min_p_hat)
    }

    /// Fraction of graphs whose success count strictly increases under the cap.
    pub fn improved_fraction(&self) -> Option<f64> {
        let capped = self.capped.as_ref()?;
        let improved = self.uncapped.iter().zip(capped).filter(|(u, c)| c.successes > u.successes).count();
        Some(improved as f64 / self.uncapped.len() as f64)
    }
}

fn histogram_counts(summaries: &[SuccessSummary]) -> Vec<u64> {
    let mut counts = vec![0u64; HISTOGRAM_BINS as usize];
    for s in summaries {
        // integer arithmetic keeps p = 0.15 out of the 0.10 bin
        let bin = (HISTOGRAM_BINS * s.successes / s.trials).min(HISTOGRAM_BINS - 1);
        counts[bin as usize] += 1;
    }
    counts
}

/// Runs experiments on a bounded worker pool. Results never depend on the pool size.
pub struct Runner {
    pool: rayon::ThreadPool,
    interval: IntervalMethod,
}

impl Runner {
    /// `threads = 0` uses one worker per available core.
    pub fn new(threads: usize, interval: IntervalMethod) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
        Ok(Self { pool, interval })
    }

    pub fn interval(&self) -> IntervalMethod {
        self.interval
    }

    pub fn run(&self, spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
        spec.validate()?;
        let seed = spec.machine.seed();
        let j = spec.graph.build(seed)?;
        let truth = ground_truth(&j)?;
        let graph_id = spec.graph.id(seed);
        let energies = match &spec.machine {
            MachineSpec::Mif(cfg) => self.mif_energies(&j, cfg, &truth, spec.trials)?,
            MachineSpec::Odl(cfg) => self.odl_energies(&j, cfg, spec.trials)?,
        };
        let rows: Vec<TrialRow> = energies
            .into_iter()
            .enumerate()
            .map(|(t, energy)| TrialRow {
                graph_id: graph_id.clone(),
                trial: t as u64,
                energy,
                ground_energy: truth.energy,
                success: energy == truth.energy,
            })
            .collect();
        let successes = rows.iter().filter(|r| r.success).count() as u64;
        let summary = SuccessSummary::new(spec.label.clone(), j.n(), spec.trials, successes, self.interval)?;
        Ok(ExperimentOutcome { summary, rows })
    }

    fn mif_energies(&self, j: &CouplingMatrix, cfg: &MifConfig, truth: &GroundTruth, trials: u64) -> Result<Vec<f64>> {
        self.pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|t| run_mif_trial(j, cfg, truth, t).map(|r| r.energy))
                .collect()
        })
    }

    /// Samples `trials` shots of one evolved state; shot `s` uses the stream `(seed, s)`.
    fn odl_energies(&self, j: &CouplingMatrix, cfg: &OdlConfig, trials: u64) -> Result<Vec<f64>> {
        let cfg = OdlConfig { n_samples: trials as usize, ..cfg.clone() };
        let state = evolve_odl(j, &cfg)?;
        let sampler = state.x_sampler()?;
        self.pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|s| {
                    let x = sampler.sample(&mut RandomStream::new(cfg.seed, s));
                    ising_energy(j, &SpinConfig::from_signs(x.as_slice()))
                })
                .collect()
        })
    }

    /// Runs every spec in order, writing each block to `out` as soon as it finishes.
    pub fn run_sweep(
        &self,
        specs: &[ExperimentSpec],
        out: &mut dyn Write,
        format: OutputFormat,
    ) -> Result<Vec<SuccessSummary>> {
        for spec in specs {
            spec.validate()?;
        }
        let mut summaries = Vec::with_capacity(specs.len());
        for spec in specs {
            let outcome = self.run(spec)?;
            write_experiment(out, format, &outcome)?;
            out.flush()?;
            summaries.push(outcome.summary);
        }
        Ok(summaries)
    }

    /// Success statistics over `study.n_graphs` seeded cubic graphs, with and
    /// without the saturation cap. Graph `g` uses trial seed `derive_seed(seed, g)`.
    pub fn run_cubic_histogram(&self, study: &CubicStudy) -> Result<CubicReport> {
        if study.trials_per_graph == 0 {
            return Err(Error::invalid("trials_per_graph must be at least 1"));
        }
        if study.n_graphs == 0 {
            return Err(Error::invalid("n_graphs must be at least 1"));
        }
        if study.n > BRUTE_FORCE_LIMIT {
            return Err(Error::SizeLimit { n: study.n, limit: BRUTE_FORCE_LIMIT });
        }
        let uncapped_cfg = MifConfig { saturation_cap: None, ..study.base.clone() };
        uncapped_cfg.validate()?;
        let capped_cfg = match study.cap {
            Some(cap) => {
                let cfg = uncapped_cfg.clone().with_saturation(cap);
                cfg.validate()?;
                Some(cfg)
            }
            None => None,
        };

        let seed = study.base.seed;
        let graphs: Vec<(CouplingMatrix, GroundTruth)> = (0..study.n_graphs)
            .map(|g| {
                let j = seeded_cubic_graph(study.n, seed, g as u64)?;
                let truth = ground_truth(&j)?;
                Ok((j, truth))
            })
            .collect::<Result<_>>()?;

        let run = |cfg: &MifConfig, tag: &str| -> Result<Vec<SuccessSummary>> {
            let counts: Vec<u64> = self.pool.install(|| {
                graphs
                    .par_iter()
                    .enumerate()
                    .map(|(g, (j, truth))| {
                        let cfg = MifConfig { seed: derive_seed(seed, g as u64), ..cfg.clone() };
                        (0..study.trials_per_graph)
                            .into_par_iter()
                            .map(|t| run_mif_trial(j, &cfg, truth, t).map(|r| r.success as u64))
                            .sum::<Result<u64>>()
                    })
                    .collect::<Result<_>>()
            })?;
            counts
                .iter()
                .enumerate()
                .map(|(g, &k)| {
                    let label = format!("cubic-{}-g{g:02}-{tag}", study.n);
                    SuccessSummary::new(label, study.n, study.trials_per_graph, k, self.interval)
                })
                .collect()
        };

        let uncapped = run(&uncapped_cfg, "uncapped")?;
        let capped = match &capped_cfg {
            Some(cfg) => Some(run(cfg, &format!("cap{}", cfg.saturation_cap.unwrap_or_default()))?),
            None => None,
        };

        let u_counts = histogram_counts(&uncapped);
        let c_counts = capped.as_deref().map(histogram_counts);
        let width = 1.0 / HISTOGRAM_BINS as f64;
        let histogram = (0..HISTOGRAM_BINS as usize)
            .map(|b| HistogramBin {
                bin_low: b as f64 * width,
                bin_high: (b + 1) as f64 * width,
                uncapped: u_counts[b],
                capped: c_counts.as_ref().map(|c| c[b]),
            })
            .collect();
        Ok(CubicReport { uncapped, capped, histogram })
    }
}
