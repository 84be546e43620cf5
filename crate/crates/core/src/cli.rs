//! The `gim` command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::gaussian::SqueezeVariant;
use crate::harness::{
    write_cubic_report, CubicStudy, ExperimentSpec, GraphSpec, IntervalMethod, MachineSpec, OutputFormat, Runner,
    SuccessSummary,
};
use crate::ising::{ground_truth, write_edge_list};
use crate::machine::{GainMode, MifConfig, OdlConfig, PairMode};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "gim", version, about = "Gaussian-state simulator for optical Ising machines")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Root seed; trial t draws from the stream (seed, t).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per experiment (samples for odl, trials per graph for cubic-hist).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Result file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON machine configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Confidence interval construction.
    #[arg(long, global = true, value_enum, default_value_t = Interval::Wilson)]
    ci: Interval,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Interval {
    Wilson,
    ClopperPearson,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    Canonical,
    Isotropic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measurement-feedback machine sweep.
    Mif(MifArgs),
    /// Delay-line machine sweep.
    Odl(OdlArgs),
    /// Saturation study over seeded random cubic graphs.
    CubicHist(CubicArgs),
    /// Print the exact ground energy of a graph.
    Oracle(GraphArg),
    /// Print a graph as an edge list.
    Graph(GraphArg),
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Debug, Args)]
struct GraphArg {
    /// mobius:N, cubic:N[:SEED] or file:PATH.
    #[arg(long)]
    graph: GraphSpec,
}

#[derive(Debug, Args)]
struct MifArgs {
    /// Benchmark graphs, one experiment each (repeatable).
    #[arg(long = "graph", default_value = "mobius:16")]
    graphs: Vec<GraphSpec>,
    #[arg(long)]
    loops: Option<usize>,
    #[arg(long)]
    squeeze_r: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Per-loop bound on each feedback increment.
    #[arg(long)]
    cap: Option<f64>,
    /// Coherent pulses: no amplification and eta = 0.002 unless --eta is given.
    #[arg(long)]
    no_squeeze: bool,
    /// Phase-insensitive amplification with this gain parameter instead of squeezing.
    #[arg(long, conflicts_with = "no_squeeze")]
    gain_pi: Option<f64>,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
}

#[derive(Debug, Args)]
struct OdlArgs {
    #[arg(long = "graph", default_value = "mobius:16")]
    graphs: Vec<GraphSpec>,
    #[arg(long)]
    loops: Option<usize>,
    #[arg(long)]
    squeeze_r: Option<f64>,
    #[arg(long)]
    pickoff: Option<f64>,
    #[arg(long)]
    inject: Option<f64>,
    /// Phase-insensitive amplification with this gain parameter instead of squeezing.
    #[arg(long)]
    gain_pi: Option<f64>,
    /// Visit each coupled pair once per round trip instead of in both directions.
    #[arg(long)]
    unordered: bool,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
}

#[derive(Debug, Args)]
struct CubicArgs {
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long = "graphs", default_value_t = 50)]
    n_graphs: usize,
    #[arg(long, default_value_t = 1000.0)]
    cap: f64,
    /// Run only the uncapped machine.
    #[arg(long)]
    no_cap: bool,
    #[arg(long)]
    loops: Option<usize>,
    #[arg(long)]
    eta: Option<f64>,
}

fn variant(v: Variant) -> SqueezeVariant {
    match v {
        Variant::Canonical => SqueezeVariant::Canonical,
        Variant::Isotropic => SqueezeVariant::Isotropic,
    }
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let file = File::open(p)
                .map_err(|e| Error::invalid(format!("cannot open config {}: {e}", p.display())))?;
            Ok(serde_json::from_reader(io::BufReader::new(file))?)
        }
    }
}

fn mif_config(g: &GlobalArgs, a: &MifArgs) -> Result<MifConfig> {
    let mut cfg: MifConfig = load_config(g.config.as_deref())?;
    if a.no_squeeze {
        cfg.gain_mode = GainMode::None;
        cfg.eta = MifConfig::no_squeeze().eta;
    }
    if let Some(r) = a.gain_pi {
        cfg.gain_mode = GainMode::PhaseInsensitive(r);
    }
    set(&mut cfg.n_loops, a.loops);
    set(&mut cfg.squeeze_r, a.squeeze_r);
    set(&mut cfg.eta, a.eta);
    set(&mut cfg.seed, g.seed);
    if a.cap.is_some() {
        cfg.saturation_cap = a.cap;
    }
    set(&mut cfg.squeeze_variant, a.variant.map(variant));
    cfg.validate()?;
    Ok(cfg)
}

fn odl_config(g: &GlobalArgs, a: &OdlArgs) -> Result<OdlConfig> {
    let mut cfg: OdlConfig = load_config(g.config.as_deref())?;
    if let Some(r) = a.gain_pi {
        cfg.gain_mode = GainMode::PhaseInsensitive(r);
    }
    if a.unordered {
        cfg.pairs = PairMode::Unordered;
    }
    set(&mut cfg.n_loops, a.loops);
    set(&mut cfg.squeeze_r, a.squeeze_r);
    set(&mut cfg.pickoff_fraction, a.pickoff);
    set(&mut cfg.inject_fraction, a.inject);
    set(&mut cfg.n_samples, g.trials.map(|t| t as usize));
    set(&mut cfg.seed, g.seed);
    set(&mut cfg.squeeze_variant, a.variant.map(variant));
    cfg.validate()?;
    Ok(cfg)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report(summaries: &[SuccessSummary]) {
    for s in summaries {
        eprintln!(
            "{}: {}/{} p = {:.3} [{:.3}, {:.3}]",
            s.label, s.successes, s.trials, s.p_hat, s.ci_low, s.ci_high
        );
    }
}

fn execute(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let format = match g.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    let interval = match g.ci {
        Interval::Wilson => IntervalMethod::Wilson,
        Interval::ClopperPearson => IntervalMethod::ClopperPearson,
    };
    match &cli.command {
        Command::Mif(a) => {
            let cfg = mif_config(g, a)?;
            let trials = g.trials.unwrap_or(300);
            let specs: Vec<ExperimentSpec> = a
                .graphs
                .iter()
                .map(|graph| ExperimentSpec::new(MachineSpec::Mif(cfg.clone()), graph.clone(), trials))
                .collect();
            let runner = Runner::new(g.threads, interval)?;
            let mut out = open_output(g.out.as_deref())?;
            let summaries = runner.run_sweep(&specs, &mut out, format)?;
            out.flush()?;
            report(&summaries);
        }
        Command::Odl(a) => {
            let cfg = odl_config(g, a)?;
            let trials = cfg.n_samples as u64;
            let specs: Vec<ExperimentSpec> = a
                .graphs
                .iter()
                .map(|graph| ExperimentSpec::new(MachineSpec::Odl(cfg.clone()), graph.clone(), trials))
                .collect();
            let runner = Runner::new(g.threads, interval)?;
            let mut out = open_output(g.out.as_deref())?;
            let summaries = runner.run_sweep(&specs, &mut out, format)?;
            out.flush()?;
            report(&summaries);
        }
        Command::CubicHist(a) => {
            let mut base: MifConfig = load_config(g.config.as_deref())?;
            set(&mut base.n_loops, a.loops);
            set(&mut base.eta, a.eta);
            set(&mut base.seed, g.seed);
            let study = CubicStudy {
                n: a.n,
                n_graphs: a.n_graphs,
                trials_per_graph: g.trials.unwrap_or(100),
                cap: (!a.no_cap).then_some(a.cap),
                base,
            };
            let runner = Runner::new(g.threads, interval)?;
            let result = runner.run_cubic_histogram(&study)?;
            let mut out = open_output(g.out.as_deref())?;
            write_cubic_report(&mut out, format, &result)?;
            out.flush()?;
            eprintln!("minimum success without cap: {:.2}", result.min_uncapped());
            if let (Some(min), Some(frac)) = (result.min_capped(), result.improved_fraction()) {
                eprintln!("minimum success with cap: {min:.2}; improved on {frac:.2} of graphs");
            }
        }
        Command::Oracle(a) => {
            let j = a.graph.build(g.seed.unwrap_or(0))?;
            let truth = ground_truth(&j)?;
            let mut out = open_output(g.out.as_deref())?;
            writeln!(out, "{}", truth.energy)?;
            out.flush()?;
        }
        Command::Graph(a) => {
            let j = a.graph.build(g.seed.unwrap_or(0))?;
            let mut out = open_output(g.out.as_deref())?;
            write_edge_list(&j, &mut out)?;
            out.flush()?;
        }
        Command::Selftest => {
            let checks = selftest::run_all();
            let mut out = open_output(g.out.as_deref())?;
            for c in &checks {
                writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            out.flush()?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(Error::NumericalFailure(format!("{failed} self-test checks failed")));
            }
        }
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the command. Returns 0 on success,
/// 1 on invalid input and 2 on numerical failure.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
