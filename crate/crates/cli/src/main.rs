mod bench;
mod record;
mod solve;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use aldente::motif::library;
use aldente::oracle::{fixtures, separation_fixture};

use crate::solve::{Algorithm, RunParams, WeightKind};

#[derive(Parser)]
#[command(name = "aldente", version, about = "Temporal motif densest subnetwork discovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one network.
    Run(RunArgs),
    /// Run a manifest of configurations and compare algorithms.
    Bench(BenchArgs),
    /// Write a generated network as an edge list.
    Gen(GenArgs),
    /// List the bundled motifs.
    Motifs,
}

#[derive(Args)]
pub struct RunArgs {
    /// Edge list: `src dst time` per line.
    #[arg(long)]
    input: PathBuf,
    /// Motif file, or the name of a bundled motif.
    #[arg(long)]
    motif: String,
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Append JSON records to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seconds per repeat before giving up.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone, Debug)]
pub struct ParamArgs {
    #[arg(long, value_enum, default_value_t = WeightKind::Const)]
    weight: WeightKind,
    /// Decay rate; defaults to the inverse mean inter-edge gap.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    xi: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = aldente::sample::DEFAULT_Q)]
    q: f64,
    /// Fixed number of windows per iteration.
    #[arg(long)]
    samples: Option<usize>,
    /// Ceiling on the computed number of windows per iteration.
    #[arg(long, default_value_t = aldente::sample::DEFAULT_MAX_SAMPLES)]
    max_samples: usize,
    #[arg(long = "J")]
    j: Option<usize>,
    /// Falls back to ALDENTE_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<RunParams> {
        if self.lambda.is_some() && self.weight == WeightKind::Const {
            bail!("--lambda only applies with --weight decay");
        }
        let seed = match self.seed {
            Some(s) => s,
            None => match std::env::var("ALDENTE_SEED") {
                Ok(v) => v.trim().parse().context("ALDENTE_SEED is not an integer")?,
                Err(_) => 0,
            },
        };
        Ok(RunParams {
            weight: self.weight,
            lambda: self.lambda,
            xi: self.xi,
            epsilon: self.epsilon,
            eta: self.eta,
            q: self.q,
            samples: self.samples,
            max_samples: self.max_samples,
            j: self.j,
            seed,
        })
    }
}

#[derive(Args)]
struct BenchArgs {
    /// TOML manifest.
    manifest: PathBuf,
    /// Directory for the CSV and JSON outputs.
    #[arg(long, default_value = "bench-out")]
    out_dir: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Vertex count for separation (a multiple of 12) and synthetic.
    #[arg(long)]
    n: Option<usize>,
    /// Edge count for synthetic.
    #[arg(long)]
    m: Option<usize>,
    /// Time span for synthetic.
    #[arg(long)]
    span: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    Separation,
    Synthetic,
    Toy4,
    Figure1,
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    Ok(())
}

fn gen(args: &GenArgs) -> Result<()> {
    let net = match args.kind {
        GenKind::Separation => separation_fixture(args.n.unwrap_or(12))?.net,
        GenKind::Synthetic => {
            let mut spec = fixtures::SyntheticSpec::default();
            if let Some(n) = args.n {
                spec.vertices = u32::try_from(n)?;
            }
            if let Some(m) = args.m {
                spec.edges = m;
            }
            if let Some(s) = args.span {
                spec.span = s;
            }
            if spec.vertices < spec.community.max(spec.circle).max(2) {
                bail!("synthetic networks need at least {} vertices", spec.community.max(spec.circle));
            }
            fixtures::synthetic_network(args.seed, &spec)
        }
        GenKind::Toy4 => fixtures::toy4(),
        GenKind::Figure1 => fixtures::figure1(),
    };
    let text = net.to_edge_list();
    match &args.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for timeouts, so usage errors exit with 1.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => set_threads(args.threads).and_then(|_| solve::run(args)),
        Command::Bench(args) => set_threads(args.threads).and_then(|_| bench::bench(&args.manifest, &args.out_dir).map(|_| 0)),
        Command::Gen(args) => gen(args).map(|_| 0),
        Command::Motifs => {
            for name in library::names() {
                println!("{name}\t{}", library::get(name).unwrap());
            }
            Ok(0)
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
