use std::path::Path;
use std::sync::{mpsc, Arc};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use aldente::exactflow::solve_exact;
use aldente::matching::{density, MotifQuery, WeightFunction};
use aldente::motif::{library, load_motif, TemporalMotif};
use aldente::oracle::brute_force_opt;
use aldente::peel::{batch_peel, greedy_peel};
use aldente::randpeel::{hybrid_peel, prob_peel, RandPeelConfig};
use aldente::sample::SampleConfig;
use aldente::tgraph::load_edge_list;
use aldente::{DensityResult, TemporalNetwork};

use crate::record::{self, ConfigEcho, RunRecord, Status};
use crate::RunArgs;

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact,
    Greedy,
    Batch,
    Probpeel,
    Hybridpeel,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Greedy => "greedy",
            Algorithm::Batch => "batch",
            Algorithm::Probpeel => "probpeel",
            Algorithm::Hybridpeel => "hybridpeel",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    #[default]
    Const,
    Decay,
}

/// Algorithm parameters after flag and environment resolution.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RunParams {
    pub weight: WeightKind,
    pub lambda: Option<f64>,
    pub xi: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub q: f64,
    pub samples: Option<usize>,
    pub max_samples: usize,
    pub j: Option<usize>,
    pub seed: u64,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            weight: WeightKind::Const,
            lambda: None,
            xi: 0.3,
            epsilon: 0.1,
            eta: 0.1,
            q: aldente::sample::DEFAULT_Q,
            samples: None,
            max_samples: aldente::sample::DEFAULT_MAX_SAMPLES,
            j: None,
            seed: 0,
        }
    }
}

impl RunParams {
    pub fn weight_function(&self, net: &TemporalNetwork) -> WeightFunction {
        match (self.weight, self.lambda) {
            (WeightKind::Const, _) => WeightFunction::Constant,
            (WeightKind::Decay, Some(lambda)) => WeightFunction::Decay { lambda },
            (WeightKind::Decay, None) => WeightFunction::decay_for(net),
        }
    }

    fn rand_config(&self, seed: u64) -> RandPeelConfig {
        RandPeelConfig {
            xi: self.xi,
            sample: SampleConfig {
                q: self.q,
                epsilon: self.epsilon,
                eta: self.eta,
                samples: self.samples,
                seed,
                max_samples: self.max_samples,
            },
            j: self.j,
        }
    }
}

/// A bundled motif name or a path to a motif file.
pub fn resolve_motif(spec: &str) -> Result<TemporalMotif> {
    if let Some(m) = library::get(spec) {
        if !Path::new(spec).exists() {
            return Ok(m);
        }
    }
    load_motif(spec).with_context(|| format!("loading motif '{spec}' (not a bundled name either)"))
}

pub fn solve(alg: Algorithm, net: &TemporalNetwork, query: &MotifQuery, params: &RunParams, seed: u64) -> aldente::Result<DensityResult> {
    Ok(match alg {
        Algorithm::Exact => solve_exact(net, query),
        Algorithm::Greedy => greedy_peel(net, query).0,
        Algorithm::Batch => batch_peel(net, query, params.xi)?.0,
        Algorithm::Probpeel => prob_peel(net, query, &params.rand_config(seed))?.0,
        Algorithm::Hybridpeel => hybrid_peel(net, query, &params.rand_config(seed))?.0,
        Algorithm::Oracle => brute_force_opt(net, query)?,
    })
}

pub struct Execution {
    pub status: Status,
    pub result: Option<DensityResult>,
    pub wall: Duration,
}

/// Runs one algorithm on a worker thread, giving up after `limit`. The
/// reported density is recomputed from scratch on the returned set.
pub fn execute(alg: Algorithm, net: Arc<TemporalNetwork>, query: Arc<MotifQuery>, params: &RunParams, seed: u64, limit: Option<Duration>) -> Execution {
    let (tx, rx) = mpsc::channel();
    let params = params.clone();
    let start = Instant::now();
    std::thread::spawn(move || {
        let out = solve(alg, &net, &query, &params, seed).and_then(|mut r| {
            let rho = density(&net, &r.vertices, &query)?;
            r.weight = rho * r.vertices.len() as f64;
            r.density = rho;
            Ok(r)
        });
        let _ = tx.send(out);
    });
    let got = match limit {
        Some(l) => rx.recv_timeout(l).map_err(|_| ()),
        None => rx.recv().map_err(|_| ()),
    };
    let wall = start.elapsed();
    match got {
        Ok(Ok(r)) => Execution { status: Status::Ok, result: Some(r), wall },
        Ok(Err(e)) => Execution { status: Status::Error(e.to_string()), result: None, wall },
        Err(()) => Execution { status: Status::Timeout, result: None, wall },
    }
}

pub fn run(args: &RunArgs) -> Result<u8> {
    let params = args.params.resolve()?;
    if args.repeats == 0 {
        bail!("--repeats must be at least 1");
    }
    if !(args.delta >= 0.0) {
        bail!("--delta must be a nonnegative number");
    }
    let limit = match args.time_limit {
        Some(s) if s > 0.0 && s.is_finite() => Some(Duration::from_secs_f64(s)),
        Some(s) => bail!("--time-limit must be positive, got {s}"),
        None => None,
    };
    let net = Arc::new(load_edge_list(&args.input).with_context(|| format!("loading {}", args.input.display()))?);
    let motif = resolve_motif(&args.motif)?;
    let weight = params.weight_function(&net);
    let query = Arc::new(MotifQuery::new(motif, args.delta, weight));
    let echo = ConfigEcho {
        input: args.input.display().to_string(),
        motif: query.motif.to_string(),
        delta: args.delta,
        algorithm: args.algorithm.name().to_string(),
        weight,
        params: params.clone(),
        time_limit: args.time_limit,
        threads: args.threads,
    };

    let mut records = Vec::new();
    let mut timed_out = false;
    for repeat in 0..args.repeats {
        let seed = params.seed.wrapping_add(repeat as u64);
        let ex = execute(args.algorithm, Arc::clone(&net), Arc::clone(&query), &params, seed, limit);
        let rec = RunRecord::new(&echo, repeat, seed, &net, &ex);
        println!("{}", rec.summary());
        if let Status::Error(msg) = &ex.status {
            bail!("{} failed: {msg}", args.algorithm.name());
        }
        timed_out |= ex.status == Status::Timeout;
        records.push(rec);
        if timed_out {
            break;
        }
    }
    let agg = record::aggregate(&echo, &records);
    println!("{}", agg.summary());
    if let Some(path) = &args.output {
        record::append_lines(path, &records, &agg)?;
    }
    Ok(if timed_out { 2 } else { 0 })
}
