//! Manifest-driven comparison runs.
//!
//! ```toml
//! algorithms = ["exact", "greedy", "batch"]
//! repeats = 1
//! time_limit = 600.0
//!
//! [params]
//! samples = 20
//!
//! [[config]]
//! name = "toy"
//! input = "toy.txt"      # relative to the manifest
//! motif = "2path"
//! delta = 2.0
//! weight = "decay"       # optional
//! algorithms = ["exact"] # optional override
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use aldente::matching::MotifQuery;
use aldente::tgraph::load_edge_list;

use crate::record::Status;
use crate::solve::{execute, resolve_motif, Algorithm, RunParams, WeightKind};

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default = "default_algorithms")]
    algorithms: Vec<Algorithm>,
    #[serde(default = "one")]
    repeats: usize,
    time_limit: Option<f64>,
    #[serde(default)]
    params: ParamOverrides,
    #[serde(rename = "config")]
    configs: Vec<BenchConfig>,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct ParamOverrides {
    lambda: Option<f64>,
    xi: Option<f64>,
    epsilon: Option<f64>,
    eta: Option<f64>,
    q: Option<f64>,
    samples: Option<usize>,
    max_samples: Option<usize>,
    #[serde(rename = "J")]
    j: Option<usize>,
    seed: Option<u64>,
}

impl ParamOverrides {
    fn apply(&self, p: &mut RunParams) {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { p.$f = v; })* };
        }
        set!(xi, epsilon, eta, q, max_samples, seed);
        p.lambda = self.lambda.or(p.lambda);
        p.samples = self.samples.or(p.samples);
        p.j = self.j.or(p.j);
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct BenchConfig {
    name: String,
    input: PathBuf,
    motif: String,
    delta: f64,
    #[serde(default)]
    weight: WeightKind,
    algorithms: Option<Vec<Algorithm>>,
    repeats: Option<usize>,
    time_limit: Option<f64>,
    #[serde(default)]
    params: ParamOverrides,
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Exact, Algorithm::Greedy, Algorithm::Batch, Algorithm::Probpeel, Algorithm::Hybridpeel]
}

fn one() -> usize {
    1
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub config: String,
    pub algorithm: String,
    /// ok, timeout or error.
    pub status: String,
    pub message: Option<String>,
    pub repeats: usize,
    pub size: usize,
    pub density: f64,
    pub density_std: f64,
    pub opt_estimate: f64,
    pub ratio: f64,
    pub runtime_mean_s: f64,
    /// No algorithm finished, so there is no reference value.
    pub no_reference: bool,
}

/// Mean over repeats, with timed-out repeats counted as density 0.
fn run_one(alg: Algorithm, cfg: &BenchConfig, net: &Arc<aldente::TemporalNetwork>, query: &Arc<MotifQuery>, params: &RunParams, repeats: usize, limit: Option<Duration>) -> BenchRow {
    let mut densities = Vec::new();
    let mut times = Vec::new();
    let mut size = 0;
    let mut status = "ok";
    let mut message = None;
    for i in 0..repeats {
        let ex = execute(alg, Arc::clone(net), Arc::clone(query), params, params.seed.wrapping_add(i as u64), limit);
        times.push(ex.wall.as_secs_f64());
        match ex.status {
            Status::Ok => {
                let r = ex.result.expect("ok runs carry a result");
                size = r.vertices.len();
                densities.push(r.density);
            }
            Status::Timeout => {
                status = "timeout";
                densities.push(0.0);
                break;
            }
            Status::Error(m) => {
                status = "error";
                message = Some(m);
                break;
            }
        }
    }
    let n = densities.len().max(1) as f64;
    let mean = densities.iter().sum::<f64>() / n;
    let std = (densities.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n).sqrt();
    BenchRow {
        config: cfg.name.clone(),
        algorithm: alg.name().into(),
        status: status.into(),
        message,
        repeats: densities.len(),
        size,
        density: if status == "ok" { mean } else { 0.0 },
        density_std: std,
        opt_estimate: 0.0,
        ratio: 0.0,
        runtime_mean_s: times.iter().sum::<f64>() / times.len().max(1) as f64,
        no_reference: false,
    }
}

fn run_config(cfg: &BenchConfig, manifest: &Manifest, base: &Path) -> Result<Vec<BenchRow>> {
    let input = base.join(&cfg.input);
    let net = Arc::new(load_edge_list(&input).with_context(|| format!("loading {}", input.display()))?);
    let motif = resolve_motif(&cfg.motif).or_else(|_| resolve_motif(&base.join(&cfg.motif).to_string_lossy()))?;
    let mut params = RunParams { weight: cfg.weight, ..RunParams::default() };
    manifest.params.apply(&mut params);
    cfg.params.apply(&mut params);
    if params.lambda.is_some() && params.weight == WeightKind::Const {
        bail!("config '{}': lambda only applies to decay weights", cfg.name);
    }
    let query = Arc::new(MotifQuery::new(motif, cfg.delta, params.weight_function(&net)));
    let limit = cfg.time_limit.or(manifest.time_limit).map(Duration::from_secs_f64);
    let repeats = cfg.repeats.unwrap_or(manifest.repeats).max(1);
    let algorithms = cfg.algorithms.as_ref().unwrap_or(&manifest.algorithms);
    let mut rows: Vec<BenchRow> = algorithms.iter().map(|&a| run_one(a, cfg, &net, &query, &params, repeats, limit)).collect();
    let opt = rows.iter().filter(|r| r.status == "ok").map(|r| r.density).fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
    for r in &mut rows {
        match opt {
            Some(o) => {
                r.opt_estimate = o;
                r.ratio = if o > 0.0 { r.density / o } else if r.status == "ok" { 1.0 } else { 0.0 };
            }
            None => r.no_reference = true,
        }
    }
    Ok(rows)
}

fn error_rows(cfg: &BenchConfig, manifest: &Manifest, err: &anyhow::Error) -> Vec<BenchRow> {
    let algorithms = cfg.algorithms.as_ref().unwrap_or(&manifest.algorithms);
    algorithms
        .iter()
        .map(|a| BenchRow {
            config: cfg.name.clone(),
            algorithm: a.name().into(),
            status: "error".into(),
            message: Some(format!("{err:#}")),
            repeats: 0,
            size: 0,
            density: 0.0,
            density_std: 0.0,
            opt_estimate: 0.0,
            ratio: 0.0,
            runtime_mean_s: 0.0,
            no_reference: true,
        })
        .collect()
}

fn write_csv(path: &Path, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn bench(manifest_path: &Path, out_dir: &Path) -> Result<()> {
    let text = fs::read_to_string(manifest_path).with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: Manifest = toml::from_str(&text).with_context(|| format!("parsing {}", manifest_path.display()))?;
    if manifest.configs.is_empty() {
        bail!("manifest has no [[config]] entries");
    }
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut rows = Vec::new();
    for cfg in &manifest.configs {
        let got = run_config(cfg, &manifest, base).unwrap_or_else(|e| error_rows(cfg, &manifest, &e));
        for r in &got {
            println!(
                "{:<16} {:<11} {:<8} |W|={:<6} density={:<12.6} ratio={:.4} time={:.3}s",
                r.config, r.algorithm, r.status, r.size, r.density, r.ratio, r.runtime_mean_s
            );
        }
        rows.extend(got);
    }
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write_csv(&out_dir.join("results.csv"), &rows)?;
    fs::write(out_dir.join("results.json"), serde_json::to_string_pretty(&rows)?)?;
    Ok(())
}
