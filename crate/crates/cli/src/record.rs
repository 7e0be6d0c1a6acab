//! JSON result records, one per line.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use aldente::matching::WeightFunction;
use aldente::TemporalNetwork;

use crate::solve::{Execution, RunParams};

pub const SCHEMA: &str = "aldente.result/1";

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "status", content = "message", rename_all = "lowercase")]
pub enum Status {
    Ok,
    Timeout,
    Error(String),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ConfigEcho {
    pub input: String,
    pub motif: String,
    pub delta: f64,
    pub algorithm: String,
    pub weight: WeightFunction,
    pub params: RunParams,
    pub time_limit: Option<f64>,
    pub threads: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub schema: String,
    pub kind: String,
    pub config: ConfigEcho,
    pub repeat: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub status: Status,
    /// Original labels, in internal id order.
    pub vertices: Vec<String>,
    pub size: usize,
    pub weight: f64,
    pub density: f64,
    pub estimated_density: Option<f64>,
    pub iterations: usize,
    pub best_effort: bool,
    pub wall_time_s: f64,
    pub peak_rss_kb: Option<u64>,
}

impl RunRecord {
    pub fn new(config: &ConfigEcho, repeat: usize, seed: u64, net: &TemporalNetwork, ex: &Execution) -> Self {
        let r = ex.result.clone().unwrap_or_else(aldente::DensityResult::empty);
        Self {
            schema: SCHEMA.into(),
            kind: "run".into(),
            config: config.clone(),
            repeat,
            seed,
            status: ex.status.clone(),
            vertices: net.labels_of(&r.vertices),
            size: r.vertices.len(),
            weight: r.weight,
            density: r.density,
            estimated_density: r.estimated_density,
            iterations: r.iterations,
            best_effort: r.best_effort,
            wall_time_s: ex.wall.as_secs_f64(),
            peak_rss_kb: peak_rss_kb(),
        }
    }

    pub fn summary(&self) -> String {
        let status = match &self.status {
            Status::Ok => "ok".to_string(),
            Status::Timeout => "TIMEOUT".to_string(),
            Status::Error(m) => format!("error: {m}"),
        };
        let est = self.estimated_density.map(|e| format!(" estimated={e:.6}")).unwrap_or_default();
        format!(
            "[{} #{}] {status} |W|={} density={:.6}{est} iterations={} time={:.3}s{}",
            self.config.algorithm,
            self.repeat,
            self.size,
            self.density,
            self.iterations,
            self.wall_time_s,
            if self.best_effort { " (best effort)" } else { "" }
        )
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct AggregateRecord {
    pub schema: String,
    pub kind: String,
    pub config: ConfigEcho,
    pub repeats: usize,
    pub timeouts: usize,
    pub density_mean: f64,
    pub density_std: f64,
    pub runtime_mean_s: f64,
}

impl AggregateRecord {
    pub fn summary(&self) -> String {
        format!(
            "[{}] {} repeats: density {:.6} +- {:.6}, mean time {:.3}s{}",
            self.config.algorithm,
            self.repeats,
            self.density_mean,
            self.density_std,
            self.runtime_mean_s,
            if self.timeouts > 0 { format!(", {} timeouts", self.timeouts) } else { String::new() }
        )
    }
}

/// Timed-out runs count as density 0.
pub fn aggregate(config: &ConfigEcho, runs: &[RunRecord]) -> AggregateRecord {
    let n = runs.len().max(1) as f64;
    let mean = runs.iter().map(|r| r.density).sum::<f64>() / n;
    let var = runs.iter().map(|r| (r.density - mean).powi(2)).sum::<f64>() / n;
    AggregateRecord {
        schema: SCHEMA.into(),
        kind: "aggregate".into(),
        config: config.clone(),
        repeats: runs.len(),
        timeouts: runs.iter().filter(|r| r.status == Status::Timeout).count(),
        density_mean: mean,
        density_std: var.sqrt(),
        runtime_mean_s: runs.iter().map(|r| r.wall_time_s).sum::<f64>() / n,
    }
}

pub fn append_lines(path: &Path, runs: &[RunRecord], agg: &AggregateRecord) -> Result<()> {
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    for r in runs {
        writeln!(f, "{}", serde_json::to_string(r)?)?;
    }
    writeln!(f, "{}", serde_json::to_string(agg)?)?;
    Ok(())
}

/// Peak resident set size from /proc, where available.
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}
