//! Browser bindings. Each export takes plain strings and numbers and returns
//! a JSON string, so the page needs no generated type glue.
//!
//! The `*_json` functions hold the logic and are callable natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use aldente::exactflow::solve_exact;
use aldente::matching::{count_and_weigh, MotifQuery, WeightFunction};
use aldente::motif::{library, parse_motif, TemporalMotif};
use aldente::peel::{batch_peel, greedy_peel};
use aldente::randpeel::{hybrid_peel, prob_peel, RandPeelConfig};
use aldente::sample::{get_estimates, SampleConfig, DEFAULT_Q};
use aldente::tgraph::parse_edge_list;
use aldente::{DensityResult, TemporalNetwork};

/// Largest number of points on a delta curve.
pub const MAX_CURVE_POINTS: usize = 200;
/// Largest number of estimator trials in one histogram request.
pub const MAX_TRIALS: usize = 5000;

#[derive(Serialize)]
pub struct EdgeView {
    pub src: String,
    pub dst: String,
    pub time: f64,
    /// Both endpoints are in the solution.
    pub inside: bool,
}

#[derive(Serialize)]
pub struct SolveView {
    pub vertices: Vec<String>,
    pub all_vertices: Vec<String>,
    pub density: f64,
    pub weight: f64,
    pub estimated_density: Option<f64>,
    pub iterations: usize,
    pub instances: usize,
    pub edges: Vec<EdgeView>,
}

#[derive(Serialize)]
pub struct CurvePoint {
    pub delta: f64,
    pub density: f64,
    pub size: usize,
    pub instances: usize,
}

#[derive(Serialize)]
pub struct Histogram {
    /// Exact total motif weight of the whole network.
    pub exact: f64,
    pub mean: f64,
    pub estimates: Vec<f64>,
    pub samples: usize,
}

fn motif_from(text: &str) -> Result<TemporalMotif, String> {
    let t = text.trim();
    match library::get(t) {
        Some(m) => Ok(m),
        None => parse_motif(t).map_err(|e| e.to_string()),
    }
}

fn weight_from(name: &str, net: &TemporalNetwork) -> Result<WeightFunction, String> {
    match name {
        "const" | "" => Ok(WeightFunction::Constant),
        "decay" => Ok(WeightFunction::decay_for(net)),
        other => Err(format!("unknown weight '{other}'")),
    }
}

fn parse(edges: &str) -> Result<TemporalNetwork, String> {
    parse_edge_list(edges).map_err(|e| e.to_string())
}

fn run(algorithm: &str, net: &TemporalNetwork, query: &MotifQuery, seed: u64) -> Result<DensityResult, String> {
    let rand = RandPeelConfig {
        xi: 0.3,
        sample: SampleConfig { samples: Some(200), seed, ..SampleConfig::default() },
        j: None,
    };
    let r = match algorithm {
        "exact" => Ok(solve_exact(net, query)),
        "greedy" => Ok(greedy_peel(net, query).0),
        "batch" => batch_peel(net, query, 0.3).map(|r| r.0),
        "probpeel" => prob_peel(net, query, &rand).map(|r| r.0),
        "hybridpeel" => hybrid_peel(net, query, &rand).map(|r| r.0),
        other => return Err(format!("unknown algorithm '{other}'")),
    };
    r.map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn solve_json(edges: &str, motif: &str, delta: f64, algorithm: &str, weight: &str, seed: u64) -> Result<String, String> {
    let net = parse(edges)?;
    let query = MotifQuery::new(motif_from(motif)?, delta, weight_from(weight, &net)?);
    let r = run(algorithm, &net, &query, seed)?;
    let mut inside = vec![false; net.id_space()];
    for &v in &r.vertices {
        inside[v as usize] = true;
    }
    let view = SolveView {
        vertices: net.labels_of(&r.vertices),
        all_vertices: net.labels_of(net.vertices()),
        density: r.density,
        weight: r.weight,
        estimated_density: r.estimated_density,
        iterations: r.iterations,
        instances: count_and_weigh(&net, &query).0,
        edges: net
            .edges()
            .iter()
            .map(|e| EdgeView {
                src: net.label(e.src).to_string(),
                dst: net.label(e.dst).to_string(),
                time: e.time,
                inside: inside[e.src as usize] && inside[e.dst as usize],
            })
            .collect(),
    };
    to_json(&view)
}

/// Best density found by `algorithm` at `steps` evenly spaced values of delta.
pub fn density_curve_json(edges: &str, motif: &str, delta_lo: f64, delta_hi: f64, steps: usize, algorithm: &str, weight: &str) -> Result<String, String> {
    if !(delta_lo >= 0.0 && delta_hi >= delta_lo) {
        return Err("need 0 <= delta_lo <= delta_hi".into());
    }
    if steps == 0 || steps > MAX_CURVE_POINTS {
        return Err(format!("steps must be in 1..={MAX_CURVE_POINTS}"));
    }
    let net = parse(edges)?;
    let motif = motif_from(motif)?;
    let weight = weight_from(weight, &net)?;
    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        let delta = if steps == 1 { delta_lo } else { delta_lo + (delta_hi - delta_lo) * i as f64 / (steps - 1) as f64 };
        let query = MotifQuery::new(motif.clone(), delta, weight);
        let r = run(algorithm, &net, &query, 0)?;
        points.push(CurvePoint { delta, density: r.density, size: r.vertices.len(), instances: count_and_weigh(&net, &query).0 });
    }
    to_json(&points)
}

/// Repeated window-sampling estimates of the network's total motif weight.
pub fn estimator_histogram_json(edges: &str, motif: &str, delta: f64, samples: usize, trials: usize, seed: u64) -> Result<String, String> {
    if delta <= 0.0 {
        return Err("sampling needs delta > 0".into());
    }
    if samples == 0 || trials == 0 || trials > MAX_TRIALS {
        return Err(format!("need samples >= 1 and trials in 1..={MAX_TRIALS}"));
    }
    let net = parse(edges)?;
    let query = MotifQuery::new(motif_from(motif)?, delta, WeightFunction::Constant);
    let exact = count_and_weigh(&net, &query).1;
    let estimates: Vec<f64> = (0..trials).map(|t| get_estimates(&net, &query, samples, DEFAULT_Q, seed, t as u64).total).collect();
    let mean = estimates.iter().sum::<f64>() / trials as f64;
    to_json(&Histogram { exact, mean, estimates, samples })
}

#[wasm_bindgen]
pub fn solve(edges: &str, motif: &str, delta: f64, algorithm: &str, weight: &str, seed: u32) -> Result<String, JsValue> {
    solve_json(edges, motif, delta, algorithm, weight, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn density_curve(edges: &str, motif: &str, delta_lo: f64, delta_hi: f64, steps: usize, algorithm: &str, weight: &str) -> Result<String, JsValue> {
    density_curve_json(edges, motif, delta_lo, delta_hi, steps, algorithm, weight).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn estimator_histogram(edges: &str, motif: &str, delta: f64, samples: usize, trials: usize, seed: u32) -> Result<String, JsValue> {
    estimator_histogram_json(edges, motif, delta, samples, trials, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn motif_names() -> String {
    library::names().collect::<Vec<_>>().join(",")
}
