//! Batch peeling driven by sampled degree estimates, optionally finished by
//! exact greedy peeling once the set has shrunk.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{density, MotifQuery};
use crate::peel::greedy_peel;
use crate::result::{DensityResult, PeelStep, PeelTrace};
use crate::sample::{get_bound, get_estimates, SampleConfig, WindowLaw};
use crate::tgraph::{TemporalNetwork, VertexId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandPeelConfig {
    pub xi: f64,
    pub sample: SampleConfig,
    /// Sampled iterations before switching to exact greedy. `None` picks
    /// the default from the network size.
    pub j: Option<usize>,
}

impl Default for RandPeelConfig {
    fn default() -> Self {
        Self { xi: 0.3, sample: SampleConfig::default(), j: None }
    }
}

impl RandPeelConfig {
    /// 3 for networks with at least ten million edges, else 2.
    pub fn default_j(num_edges: usize) -> usize {
        if num_edges >= 10_000_000 {
            3
        } else {
            2
        }
    }

    pub fn validate(&self, query: &MotifQuery) -> Result<()> {
        if !(self.xi > 0.0) {
            return Err(Error::Parameter(format!("xi must be positive, got {}", self.xi)));
        }
        if self.j == Some(0) {
            return Err(Error::Parameter("J must be at least 1".into()));
        }
        if !(query.delta > 0.0) {
            return Err(Error::Parameter(format!("sampling needs delta > 0, got {}", query.delta)));
        }
        self.sample.validate()
    }
}

struct Round {
    step: PeelStep,
    capped: bool,
}

/// One estimate-and-peel iteration on the vertices still marked in `alive`.
fn round(net: &TemporalNetwork, alive: &mut [bool], query: &MotifQuery, cfg: &RandPeelConfig, eta_slice: f64, index: u64) -> Round {
    let owned;
    let sub = if alive.iter().filter(|&&a| a).count() == net.num_vertices() {
        net
    } else {
        owned = net.induced_by_mask(alive);
        &owned
    };
    let size = sub.num_vertices();
    let s = &cfg.sample;
    let (r, capped) = match (s.samples, WindowLaw::new(sub, s.q, query.delta)) {
        (Some(r), _) => (r, false),
        (None, None) => (1, false),
        (None, Some(law)) => {
            let b = get_bound(size, law.span, s.q, query.delta, s.epsilon, eta_slice);
            if b > s.max_samples as u64 {
                (s.max_samples, true)
            } else {
                (b as usize, false)
            }
        }
    };
    let est = get_estimates(sub, query, r, s.q, s.seed, index);
    let threshold = query.k() as f64 * (1.0 + cfg.xi) * est.total / size as f64;
    let mut removed: Vec<VertexId> = sub.vertices().iter().copied().filter(|&v| est.get(v) <= threshold).collect();
    if removed.is_empty() {
        // only reachable through rounding; fall back to a minimum
        let v = sub.vertices().iter().copied().min_by(|&a, &b| est.get(a).total_cmp(&est.get(b)).then(a.cmp(&b))).unwrap();
        removed.push(v);
    }
    for &v in &removed {
        alive[v as usize] = false;
    }
    Round {
        step: PeelStep { size, weight: est.total, density: est.total / size as f64, removed },
        capped,
    }
}

fn first_max(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, d) in values.into_iter().enumerate() {
        if best.is_none_or(|(_, b)| d > b) {
            best = Some((i, d));
        }
    }
    best
}

fn reevaluate(net: &TemporalNetwork, query: &MotifQuery, vertices: Vec<VertexId>, estimated: f64, iterations: usize, best_effort: bool) -> Result<DensityResult> {
    if !(estimated > 0.0) || vertices.is_empty() {
        return Ok(DensityResult { iterations, best_effort, ..DensityResult::empty() });
    }
    let rho = density(net, &vertices, query)?;
    Ok(DensityResult {
        weight: rho * vertices.len() as f64,
        density: rho,
        vertices,
        estimated_density: Some(estimated),
        iterations,
        best_effort,
    })
}

/// Peels by estimated degrees until nothing is left; iteration `i` draws
/// enough windows for failure budget `eta / 2^i` unless a fixed count is
/// set. Returns the set with the highest estimated density, with its exact
/// density re-evaluated.
pub fn prob_peel(net: &TemporalNetwork, query: &MotifQuery, cfg: &RandPeelConfig) -> Result<(DensityResult, PeelTrace)> {
    cfg.validate(query)?;
    let mut alive = vec![false; net.id_space()];
    for &v in net.vertices() {
        alive[v as usize] = true;
    }
    let mut left = net.num_vertices();
    let mut trace = PeelTrace::default();
    let mut best_effort = false;
    let mut i = 0u64;
    while left > 0 {
        i += 1;
        let eta = cfg.sample.eta / 2f64.powi(i.min(1000) as i32);
        let r = round(net, &mut alive, query, cfg, eta, i);
        left -= r.step.removed.len();
        best_effort |= r.capped;
        trace.steps.push(r.step);
    }
    let Some((best, est)) = first_max(trace.steps.iter().map(|s| s.density)) else {
        return Ok((DensityResult::empty(), trace));
    };
    trace.best = Some(best);
    let vertices = trace.survivors(net.vertices(), best);
    let result = reevaluate(net, query, vertices, est, i as usize, best_effort)?;
    Ok((result, trace))
}

/// `J` estimate-and-peel iterations with budget `eta / J` each, then exact
/// greedy peeling of what is left. Returns the best of the estimated
/// densities and the greedy answer.
pub fn hybrid_peel(net: &TemporalNetwork, query: &MotifQuery, cfg: &RandPeelConfig) -> Result<(DensityResult, PeelTrace)> {
    cfg.validate(query)?;
    let j = cfg.j.unwrap_or_else(|| RandPeelConfig::default_j(net.num_edges()));
    let mut alive = vec![false; net.id_space()];
    for &v in net.vertices() {
        alive[v as usize] = true;
    }
    let mut left = net.num_vertices();
    let mut trace = PeelTrace::default();
    let mut best_effort = false;
    let eta = cfg.sample.eta / j as f64;
    let mut rounds = 0;
    while rounds < j && left > 0 {
        rounds += 1;
        let r = round(net, &mut alive, query, cfg, eta, rounds as u64);
        left -= r.step.removed.len();
        best_effort |= r.capped;
        trace.steps.push(r.step);
    }
    let sampled = trace.steps.len();
    let mut candidates: Vec<f64> = trace.steps.iter().map(|s| s.density).collect();
    let mut greedy = None;
    if left > 0 {
        let rest = net.induced_by_mask(&alive);
        let (g, gtrace) = greedy_peel(&rest, query);
        candidates.push(g.density);
        greedy = Some((g, gtrace));
    }
    let Some((best, value)) = first_max(candidates) else {
        return Ok((DensityResult::empty(), trace));
    };
    let iterations = rounds + greedy.as_ref().map_or(0, |(g, _)| g.iterations);
    let result = if best < sampled {
        trace.best = Some(best);
        let vertices = trace.survivors(net.vertices(), best);
        reevaluate(net, query, vertices, value, iterations, best_effort)?
    } else {
        let (g, _) = greedy.as_ref().unwrap();
        let vertices = g.vertices.clone();
        reevaluate(net, query, vertices, value, iterations, best_effort)?
    };
    if let Some((_, gtrace)) = greedy {
        if best >= sampled {
            trace.best = gtrace.best.map(|b| b + sampled);
        }
        trace.steps.extend(gtrace.steps);
    }
    Ok((result, trace))
}
