//! Deterministic peeling: one minimum-degree vertex at a time, or whole
//! batches of low-degree vertices.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::kcis::{build_catalog, KcisCatalog};
use crate::matching::MotifQuery;
use crate::result::{DensityResult, PeelStep, PeelTrace};
use crate::tgraph::{TemporalNetwork, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
struct Key(f64, VertexId);

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn snapshot(c: &KcisCatalog) -> PeelStep {
    let size = c.alive_count();
    let weight = c.live_weight();
    PeelStep { size, weight, density: if size == 0 { 0.0 } else { weight / size as f64 }, removed: Vec::new() }
}

fn finish(initial: &[VertexId], trace: PeelTrace, iterations: usize) -> (DensityResult, PeelTrace) {
    let Some(best) = trace.best else {
        return (DensityResult::empty(), trace);
    };
    let step = &trace.steps[best];
    let result = DensityResult {
        vertices: trace.survivors(initial, best),
        weight: step.weight,
        density: step.density,
        estimated_density: None,
        iterations,
        best_effort: false,
    };
    (result, trace)
}

/// Removes a minimum-degree vertex per step (smallest id on ties) until `k`
/// vertices remain and returns the densest intermediate set. On equal
/// densities the earlier, larger set wins.
pub fn greedy_peel(net: &TemporalNetwork, query: &MotifQuery) -> (DensityResult, PeelTrace) {
    let mut c = build_catalog(net, query);
    if c.is_empty() {
        return (DensityResult::empty(), PeelTrace::default());
    }
    let k = query.k();
    let mut heap: BinaryHeap<Reverse<Key>> = net.vertices().iter().map(|&v| Reverse(Key(c.degree(v), v))).collect();
    let mut trace = PeelTrace::default();
    let mut removals = 0;
    while c.alive_count() > k {
        let Some(Reverse(Key(d, v))) = heap.pop() else { break };
        if !c.is_alive(v) || d.to_bits() != c.degree(v).to_bits() {
            continue;
        }
        let mut step = snapshot(&c);
        step.removed.push(v);
        trace.steps.push(step);
        for u in c.remove_vertex(v).expect("vertex is alive") {
            heap.push(Reverse(Key(c.degree(u), u)));
        }
        removals += 1;
    }
    trace.steps.push(snapshot(&c));
    trace.best = argmax_first(&trace.steps);
    finish(net.vertices(), trace, removals)
}

fn argmax_first(steps: &[PeelStep]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in steps.iter().enumerate() {
        if best.is_none_or(|b| s.density > steps[b].density) {
            best = Some(i);
        }
    }
    best
}

/// Removes every vertex with degree at most `k (1 + xi) tau / |W|` per
/// iteration until nothing is left and returns the densest set seen.
pub fn batch_peel(net: &TemporalNetwork, query: &MotifQuery, xi: f64) -> Result<(DensityResult, PeelTrace)> {
    if !(xi > 0.0) {
        return Err(Error::Parameter(format!("xi must be positive, got {xi}")));
    }
    let mut c = build_catalog(net, query);
    if c.is_empty() {
        return Ok((DensityResult::empty(), PeelTrace::default()));
    }
    let k = query.k() as f64;
    let mut alive: Vec<VertexId> = net.vertices().to_vec();
    let mut trace = PeelTrace::default();
    let mut best = 0;
    let mut iterations = 0;
    while !alive.is_empty() {
        let mut step = snapshot(&c);
        if step.density >= trace.steps.get(best).map_or(0.0, |s: &PeelStep| s.density) {
            best = trace.steps.len();
        }
        let threshold = k * (1.0 + xi) * step.weight / alive.len() as f64;
        let (gone, keep): (Vec<VertexId>, Vec<VertexId>) = alive.iter().partition(|&&v| c.degree(v) <= threshold);
        for &v in &gone {
            c.remove_vertex(v)?;
        }
        step.removed = gone;
        trace.steps.push(step);
        alive = keep;
        iterations += 1;
    }
    trace.best = Some(best);
    Ok(finish(net.vertices(), trace, iterations))
}

/// Upper bound on batch iterations: `ceil(log_{1+xi} n) + 1`.
pub fn batch_iteration_bound(n: usize, xi: f64) -> usize {
    if n <= 1 {
        return 1;
    }
    ((n as f64).ln() / (1.0 + xi).ln()).ceil() as usize + 1
}
