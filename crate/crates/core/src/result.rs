//! Output types shared by every algorithm.

use serde::{Deserialize, Serialize};

use crate::tgraph::VertexId;

/// A solution: the vertex set and its density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    /// Internal vertex ids, sorted.
    pub vertices: Vec<VertexId>,
    /// `tau(W)` evaluated exactly on `T[W]`.
    pub weight: f64,
    /// `tau(W) / |W|` evaluated exactly; 0 for the empty set.
    pub density: f64,
    /// Density the algorithm selected the set by, when it worked from estimates.
    pub estimated_density: Option<f64>,
    /// Bisection steps, peeling iterations or removals, depending on the algorithm.
    pub iterations: usize,
    /// Set when a sample-size bound was capped, so the probabilistic
    /// guarantee no longer formally applies.
    pub best_effort: bool,
}

impl DensityResult {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            weight: 0.0,
            density: 0.0,
            estimated_density: None,
            iterations: 0,
            best_effort: false,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// One state of a peeling run: the surviving set before the next removal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeelStep {
    pub size: usize,
    /// Exact or estimated `tau` of the surviving set, per the algorithm.
    pub weight: f64,
    pub density: f64,
    /// Vertices removed right after this snapshot.
    pub removed: Vec<VertexId>,
}

/// The sequence of surviving sets of a peeling run. Step 0 is the full
/// vertex set; sizes strictly decrease.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PeelTrace {
    pub steps: Vec<PeelStep>,
    /// Index of the step returned as the solution.
    pub best: Option<usize>,
}

impl PeelTrace {
    /// The batches removed, in order.
    pub fn batches(&self) -> Vec<Vec<VertexId>> {
        self.steps.iter().map(|s| s.removed.clone()).filter(|b| !b.is_empty()).collect()
    }

    /// Surviving vertex set at step `i`, reconstructed from `initial` and
    /// the removals of the earlier steps.
    pub fn survivors(&self, initial: &[VertexId], i: usize) -> Vec<VertexId> {
        let gone: std::collections::HashSet<VertexId> =
            self.steps[..i].iter().flat_map(|s| s.removed.iter().copied()).collect();
        let mut out: Vec<VertexId> = initial.iter().copied().filter(|v| !gone.contains(v)).collect();
        out.sort_unstable();
        out
    }
}
