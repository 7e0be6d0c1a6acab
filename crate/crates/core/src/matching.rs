//! Enumeration of delta-instances, instance weights, temporal motif degrees
//! and density.
//!
//! Enumeration is a backtracking search over edges in motif order. The first
//! motif edge is matched against every network edge in time order; each later
//! motif edge is matched only against edges that come after the previous one
//! and no later than `t_first + delta`. When an endpoint of the next motif
//! edge is already mapped, only that vertex's adjacency list is scanned.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::motif::TemporalMotif;
use crate::tgraph::{TemporalNetwork, VertexId};

const UNMAPPED: VertexId = VertexId::MAX;

/// First-edge ranges are cut into at most this many chunks for parallel
/// work. The chunking depends only on `m`, so combining chunk results in
/// order gives the same floating-point totals for any thread count.
const MAX_CHUNKS: usize = 64;
const MIN_CHUNK: usize = 1024;

/// How a delta-instance is scored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightFunction {
    /// Every instance weighs 1.
    Constant,
    /// Mean of `exp(-lambda * gap)` over consecutive edge gaps.
    Decay { lambda: f64 },
}

impl WeightFunction {
    /// Decay with `lambda` set to the inverse mean inter-edge gap of `net`
    /// (falls back to 1 when the gap is undefined or zero).
    pub fn decay_for(net: &TemporalNetwork) -> Self {
        let lambda = match net.mean_inter_time() {
            Some(g) if g > 0.0 => 1.0 / g,
            _ => 1.0,
        };
        WeightFunction::Decay { lambda }
    }

    /// Weight of an instance whose edges occur at `times` (ascending).
    pub fn weigh_times(&self, times: &[f64]) -> f64 {
        match *self {
            WeightFunction::Constant => 1.0,
            WeightFunction::Decay { lambda } => {
                let gaps = times.len().saturating_sub(1);
                if gaps == 0 {
                    return 1.0;
                }
                let s: f64 = times.windows(2).map(|w| (-lambda * (w[1] - w[0])).exp()).sum();
                s / gaps as f64
            }
        }
    }

    pub fn weigh(&self, net: &TemporalNetwork, inst: &DeltaInstance) -> f64 {
        self.weigh_edges(net, &inst.edges)
    }

    pub(crate) fn weigh_edges(&self, net: &TemporalNetwork, edges: &[u32]) -> f64 {
        match self {
            WeightFunction::Constant => 1.0,
            WeightFunction::Decay { .. } => {
                let times: SmallVec<[f64; 8]> = edges.iter().map(|&p| net.edges()[p as usize].time).collect();
                self.weigh_times(&times)
            }
        }
    }
}

/// The inputs shared by every algorithm besides the network itself.
#[derive(Clone, Debug)]
pub struct MotifQuery {
    pub motif: TemporalMotif,
    pub delta: f64,
    pub weight: WeightFunction,
}

impl MotifQuery {
    pub fn new(motif: TemporalMotif, delta: f64, weight: WeightFunction) -> Self {
        Self { motif, delta, weight }
    }

    pub fn k(&self) -> usize {
        self.motif.num_vertices()
    }
}

/// A delta-instance: positions of its edges in the network it was
/// enumerated on (strictly increasing) and the network vertex assigned to
/// each motif vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaInstance {
    pub edges: SmallVec<[u32; 8]>,
    pub vertices: SmallVec<[VertexId; 8]>,
}

impl DeltaInstance {
    /// `t_last - t_first`.
    pub fn span(&self, net: &TemporalNetwork) -> f64 {
        let e = net.edges();
        e[*self.edges.last().unwrap() as usize].time - e[self.edges[0] as usize].time
    }

    /// The instance's vertex set, sorted.
    pub fn vertex_set(&self) -> SmallVec<[VertexId; 8]> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }

    /// Tie indices of the edges; stable across induced subnetworks.
    pub fn edge_ties(&self, net: &TemporalNetwork) -> Vec<u64> {
        self.edges.iter().map(|&p| net.edges()[p as usize].tie).collect()
    }
}

/// Backtracking enumerator bound to one network, motif and `delta`.
pub struct Enumerator<'a> {
    net: &'a TemporalNetwork,
    motif: &'a TemporalMotif,
    delta: f64,
}

impl<'a> Enumerator<'a> {
    pub fn new(net: &'a TemporalNetwork, motif: &'a TemporalMotif, delta: f64) -> Self {
        Self { net, motif, delta }
    }

    /// Visits every instance of the whole network in lexicographic order of
    /// edge positions. The callback gets the edge positions and the network
    /// vertex of each motif vertex.
    pub fn for_each(&self, f: impl FnMut(&[u32], &[VertexId])) {
        self.for_each_in(0..self.net.num_edges(), self.net.num_edges(), f);
    }

    /// Visits every instance whose first edge lies in `first` and whose
    /// other edges all have positions below `end`.
    pub fn for_each_in(&self, first: Range<usize>, end: usize, mut f: impl FnMut(&[u32], &[VertexId])) {
        let ell = self.motif.num_edges();
        let mut map = [UNMAPPED; crate::motif::MAX_MOTIF_VERTICES];
        let mut stack: SmallVec<[u32; 8]> = SmallVec::from_elem(0, ell);
        let (x0, y0) = self.motif.edges()[0];
        let k = self.motif.num_vertices();
        let end = end.min(self.net.num_edges());
        for pos in first.start..first.end.min(end) {
            let e = self.net.edges()[pos];
            if e.src == e.dst {
                continue;
            }
            map[x0] = e.src;
            map[y0] = e.dst;
            stack[0] = pos as u32;
            let limit = e.time + self.delta;
            self.extend(1, pos, end, limit, &mut map, &mut stack, &mut |s, m| f(s, &m[..k]));
            map[x0] = UNMAPPED;
            map[y0] = UNMAPPED;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        depth: usize,
        last: usize,
        end: usize,
        limit: f64,
        map: &mut [VertexId; crate::motif::MAX_MOTIF_VERTICES],
        stack: &mut SmallVec<[u32; 8]>,
        f: &mut dyn FnMut(&[u32], &[VertexId]),
    ) {
        if depth == stack.len() {
            f(stack, map);
            return;
        }
        let edges = self.net.edges();
        let k = self.motif.num_vertices();
        let (x, y) = self.motif.edges()[depth];
        let (mx, my) = (map[x], map[y]);
        let used = |map: &[VertexId; crate::motif::MAX_MOTIF_VERTICES], v: VertexId| map[..k].contains(&v);

        let mut visit = |pos: usize, map: &mut [VertexId; crate::motif::MAX_MOTIF_VERTICES], stack: &mut SmallVec<[u32; 8]>| -> bool {
            let e = edges[pos];
            if e.time > limit {
                return false;
            }
            let fresh_x = mx == UNMAPPED;
            let fresh_y = my == UNMAPPED;
            let ok = match (fresh_x, fresh_y) {
                (false, false) => e.src == mx && e.dst == my,
                (false, true) => e.src == mx && !used(map, e.dst),
                (true, false) => e.dst == my && !used(map, e.src),
                (true, true) => e.src != e.dst && !used(map, e.src) && !used(map, e.dst),
            };
            if ok {
                if fresh_x {
                    map[x] = e.src;
                }
                if fresh_y {
                    map[y] = e.dst;
                }
                stack[depth] = pos as u32;
                self.extend(depth + 1, pos, end, limit, map, stack, f);
                if fresh_x {
                    map[x] = UNMAPPED;
                }
                if fresh_y {
                    map[y] = UNMAPPED;
                }
            }
            true
        };

        fn scan_list(list: &[u32], last: usize, end: usize) -> impl Iterator<Item = usize> + '_ {
            let start = list.partition_point(|&p| p as usize <= last);
            list[start..].iter().map(|&p| p as usize).take_while(move |&p| p < end)
        }

        if mx != UNMAPPED {
            for pos in scan_list(self.net.out_edges(mx), last, end) {
                if !visit(pos, map, stack) {
                    break;
                }
            }
        } else if my != UNMAPPED {
            for pos in scan_list(self.net.in_edges(my), last, end) {
                if !visit(pos, map, stack) {
                    break;
                }
            }
        } else {
            for pos in last + 1..end {
                if !visit(pos, map, stack) {
                    break;
                }
            }
        }
    }
}

/// Splits `0..m` into the fixed chunk layout used by parallel enumeration.
pub(crate) fn chunk_ranges(m: usize) -> Vec<Range<usize>> {
    if m == 0 {
        return Vec::new();
    }
    let size = m.div_ceil(MAX_CHUNKS).max(MIN_CHUNK);
    (0..m).step_by(size).map(|s| s..(s + size).min(m)).collect()
}

/// Runs `visit` over all instances in parallel, one accumulator per chunk of
/// first edges. Accumulators are returned in chunk order.
pub(crate) fn par_fold<A, I, V>(net: &TemporalNetwork, query: &MotifQuery, init: I, visit: V) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[u32], &[VertexId]) + Sync,
{
    let en = Enumerator::new(net, &query.motif, query.delta);
    let m = net.num_edges();
    chunk_ranges(m)
        .into_par_iter()
        .map(|r| {
            let mut acc = init();
            en.for_each_in(r, m, |s, h| visit(&mut acc, s, h));
            acc
        })
        .collect()
}

/// Every delta-instance of the motif in `net`, in lexicographic order of
/// edge positions.
pub fn enumerate_instances(net: &TemporalNetwork, motif: &TemporalMotif, delta: f64) -> Vec<DeltaInstance> {
    let query = MotifQuery::new(motif.clone(), delta, WeightFunction::Constant);
    par_fold(net, &query, Vec::new, |acc: &mut Vec<DeltaInstance>, s, h| {
        acc.push(DeltaInstance { edges: s.into(), vertices: h.into() })
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Number of instances and their total weight in `net`.
pub fn count_and_weigh(net: &TemporalNetwork, query: &MotifQuery) -> (usize, f64) {
    par_fold(net, query, || (0usize, 0.0f64), |acc, s, _| {
        acc.0 += 1;
        acc.1 += query.weight.weigh_edges(net, s);
    })
    .into_iter()
    .fold((0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Per-vertex weighted instance participation over a vertex set.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeVector {
    /// The vertex set `W`, sorted.
    pub members: Vec<VertexId>,
    /// Indexed by vertex id over the whole id space; zero outside `W`.
    pub values: Vec<f64>,
}

impl DegreeVector {
    pub fn get(&self, v: VertexId) -> f64 {
        self.values.get(v as usize).copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.members.iter().map(|&v| self.values[v as usize]).sum()
    }
}

/// Temporal motif degrees of every vertex of `net`.
pub fn degrees_of(net: &TemporalNetwork, query: &MotifQuery) -> DegreeVector {
    let n = net.id_space();
    let parts = par_fold(net, query, || vec![0.0f64; n], |acc, s, h| {
        let w = query.weight.weigh_edges(net, s);
        for &v in h {
            acc[v as usize] += w;
        }
    });
    let mut values = vec![0.0; n];
    for part in parts {
        for (a, b) in values.iter_mut().zip(part) {
            *a += b;
        }
    }
    DegreeVector { members: net.vertices().to_vec(), values }
}

/// `tau(W)`: total weight of the instances of `T[W]`.
pub fn total_weight(net: &TemporalNetwork, w: &[VertexId], query: &MotifQuery) -> crate::Result<f64> {
    Ok(count_and_weigh(&net.induced(w)?, query).1)
}

/// Temporal motif degrees within `T[W]`.
pub fn degree_vector(net: &TemporalNetwork, w: &[VertexId], query: &MotifQuery) -> crate::Result<DegreeVector> {
    Ok(degrees_of(&net.induced(w)?, query))
}

/// `rho(W) = tau(W) / |W|`, with `rho(empty) = 0`.
pub fn density(net: &TemporalNetwork, w: &[VertexId], query: &MotifQuery) -> crate::Result<f64> {
    if w.is_empty() {
        return Ok(0.0);
    }
    let sub = net.induced(w)?;
    Ok(count_and_weigh(&sub, query).1 / sub.num_vertices() as f64)
}
