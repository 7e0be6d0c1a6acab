//! The weighted catalog of k-vertex sets that host at least one
//! delta-instance, with per-vertex degree accumulators that can be updated
//! as vertices are peeled.
//!
//! Entries are keyed by vertex set only. Every instance's vertex set is a
//! connected induced subgraph of the static projection containing a copy of
//! the motif skeleton, so no isomorphism test is needed.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::matching::{par_fold, MotifQuery};
use crate::tgraph::{TemporalNetwork, VertexId};

pub type VertexSet = SmallVec<[VertexId; 8]>;

#[derive(Clone, Debug, PartialEq)]
pub struct KcisEntry {
    /// Sorted vertex set of size k.
    pub vertices: VertexSet,
    /// Total weight of the instances on exactly these vertices.
    pub weight: f64,
    pub live: bool,
}

#[derive(Clone, Debug)]
pub struct KcisCatalog {
    k: usize,
    entries: Vec<KcisEntry>,
    /// Entry ids per vertex id (CSR).
    offsets: Vec<u32>,
    index: Vec<u32>,
    degrees: Vec<f64>,
    live_count: Vec<u32>,
    alive: Vec<bool>,
    alive_total: usize,
    live_entries: usize,
    live_weight: f64,
    instances: usize,
    min_instance_weight: f64,
}

#[derive(Default)]
struct Partial {
    sets: FxHashMap<VertexSet, f64>,
    count: usize,
    min_weight: f64,
}

impl KcisCatalog {
    /// One enumeration pass over `net`; each instance's weight goes to the
    /// entry of its vertex set. Zero-weight instances are ignored.
    pub fn build(net: &TemporalNetwork, query: &MotifQuery) -> Self {
        let parts = par_fold(
            net,
            query,
            || Partial { min_weight: f64::INFINITY, ..Default::default() },
            |acc, s, h| {
                let w = query.weight.weigh_edges(net, s);
                if w <= 0.0 {
                    return;
                }
                let mut key: VertexSet = h.into();
                key.sort_unstable();
                *acc.sets.entry(key).or_insert(0.0) += w;
                acc.count += 1;
                acc.min_weight = acc.min_weight.min(w);
            },
        );
        let mut merged: FxHashMap<VertexSet, f64> = FxHashMap::default();
        let mut instances = 0;
        let mut min_instance_weight = f64::INFINITY;
        for p in parts {
            instances += p.count;
            min_instance_weight = min_instance_weight.min(p.min_weight);
            let mut sets: Vec<_> = p.sets.into_iter().collect();
            sets.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            for (key, w) in sets {
                *merged.entry(key).or_insert(0.0) += w;
            }
        }
        let mut entries: Vec<KcisEntry> = merged
            .into_iter()
            .map(|(vertices, weight)| KcisEntry { vertices, weight, live: true })
            .collect();
        entries.sort_unstable_by(|a, b| a.vertices.cmp(&b.vertices));
        Self::from_entries(net, query.k(), entries, instances, min_instance_weight)
    }

    /// Catalog over arbitrary weighted `k`-sets, one item per instance.
    pub fn from_weighted_sets(net: &TemporalNetwork, k: usize, sets: impl IntoIterator<Item = (VertexSet, f64)>) -> Self {
        let mut merged: FxHashMap<VertexSet, f64> = FxHashMap::default();
        let mut instances = 0;
        let mut min_instance_weight = f64::INFINITY;
        for (mut key, w) in sets {
            if w <= 0.0 {
                continue;
            }
            key.sort_unstable();
            *merged.entry(key).or_insert(0.0) += w;
            instances += 1;
            min_instance_weight = min_instance_weight.min(w);
        }
        let mut entries: Vec<KcisEntry> = merged
            .into_iter()
            .map(|(vertices, weight)| KcisEntry { vertices, weight, live: true })
            .collect();
        entries.sort_unstable_by(|a, b| a.vertices.cmp(&b.vertices));
        Self::from_entries(net, k, entries, instances, min_instance_weight)
    }

    fn from_entries(net: &TemporalNetwork, k: usize, entries: Vec<KcisEntry>, instances: usize, min_instance_weight: f64) -> Self {
        let id_space = net.id_space();
        let mut offsets = vec![0u32; id_space + 1];
        for e in &entries {
            for &v in &e.vertices {
                offsets[v as usize + 1] += 1;
            }
        }
        for i in 0..id_space {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut index = vec![0u32; offsets[id_space] as usize];
        let mut degrees = vec![0.0; id_space];
        let mut live_count = vec![0u32; id_space];
        let mut live_weight = 0.0;
        for (id, e) in entries.iter().enumerate() {
            live_weight += e.weight;
            for &v in &e.vertices {
                index[cursor[v as usize] as usize] = id as u32;
                cursor[v as usize] += 1;
                degrees[v as usize] += e.weight;
                live_count[v as usize] += 1;
            }
        }
        let mut alive = vec![false; id_space];
        for &v in net.vertices() {
            alive[v as usize] = true;
        }
        Self {
            k,
            live_entries: entries.len(),
            entries,
            offsets,
            index,
            degrees,
            live_count,
            alive,
            alive_total: net.num_vertices(),
            live_weight,
            instances,
            min_instance_weight,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[KcisEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of instances folded into the catalog.
    pub fn instance_count(&self) -> usize {
        self.instances
    }

    /// Smallest single-instance weight, `None` when there are no instances.
    pub fn min_instance_weight(&self) -> Option<f64> {
        (self.instances > 0).then_some(self.min_instance_weight)
    }

    /// Entry ids containing `v`, live or not.
    pub fn entries_of(&self, v: VertexId) -> &[u32] {
        &self.index[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    /// Degree of `v` within the surviving vertex set.
    pub fn degree(&self, v: VertexId) -> f64 {
        self.degrees[v as usize]
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive.get(v as usize).copied().unwrap_or(false)
    }

    pub fn alive_count(&self) -> usize {
        self.alive_total
    }

    /// Surviving vertices, sorted.
    pub fn survivors(&self) -> Vec<VertexId> {
        (0..self.alive.len() as VertexId).filter(|&v| self.alive[v as usize]).collect()
    }

    /// `tau` of the surviving vertex set.
    pub fn live_weight(&self) -> f64 {
        self.live_weight
    }

    pub fn live_entry_count(&self) -> usize {
        self.live_entries
    }

    /// Removes `v`: every live entry containing it dies and its weight leaves
    /// the accumulators of its other vertices. Returns the surviving vertices
    /// whose degree changed.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<Vec<VertexId>> {
        match self.alive.get(v as usize) {
            None => return Err(Error::UnknownVertex(v)),
            Some(false) => return Err(Error::AlreadyRemoved(v)),
            Some(true) => {}
        }
        self.alive[v as usize] = false;
        self.alive_total -= 1;
        let mut touched = Vec::new();
        let (lo, hi) = (self.offsets[v as usize] as usize, self.offsets[v as usize + 1] as usize);
        for slot in lo..hi {
            let id = self.index[slot] as usize;
            if !self.entries[id].live {
                continue;
            }
            self.entries[id].live = false;
            let w = self.entries[id].weight;
            self.live_entries -= 1;
            self.live_weight -= w;
            for &u in &self.entries[id].vertices {
                let u = u as usize;
                self.live_count[u] -= 1;
                self.degrees[u] -= w;
                if self.live_count[u] == 0 {
                    // keep exact zeros once nothing is left
                    self.degrees[u] = 0.0;
                }
                if u != v as usize && !touched.contains(&(u as VertexId)) {
                    touched.push(u as VertexId);
                }
            }
        }
        if self.live_entries == 0 {
            self.live_weight = 0.0;
        }
        Ok(touched)
    }

    /// Exact `tau(W)` from the entries fully inside `W` (given as a mask).
    pub fn weight_within(&self, member: &[bool]) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.vertices.iter().all(|&v| member[v as usize]))
            .map(|e| e.weight)
            .sum()
    }
}

pub fn build_catalog(net: &TemporalNetwork, query: &MotifQuery) -> KcisCatalog {
    KcisCatalog::build(net, query)
}
