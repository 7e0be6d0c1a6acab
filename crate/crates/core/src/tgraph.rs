//! Temporal network storage, edge-list ingestion and projections.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// A directed, timestamped edge. `tie` is the rank of the edge after the
/// stable sort at load time, so `(time, tie)` is a strict total order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemporalEdge {
    pub src: VertexId,
    pub dst: VertexId,
    pub time: f64,
    pub tie: u64,
}

impl TemporalEdge {
    pub fn is_self_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// Compressed adjacency: for each vertex id, the positions of its edges in
/// increasing (time, tie) order.
#[derive(Clone, Debug, Default)]
struct Csr {
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl Csr {
    fn build(id_space: usize, edges: &[TemporalEdge], key: impl Fn(&TemporalEdge) -> VertexId) -> Self {
        let mut offsets = vec![0u32; id_space + 1];
        for e in edges {
            offsets[key(e) as usize + 1] += 1;
        }
        for i in 0..id_space {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut items = vec![0u32; edges.len()];
        for (pos, e) in edges.iter().enumerate() {
            let slot = &mut cursor[key(e) as usize];
            items[*slot as usize] = pos as u32;
            *slot += 1;
        }
        Self { offsets, items }
    }

    fn get(&self, v: VertexId) -> &[u32] {
        let v = v as usize;
        if v + 1 >= self.offsets.len() {
            return &[];
        }
        &self.items[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }
}

#[derive(Debug)]
struct Labels {
    names: Vec<String>,
    ids: HashMap<String, VertexId>,
}

/// A temporal network `T = (V, E)`.
///
/// Vertex ids are dense in `0..id_space()`. Induced subnetworks keep the id
/// space (and labels) of the network they were taken from; their vertex set
/// is the subset they were induced on.
#[derive(Clone, Debug)]
pub struct TemporalNetwork {
    labels: Arc<Labels>,
    vertices: Vec<VertexId>,
    edges: Vec<TemporalEdge>,
    out_adj: Csr,
    in_adj: Csr,
}

impl PartialEq for TemporalNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl TemporalNetwork {
    fn assemble(labels: Arc<Labels>, vertices: Vec<VertexId>, edges: Vec<TemporalEdge>) -> Self {
        let id_space = labels.names.len();
        let out_adj = Csr::build(id_space, &edges, |e| e.src);
        let in_adj = Csr::build(id_space, &edges, |e| e.dst);
        Self { labels, vertices, edges, out_adj, in_adj }
    }

    /// Builds a network over externally labelled vertices. Ids are assigned
    /// in first-appearance order; edges are stably sorted by timestamp and
    /// their tie index is their rank after sorting.
    pub fn from_labeled_edges<S: AsRef<str>>(edges: impl IntoIterator<Item = (S, S, f64)>) -> Self {
        let mut names = Vec::new();
        let mut ids: HashMap<String, VertexId> = HashMap::new();
        let mut intern = |s: &str| -> VertexId {
            if let Some(&id) = ids.get(s) {
                return id;
            }
            let id = names.len() as VertexId;
            names.push(s.to_string());
            ids.insert(s.to_string(), id);
            id
        };
        let raw: Vec<(VertexId, VertexId, f64)> = edges
            .into_iter()
            .map(|(u, v, t)| (intern(u.as_ref()), intern(v.as_ref()), t))
            .collect();
        Self::from_raw(Labels { names, ids }, raw)
    }

    /// Builds a network on vertices `0..n` labelled by their decimal id.
    pub fn from_indexed_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let ids = names.iter().enumerate().map(|(i, s)| (s.clone(), i as VertexId)).collect();
        let raw: Vec<_> = edges.into_iter().collect();
        for &(u, v, _) in &raw {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint out of range");
        }
        Self::from_raw(Labels { names, ids }, raw)
    }

    fn from_raw(labels: Labels, mut raw: Vec<(VertexId, VertexId, f64)>) -> Self {
        raw.sort_by(|a, b| a.2.total_cmp(&b.2));
        let edges = raw
            .into_iter()
            .enumerate()
            .map(|(tie, (src, dst, time))| TemporalEdge { src, dst, time, tie: tie as u64 })
            .collect();
        let vertices = (0..labels.names.len() as VertexId).collect();
        Self::assemble(Arc::new(labels), vertices, edges)
    }

    pub fn empty() -> Self {
        Self::from_raw(Labels { names: Vec::new(), ids: HashMap::new() }, Vec::new())
    }

    /// Number of vertices in this network (`n`).
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Number of temporal edges (`m`).
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Size of the vertex id space shared with the network this was induced from.
    pub fn id_space(&self) -> usize {
        self.labels.names.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels.names[v as usize]
    }

    pub fn id_of(&self, label: &str) -> Option<VertexId> {
        self.labels.ids.get(label).copied()
    }

    /// Positions of the edges leaving `v`, in time order.
    pub fn out_edges(&self, v: VertexId) -> &[u32] {
        self.out_adj.get(v)
    }

    /// Positions of the edges entering `v`, in time order.
    pub fn in_edges(&self, v: VertexId) -> &[u32] {
        self.in_adj.get(v)
    }

    /// `(t_min, t_max)` over all edges, `None` when there are no edges.
    pub fn time_range(&self) -> Option<(f64, f64)> {
        Some((self.edges.first()?.time, self.edges.last()?.time))
    }

    /// Mean gap between consecutive edge timestamps; `None` with fewer than two edges.
    pub fn mean_inter_time(&self) -> Option<f64> {
        let (lo, hi) = self.time_range()?;
        (self.edges.len() >= 2).then(|| (hi - lo) / (self.edges.len() - 1) as f64)
    }

    /// Translates internal ids to the original labels.
    pub fn labels_of(&self, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|&v| self.label(v).to_string()).collect()
    }

    /// Resolves original labels to internal ids.
    pub fn ids_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<VertexId>> {
        labels
            .iter()
            .map(|l| {
                self.id_of(l.as_ref())
                    .ok_or_else(|| Error::Parameter(format!("unknown vertex label '{}'", l.as_ref())))
            })
            .collect()
    }

    /// The subnetwork `T[W]`: vertex set `W` and every edge with both
    /// endpoints in `W`. Edge order and tie indices are preserved.
    pub fn induced(&self, w: &[VertexId]) -> Result<TemporalNetwork> {
        let mut member = vec![false; self.id_space()];
        for &v in w {
            if !self.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
            member[v as usize] = true;
        }
        Ok(self.induced_by_mask(&member))
    }

    /// Same as [`induced`](Self::induced) with membership given as a mask over
    /// the id space. Ids outside this network's vertex set are ignored.
    pub fn induced_by_mask(&self, member: &[bool]) -> TemporalNetwork {
        let vertices: Vec<VertexId> = self.vertices.iter().copied().filter(|&v| member[v as usize]).collect();
        let edges: Vec<TemporalEdge> = self
            .edges
            .iter()
            .filter(|e| member[e.src as usize] && member[e.dst as usize])
            .copied()
            .collect();
        Self::assemble(Arc::clone(&self.labels), vertices, edges)
    }

    /// Maximum number of edges whose timestamps fit in a closed window of
    /// length `delta`, sweeping a window anchored at each edge.
    pub fn max_window_edges(&self, delta: f64) -> usize {
        let mut best = 0;
        let mut hi = 0;
        for lo in 0..self.edges.len() {
            let limit = self.edges[lo].time + delta;
            if hi < lo {
                hi = lo;
            }
            while hi < self.edges.len() && self.edges[hi].time <= limit {
                hi += 1;
            }
            best = best.max(hi - lo);
        }
        best
    }

    /// Range of edge positions with `lo <= time <= hi`.
    pub fn edge_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.edges.partition_point(|e| e.time < lo);
        let end = self.edges.partition_point(|e| e.time <= hi);
        start..end.max(start)
    }

    pub fn static_projection(&self, mode: ProjectionMode) -> StaticProjection {
        StaticProjection::new(self, mode)
    }

    /// Serializes the edges as a `src dst time` edge list using original labels.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", self.label(e.src), self.label(e.dst), e.time));
        }
        out
    }
}

/// Parses an edge list: one `src dst timestamp` edge per line, whitespace or
/// comma separated. Blank lines and lines starting with `#` are skipped;
/// columns after the third are ignored.
pub fn parse_edge_list(text: &str) -> Result<TemporalNetwork> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty());
        let (Some(u), Some(v), Some(t)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse { line: idx + 1, msg: format!("expected 'src dst timestamp', got '{line}'") });
        };
        let time: f64 = t
            .parse()
            .map_err(|_| Error::Parse { line: idx + 1, msg: format!("bad timestamp '{t}'") })?;
        if !time.is_finite() {
            return Err(Error::Parse { line: idx + 1, msg: format!("non-finite timestamp '{t}'") });
        }
        raw.push((u, v, time));
    }
    Ok(TemporalNetwork::from_labeled_edges(raw))
}

/// Loads an edge-list file.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<TemporalNetwork> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectionMode {
    Directed,
    Undirected,
}

/// The static network obtained by dropping timestamps and collapsing
/// parallel temporal edges (and, when undirected, directions).
#[derive(Clone, Debug)]
pub struct StaticProjection {
    pub mode: ProjectionMode,
    /// Distinct pairs, sorted. Undirected pairs are stored as `(min, max)`.
    pub edges: Vec<(VertexId, VertexId)>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
}

impl StaticProjection {
    fn new(t: &TemporalNetwork, mode: ProjectionMode) -> Self {
        let mut edges: Vec<(VertexId, VertexId)> = t
            .edges()
            .iter()
            .map(|e| match mode {
                ProjectionMode::Directed => (e.src, e.dst),
                ProjectionMode::Undirected => (e.src.min(e.dst), e.src.max(e.dst)),
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut out_adj = vec![Vec::new(); t.id_space()];
        let mut in_adj = vec![Vec::new(); t.id_space()];
        for &(u, v) in &edges {
            out_adj[u as usize].push(v);
            in_adj[v as usize].push(u);
            if mode == ProjectionMode::Undirected && u != v {
                out_adj[v as usize].push(u);
                in_adj[u as usize].push(v);
            }
        }
        Self { mode, edges, out_adj, in_adj }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v as usize]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v as usize]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let key = match self.mode {
            ProjectionMode::Directed => (u, v),
            ProjectionMode::Undirected => (u.min(v), u.max(v)),
        };
        self.edges.binary_search(&key).is_ok()
    }
}
