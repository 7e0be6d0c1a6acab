//! Temporal motifs: a small directed multigraph together with a total order
//! on its edges, written as the edge sequence in that order.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Largest motif vertex count accepted by the parser.
pub const MAX_MOTIF_VERTICES: usize = 16;

/// A `k`-vertex `ell`-edge temporal motif. `edges[i]` is the `i`-th edge in
/// the required arrival order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalMotif {
    k: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
}

impl TemporalMotif {
    /// Validates and builds a motif on vertices `0..k` where `k` is one more
    /// than the largest id used.
    pub fn new(edges: Vec<(usize, usize)>) -> Result<Self> {
        let k = edges.iter().map(|&(x, y)| x.max(y) + 1).max().unwrap_or(0);
        let labels = (0..k).map(|i| i.to_string()).collect();
        Self::validated(k, edges, labels)
    }

    fn validated(k: usize, edges: Vec<(usize, usize)>, labels: Vec<String>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidMotif(format!("needs at least 2 vertices, got {k}")));
        }
        if k > MAX_MOTIF_VERTICES {
            return Err(Error::InvalidMotif(format!("at most {MAX_MOTIF_VERTICES} vertices supported, got {k}")));
        }
        if edges.len() < 2 {
            return Err(Error::InvalidMotif(format!("needs at least 2 edges, got {}", edges.len())));
        }
        if let Some(&(x, _)) = edges.iter().find(|(x, y)| x == y) {
            return Err(Error::InvalidMotif(format!("self-loop on motif vertex {x}")));
        }
        let mut seen = vec![false; k];
        for &(x, y) in &edges {
            seen[x] = true;
            seen[y] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidMotif("every vertex must appear in an edge".into()));
        }
        let motif = Self { k, edges, labels };
        if !motif.is_weakly_connected() {
            return Err(Error::InvalidMotif("motif is not weakly connected".into()));
        }
        Ok(motif)
    }

    fn is_weakly_connected(&self) -> bool {
        let sk = self.skeleton();
        let mut seen = vec![false; self.k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in sk.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn num_vertices(&self) -> usize {
        self.k
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in arrival order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The undirected simple graph underlying the motif.
    pub fn skeleton(&self) -> MotifSkeleton {
        let mut adj = vec![Vec::new(); self.k];
        for &(x, y) in &self.edges {
            if !adj[x].contains(&y) {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        MotifSkeleton { adj }
    }

    /// One `x y` line per edge, in arrival order, using the original labels.
    pub fn to_text(&self) -> String {
        self.edges
            .iter()
            .map(|&(x, y)| format!("{} {}\n", self.labels[x], self.labels[y]))
            .collect()
    }
}

impl std::fmt::Display for TemporalMotif {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|&(x, y)| format!("{x}->{y}")).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// Parses one `x y` edge per line, listed in arrival order. Labels are
/// arbitrary tokens mapped to `0..k` by first appearance. Blank lines and
/// `#` comments are skipped.
pub fn parse_motif(text: &str) -> Result<TemporalMotif> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty());
        let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse { line: idx + 1, msg: format!("expected 'x y', got '{line}'") });
        };
        let mut intern = |s| {
            *ids.entry(s).or_insert_with(|| {
                labels.push(s.to_string());
                labels.len() - 1
            })
        };
        let (x, y) = (intern(x), intern(y));
        edges.push((x, y));
    }
    TemporalMotif::validated(labels.len(), edges, labels)
}

pub fn load_motif(path: impl AsRef<Path>) -> Result<TemporalMotif> {
    parse_motif(&fs::read_to_string(path)?)
}

/// Undirected simple graph on the motif vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotifSkeleton {
    adj: Vec<Vec<usize>>,
}

impl MotifSkeleton {
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }
}

/// Motifs bundled with the crate, addressable by name.
pub mod library {
    use super::{parse_motif, TemporalMotif};

    const BUNDLED: &[(&str, &str)] = &[
        ("triangle", include_str!("../motifs/triangle.txt")),
        ("2path", include_str!("../motifs/2path.txt")),
        ("back-and-forth", include_str!("../motifs/back-and-forth.txt")),
        ("M1", include_str!("../motifs/M1.txt")),
        ("M2", include_str!("../motifs/M2.txt")),
        ("M3", include_str!("../motifs/M3.txt")),
        ("M4", include_str!("../motifs/M4.txt")),
        ("M5", include_str!("../motifs/M5.txt")),
        ("M6", include_str!("../motifs/M6.txt")),
        ("M7", include_str!("../motifs/M7.txt")),
        ("M8", include_str!("../motifs/M8.txt")),
        ("M9", include_str!("../motifs/M9.txt")),
        ("M10", include_str!("../motifs/M10.txt")),
    ];

    pub fn names() -> impl Iterator<Item = &'static str> {
        BUNDLED.iter().map(|(n, _)| *n)
    }

    pub fn get(name: &str) -> Option<TemporalMotif> {
        BUNDLED
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, text)| parse_motif(text).expect("bundled motif is valid"))
    }

    pub fn triangle() -> TemporalMotif {
        get("triangle").unwrap()
    }

    pub fn two_path() -> TemporalMotif {
        get("2path").unwrap()
    }

    pub fn back_and_forth() -> TemporalMotif {
        get("back-and-forth").unwrap()
    }
}
