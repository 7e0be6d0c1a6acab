//! Exact densest subgraph by bisection over `zeta` with repeated
//! `(s, z)`-min-cuts on the catalog flow network.

use std::collections::VecDeque;

use crate::kcis::{build_catalog, KcisCatalog};
use crate::matching::MotifQuery;
use crate::result::DensityResult;
use crate::tgraph::{TemporalNetwork, VertexId};

#[derive(Clone, Debug)]
struct Arc {
    to: u32,
    cap: f64,
    rev: u32,
}

/// Flow network: source, one node per catalog entry, one node per network
/// vertex, sink. Only the sink arcs depend on `zeta`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
    base: Vec<Vec<f64>>,
    sink_arcs: Vec<(u32, u32)>,
    vertex_of: Vec<VertexId>,
    entries: usize,
    infinite: f64,
    eps: f64,
}

impl FlowNetwork {
    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    /// Forward arcs only.
    pub fn num_arcs(&self) -> usize {
        self.base.iter().flatten().filter(|c| c.is_finite()).count()
    }

    pub fn num_entry_nodes(&self) -> usize {
        self.entries
    }

    /// Graph vertices in node order.
    pub fn graph_vertices(&self) -> &[VertexId] {
        &self.vertex_of
    }

    /// Capacity standing in for infinity on entry-to-vertex arcs.
    pub fn infinite(&self) -> f64 {
        self.infinite
    }

    /// Forward arcs with their capacity at `zeta`, as `(from, to, cap)`.
    pub fn arcs(&self, zeta: f64) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        let sink = self.sink();
        for (u, arcs) in self.adj.iter().enumerate() {
            for (i, a) in arcs.iter().enumerate() {
                let c = self.base[u][i];
                if c.is_nan() {
                    continue;
                }
                let c = if a.to as usize == sink { zeta } else { c };
                out.push((u, a.to as usize, c));
            }
        }
        out
    }

    fn reset(&mut self, zeta: f64) {
        for (u, arcs) in self.adj.iter_mut().enumerate() {
            for (i, a) in arcs.iter_mut().enumerate() {
                let c = self.base[u][i];
                a.cap = if c.is_nan() { 0.0 } else { c };
            }
        }
        for &(u, i) in &self.sink_arcs {
            self.adj[u as usize][i as usize].cap = zeta;
        }
    }

    /// Maximum flow value at `zeta` (Dinic).
    pub fn max_flow(&mut self, zeta: f64) -> f64 {
        self.reset(zeta);
        let (s, t) = (self.source(), self.sink());
        let n = self.adj.len();
        let mut flow = 0.0;
        let mut level = vec![u32::MAX; n];
        let mut iter = vec![0usize; n];
        loop {
            level.fill(u32::MAX);
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for a in &self.adj[u] {
                    if a.cap > self.eps && level[a.to as usize] == u32::MAX {
                        level[a.to as usize] = level[u] + 1;
                        queue.push_back(a.to as usize);
                    }
                }
            }
            if level[t] == u32::MAX {
                return flow;
            }
            iter.fill(0);
            loop {
                let pushed = self.augment(s, t, f64::INFINITY, &level, &mut iter);
                if pushed <= self.eps {
                    break;
                }
                flow += pushed;
            }
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: f64, level: &[u32], iter: &mut [usize]) -> f64 {
        if u == t {
            return limit;
        }
        while iter[u] < self.adj[u].len() {
            let Arc { to, cap, rev } = self.adj[u][iter[u]];
            let v = to as usize;
            if cap > self.eps && level[v] == level[u] + 1 {
                let got = self.augment(v, t, limit.min(cap), level, iter);
                if got > self.eps {
                    let i = iter[u];
                    self.adj[u][i].cap -= got;
                    self.adj[v][rev as usize].cap += got;
                    return got;
                }
            }
            iter[u] += 1;
        }
        0.0
    }

    /// Source side of a minimum cut at `zeta`: the nodes reachable from the
    /// source in the residual graph of a maximum flow.
    pub fn min_cut(&mut self, zeta: f64) -> Vec<bool> {
        self.max_flow(zeta);
        let mut seen = vec![false; self.adj.len()];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            for a in &self.adj[u] {
                if a.cap > self.eps && !seen[a.to as usize] {
                    seen[a.to as usize] = true;
                    stack.push(a.to as usize);
                }
            }
        }
        seen
    }

    /// Graph vertices on the source side of a minimum cut, sorted.
    pub fn cut_vertices(&mut self, zeta: f64) -> Vec<VertexId> {
        let side = self.min_cut(zeta);
        let first = 1 + self.entries;
        let mut out: Vec<VertexId> = self
            .vertex_of
            .iter()
            .enumerate()
            .filter(|(i, _)| side[first + i])
            .map(|(_, &v)| v)
            .collect();
        out.sort_unstable();
        out
    }
}

/// Builds the flow network over the live catalog entries and the vertices
/// of `net`.
pub fn build_flow(catalog: &KcisCatalog, net: &TemporalNetwork) -> FlowNetwork {
    let entries: Vec<_> = catalog.entries().iter().filter(|e| e.live).collect();
    let vertex_of = net.vertices().to_vec();
    let mut node_of = vec![u32::MAX; net.id_space()];
    let first = 1 + entries.len();
    for (i, &v) in vertex_of.iter().enumerate() {
        node_of[v as usize] = (first + i) as u32;
    }
    let sink = first + vertex_of.len();
    let total: f64 = entries.iter().map(|e| e.weight).sum();
    let infinite = total + 1.0;

    let mut adj: Vec<Vec<Arc>> = vec![Vec::new(); sink + 1];
    // NaN marks a reverse arc in `base`
    let mut base: Vec<Vec<f64>> = vec![Vec::new(); sink + 1];
    let mut sink_arcs = Vec::new();
    let add = |adj: &mut Vec<Vec<Arc>>, base: &mut Vec<Vec<f64>>, u: usize, v: usize, cap: f64| {
        let (iu, iv) = (adj[u].len() as u32, adj[v].len() as u32);
        adj[u].push(Arc { to: v as u32, cap, rev: iv });
        adj[v].push(Arc { to: u as u32, cap: 0.0, rev: iu });
        base[u].push(cap);
        base[v].push(f64::NAN);
        iu
    };
    for (h, e) in entries.iter().enumerate() {
        add(&mut adj, &mut base, 0, 1 + h, e.weight);
        for &v in &e.vertices {
            add(&mut adj, &mut base, 1 + h, node_of[v as usize] as usize, infinite);
        }
    }
    for i in 0..vertex_of.len() {
        let idx = add(&mut adj, &mut base, first + i, sink, 0.0);
        sink_arcs.push(((first + i) as u32, idx));
    }
    FlowNetwork {
        adj,
        base,
        sink_arcs,
        vertex_of,
        entries: entries.len(),
        infinite,
        eps: infinite * 1e-13,
    }
}

/// Exact search outcome with the bisection bookkeeping.
#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub result: DensityResult,
    pub bisection_steps: usize,
    pub refinement_steps: usize,
    pub tau_min: f64,
}

fn density_of(catalog: &KcisCatalog, w: &[VertexId], id_space: usize) -> (f64, f64) {
    if w.is_empty() {
        return (0.0, 0.0);
    }
    let mut member = vec![false; id_space];
    for &v in w {
        member[v as usize] = true;
    }
    let t = catalog.weight_within(&member);
    (t, t / w.len() as f64)
}

/// Maximum-density vertex set.
pub fn solve_exact(net: &TemporalNetwork, query: &MotifQuery) -> DensityResult {
    solve_exact_detailed(net, query).result
}

pub fn solve_exact_detailed(net: &TemporalNetwork, query: &MotifQuery) -> ExactSolution {
    solve_catalog(&build_catalog(net, query), net)
}

/// Densest subset of the vertices of `net` for the weighted sets in
/// `catalog`.
pub fn solve_catalog(catalog: &KcisCatalog, net: &TemporalNetwork) -> ExactSolution {
    let Some(tau_min) = catalog.min_instance_weight() else {
        return ExactSolution { result: DensityResult::empty(), bisection_steps: 0, refinement_steps: 0, tau_min: 0.0 };
    };
    let mut flow = build_flow(catalog, net);
    let n = net.num_vertices() as f64;
    let (mut a, mut b) = (0.0, catalog.live_weight());
    let gap = tau_min / (n * (n - 1.0));
    let mut best: Vec<VertexId> = net.vertices().to_vec();
    let mut steps = 0;
    while b - a >= gap {
        let zeta = (a + b) / 2.0;
        let cut = flow.cut_vertices(zeta);
        if cut.is_empty() {
            b = zeta;
        } else {
            a = zeta;
            best = cut;
        }
        steps += 1;
    }

    // Dinkelbach steps from the bisection answer: a nonempty cut at
    // zeta = rho(best) with higher density means best was not optimal.
    let (mut tau, mut rho) = density_of(catalog, &best, net.id_space());
    let mut refinement_steps = 0;
    loop {
        let cut = flow.cut_vertices(rho);
        if cut.is_empty() || cut == best {
            break;
        }
        let (t, r) = density_of(catalog, &cut, net.id_space());
        if r <= rho * (1.0 + 1e-12) {
            break;
        }
        best = cut;
        tau = t;
        rho = r;
        refinement_steps += 1;
    }

    ExactSolution {
        result: DensityResult {
            vertices: best,
            weight: tau,
            density: rho,
            estimated_density: None,
            iterations: steps,
            best_effort: false,
        },
        bisection_steps: steps,
        refinement_steps,
        tau_min,
    }
}
