//! Brute-force ground truth for small networks, the static 2-path density,
//! and fixture generators.

use itertools::Itertools;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactflow::solve_catalog;
use crate::kcis::{KcisCatalog, VertexSet};
use crate::matching::{DeltaInstance, MotifQuery};
use crate::motif::TemporalMotif;
use crate::result::DensityResult;
use crate::tgraph::{StaticProjection, TemporalNetwork, VertexId};

pub const MAX_ORACLE_EDGES: usize = 14;
pub const MAX_ORACLE_VERTICES: usize = 16;

/// Every delta-instance, found by testing all increasing `ell`-subsets of
/// edge positions. Sorted.
pub fn brute_force_instances(net: &TemporalNetwork, motif: &TemporalMotif, delta: f64) -> Result<Vec<DeltaInstance>> {
    let m = net.num_edges();
    if m > MAX_ORACLE_EDGES {
        return Err(Error::TooLarge(format!("oracle handles at most {MAX_ORACLE_EDGES} edges, got {m}")));
    }
    let ell = motif.num_edges();
    let k = motif.num_vertices();
    let edges = net.edges();
    let mut out = Vec::new();
    for combo in (0..m).combinations(ell) {
        let (first, last) = (&edges[combo[0]], &edges[combo[ell - 1]]);
        if last.time - first.time > delta {
            continue;
        }
        let mut map: Vec<Option<VertexId>> = vec![None; k];
        let mut ok = true;
        for (&(x, y), &p) in motif.edges().iter().zip(&combo) {
            let e = &edges[p];
            for (slot, v) in [(x, e.src), (y, e.dst)] {
                match map[slot] {
                    None => map[slot] = Some(v),
                    Some(u) if u == v => {}
                    Some(_) => ok = false,
                }
            }
        }
        if !ok {
            continue;
        }
        let vertices: SmallVec<[VertexId; 8]> = map.into_iter().map(|v| v.unwrap()).collect();
        if vertices.iter().duplicates().next().is_some() {
            continue;
        }
        out.push(DeltaInstance { edges: combo.iter().map(|&p| p as u32).collect(), vertices });
    }
    out.sort();
    Ok(out)
}

/// Densest vertex set by scanning every nonempty subset. Ties go to the
/// lexicographically smallest set.
pub fn brute_force_opt(net: &TemporalNetwork, query: &MotifQuery) -> Result<DensityResult> {
    let n = net.num_vertices();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge(format!("oracle handles at most {MAX_ORACLE_VERTICES} vertices, got {n}")));
    }
    let inst = brute_force_instances(net, &query.motif, query.delta)?;
    let verts = net.vertices();
    let slot = |v: VertexId| verts.binary_search(&v).unwrap();
    let weighted: Vec<(u32, f64)> = inst
        .iter()
        .map(|s| (s.vertices.iter().fold(0u32, |m, &v| m | 1 << slot(v)), query.weight.weigh(net, s)))
        .collect();
    if weighted.is_empty() {
        return Ok(DensityResult::empty());
    }
    let mut best: Option<(f64, f64, Vec<VertexId>)> = None;
    for mask in 1u32..(1 << n) {
        let tau: f64 = weighted.iter().filter(|(m, _)| m & mask == *m).map(|x| x.1).sum();
        let rho = tau / mask.count_ones() as f64;
        let set: Vec<VertexId> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        let better = match &best {
            None => true,
            Some((r, _, s)) => rho > *r || (rho == *r && set < *s),
        };
        if better {
            best = Some((rho, tau, set));
        }
    }
    let (density, weight, vertices) = best.unwrap();
    if density == 0.0 {
        return Ok(DensityResult::empty());
    }
    Ok(DensityResult { vertices, weight, density, estimated_density: None, iterations: 1 << n, best_effort: false })
}

/// Directed 2-paths `u -> v -> w` on distinct vertices of `h`, per vertex
/// of `h`.
pub fn static_2path_density(proj: &StaticProjection, h: &[VertexId]) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    let mut member = vec![false; h.iter().map(|&v| v as usize + 1).max().unwrap()];
    for &v in h {
        member[v as usize] = true;
    }
    let inside = |v: VertexId| member.get(v as usize).copied().unwrap_or(false);
    let mut paths = 0u64;
    for &v in h {
        for &u in proj.predecessors(v).iter().filter(|&&u| u != v && inside(u)) {
            paths += proj.successors(v).iter().filter(|&&w| w != v && w != u && inside(w)).count() as u64;
        }
    }
    paths as f64 / h.len() as f64
}

/// Vertex sets of all directed static 2-paths of `net`, one per path.
pub fn static_2paths(net: &TemporalNetwork, proj: &StaticProjection) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for &v in net.vertices() {
        for &u in proj.predecessors(v).iter().filter(|&&u| u != v) {
            for &w in proj.successors(v).iter().filter(|&&w| w != v && w != u) {
                out.push(SmallVec::from_slice(&[u, v, w]));
            }
        }
    }
    out
}

/// Exact maximizer of the static 2-path density.
pub fn static_2path_opt(net: &TemporalNetwork, proj: &StaticProjection) -> DensityResult {
    let catalog = KcisCatalog::from_weighted_sets(net, 3, static_2paths(net, proj).into_iter().map(|s| (s, 1.0)));
    solve_catalog(&catalog, net).result
}

/// The static-versus-temporal separation network and its two parts.
#[derive(Clone, Debug)]
pub struct SeparationFixture {
    pub net: TemporalNetwork,
    /// Vertices of the three-layer part whose static paths run backwards
    /// in time.
    pub v1: Vec<VertexId>,
    /// Vertices of the small part whose paths respect time.
    pub v2: Vec<VertexId>,
}

/// Three layers of `n/4` vertices with complete layer-1-to-2 edges at time
/// 2 and layer-2-to-3 edges at time 1, plus three layers of `n/12` vertices
/// with the same wiring at times 1 then 2.
pub fn separation_fixture(n: usize) -> Result<SeparationFixture> {
    if n < 12 || n % 12 != 0 {
        return Err(Error::Parameter(format!("n must be a positive multiple of 12, got {n}")));
    }
    let mut edges = Vec::new();
    let mut layered = |prefix: &str, width: usize, t12: f64, t23: f64| {
        for layer in 0..2 {
            let t = if layer == 0 { t12 } else { t23 };
            for i in 0..width {
                for j in 0..width {
                    edges.push((format!("{prefix}{}_{i}", layer + 1), format!("{prefix}{}_{j}", layer + 2), t));
                }
            }
        }
    };
    layered("a", n / 4, 2.0, 1.0);
    layered("b", n / 12, 1.0, 2.0);
    let net = TemporalNetwork::from_labeled_edges(edges);
    let (v1, v2) = net.vertices().iter().partition(|&&v| net.label(v).starts_with('a'));
    Ok(SeparationFixture { net, v1, v2 })
}

/// Small hand-built networks and seeded generators.
pub mod fixtures {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::tgraph::TemporalNetwork;

    pub const TOY4: &str = "1 2 1\n2 3 2\n3 4 3\n2 3 5\n";

    /// Four vertices, four edges: `1->2 @1, 2->3 @2, 3->4 @3, 2->3 @5`.
    pub fn toy4() -> TemporalNetwork {
        crate::tgraph::parse_edge_list(TOY4).unwrap()
    }

    pub const FIGURE1: &str = "\
v1 v2 1
v7 v4 2
v7 v3 3
v2 v3 4
v6 v7 5
v3 v6 6
v2 v3 7
v1 v5 8
v3 v4 9
v3 v1 10
v5 v3 12
v4 v5 13
v5 v3 14
v4 v2 15
v7 v6 16
v3 v1 17
v1 v6 19
v6 v5 20
";

    /// Seven vertices, eighteen edges. For the cyclic triangle at
    /// `delta = 10` it has six instances on four vertex sets, and the
    /// densest set is `v1..v5` with density 6/5.
    pub fn figure1() -> TemporalNetwork {
        crate::tgraph::parse_edge_list(FIGURE1).unwrap()
    }

    /// `m` edges with distinct uniform endpoints among `n` vertices and
    /// integer times in `0..t_max`, so timestamps repeat.
    pub fn random_network(seed: u64, n: u32, m: usize, t_max: u32) -> TemporalNetwork {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(u32, u32, f64)> = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let mut v = rng.gen_range(0..n - 1);
                if v >= u {
                    v += 1;
                }
                (u, v, rng.gen_range(0..t_max) as f64)
            })
            .collect();
        TemporalNetwork::from_indexed_edges(n as usize, edges)
    }

    /// Parameters of the synthetic interaction network.
    #[derive(Clone, Debug)]
    pub struct SyntheticSpec {
        pub vertices: u32,
        pub edges: usize,
        pub span: f64,
        /// Size of the contact circle each conversation draws from.
        pub circle: u32,
        /// Mean number of messages per conversation.
        pub chain: f64,
        /// Mean gap between messages of one conversation.
        pub gap: f64,
        /// Size of the planted group that talks in bursts.
        pub community: u32,
        /// Fraction of conversations inside the planted group.
        pub community_share: f64,
    }

    impl Default for SyntheticSpec {
        fn default() -> Self {
            Self {
                vertices: 44_000,
                edges: 545_000,
                span: 29_200_000.0,
                circle: 6,
                chain: 4.0,
                gap: 3_600.0,
                community: 40,
                community_share: 0.01,
            }
        }
    }

    /// Conversations: short chains of messages among a small contact
    /// circle, started at uniform times by vertices with skewed activity.
    /// A planted group holds a small share of the conversations. Vertex `i`
    /// is labeled `i`.
    pub fn synthetic_network(seed: u64, spec: &SyntheticSpec) -> TemporalNetwork {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = spec.vertices;
        let circle = spec.circle.clamp(2, n);
        let group = spec.community.min(n);
        let mut edges = Vec::with_capacity(spec.edges);
        while edges.len() < spec.edges {
            let (base, size) = if group >= 2 && rng.gen_bool(spec.community_share) {
                (n - group, group)
            } else {
                let x: f64 = rng.gen();
                let center = ((x * x * x) * n as f64) as u32 % n;
                (center.min(n - circle), circle)
            };
            let mut t = rng.gen::<f64>() * spec.span;
            let mut u = base + rng.gen_range(0..size);
            loop {
                let mut v = base + rng.gen_range(0..size - 1);
                if v >= u {
                    v += 1;
                }
                edges.push((u, v, t.floor()));
                if edges.len() == spec.edges || rng.gen::<f64>() < 1.0 / spec.chain {
                    break;
                }
                t += -spec.gap * (1.0 - rng.gen::<f64>()).ln();
                // replies usually come from the receiver
                if rng.gen_bool(0.7) {
                    u = v;
                }
            }
        }
        TemporalNetwork::from_indexed_edges(n as usize, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{enumerate_instances, WeightFunction};
    use crate::motif::library;
    use crate::tgraph::ProjectionMode;

    #[test]
    fn toy4_instances() {
        let t = fixtures::toy4();
        let got = brute_force_instances(&t, &library::two_path(), 2.0).unwrap();
        assert_eq!(got, enumerate_instances(&t, &library::two_path(), 2.0));
        assert_eq!(got.len(), 2);
        let wide = brute_force_instances(&t, &library::two_path(), 1e9).unwrap();
        assert_eq!(wide.len(), 3);
        assert!(wide.iter().any(|s| s.edges.as_slice() == [0, 3]));
        let long = TemporalMotif::new(vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert!(brute_force_instances(&t, &long, 10.0).unwrap().is_empty());
    }

    #[test]
    fn refuses_large_inputs() {
        let big = fixtures::random_network(1, 20, 15, 5);
        assert!(matches!(brute_force_instances(&big, &library::two_path(), 1.0), Err(Error::TooLarge(_))));
        let wide = fixtures::random_network(1, 40, 14, 5);
        let q = MotifQuery::new(library::two_path(), 1.0, WeightFunction::Constant);
        if wide.num_vertices() > MAX_ORACLE_VERTICES {
            assert!(matches!(brute_force_opt(&wide, &q), Err(Error::TooLarge(_))));
        }
    }

    #[test]
    fn toy4_opt() {
        let t = fixtures::toy4();
        let q = MotifQuery::new(library::two_path(), 2.0, WeightFunction::Constant);
        let r = brute_force_opt(&t, &q).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3]);
        assert_eq!(r.density, 0.5);
        let single = crate::tgraph::parse_edge_list("a b 1\nb c 2\n").unwrap();
        let r = brute_force_opt(&single, &q).unwrap();
        assert_eq!(r.len(), 3);
        let none = crate::tgraph::parse_edge_list("a b 1\nc d 2\n").unwrap();
        assert_eq!(brute_force_opt(&none, &q).unwrap(), DensityResult::empty());
    }

    #[test]
    fn separation_small() {
        let f = separation_fixture(12).unwrap();
        let proj = f.net.static_projection(ProjectionMode::Directed);
        assert_eq!((f.v1.len(), f.v2.len()), (9, 3));
        assert_eq!(f.net.induced(&f.v1).unwrap().num_edges(), 18);
        assert_eq!(f.net.induced(&f.v2).unwrap().num_edges(), 2);
        assert_eq!(static_2path_density(&proj, &f.v1), 3.0);
        assert!((static_2path_density(&proj, &f.v2) - 1.0 / 3.0).abs() < 1e-15);
        let no_path: Vec<VertexId> = f.v1[..2].to_vec();
        assert_eq!(static_2path_density(&proj, &no_path), 0.0);
        assert_eq!(static_2path_opt(&f.net, &proj).vertices, f.v1);
        assert!(separation_fixture(13).is_err());
        assert!(separation_fixture(0).is_err());
    }

    #[test]
    fn generators_are_seeded() {
        assert_eq!(fixtures::random_network(3, 8, 12, 6), fixtures::random_network(3, 8, 12, 6));
        let spec = fixtures::SyntheticSpec { vertices: 200, edges: 2000, span: 1e5, community: 10, ..Default::default() };
        let a = fixtures::synthetic_network(1, &spec);
        assert_eq!(a.num_edges(), 2000);
        assert_eq!(a, fixtures::synthetic_network(1, &spec));
    }
}
