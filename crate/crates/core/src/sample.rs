//! Window sampling and unbiased estimates of motif degrees.
//!
//! A window of length `q * delta` starts at a point drawn uniformly from
//! `[t_min - q delta, t_max]`. An instance with span `d` lies fully inside
//! with probability `(q delta - d) / Delta`, where `Delta` is the length of
//! that interval, so weighting each instance found by the inverse of that
//! probability gives unbiased degree estimates.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{Enumerator, MotifQuery};
use crate::tgraph::{TemporalNetwork, VertexId};

/// Default window stretch.
pub const DEFAULT_Q: f64 = 1.25;
/// Default cap on the number of windows per iteration.
pub const DEFAULT_MAX_SAMPLES: usize = 200_000;
const MAX_SAMPLE_CHUNKS: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    /// Window stretch, `> 1`.
    pub q: f64,
    /// Relative accuracy, `> 0`.
    pub epsilon: f64,
    /// Failure budget in `(0, 1)`.
    pub eta: f64,
    /// Fixed window count per iteration, bypassing the bound.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Ceiling on the bound; hitting it marks the result best effort.
    pub max_samples: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { q: DEFAULT_Q, epsilon: 0.1, eta: 0.1, samples: None, seed: 0, max_samples: DEFAULT_MAX_SAMPLES }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 1.0) || !self.q.is_finite() {
            return Err(Error::Parameter(format!("q must be > 1, got {}", self.q)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Parameter(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Parameter(format!("eta must be in (0, 1), got {}", self.eta)));
        }
        if self.samples == Some(0) {
            return Err(Error::Parameter("samples must be at least 1".into()));
        }
        if self.max_samples == 0 {
            return Err(Error::Parameter("max_samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// The law windows are drawn from for one network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowLaw {
    /// Earliest start, `t_min - q delta`.
    pub lo: f64,
    /// Window length `q delta`.
    pub length: f64,
    /// Length of the start interval, `(t_max - t_min) + q delta`.
    pub span: f64,
}

impl WindowLaw {
    /// `None` for a network without edges or when `delta <= 0`.
    pub fn new(net: &TemporalNetwork, q: f64, delta: f64) -> Option<Self> {
        let (t0, t1) = net.time_range()?;
        if !(delta > 0.0) {
            return None;
        }
        let length = q * delta;
        Some(Self { lo: t0 - length, length, span: (t1 - t0) + length })
    }

    /// Probability that a window holds an instance whose span is `d`.
    pub fn inclusion_probability(&self, d: f64) -> f64 {
        inclusion_probability(d, self.length, self.span)
    }
}

/// `(q delta - d) / Delta`.
pub fn inclusion_probability(instance_span: f64, window_length: f64, span: f64) -> f64 {
    (window_length - instance_span) / span
}

/// One drawn window: its start and the edge positions with time in
/// `[start, start + q delta]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWindow {
    pub start: f64,
    pub law: WindowLaw,
    pub edges: Range<usize>,
}

pub fn sample_window<R: Rng + ?Sized>(net: &TemporalNetwork, law: &WindowLaw, rng: &mut R) -> SampledWindow {
    let start = law.lo + rng.gen::<f64>() * law.span;
    SampledWindow { start, law: *law, edges: net.edge_range(start, start + law.length) }
}

/// Adds `tau(S) / p_S` to each vertex of every instance inside the window.
pub fn estimate_window_into(net: &TemporalNetwork, window: &SampledWindow, query: &MotifQuery, out: &mut [f64]) {
    let en = Enumerator::new(net, &query.motif, query.delta);
    let edges = net.edges();
    en.for_each_in(window.edges.clone(), window.edges.end, |s, h| {
        let d = edges[*s.last().unwrap() as usize].time - edges[s[0] as usize].time;
        let p = window.law.inclusion_probability(d);
        let w = query.weight.weigh_edges(net, s) / p;
        for &v in h {
            out[v as usize] += w;
        }
    });
}

/// Per-vertex partial estimates of one window, dense over the id space.
pub fn estimate_window(net: &TemporalNetwork, window: &SampledWindow, query: &MotifQuery) -> Vec<f64> {
    let mut out = vec![0.0; net.id_space()];
    estimate_window_into(net, window, query, &mut out);
    out
}

/// Windows needed so that every estimate over `w_size` vertices is within
/// a `1 +- epsilon` factor with probability at least `1 - eta_slice`.
pub fn get_bound(w_size: usize, span: f64, q: f64, delta: f64, epsilon: f64, eta_slice: f64) -> u64 {
    let lead = span / ((q - 1.0) * delta) - 1.0;
    if !(lead > 0.0) {
        return 1;
    }
    let h = (1.0 + epsilon) * (1.0 + epsilon).ln() - epsilon;
    let r = lead / h * (2.0 * w_size as f64 / eta_slice).ln();
    if r.is_finite() {
        (r.ceil() as u64).max(1)
    } else {
        u64::MAX
    }
}

/// Averaged degree estimates over `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateVector {
    pub members: Vec<VertexId>,
    /// Dense over the id space; zero outside `members`.
    pub values: Vec<f64>,
    /// `(1/k) sum_w f_w`.
    pub total: f64,
    pub samples: usize,
}

impl EstimateVector {
    pub fn get(&self, v: VertexId) -> f64 {
        self.values.get(v as usize).copied().unwrap_or(0.0)
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for sample `index` of the estimation round `round`.
pub fn sample_rng(seed: u64, round: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed) ^ splitmix(round.wrapping_add(0x5851_f42d_4c95_7f2d)));
    rng.set_stream(index);
    rng
}

/// Mean of `r` window estimates on `net` (meant to be `T[W]`). Windows are
/// grouped into a chunk layout that depends only on `r`, and chunk sums are
/// combined in order, so the result does not depend on the thread count.
pub fn get_estimates(net: &TemporalNetwork, query: &MotifQuery, r: usize, q: f64, seed: u64, round: u64) -> EstimateVector {
    let members = net.vertices().to_vec();
    let n = net.id_space();
    let Some(law) = WindowLaw::new(net, q, query.delta) else {
        return EstimateVector { members, values: vec![0.0; n], total: 0.0, samples: r };
    };
    let r = r.max(1);
    let size = r.div_ceil(MAX_SAMPLE_CHUNKS);
    let chunks: Vec<Range<usize>> = (0..r).step_by(size).map(|s| s..(s + size).min(r)).collect();
    let parts: Vec<Vec<f64>> = chunks
        .into_par_iter()
        .map(|range| {
            let mut acc = vec![0.0; n];
            for i in range {
                let mut rng = sample_rng(seed, round, i as u64);
                let w = sample_window(net, &law, &mut rng);
                estimate_window_into(net, &w, query, &mut acc);
            }
            acc
        })
        .collect();
    let mut values = vec![0.0; n];
    for part in parts {
        for (a, b) in values.iter_mut().zip(part) {
            *a += b;
        }
    }
    for v in &mut values {
        *v /= r as f64;
    }
    let total = members.iter().map(|&v| values[v as usize]).sum::<f64>() / query.k() as f64;
    EstimateVector { members, values, total, samples: r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{degrees_of, WeightFunction};
    use crate::motif::library;
    use crate::tgraph::parse_edge_list;

    const TOY4: &str = "1 2 1\n2 3 2\n3 4 3\n2 3 5\n";

    fn toy4() -> (TemporalNetwork, MotifQuery) {
        (parse_edge_list(TOY4).unwrap(), MotifQuery::new(library::two_path(), 2.0, WeightFunction::Constant))
    }

    #[test]
    fn toy4_law() {
        let (t, q) = toy4();
        let law = WindowLaw::new(&t, 1.25, q.delta).unwrap();
        assert_eq!(law.span, 6.5);
        assert_eq!(law.inclusion_probability(1.0), 1.5 / 6.5);
        assert_eq!(law.inclusion_probability(2.0), 0.5 / 6.5);
        assert!(WindowLaw::new(&t, 1.25, 0.0).is_none());
        assert!(WindowLaw::new(&TemporalNetwork::empty(), 1.25, 1.0).is_none());
    }

    #[test]
    fn window_covering_everything() {
        let (t, q) = toy4();
        let law = WindowLaw::new(&t, 1.25, q.delta).unwrap();
        let w = SampledWindow { start: 0.5, law: WindowLaw { length: 10.0, span: 20.0, ..law }, edges: 0..4 };
        let est = estimate_window(&t, &w, &q);
        // both instances have span 1, p = 9/20
        let s = 20.0 / 9.0;
        assert_eq!(est, vec![s, 2.0 * s, 2.0 * s, s]);
    }

    #[test]
    fn tail_window() {
        let (t, q) = toy4();
        let law = WindowLaw::new(&t, 1.25, q.delta).unwrap();
        let w = SampledWindow { start: 4.0, law, edges: t.edge_range(4.0, 4.0 + law.length) };
        assert_eq!(w.edges, 3..4);
        assert!(estimate_window(&t, &w, &q).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn bound_values() {
        let r = get_bound(4, 100.0, 1.25, 10.0, 0.1, 0.1);
        let h = 1.1f64 * 1.1f64.ln() - 0.1;
        let expected = (39.0 / h * 80f64.ln()).ceil() as u64;
        assert_eq!(r, expected);
        assert!((35_000..36_000).contains(&r));
        assert_eq!(get_bound(4, 2.0, 1.25, 10.0, 0.1, 0.1), 1);
        let half = get_bound(4, 100.0, 1.25, 10.0, 0.1, 0.05);
        let step = 39.0 / h * 2f64.ln();
        assert!((half as f64 - r as f64 - step).abs() <= 1.0);
    }

    #[test]
    fn instance_free_estimates_are_zero() {
        let t = parse_edge_list("a b 1\nc d 2\n").unwrap();
        let q = MotifQuery::new(library::two_path(), 2.0, WeightFunction::Constant);
        let e = get_estimates(&t, &q, 100, 1.25, 7, 1);
        assert!(e.values.iter().all(|&x| x == 0.0));
        assert_eq!(e.total, 0.0);
    }

    #[test]
    fn estimates_are_reproducible_and_consistent() {
        let (t, q) = toy4();
        let a = get_estimates(&t, &q, 3000, 1.25, 42, 1);
        let b = get_estimates(&t, &q, 3000, 1.25, 42, 1);
        assert_eq!(a, b);
        let c = get_estimates(&t, &q, 3000, 1.25, 43, 1);
        assert_ne!(a, c);
        let sum: f64 = a.values.iter().sum();
        assert_eq!(a.total, sum / 3.0);
        let exact = degrees_of(&t, &q);
        for v in 0..4 {
            assert!((a.get(v) - exact.get(v)).abs() < 0.5 * exact.get(v), "{v}");
        }
    }

    #[test]
    fn thread_count_does_not_matter() {
        let (t, q) = toy4();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| get_estimates(&t, &q, 5000, 1.25, 9, 2));
        let b = four.install(|| get_estimates(&t, &q, 5000, 1.25, 9, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        assert!(SampleConfig::default().validate().is_ok());
        for bad in [
            SampleConfig { q: 1.0, ..Default::default() },
            SampleConfig { epsilon: 0.0, ..Default::default() },
            SampleConfig { eta: 1.0, ..Default::default() },
            SampleConfig { samples: Some(0), ..Default::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
