use aldente::exactflow::solve_exact;
use aldente::matching::{count_and_weigh, density, MotifQuery, WeightFunction};
use aldente::motif::library;
use aldente::oracle::fixtures::random_network;
use aldente::peel::{batch_peel, greedy_peel};
use aldente::randpeel::{prob_peel, RandPeelConfig};
use aldente::sample::SampleConfig;
use aldente::{PeelTrace, TemporalMotif, TemporalNetwork};
use proptest::prelude::*;

fn motifs() -> impl Strategy<Value = TemporalMotif> {
    prop_oneof![Just(library::two_path()), Just(library::triangle()), Just(library::back_and_forth())]
}

fn networks() -> impl Strategy<Value = TemporalNetwork> {
    (any::<u64>(), 3u32..9, 4usize..30).prop_map(|(seed, n, m)| random_network(seed, n, m, 12))
}

fn strictly_shrinks(trace: &PeelTrace) -> bool {
    trace.steps.windows(2).all(|w| w[1].size < w[0].size && !w[0].removed.is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn induced_networks_compose(net in networks(), motif in motifs(), delta in 0.0f64..6.0, mask in any::<u32>()) {
        let q = MotifQuery::new(motif, delta, WeightFunction::Constant);
        let vs = net.vertices().to_vec();
        let w: Vec<_> = vs.iter().copied().filter(|v| mask >> (v % 32) & 1 == 1).collect();
        let u: Vec<_> = w.iter().copied().step_by(2).collect();
        let direct = net.induced(&u).unwrap();
        let twice = net.induced(&w).unwrap().induced(&u).unwrap();
        prop_assert_eq!(count_and_weigh(&direct, &q), count_and_weigh(&twice, &q));
    }

    #[test]
    fn peeling_is_bounded_by_exact(net in networks(), motif in motifs(), delta in 0.0f64..6.0, decay in any::<bool>()) {
        let weight = if decay { WeightFunction::decay_for(&net) } else { WeightFunction::Constant };
        let q = MotifQuery::new(motif, delta, weight);
        let opt = solve_exact(&net, &q).density;
        let (g, gt) = greedy_peel(&net, &q);
        let (b, bt) = batch_peel(&net, &q, 0.3).unwrap();
        prop_assert!(strictly_shrinks(&gt) && strictly_shrinks(&bt));
        for r in [&g, &b] {
            prop_assert!(r.density <= opt + 1e-9 * opt.max(1.0));
            prop_assert!((density(&net, &r.vertices, &q).unwrap() - r.density).abs() <= 1e-9);
        }
        // Greedy is a k-approximation.
        prop_assert!(g.density * q.k() as f64 >= opt - 1e-9);
    }

    #[test]
    fn sampling_peel_makes_progress(net in networks(), motif in motifs(), delta in 0.5f64..6.0, seed in any::<u64>()) {
        let q = MotifQuery::new(motif, delta, WeightFunction::Constant);
        let cfg = RandPeelConfig { xi: 0.3, sample: SampleConfig { samples: Some(30), seed, ..SampleConfig::default() }, j: None };
        let (r, trace) = prob_peel(&net, &q, &cfg).unwrap();
        prop_assert!(strictly_shrinks(&trace));
        prop_assert!(trace.steps.len() <= aldente::peel::batch_iteration_bound(net.num_vertices(), 0.3) + 1);
        prop_assert!((density(&net, &r.vertices, &q).unwrap() - r.density).abs() <= 1e-9);
    }

    #[test]
    fn decay_never_exceeds_constant(net in networks(), motif in motifs(), delta in 0.0f64..6.0) {
        let c = count_and_weigh(&net, &MotifQuery::new(motif.clone(), delta, WeightFunction::Constant));
        let d = count_and_weigh(&net, &MotifQuery::new(motif, delta, WeightFunction::decay_for(&net)));
        prop_assert_eq!(c.0, d.0);
        prop_assert!(d.1 <= c.1 + 1e-12);
    }
}
