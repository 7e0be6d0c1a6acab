//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::time::{Duration, Instant};

use aldente::exactflow::solve_exact;
use aldente::matching::{degrees_of, density, enumerate_instances, total_weight, MotifQuery, WeightFunction};
use aldente::motif::{library, TemporalMotif};
use aldente::oracle::{brute_force_instances, brute_force_opt, fixtures, separation_fixture, static_2path_density, static_2path_opt};
use aldente::peel::{batch_iteration_bound, batch_peel, greedy_peel};
use aldente::randpeel::{hybrid_peel, prob_peel, RandPeelConfig};
use aldente::sample::{estimate_window, sample_rng, sample_window, SampleConfig, WindowLaw};
use aldente::tgraph::ProjectionMode;
use aldente::{DensityResult, TemporalNetwork, VertexId};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(m: TemporalMotif, delta: f64, w: WeightFunction) -> MotifQuery {
    MotifQuery::new(m, delta, w)
}

fn labels(net: &TemporalNetwork, vs: &[VertexId]) -> Vec<String> {
    let mut l = net.labels_of(vs);
    l.sort();
    l
}

/// 100 seeded networks with n <= 8 and m <= 12.
fn corpus() -> Vec<TemporalNetwork> {
    (0..100u64)
        .map(|seed| {
            let n = 4 + (seed % 5) as u32;
            let m = 6 + (seed % 7) as usize;
            fixtures::random_network(seed, n, m, 10)
        })
        .collect()
}

fn corpus_motifs() -> Vec<TemporalMotif> {
    vec![library::two_path(), library::triangle(), library::back_and_forth()]
}

const DELTAS: [f64; 2] = [2.0, 5.0];

fn weights_for(net: &TemporalNetwork) -> [WeightFunction; 2] {
    [WeightFunction::Constant, WeightFunction::decay_for(net)]
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn c1_figure1() -> Outcome {
    let start = Instant::now();
    let net = fixtures::figure1();
    let q10 = q(library::triangle(), 10.0, WeightFunction::Constant);
    let q20 = q(library::triangle(), 20.0, WeightFunction::Constant);
    let tau123 = total_weight(&net, &net.ids_of(&["v1", "v2", "v3"]).unwrap(), &q20).unwrap();
    let opt = solve_exact(&net, &q10);
    let deg4 = degrees_of(&net, &q10).get(net.id_of("v4").unwrap());
    let elapsed = start.elapsed();
    let set = labels(&net, &opt.vertices);
    let pass = tau123 == 4.0
        && opt.density == 6.0 / 5.0
        && set == ["v1", "v2", "v3", "v4", "v5"]
        && deg4 == 2.0
        && elapsed < Duration::from_secs(1);
    outcome(pass, format!("tau(v1,v2,v3)@20 = {tau123}, rho* = {} at {set:?}, deg(v4) = {deg4}, {elapsed:?}", opt.density))
}

fn c2_weighting() -> Outcome {
    let got = WeightFunction::Decay { lambda: 0.1 }.weigh_times(&[1.0, 4.0, 10.0]);
    let want = 0.5 * ((-0.3f64).exp() + (-0.6f64).exp());
    outcome((got - want).abs() <= 1e-9 && (got * 100.0).round() == 64.0, format!("tau_d = {got:.12}, expected {want:.12}"))
}

fn c3_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    let mut failures = Vec::new();
    for (i, net) in corpus().iter().enumerate() {
        for motif in corpus_motifs() {
            for delta in DELTAS {
                let mut fast = enumerate_instances(net, &motif, delta);
                fast.sort();
                let slow = brute_force_instances(net, &motif, delta).unwrap();
                checks += 1;
                if fast != slow {
                    failures.push(format!("net {i} {motif} delta {delta}: instances differ"));
                }
                for w in weights_for(net) {
                    let query = q(motif.clone(), delta, w);
                    let exact = solve_exact(net, &query).density;
                    let brute = brute_force_opt(net, &query).unwrap().density;
                    let ok = match w {
                        WeightFunction::Constant => exact == brute,
                        WeightFunction::Decay { .. } => close(exact, brute, 1e-9),
                    };
                    checks += 1;
                    if !ok {
                        failures.push(format!("net {i} {motif} delta {delta} {w:?}: exact {exact} vs oracle {brute}"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(300);
    outcome(pass, format!("{checks} checks, {} mismatches{}, {elapsed:?}", failures.len(), first(&failures)))
}

fn c4_c5_ratios_and_bounds() -> (Outcome, Outcome) {
    let mut ratio_runs = 0;
    let mut ratio_fail = Vec::new();
    let mut bound_runs = 0;
    let mut bound_fail = Vec::new();
    for (i, net) in corpus().iter().enumerate() {
        for motif in corpus_motifs() {
            let k = motif.num_vertices() as f64;
            for delta in DELTAS {
                for w in weights_for(net) {
                    let query = q(motif.clone(), delta, w);
                    let opt = brute_force_opt(net, &query).unwrap().density;
                    let slack = 1e-12 * opt;
                    let (g, _) = greedy_peel(net, &query);
                    ratio_runs += 1;
                    if g.density < opt / k - slack {
                        ratio_fail.push(format!("net {i} greedy {} < {}", g.density, opt / k));
                    }
                    bound_runs += 1;
                    if !g.vertices.is_empty() && g.iterations > net.num_vertices() - motif.num_vertices() {
                        bound_fail.push(format!("net {i} greedy removals {}", g.iterations));
                    }
                    for xi in [0.1, 0.3, 1.0] {
                        let (b, _) = batch_peel(net, &query, xi).unwrap();
                        ratio_runs += 1;
                        if b.density < opt / (k * (1.0 + xi)) - slack {
                            ratio_fail.push(format!("net {i} batch xi {xi}: {} < {}", b.density, opt / (k * (1.0 + xi))));
                        }
                        bound_runs += 1;
                        if b.iterations > batch_iteration_bound(net.num_vertices(), xi) {
                            bound_fail.push(format!("net {i} batch xi {xi}: {} iterations", b.iterations));
                        }
                    }
                }
            }
        }
    }
    (
        outcome(ratio_fail.is_empty(), format!("{ratio_runs} runs, {} violations{}", ratio_fail.len(), first(&ratio_fail))),
        outcome(bound_fail.is_empty(), format!("{bound_runs} runs, {} violations{}", bound_fail.len(), first(&bound_fail))),
    )
}

fn c6_degree_identity() -> Outcome {
    let mut nets: Vec<(TemporalNetwork, Vec<MotifQuery>)> = Vec::new();
    for net in corpus() {
        let mut qs = Vec::new();
        for motif in corpus_motifs() {
            for delta in DELTAS {
                for w in weights_for(&net) {
                    qs.push(q(motif.clone(), delta, w));
                }
            }
        }
        nets.push((net, qs));
    }
    nets.push((fixtures::toy4(), vec![q(library::two_path(), 2.0, WeightFunction::Constant)]));
    nets.push((fixtures::figure1(), vec![q(library::triangle(), 10.0, WeightFunction::Constant), q(library::triangle(), 20.0, WeightFunction::Constant)]));
    let mut runs = 0;
    let mut fails = 0;
    for (net, qs) in &nets {
        for query in qs {
            let d = degrees_of(net, query).sum();
            let tau = total_weight(net, net.vertices(), query).unwrap();
            let want = query.k() as f64 * tau;
            let ok = match query.weight {
                WeightFunction::Constant => d == want,
                WeightFunction::Decay { .. } => close(d, want, 1e-9) || (d == 0.0 && want == 0.0),
            };
            runs += 1;
            fails += usize::from(!ok);
        }
    }
    outcome(fails == 0, format!("{runs} network/query pairs, {fails} violations"))
}

fn c7_unbiased() -> Outcome {
    let start = Instant::now();
    let bf = fixtures::toy4();
    let chatter = aldente::tgraph::parse_edge_list("a b 1\nb a 2\na b 4\nb c 5\nc b 6\nc a 9\na c 10\n").unwrap();
    let cases = vec![
        ("toy4", bf, q(library::two_path(), 2.0, WeightFunction::Constant)),
        ("figure1", fixtures::figure1(), q(library::triangle(), 10.0, WeightFunction::Constant)),
        ("chatter", chatter.clone(), q(library::back_and_forth(), 3.0, WeightFunction::decay_for(&chatter))),
    ];
    let n_samples = 10_000u64;
    let mut worst: f64 = 0.0;
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, net, query) in &cases {
        let instances = enumerate_instances(net, &query.motif, query.delta).len();
        let law = WindowLaw::new(net, 1.25, query.delta).unwrap();
        let n = net.id_space();
        let (mut sum, mut sq) = (vec![0.0; n], vec![0.0; n]);
        for i in 0..n_samples {
            let mut rng = sample_rng(2024, 0, i);
            let w = sample_window(net, &law, &mut rng);
            for (v, x) in estimate_window(net, &w, query).into_iter().enumerate() {
                sum[v] += x;
                sq[v] += x * x;
            }
        }
        let exact = degrees_of(net, query);
        for &v in net.vertices() {
            let mean = sum[v as usize] / n_samples as f64;
            let var = (sq[v as usize] / n_samples as f64 - mean * mean).max(0.0) * n_samples as f64 / (n_samples - 1) as f64;
            let se = (var / n_samples as f64).sqrt();
            let dev = (mean - exact.get(v)).abs();
            let z = if se > 0.0 { dev / se } else if dev < 1e-12 { 0.0 } else { f64::INFINITY };
            worst = worst.max(z);
            if z > 3.0 {
                pass = false;
                notes.push(format!("{name}/{}: mean {mean:.4} vs {} (z {z:.2})", net.label(v), exact.get(v)));
            }
        }
        notes.push(format!("{name}: {instances} instances"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(pass, format!("worst |z| = {worst:.2}; {}; {elapsed:?}", notes.join(", ")))
}

fn rand_cfg(seed: u64, samples: usize, j: Option<usize>) -> RandPeelConfig {
    RandPeelConfig {
        xi: 0.3,
        sample: SampleConfig { seed, samples: Some(samples), epsilon: 0.1, eta: 0.1, ..Default::default() },
        j,
    }
}

fn c8_probpeel() -> Outcome {
    let cases = [
        ("toy4", fixtures::toy4(), q(library::two_path(), 2.0, WeightFunction::Constant)),
        ("figure1", fixtures::figure1(), q(library::triangle(), 10.0, WeightFunction::Constant)),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, net, query) in &cases {
        let (_, batch_trace) = batch_peel(net, query, 0.3).unwrap();
        let opt = solve_exact(net, query).density;
        let bound = opt * 0.81 / (query.k() as f64 * 1.3 * 1.21);
        let (mut same, mut violations) = (0, 0);
        for seed in 0..20 {
            let (p, trace) = prob_peel(net, query, &rand_cfg(seed, 5000, None)).unwrap();
            same += usize::from(trace.batches() == batch_trace.batches());
            violations += usize::from(p.density < bound);
        }
        pass &= same >= 19 && violations <= 1;
        notes.push(format!("{name}: {same}/20 same batches, {violations} bound violations"));
    }
    outcome(pass, notes.join("; "))
}

fn c9_hybrid() -> Outcome {
    let (mut runs, mut dominates, mut bounded) = (0, 0, 0);
    let (eps, xi) = (0.1f64, 0.3f64);
    for (i, net) in corpus().iter().enumerate() {
        for (mi, motif) in corpus_motifs().into_iter().enumerate() {
            let k = motif.num_vertices() as f64;
            for delta in DELTAS {
                let query = q(motif.clone(), delta, WeightFunction::Constant);
                let opt = brute_force_opt(net, &query).unwrap().density;
                if opt == 0.0 {
                    continue;
                }
                let batch = batch_peel(net, &query, xi).unwrap().0.density;
                let bound = opt * (1.0 - eps).powi(2) / (k * (1.0 + xi) * (1.0 + eps).powi(2));
                for j in [1, 2] {
                    let seed = (i * 1000 + mi * 10 + j) as u64 + delta as u64 * 100_000;
                    let h = hybrid_peel(net, &query, &rand_cfg(seed, 2000, Some(j))).unwrap().0;
                    runs += 1;
                    dominates += usize::from(h.density >= batch);
                    bounded += usize::from(h.density >= bound);
                }
            }
        }
    }
    let (fd, fb) = (dominates as f64 / runs as f64, bounded as f64 / runs as f64);
    outcome(
        fd >= 0.9 && fb >= 0.95,
        format!("{runs} runs with instances: >= batch in {:.1}%, >= bound in {:.1}%", 100.0 * fd, 100.0 * fb),
    )
}

fn c10_separation() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in [12, 24, 48] {
        let f = separation_fixture(n).unwrap();
        let proj = f.net.static_projection(ProjectionMode::Directed);
        let query = q(library::two_path(), 1.0, WeightFunction::Constant);
        let stat = static_2path_opt(&f.net, &proj);
        let (r1, r2) = (static_2path_density(&proj, &f.v1), static_2path_density(&proj, &f.v2));
        let temporal = solve_exact(&f.net, &query);
        let stat_temporal = density(&f.net, &stat.vertices, &query).unwrap();
        let inside_v2 = !temporal.vertices.is_empty() && temporal.vertices.iter().all(|v| f.v2.contains(v));
        let disjoint = temporal.vertices.iter().all(|v| !stat.vertices.contains(v));
        let ok = stat.vertices == f.v1 && r1 > r2 && stat_temporal == 0.0 && inside_v2 && disjoint;
        pass &= ok;
        notes.push(format!(
            "n={n}: rho2(V1)={r1} rho2(V2)={r2:.4}, static argmax |H|={} temporal rho=0: {}, temporal opt |W|={} in V2: {inside_v2}, disjoint: {disjoint}",
            stat.vertices.len(),
            stat_temporal == 0.0,
            temporal.vertices.len()
        ));
    }
    outcome(pass, notes.join("; "))
}

fn same(a: &DensityResult, b: &DensityResult) -> bool {
    a.vertices == b.vertices
        && a.density.to_bits() == b.density.to_bits()
        && a.estimated_density.map(f64::to_bits) == b.estimated_density.map(f64::to_bits)
}

fn c11_determinism() -> Outcome {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let nets = vec![
        (fixtures::toy4(), q(library::two_path(), 2.0, WeightFunction::Constant)),
        (fixtures::figure1(), q(library::triangle(), 10.0, WeightFunction::Constant)),
        (fixtures::random_network(77, 8, 12, 6), q(library::two_path(), 3.0, WeightFunction::Decay { lambda: 0.4 })),
    ];
    let run = |net: &TemporalNetwork, query: &MotifQuery| -> Vec<DensityResult> {
        vec![
            solve_exact(net, query),
            greedy_peel(net, query).0,
            batch_peel(net, query, 0.3).unwrap().0,
            prob_peel(net, query, &rand_cfg(5, 500, None)).unwrap().0,
            hybrid_peel(net, query, &rand_cfg(5, 500, Some(1))).unwrap().0,
        ]
    };
    let mut checks = 0;
    let mut pass = true;
    for (net, query) in &nets {
        let a = one.install(|| run(net, query));
        let b = one.install(|| run(net, query));
        for (x, y) in a.iter().zip(&b) {
            checks += 1;
            pass &= same(x, y);
        }
    }
    outcome(pass, format!("{checks} algorithm runs repeated on one thread, all identical: {pass}"))
}

fn c12_benchmark() -> Outcome {
    let net = fixtures::synthetic_network(1, &fixtures::SyntheticSpec::default());
    let span = net.time_range().map(|(a, b)| b - a).unwrap_or(0.0);
    let query = q(library::triangle(), 172_800.0, WeightFunction::Constant);
    let time = |f: &dyn Fn() -> f64| -> (Duration, f64) {
        // best of three
        let mut best = Duration::MAX;
        let mut rho = 0.0;
        for _ in 0..3 {
            let t = Instant::now();
            rho = f();
            best = best.min(t.elapsed());
        }
        (best, rho)
    };
    let cfg = rand_cfg(1, 20, Some(2));
    let (tg, rg) = time(&|| greedy_peel(&net, &query).0.density);
    let (tp, rp) = time(&|| prob_peel(&net, &query, &cfg).unwrap().0.density);
    let (th, rh) = time(&|| hybrid_peel(&net, &query, &cfg).unwrap().0.density);
    outcome(
        tp <= tg && th <= tg,
        format!(
            "n={} m={} span={span:.3e}s: greedy {tg:.2?} (rho {rg:.1}), probpeel r=20 {tp:.2?} (rho {rp:.1}), hybridpeel J=2 {th:.2?} (rho {rh:.1})",
            net.num_vertices(),
            net.num_edges()
        ),
    )
}

fn first<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.first().map(|x| format!(", first: {x:?}")).unwrap_or_default()
}

fn main() {
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let wanted = |n: u32| filter.as_deref().is_none_or(|f| f == n.to_string());
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut run = |n: u32, name: &'static str, f: &dyn Fn() -> Outcome| {
        if wanted(n) {
            let o = f();
            println!("criterion {n:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
            results.push((n, name, o));
        }
    };
    run(1, "worked example golden values", &c1_figure1);
    run(2, "decay weighting", &c2_weighting);
    run(3, "oracle equivalence", &c3_oracle_equivalence);
    if wanted(4) || wanted(5) {
        let (r4, r5) = c4_c5_ratios_and_bounds();
        for (n, name, o) in [(4, "approximation ratios", r4), (5, "iteration bounds", r5)] {
            if wanted(n) {
                println!("criterion {n:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
                results.push((n, name, o));
            }
        }
    }
    let mut run = |n: u32, name: &'static str, f: &dyn Fn() -> Outcome| {
        if wanted(n) {
            let o = f();
            println!("criterion {n:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
            results.push((n, name, o));
        }
    };
    run(6, "degree identity", &c6_degree_identity);
    run(7, "estimator unbiasedness", &c7_unbiased);
    run(8, "probpeel convergence", &c8_probpeel);
    run(9, "hybridpeel dominance", &c9_hybrid);
    run(10, "static vs temporal separation", &c10_separation);
    run(11, "determinism", &c11_determinism);
    run(12, "desk-scale benchmark", &c12_benchmark);
    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("acceptance: {}/{} passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
