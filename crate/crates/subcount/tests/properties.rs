//! Module invariants: order properties, cover structure, profile
//! bijections, value identities, query accounting, and estimator
//! consistency rules.

mod common;

use common::*;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use subcount::estimator::{
    self, calibrated_queries_per_draw, count_colorful, count_subgraph, EstimationConfig,
};
use subcount::graph::{DirectAccess, Graph, QuerySession};
use subcount::instances::{gen_planted, gen_random};
use subcount::oracle::{self, exact_count};
use subcount::pattern::{decompose, solve_fractional_edge_cover, Pattern, Rational};
use subcount::samplers::{
    forms_cycle, sample_odd_cycle, subgraph_sampler_estimate, subgraph_sampler_estimate_traced,
    CycleProfile, OrientedEdge,
};

fn arbitrary_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..max_n, any::<u64>()).prop_map(move |(n, seed)| {
        let cap = (n * (n - 1) / 2).min(max_m);
        let m = 1 + (seed as usize) % cap;
        gen_random(n, m, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_degree_sum_is_bounded(g in arbitrary_graph(60, 320)) {
        prop_assert!(g.satisfies_min_degree_bound());
    }

    #[test]
    fn precedes_is_total_and_antisymmetric(g in arbitrary_graph(40, 200)) {
        let ord = g.order();
        let n = g.n() as u32;
        for u in 0..n {
            for v in 0..n {
                if u == v { continue; }
                prop_assert_ne!(ord.precedes(u, v), ord.precedes(v, u));
            }
        }
        // transitivity through the underlying (degree, id) key
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if u == v || v == w || u == w { continue; }
                    if ord.precedes(u, v) && ord.precedes(v, w) {
                        prop_assert!(ord.precedes(u, w));
                    }
                }
            }
        }
    }

    #[test]
    fn covers_are_feasible_and_decompositions_structural(seed in any::<u64>()) {
        let nv = 3 + (seed % 4) as usize;
        let h = random_connected_pattern(nv, (seed % 3) as usize, seed);
        let cover = solve_fractional_edge_cover(&h).unwrap();
        prop_assert!(cover.is_feasible(&h));
        prop_assert!(cover.is_half_integral());

        let d = decompose(&h).unwrap();
        prop_assert_eq!(d.rho, cover.objective);
        // components are vertex-disjoint and cover the pattern
        let mut seen = vec![false; h.vertex_count()];
        for cyc in &d.cycles {
            prop_assert!(cyc.len() % 2 == 1 && cyc.len() >= 3);
            for &v in cyc {
                prop_assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
        }
        for (c, petals) in &d.stars {
            for &v in std::iter::once(c).chain(petals) {
                prop_assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        // exponents reconstruct rho exactly
        let total: Rational = d.rho_cycles.iter().chain(d.rho_stars.iter()).sum();
        prop_assert_eq!(total, d.rho);
        // 1/f is a positive integer
        let z = d.f.recip();
        prop_assert!(z.is_integer() && z > Rational::zero());
        // bipartite patterns decompose without odd cycles
        if h.graph().is_bipartite() {
            prop_assert_eq!(d.cycles.len(), 0);
        }
    }

    #[test]
    fn traced_leaf_values_match_closed_forms(seed in any::<u64>()) {
        let g = gen_random(14, 40, seed).unwrap();
        let h = triangle();
        let d = decompose(&h).unwrap();
        let mut s = QuerySession::new(&g, seed);
        let m = g.m() as f64;
        for _ in 0..50 {
            let (_, leaves) = subgraph_sampler_estimate_traced(&mut s, &h, &d, false).unwrap();
            for leaf in leaves {
                let p = &leaf.profile.cycles[0];
                let expected =
                    (2.0 * m).powi(p.edges.len() as i32) / 2.0 * g.degree(p.anchor()) as f64;
                prop_assert_eq!(leaf.path_value, expected);
            }
        }
    }
}

#[test]
fn every_triangle_has_exactly_one_valid_profile() {
    // Eq-style bijection: per triangle subgraph, exactly one of the six
    // anchored orientations passes the cycle predicate
    for (name, g) in [
        ("k5", complete_graph(5)),
        ("gnm", gen_random(14, 45, 9).unwrap()),
        ("planted", gen_planted(&gen_random(10, 20, 3).unwrap(), &triangle(), 3).unwrap()),
    ] {
        let mut triangles = Vec::new();
        for a in 0..g.n() as u32 {
            for b in a + 1..g.n() as u32 {
                for c in b + 1..g.n() as u32 {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        triangles.push([a, b, c]);
                    }
                }
            }
        }
        for tri in triangles {
            let mut valid = 0;
            for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
                let w = tri.iter().copied().find(|v| *v != tri[i] && *v != tri[j]).unwrap();
                let p = CycleProfile {
                    edges: vec![OrientedEdge {
                        from: tri[i],
                        to: tri[j],
                        color: 0,
                    }],
                    closing: w,
                    closing_color: 0,
                };
                valid += forms_cycle(&mut DirectAccess(&g), &p) as u32;
            }
            assert_eq!(valid, 1, "triangle {tri:?} in {name}");
        }
    }
}

#[test]
fn five_cycle_profiles_are_in_bijection_with_copies() {
    for seed in [1u64, 2, 3] {
        let g = gen_random(12, 28, seed).unwrap();
        let h = five_cycle_pattern();
        let d = decompose(&h).unwrap();
        let copies = exact_count(&g, &h, false).unwrap().subgraph_count;
        let profiles = oracle::exact_profile_enumeration(&g, &h, &d).unwrap();
        assert_eq!(profiles, copies, "seed {seed}");
    }
}

#[test]
fn profile_identity_holds_across_shapes() {
    // raw enumeration times f equals the backtracking copy count
    let patterns = [
        pattern(4, &[(0, 1), (1, 2), (2, 3)]),
        pattern(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]),
        pattern(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)]),
        pattern(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]),
        mixed_pattern(),
        pattern(6, &[(0, 1), (0, 2), (3, 4), (3, 5), (1, 3)]),
    ];
    for seed in 0..6u64 {
        let g = gen_random(9 + (seed % 4) as usize, 16 + (seed as usize % 9), seed).unwrap();
        for (i, h) in patterns.iter().enumerate() {
            let d = decompose(h).unwrap();
            let profiles = oracle::exact_profile_enumeration(&g, h, &d).unwrap();
            let copies = exact_count(&g, h, false).unwrap().subgraph_count;
            let z = d.profile_multiplicity();
            assert_eq!(profiles, copies * z, "pattern {i}, seed {seed}");
        }
    }
}

#[test]
fn replay_is_deterministic_and_counters_conserve() {
    let g = gen_planted(&gen_random(30, 80, 5).unwrap(), &triangle(), 6).unwrap();
    let cfg = EstimationConfig {
        epsilon: 0.3,
        seed: 21,
        ..Default::default()
    };
    let a = count_subgraph(&g, &triangle(), &cfg).unwrap();
    let b = count_subgraph(&g, &triangle(), &cfg).unwrap();
    assert_eq!(a.estimate, b.estimate);
    assert_eq!(a.counts, b.counts);
    assert_eq!(a.h_trace, b.h_trace);

    // per-call accounting: every oracle call moves exactly one counter
    let mut s = QuerySession::new(&g, 4);
    let mut expected = 0;
    for i in 0..200u32 {
        match i % 4 {
            0 => {
                s.degree_query(i % g.n() as u32).unwrap();
            }
            1 => {
                s.edge_sample_query().unwrap();
            }
            2 => {
                s.pair_query(0, 1 + i % (g.n() as u32 - 1)).unwrap();
            }
            _ => {
                let v = (i * 7) % g.n() as u32;
                if g.degree(v) > 0 {
                    s.neighbor_query(v, 0).unwrap();
                } else {
                    s.degree_query(v).unwrap();
                }
            }
        }
        expected += 1;
        assert_eq!(s.counts().total(), expected);
    }
}

#[test]
fn acceptance_soundness_and_budget_on_a_statistical_run() {
    // a clique-planted host large enough that the search accepts without
    // the offline fallback
    let clique = complete_graph(100);
    let background = gen_random(600, 7050, 8).unwrap();
    let g = subcount::instances::disjoint_union(&clique, &background);
    assert_eq!(g.m(), 12000);
    let h = triangle();
    let cfg = EstimationConfig {
        epsilon: 0.5,
        seed: 40,
        ..Default::default()
    };
    let report = count_subgraph(&g, &h, &cfg).unwrap();
    assert!(!report.fallback_used, "run must exercise the sampling path");

    // soundness: some guess was accepted, and the returned estimate stays
    // within the guard envelope of it
    let accepted = report
        .h_trace
        .iter()
        .find(|&&(hg, z)| z >= hg)
        .expect("the search accepted some guess");
    let returned_profiles = report.estimate / report.f.to_f64().unwrap();
    assert!(returned_profiles >= (1.0 - 2.0 * cfg.epsilon) * accepted.0);

    // budget: recorded queries stay below the per-round caps summed over
    // the search trace
    let d = decompose(&h).unwrap();
    let qbar = calibrated_queries_per_draw(&h, &d);
    let rho = d.rho.to_f64().unwrap();
    let rounds = estimator::amplification_rounds(g.n()) as f64;
    let mut cap = 0.0;
    for &(hg, _) in &report.h_trace {
        let k = (cfg.c * (g.m() as f64).powf(rho) / (cfg.epsilon * cfg.epsilon * hg)).ceil();
        cap += rounds * cfg.budget_factor * k * qbar;
    }
    cap += g.m() as f64; // potential fallback reads
    assert!(
        (report.counts.total() as f64) <= cap,
        "total {} exceeds cap {cap}",
        report.counts.total()
    );

    // and the estimate itself lands within epsilon of the oracle count
    let exact = exact_count(&g, &h, false).unwrap().subgraph_count as f64;
    assert!(
        (report.estimate - exact).abs() <= cfg.epsilon * exact,
        "estimate {} vs exact {exact}",
        report.estimate
    );
}

#[test]
fn colorful_equals_plain_on_all_zero_colors() {
    // identical draw streams make the two modes agree exactly, seed by seed
    let plain_bg = gen_random(20, 60, 2).unwrap();
    let plain = gen_planted(&plain_bg, &triangle(), 4).unwrap();
    let colored = Graph::from_colored_edges(
        plain.n(),
        plain.edges().iter().map(|&(u, v)| (u, v, 0)).collect(),
    )
    .unwrap();
    let hc = Pattern::new(
        Graph::from_colored_edges(3, vec![(0, 1, 0), (1, 2, 0), (0, 2, 0)]).unwrap(),
    )
    .unwrap();
    for seed in 0..50u64 {
        let cfg = EstimationConfig {
            epsilon: 0.4,
            seed,
            ..Default::default()
        };
        let plain_report = count_subgraph(&plain, &triangle(), &cfg).unwrap();
        let colored_report = count_colorful(&colored, &hc, &cfg).unwrap();
        assert_eq!(plain_report.estimate, colored_report.estimate, "seed {seed}");
    }
}

#[test]
fn star_fast_agrees_and_uses_fewer_queries() {
    // hub host sized so the star schedule needs fewer draws; guesses pinned
    // to the oracle count so neither run falls back
    let mut edges = Vec::new();
    let mut next = 0u32;
    for _ in 0..10 {
        let center = next;
        next += 1;
        for _ in 0..38 {
            edges.push((center, next));
            next += 1;
        }
    }
    for _ in 0..10120 {
        edges.push((next, next + 1));
        next += 2;
    }
    let g = Graph::from_edges(next as usize, edges).unwrap();
    let s2 = two_petal_star();
    let exact = exact_count(&g, &s2, false).unwrap().subgraph_count as f64;
    let cfg = EstimationConfig {
        epsilon: 0.9,
        c: 32.0,
        seed: 77,
        h_hint: Some(exact),
        rounds_override: Some(3),
        disable_fallback: true,
        ..Default::default()
    };
    let normal = count_subgraph(&g, &s2, &cfg).unwrap();
    let fast = estimator::star_fast_count(&g, &s2, &cfg).unwrap();
    assert!(!normal.fallback_used && !fast.fallback_used);
    let envelope = 2.0 * cfg.epsilon * exact;
    assert!((normal.estimate - exact).abs() <= envelope);
    assert!((fast.estimate - exact).abs() <= envelope);
    assert!((normal.estimate - fast.estimate).abs() <= envelope);
    assert!(
        fast.counts.total() < normal.counts.total(),
        "fast {} vs normal {}",
        fast.counts.total(),
        normal.counts.total()
    );
}

#[test]
fn single_round_failure_rate_stays_below_a_tenth() {
    // with c = 64, one averaged round at a guess at most the profile count
    // misses by more than epsilon rarely
    let eps = 0.2;
    for (g, h, truth) in [
        (complete_graph(4), triangle(), 4.0),
        (
            gen_planted(&Graph::from_edges(0, vec![]).unwrap(), &triangle(), 5).unwrap(),
            triangle(),
            5.0,
        ),
    ] {
        let d = decompose(&h).unwrap();
        let target = truth * d.profile_multiplicity() as f64;
        let m = g.m() as f64;
        let rho = d.rho.to_f64().unwrap();
        let k = (64.0 * m.powf(rho) / (eps * eps * target)).ceil() as u64;
        let mut s = QuerySession::new(&g, 13);
        let mut failures = 0;
        for _ in 0..200 {
            let z = estimator::averaged_estimate(&mut s, &h, &d, false, k).unwrap();
            if (z - target).abs() > eps * target {
                failures += 1;
            }
        }
        assert!(failures <= 20, "{failures} of 200 rounds missed");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn graph_files_round_trip(seed in any::<u64>()) {
        let n = 3 + (seed % 20) as usize;
        let m = 1 + (seed as usize) % (n * (n - 1) / 2);
        let g = gen_random(n, m, seed).unwrap();
        let mut text = Vec::new();
        g.write_to(&mut text).unwrap();
        let back = Graph::parse(text.as_slice()).unwrap();
        prop_assert_eq!(g.n(), back.n());
        prop_assert_eq!(g.edges(), back.edges());
        prop_assert_eq!(g.is_colored(), back.is_colored());
    }
}

#[test]
fn colorful_estimation_on_a_two_colored_host() {
    // a fully 1-colored clique inside 0-colored background noise: colorful
    // triangle counting should isolate the clique without reading the graph
    let mut edges: Vec<(u32, u32, u32)> = (0..60u32)
        .flat_map(|a| (a + 1..60).map(move |b| (a, b, 1)))
        .collect();
    let noise = gen_random(600, 8230, 15).unwrap();
    edges.extend(noise.edges().iter().map(|&(u, v)| (u + 60, v + 60, 0)));
    let g = Graph::from_colored_edges(660, edges).unwrap();
    let hc = Pattern::new(
        Graph::from_colored_edges(3, vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap(),
    )
    .unwrap();
    let truth = exact_count(&g, &hc, true).unwrap().colorful_count.unwrap() as f64;
    assert_eq!(truth, 34220.0); // C(60, 3)
    let eps = 0.5;
    let cfg = EstimationConfig {
        epsilon: eps,
        seed: 23,
        colored: true,
        h_hint: Some(truth),
        ..Default::default()
    };
    let report = count_colorful(&g, &hc, &cfg).unwrap();
    assert!(!report.fallback_used);
    assert!(
        (report.estimate - truth).abs() <= eps * truth,
        "estimate {} vs {truth}",
        report.estimate
    );
}

#[test]
fn exhausted_round_budgets_surface_as_an_error() {
    // a vanishing budget aborts every amplification round
    let g = gen_planted(&gen_random(50, 150, 3).unwrap(), &triangle(), 10).unwrap();
    let cfg = EstimationConfig {
        epsilon: 0.5,
        budget_factor: 1e-9,
        seed: 2,
        h_hint: Some(100.0),
        disable_fallback: true,
        ..Default::default()
    };
    assert!(matches!(
        count_subgraph(&g, &triangle(), &cfg),
        Err(subcount::Error::BudgetExhausted)
    ));
}

#[test]
fn normalization_factor_matches_the_decomposition() {
    for h in [triangle(), mixed_pattern(), k4_pattern(), two_petal_star()] {
        let d = decompose(&h).unwrap();
        assert_eq!(subcount::pattern::normalization_factor(&h, &d).unwrap(), d.f);
    }
}

#[test]
fn profile_enumeration_rejects_large_hosts() {
    let g = gen_random(40, 61, 1).unwrap();
    let h = triangle();
    let d = decompose(&h).unwrap();
    assert!(matches!(
        oracle::exact_profile_enumeration(&g, &h, &d),
        Err(subcount::Error::InfeasibleInstance(_))
    ));
}

#[test]
fn star_fast_estimates_single_edges_as_the_edge_count() {
    // every edge is one single-petal star under the anchoring rule
    let g = gen_random(30, 80, 14).unwrap();
    let cfg = EstimationConfig {
        epsilon: 0.2,
        seed: 6,
        ..Default::default()
    };
    let report = subcount::estimator::star_fast_count(&g, &single_edge(), &cfg).unwrap();
    assert_eq!(report.estimate, g.m() as f64);
}

#[test]
fn edge_sample_uniformity_within_five_sigma() {
    let g = gen_random(12, 30, 77).unwrap();
    let mut s = QuerySession::new(&g, 123);
    let n_samples = 150_000usize;
    let mut freq = std::collections::HashMap::new();
    for _ in 0..n_samples {
        let (u, v, _) = s.edge_sample_query().unwrap();
        *freq.entry((u.min(v), u.max(v))).or_insert(0u64) += 1;
    }
    let p = 1.0 / g.m() as f64;
    let sigma = (n_samples as f64 * p * (1.0 - p)).sqrt();
    for &(u, v) in g.edges() {
        let observed = *freq.get(&(u, v)).unwrap_or(&0) as f64;
        assert!(
            (observed - n_samples as f64 * p).abs() <= 5.0 * sigma,
            "edge ({u},{v}) frequency {observed}"
        );
    }
}

#[test]
fn mean_block_width_is_small_on_varied_hosts() {
    for (name, g) in [
        ("k10", complete_graph(10)),
        ("gnm", gen_random(40, 120, 6).unwrap()),
        ("book", subcount::instances::gen_shared_path_cycles(2, 100).unwrap()),
    ] {
        let mut s = QuerySession::new(&g, 3);
        let mut total = 0usize;
        let draws = 20_000;
        for _ in 0..draws {
            total += sample_odd_cycle(&mut s, 1).unwrap().witnesses.len();
        }
        let mean = total as f64 / draws as f64;
        assert!(mean <= 6.0, "{name}: mean block width {mean}");
    }
}

#[test]
fn oracle_profile_identity_and_self_counts_on_the_corpus() {
    let corpus_patterns = [
        single_edge(),
        two_petal_star(),
        three_petal_star(),
        triangle(),
        five_cycle_pattern(),
        k4_pattern(),
        mixed_pattern(),
    ];
    for h in &corpus_patterns {
        // each pattern occurs exactly once in itself
        let self_count = exact_count(h.graph(), h, false).unwrap();
        assert_eq!(self_count.subgraph_count, 1);
        let d = decompose(h).unwrap();
        assert_eq!(self_count.profile_count, d.profile_multiplicity());
    }
    // colorful never exceeds plain, and matches it on all-zero colors
    let g = Graph::from_colored_edges(
        4,
        vec![(0, 1, 0), (0, 2, 0), (0, 3, 0), (1, 2, 0), (1, 3, 0), (2, 3, 0)],
    )
    .unwrap();
    let hc = Pattern::new(
        Graph::from_colored_edges(3, vec![(0, 1, 0), (1, 2, 0), (0, 2, 0)]).unwrap(),
    )
    .unwrap();
    let c = exact_count(&g, &hc, true).unwrap();
    assert_eq!(c.colorful_count, Some(c.subgraph_count));
}

#[test]
fn dual_solutions_are_feasible_and_optimal() {
    for seed in 0..10u64 {
        let h = random_connected_pattern(3 + (seed % 3) as usize, (seed % 2) as usize, seed);
        let dual = subcount::instances::solve_vertex_dual(&h);
        for &(a, b) in h.graph().edges() {
            assert!(dual[a as usize] + dual[b as usize] <= Rational::one());
        }
        let d = decompose(&h).unwrap();
        assert_eq!(dual.iter().sum::<Rational>(), d.rho);
    }
}

#[test]
fn sampler_means_track_profile_counts_on_the_module_corpus() {
    // adaptive draw counts per the variance estimate, floored at 10^4
    let hosts = [
        ("k8", complete_graph(8)),
        ("gnm", gen_random(16, 40, 12).unwrap()),
    ];
    let patterns = [single_edge(), two_petal_star(), triangle(), k4_pattern()];
    for (hname, g) in &hosts {
        for h in &patterns {
            let d = decompose(h).unwrap();
            let target = {
                let c = exact_count(g, h, false).unwrap();
                (c.subgraph_count * d.profile_multiplicity()) as f64
            };
            if target == 0.0 {
                continue;
            }
            let mut s = QuerySession::new(g, 31);
            // pilot to size the main run
            let pilot = 10_000;
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for _ in 0..pilot {
                let y = subgraph_sampler_estimate(&mut s, h, &d, false).unwrap();
                sum += y;
                sumsq += y * y;
            }
            let var = (sumsq / pilot as f64 - (sum / pilot as f64).powi(2)).max(0.0);
            let n = ((400.0 * var / (target * target)).ceil() as u64).max(10_000);
            let mut total = 0.0;
            for _ in 0..n {
                total += subgraph_sampler_estimate(&mut s, h, &d, false).unwrap();
            }
            let mean = total / n as f64;
            assert!(
                (mean - target).abs() <= 0.1 * target,
                "{hname}: mean {mean} vs {target} over {n} draws"
            );
        }
    }
}
