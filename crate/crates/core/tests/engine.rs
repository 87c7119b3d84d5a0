use lscg::generate::{complete, generate, GeneratorKind};
use lscg::oracle::exact_strong_connectivities;
use lscg::{
    lambda_prime, materialize_subgraph, query_edge, test_guess, Config, ConfigF32, EdgeRef, Graph, SkeletonState,
    StreamKey, Tester,
};

fn e(a: usize, b: usize) -> EdgeRef {
    EdgeRef::new(a, b).unwrap()
}

/// Two stars with centers 0 and 1 joined by the edge (0, 1); the bridge has
/// both endpoint degrees above the threshold.
fn double_star(leaves: usize) -> Graph {
    let left = (0..leaves).map(|i| (0, 2 + i));
    let right = (0..leaves).map(|i| (1, 2 + leaves + i));
    Graph::from_edges(2 + 2 * leaves, left.chain(right).chain([(0, 1)])).unwrap()
}

#[test]
fn tree_edges_always_kept() {
    let star = generate(GeneratorKind::Star { n: 40 }, 0).unwrap();
    let ds = double_star(12);
    for seed in 0..100 {
        let config = Config::new(4.0, seed).with_scale(0.1);
        assert!(query_edge(&star.view(), e(0, 7), &config).unwrap().accepted);
        let d = query_edge(&ds.view(), e(0, 1), &config).unwrap();
        assert!(d.accepted, "seed {seed}: {d:?}");
    }
}

#[test]
fn k32_accepted_guess_brackets_strong_connectivity() {
    let g = complete(32).unwrap();
    let s_e = exact_strong_connectivities(&g).unwrap().get(e(0, 1)).unwrap() as f64;
    assert_eq!(s_e, 31.0);
    let tester = Tester::default().with_scale(0.1);
    let upper = 2.0 * lambda_prime(&tester, 32).unwrap() * s_e;
    let mut inside = 0;
    for seed in 0..100 {
        let d = query_edge(&g.view(), e(0, 1), &Config::new(4.0, seed).with_scale(0.1)).unwrap();
        if let Some(g_star) = d.g_star {
            if (s_e / 2.0..=upper).contains(&g_star) {
                inside += 1;
            }
        }
    }
    assert!(inside >= 90, "{inside}/100");
}

#[test]
fn threshold_above_max_degree_keeps_everything() {
    let g = generate(GeneratorKind::Gnp { n: 40, p: 0.3 }, 5).unwrap();
    let max_deg = (0..g.n()).map(|u| g.deg(u)).max().unwrap();
    let out = materialize_subgraph(&g, &Config::new(max_deg as f64, 1)).unwrap();
    assert_eq!(out.edges, g.edges().collect::<Vec<_>>());
    assert_eq!(out.tester_calls, 0);
    assert_eq!(out.below_threshold, g.m());
}

#[test]
fn f32_and_f64_agree_on_clean_decisions() {
    // Power-of-two constants keep every intermediate exact in both widths.
    let g = complete(16).unwrap();
    for seed in 0..5 {
        let a = query_edge(&g.view(), e(2, 9), &Config::new(4.0, seed).with_scale(0.125)).unwrap();
        let b = query_edge(&g.view(), e(2, 9), &ConfigF32::new(4.0, seed).with_scale(0.125)).unwrap();
        assert_eq!(a.accepted, b.accepted);
        assert_eq!(a.tester_calls, b.tester_calls);
        assert_eq!(a.g_star.map(|x| x as f32), b.g_star);
    }
}

#[test]
fn probe_accounting_matches_view_delta() {
    let g = generate(GeneratorKind::Gnp { n: 30, p: 0.4 }, 2).unwrap();
    let view = g.view();
    let mut total = lscg::ProbeStats::default();
    for edge in g.edges().take(20) {
        total = total + query_edge(&view, edge, &Config::new(2.0, 3).with_scale(0.1)).unwrap().probes;
    }
    assert_eq!(view.probe_count(), total);

    let view = g.view();
    let out = test_guess(&view, e(0, g.neighbors(0)[0]), 6.0, &Tester::default().with_scale(0.1), 4).unwrap();
    assert_eq!(view.probe_count().total(), out.probes.total() + 1);
}

#[test]
fn skeleton_edges_are_pairwise_independent() {
    let g = complete(5).unwrap();
    let keys = 20_000;
    let p = 0.4;
    let pairs = [(e(0, 1), e(2, 3)), (e(0, 1), e(0, 2)), (e(1, 4), e(3, 4))];
    let mut joint = [0usize; 3];
    for k in 0..keys {
        let view = g.view();
        let edges = SkeletonState::new(&view, p, &StreamKey::new(77).with(k as u64)).unwrap().materialize().unwrap();
        for (i, (x, y)) in pairs.iter().enumerate() {
            joint[i] += (edges.contains(x) && edges.contains(y)) as usize;
        }
    }
    let q = p * p;
    let sigma = (q * (1.0 - q) / keys as f64).sqrt();
    for (i, &c) in joint.iter().enumerate() {
        let f = c as f64 / keys as f64;
        assert!((f - q).abs() <= 3.0 * sigma, "pair {i}: {f} vs {q}");
    }
}
