use std::collections::BTreeSet;

use lscg::oracle::{brute_force_strong_connectivities, exact_strong_connectivities, min_cut};
use lscg::{query_edge, Config, EdgeRef, Graph, ProbeStats, SkeletonState, StreamKey};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let k = pairs.len();
            (Just(n), Just(pairs), proptest::collection::vec(any::<bool>(), k))
        })
        .prop_map(|(n, pairs, keep)| {
            let edges = pairs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
}

fn connected_graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    graph_strategy(max_n).prop_map(|g| {
        // Add a path so every instance is connected.
        let path = (1..g.n()).map(|i| (i - 1, i));
        let extra: Vec<(usize, usize)> = g.edges().map(|e| (e.a, e.b)).collect();
        let mut all: BTreeSet<(usize, usize)> = extra.into_iter().collect();
        all.extend(path);
        Graph::from_edges(g.n(), all).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(20)) {
        let text = g.to_edge_list();
        prop_assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn adjacency_inverts_neighbor(g in graph_strategy(16)) {
        let view = g.view();
        for u in 0..g.n() {
            for v in 0..g.n() {
                match view.adjacency(u, v).unwrap() {
                    Some(i) => prop_assert_eq!(view.neighbor(u, i).unwrap(), v),
                    None => prop_assert!(!g.has_edge(u, v)),
                }
            }
        }
    }

    #[test]
    fn interleaved_next_neighbor_is_symmetric(
        g in graph_strategy(14),
        p in 0.05f64..1.0,
        seed in any::<u64>(),
        calls in proptest::collection::vec(0usize..14, 0..60),
    ) {
        let view = g.view();
        let mut s = SkeletonState::new(&view, p, &StreamKey::new(seed)).unwrap();
        let mut seen: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        // An arbitrary interleaving first, then drain everything.
        for u in calls.into_iter().filter(|&u| u < g.n()).chain(0..g.n()) {
            let mut next = s.next_neighbor(u).unwrap();
            while let Some(v) = next {
                seen[u].push(v);
                next = if seen[u].len().is_multiple_of(3) { None } else { s.next_neighbor(u).unwrap() };
            }
        }
        for (u, list) in seen.iter_mut().enumerate() {
            while let Some(v) = s.next_neighbor(u).unwrap() {
                list.push(v);
            }
        }
        for u in 0..g.n() {
            prop_assert!(seen[u].windows(2).all(|w| w[0] < w[1]), "neighbors of {} not increasing", u);
            for &v in &seen[u] {
                prop_assert!(g.has_edge(u, v));
                prop_assert!(seen[v].contains(&u), "({}, {}) seen from one side only", u, v);
            }
            prop_assert!(s.last(u) <= g.deg(u) + 1);
        }
    }

    #[test]
    fn restricted_reachability_is_a_subset(
        g in connected_graph_strategy(14),
        p in 0.1f64..1.0,
        seed in any::<u64>(),
        mask in proptest::collection::vec(any::<bool>(), 14),
    ) {
        let view = g.view();
        let members = |x: usize| x == 0 || mask[x];
        let mut s = SkeletonState::new(&view, p, &StreamKey::new(seed)).unwrap();
        let reached = s.reachable(0, members).unwrap();
        prop_assert_eq!(reached[0], 0);
        prop_assert!(reached.iter().all(|&x| members(x)));
        let unique: BTreeSet<usize> = reached.iter().copied().collect();
        prop_assert_eq!(unique.len(), reached.len());
    }

    #[test]
    fn oracle_agrees_and_respects_degrees(g in connected_graph_strategy(8)) {
        let exact = exact_strong_connectivities(&g).unwrap();
        prop_assert_eq!(&exact, &brute_force_strong_connectivities(&g).unwrap());
        prop_assert!(exact.degree_bound_holds(&g));
        prop_assert!(exact.edge_count_bound_holds());
        prop_assert!(exact.reciprocal_sum() <= (g.n() - 1) as f64 + 1e-9);
        let c = min_cut(&g).unwrap().value;
        prop_assert!(exact.values.values().all(|&s| s >= c));
    }

    #[test]
    fn ladder_length_is_bounded(g in connected_graph_strategy(12), t in 1.0f64..6.0, seed in any::<u64>()) {
        let config = Config::new(t, seed).with_scale(0.05);
        for e in g.edges() {
            let d = query_edge(&g.view(), e, &config).unwrap();
            let min_deg = g.deg(e.a).min(g.deg(e.b)) as f64;
            let bound = if min_deg > t { (min_deg / t).log2().ceil() as usize + 1 } else { 0 };
            prop_assert!(d.tester_calls <= bound, "{} calls, bound {}", d.tester_calls, bound);
            prop_assert!(!d.below_threshold || (d.accepted && d.s_hat == t));
        }
    }

    #[test]
    fn probe_stats_add_sub(a in 0u64..1 << 40, b in 0u64..1 << 40, c in 0u64..1 << 40) {
        let x = ProbeStats { degree_probes: a, neighbor_probes: b, adjacency_probes: c };
        let y = ProbeStats { degree_probes: c, neighbor_probes: a, adjacency_probes: b };
        prop_assert_eq!((x + y) - y, x);
        prop_assert_eq!((x + y).total(), x.total() + y.total());
    }

    #[test]
    fn edge_ref_is_canonical(u in 0usize..100, v in 0usize..100) {
        match EdgeRef::new(u, v) {
            Ok(e) => prop_assert!(e.a < e.b && e == EdgeRef::new(v, u).unwrap()),
            Err(_) => prop_assert_eq!(u, v),
        }
    }
}
