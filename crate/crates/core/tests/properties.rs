use proptest::prelude::*;

use babgraph::bab::{generate_random_bab, is_r_disjoint, recognize_bab, GenParams};
use babgraph::gallai_edmonds::gallai_edmonds;
use babgraph::graph::DEFAULT_CYCLE_CAP;
use babgraph::independence::{critical_profile, difference, is_independent, matches_into};
use babgraph::matching::{all_maximum_matchings, maximum_matching};
use babgraph::spectral::{adjacency_determinant, for_each_sachs, DEFAULT_SACHS_CAP};
use babgraph::verify::{graph_from_mask, sterboul_equivalence};
use babgraph::{oracle, Graph, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    sparse_graph(max_n, 0.5)
}

fn sparse_graph(max_n: usize, p: f64) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(proptest::bool::weighted(p), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(&e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::bits::u64::between(0, n.max(1)).prop_map(move |m| VertexSet::from_mask(m & ((1u64 << n) - 1)))
}

fn graph_and_subset(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), subset(n))
    })
}

fn bab_seed() -> impl Strategy<Value = (u64, GenParams)> {
    (any::<u64>(), 0usize..=2, 0usize..=4, prop_oneof![Just(3usize), Just(5)], 1usize..=2, 0.0f64..0.6).prop_map(
        |(seed, k, bip, cyc, depth, crossing)| {
            let p = GenParams {
                k,
                bipartite_order: (0, bip),
                cycle_length: (3, cyc),
                attachment_depth: depth,
                crossing_density: crossing,
                allow_disconnected: false,
            };
            (seed, p)
        },
    )
}

/// Every matching of size `target`, by plain recursion over the edge list.
fn count_matchings(g: &Graph, target: usize) -> usize {
    fn go(edges: &[(usize, usize)], used: u64, left: usize) -> usize {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if used >> u & 1 == 0 && used >> v & 1 == 0 {
                total += go(&edges[i + 1..], used | 1 << u | 1 << v, left - 1);
            }
        }
        total
    }
    go(g.edges(), 0, target)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn edge_list_round_trip(g in graph(10)) {
        let text = g.to_edge_list();
        let h = Graph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(&h, &g);
        prop_assert_eq!(h.to_edge_list(), text);
    }

    #[test]
    fn boundary_lies_in_set_and_neighborhood_of_complement((g, s) in graph_and_subset(10)) {
        let b = g.boundary_vertices(&s).unwrap();
        let rest = VertexSet::full(g.order()).difference(&s);
        prop_assert!(b.is_subset(&s));
        prop_assert!(b.is_subset(&g.neighborhood(&rest, false).unwrap()));
    }

    #[test]
    fn odd_cycles_are_simple_odd_cycles_of_the_graph(g in graph(8)) {
        for c in &g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP).unwrap().cycles {
            prop_assert!(c.is_odd());
            prop_assert!(c.is_cycle_of(&g));
            prop_assert_eq!(c.vertex_set().len(), c.len());
        }
    }

    #[test]
    fn maximum_matching_has_oracle_size(g in graph(12)) {
        let m = maximum_matching(&g);
        prop_assert!(m.is_matching_of(&g));
        prop_assert_eq!(m.size(), oracle::matching_number_and_d(&g).0);
    }

    #[test]
    fn maximum_matching_count_matches_recursion(g in graph(8)) {
        let mu = maximum_matching(&g).size();
        let all = all_maximum_matchings(&g, 100_000).unwrap();
        prop_assert_eq!(all.len(), count_matchings(&g, mu));
    }

    #[test]
    fn adding_a_edges_keeps_d(
        g1 in sparse_graph(7, 0.25),
        g2 in sparse_graph(5, 0.25),
        pick in any::<prop::sample::Index>(),
    ) {
        // Covers edges inside one graph and edges between two disjoint ones.
        let g = g1.disjoint_union(&g2);
        let dec = gallai_edmonds(&g);
        let targets = dec.a.union(&dec.c);
        let candidates: Vec<(usize, usize)> = dec
            .a
            .iter()
            .flat_map(|u| targets.iter().map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && !g.has_edge(u, v))
            .collect();
        prop_assume!(!candidates.is_empty());
        let (u, v) = candidates[pick.index(candidates.len())];
        let h = g.with_edge(u, v).unwrap();
        prop_assert_eq!(oracle::matching_number_and_d(&h).1, dec.d);
    }

    #[test]
    fn ker_inside_core_and_critical_sets_avoid_a(g in graph(10)) {
        let p = critical_profile(&g).unwrap();
        let dec = gallai_edmonds(&g);
        prop_assert!(p.ker.is_subset(&p.core));
        let i = &p.witnesses.critical_independent;
        prop_assert!(g.neighborhood(i, false).unwrap().is_disjoint(&dec.d));
        prop_assert!(i.is_disjoint(&dec.a));
    }

    #[test]
    fn critical_sets_closed_under_union_and_intersection(g in graph(7)) {
        let n = g.order();
        let d = critical_profile(&g).unwrap().d;
        let critical: Vec<VertexSet> = (0u64..1 << n)
            .map(VertexSet::from_mask)
            .filter(|s| difference(&g, s).unwrap() == d)
            .collect();
        for a in &critical {
            for b in &critical {
                prop_assert_eq!(difference(&g, &a.union(b)).unwrap(), d);
                prop_assert_eq!(difference(&g, &a.intersection(b)).unwrap(), d);
            }
        }
    }

    #[test]
    fn independent_sets_match_into_a_maximum_one(g in graph(8)) {
        let n = g.order();
        let (alpha, s) = babgraph::independence::alpha(&g).unwrap();
        prop_assert_eq!(s.len(), alpha);
        for mask in 0u64..1 << n {
            let i = VertexSet::from_mask(mask);
            if i.is_disjoint(&s) && is_independent(&g, &i) {
                prop_assert!(matches_into(&g, &i, &s), "{} cannot be matched into {}", i, s);
            }
        }
    }

    #[test]
    fn determinant_multiplies_over_disjoint_union(g in graph(7), h in graph(7)) {
        let u = g.disjoint_union(&h);
        prop_assert_eq!(adjacency_determinant(&u), adjacency_determinant(&g) * adjacency_determinant(&h));
    }

    #[test]
    fn generated_instances_are_valid_bab_graphs((seed, p) in bab_seed()) {
        let (g, s) = generate_random_bab(seed, &p).unwrap();
        s.validate(&g).unwrap();
        let mut d_blocks = VertexSet::new();
        for blk in std::iter::once(&s.b).chain(&s.parts) {
            let (h, map) = g.induced_subgraph(blk).unwrap();
            d_blocks = d_blocks.union(&gallai_edmonds(&h).d.map(&map));
        }
        let dec = gallai_edmonds(&g);
        prop_assert_eq!(&d_blocks, &dec.d);
        // Components of G[D]: the k odd cycles plus isolated vertices.
        let cycles: Vec<VertexSet> = s.odd_cycles.iter().map(|c| c.vertex_set()).collect();
        let mut big = 0;
        for comp in &dec.components_of_d {
            if comp.len() > 1 {
                big += 1;
                prop_assert!(cycles.contains(comp), "component {} is not one of the odd cycles", comp);
            }
        }
        prop_assert_eq!(big, s.k);
    }

    #[test]
    fn no_sachs_component_crosses_blocks((seed, p) in bab_seed()) {
        let (g, s) = generate_random_bab(seed, &p).unwrap();
        prop_assume!(g.order() <= 18);
        let block = s.block_of(g.order());
        let mut crossing = 0;
        for_each_sachs(&g, DEFAULT_SACHS_CAP, |h| {
            for comp in h.component_sets() {
                let first = block[comp.as_slice()[0]];
                crossing += comp.iter().any(|v| block[v] != first) as usize;
            }
            false
        })
        .unwrap();
        prop_assert_eq!(crossing, 0);
    }

    #[test]
    fn lone_odd_cycle_is_a_component_of_d(seed in any::<u64>(), cyc in prop_oneof![Just(3usize), Just(5), Just(7)]) {
        let p = GenParams { k: 1, bipartite_order: (0, 0), cycle_length: (cyc, cyc), ..GenParams::default() };
        let (g, s) = generate_random_bab(seed, &p).unwrap();
        let dec = gallai_edmonds(&g);
        prop_assert!(dec.components_of_d.contains(&s.odd_cycles[0].vertex_set()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn flower_or_posy_iff_not_ke(g in graph(12)) {
        match sterboul_equivalence(&g) {
            Ok(v) => prop_assert!(v.is_none(), "{:?}", v),
            Err(e) => prop_assume!(!e.is_guard(), "{}", e),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn recognition_agrees_with_r_disjointness(g in graph(9)) {
        prop_assume!(!g.is_bipartite());
        let odd = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP).unwrap().len();
        let r = recognize_bab(&g).unwrap();
        prop_assume!(r.structure.is_some() || r.exhaustive);
        let recognized = r.structure.is_some_and(|s| s.k == odd);
        prop_assert_eq!(recognized, is_r_disjoint(&g).unwrap().r_disjoint);
    }
}

#[test]
fn bipartite_iff_no_odd_cycle_up_to_six() {
    for n in 0usize..=6 {
        for mask in 0u64..1 << (n * n.saturating_sub(1) / 2) {
            let g = graph_from_mask(n, mask);
            let none = g.enumerate_odd_cycles(DEFAULT_CYCLE_CAP).unwrap().is_empty();
            assert_eq!(g.bipartition().is_some(), none, "n={n} mask={mask:#x}");
        }
    }
}
