//! Cross-module property tests on randomly generated instances.
//!
//! Fixed expected values live next to their modules; this suite checks the
//! invariants that should survive arbitrary inputs: partitions partition,
//! round-trips are lossless, witnesses re-validate, separators audit clean,
//! and the solver never disagrees with the brute-force oracle.

use evensep::bags::central_bag;
use evensep::dimacs::{parse_dimacs, render_dimacs};
use evensep::generate;
use evensep::recognition::{breaks, find_c4, find_paws, find_prism, is_even_pair};
use evensep::separator::{tame_separator, verify_separator};
use evensep::solver::{brute_force_mwis, solve, verify_solution, SolveConfig};
use evensep::stars::{canonical_star_separation, star_covering, StarSystem};
use evensep::{Graph, VertexSet, Weights};
use num::{BigRational, One, Zero};
use proptest::prelude::*;

/// Simple graph on 2..=max_n vertices with each pair drawn independently.
fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(prop::bool::weighted(0.35), pairs).prop_map(move |mask| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if mask[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).expect("pairs are distinct and in range")
        })
    })
}

fn subset_of(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(move |mask| {
        VertexSet::from_vertices(
            n,
            mask.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    })
}

/// Instances inside the target class, drawn from all three generators.
fn arb_class_instance() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (3usize..=12).prop_map(|h| generate::cycle(2 * h).expect("even length at least 6")),
        (5usize..=20).prop_map(|n| generate::path(n).expect("nonempty path")),
        ((2usize..=4), 0u64..200).prop_map(|(h, seed)| {
            generate::subdivided_regular(2 * h, 3, seed).expect("cubic base exists")
        }),
    ]
}

proptest! {
    #[test]
    fn components_partition_the_alive_set(
        (g, alive) in arb_graph(9).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), subset_of(n))
        })
    ) {
        let parts = g.components(&alive);
        let mut seen = VertexSet::new(g.n());
        for part in &parts {
            prop_assert!(!part.is_empty());
            prop_assert!(part.is_subset_of(&alive));
            prop_assert!(seen.intersection(part).is_empty());
            seen.union_with(part);
            let (h, _) = g.induced(part);
            prop_assert!(h.is_connected());
        }
        prop_assert_eq!(seen, alive.clone());
        for (i, part) in parts.iter().enumerate() {
            let reach = g.neighborhood(part);
            for other in parts.iter().skip(i + 1) {
                prop_assert!(reach.intersection(other).is_empty());
            }
        }
    }

    #[test]
    fn balls_grow_with_radius(
        (g, v, d1, d2) in arb_graph(9).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), 0..n, 0usize..5, 0usize..5)
        })
    ) {
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let small = g.ball(v, lo);
        let big = g.ball(v, hi);
        prop_assert!(small.is_subset_of(&big));
        prop_assert!(g.ball(v, 0).contains(v));
        prop_assert_eq!(g.ball(v, 0).len(), 1);
    }

    #[test]
    fn uniform_weights_partition_exactly(
        (g, labels) in arb_graph(9).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), proptest::collection::vec(0usize..4, n))
        })
    ) {
        let w = Weights::uniform(g.n());
        let mut total = BigRational::from_integer(0.into());
        for part in 0..4 {
            let cell = VertexSet::from_vertices(
                g.n(),
                labels.iter().enumerate().filter(|(_, l)| **l == part).map(|(i, _)| i),
            );
            total += w.set_weight(&cell);
        }
        prop_assert!(total.is_one());
    }

    #[test]
    fn structure_witnesses_revalidate(g in arb_graph(9)) {
        if let Some(w) = find_c4(&g) {
            prop_assert!(w.validate(&g));
        }
        if let Some(w) = find_prism(&g) {
            prop_assert!(w.validate(&g));
        }
        for w in find_paws(&g) {
            prop_assert!(w.validate(&g));
        }
    }

    #[test]
    fn breaking_survives_anchor_growth(
        (g, v, x, extra) in arb_graph(9).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), 0..n, subset_of(n), subset_of(n))
        })
    ) {
        let bigger = x.union(&extra);
        if breaks(&g, v, &x) {
            prop_assert!(breaks(&g, v, &bigger));
        }
    }

    #[test]
    fn rendered_graphs_parse_back_identically(g in arb_graph(12)) {
        let back = parse_dimacs(&render_dimacs(&g)).expect("own output parses");
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn canonical_star_separations_hold_their_invariants(g in arb_graph(9)) {
        prop_assume!(g.is_connected());
        let w = Weights::uniform(g.n());
        for v in 0..g.n() {
            let s = canonical_star_separation(&g, &w, v);
            prop_assert!(s.sep.is_valid(&g), "vertex {}", v);
            prop_assert!(s.sep.c.contains(v));
            let closed = g.closed_neighborhood(&VertexSet::from_vertices(g.n(), [v]));
            prop_assert!(s.sep.c.is_subset_of(&closed));
            let alive = closed.complement();
            let comps = g.components(&alive);
            if comps.is_empty() {
                prop_assert!(s.sep.b.is_empty());
            } else {
                prop_assert!(comps.contains(&s.sep.b));
                for comp in &comps {
                    prop_assert!(w.set_weight_le(comp, &w.set_weight(&s.sep.b)));
                }
            }
            // With b empty the whole neighborhood is absorbed into c.
            if !s.sep.b.is_empty() {
                for u in s.sep.c.iter().filter(|&u| u != v) {
                    prop_assert!(
                        !g.row(u).intersection(&s.sep.b).is_empty(),
                        "center vertex {} has no neighbor in b",
                        u
                    );
                }
            }
        }
    }

    #[test]
    fn central_bag_conserves_total_weight(g in arb_graph(9)) {
        prop_assume!(g.is_connected());
        let w = Weights::uniform(g.n());
        let full = VertexSet::full(g.n());
        for v in 0..g.n() {
            let s = canonical_star_separation(&g, &w, v);
            if s.sep.a.is_empty() {
                continue;
            }
            let expected = full.difference(&s.sep.a);
            let cb = central_bag(&g, &w, &full, std::slice::from_ref(&s))
                .expect("single separation always audits clean");
            prop_assert_eq!(cb.vertices.clone(), expected);
            prop_assert_eq!(cb.weights.total(), w.total());
            prop_assert!(cb.weights.set_weight(&s.sep.a).is_zero());
        }
    }

    #[test]
    fn star_covering_is_an_antichain(g in arb_graph(8)) {
        prop_assume!(g.is_connected());
        let system = StarSystem::build(&g, &Weights::uniform(g.n()));
        let order = match system.build_order() {
            Ok(order) => order,
            Err(_) => return Ok(()),
        };
        let covering = star_covering(&order);
        prop_assert!(!covering.is_empty());
        for x in covering.iter() {
            for y in covering.iter() {
                if x != y {
                    prop_assert!(!order.le(x, y), "{} and {} are comparable", x, y);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn even_pairs_survive_vertex_deletion(
        (g, u, v, z) in arb_graph(9).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), 0..n, 0..n, 0..n)
        })
    ) {
        prop_assume!(u != v && z != u && z != v);
        prop_assume!(is_even_pair(&g, u, v) == Ok(true));
        let mut keep = VertexSet::full(g.n());
        keep.remove(z);
        let (h, map) = g.induced(&keep);
        let hu = map.iter().position(|&o| o == u).expect("u kept");
        let hv = map.iter().position(|&o| o == v).expect("v kept");
        prop_assert_eq!(is_even_pair(&h, hu, hv), Ok(true));
    }

    #[test]
    fn pipeline_separators_pass_their_audits(g in arb_class_instance()) {
        let c = BigRational::new(3.into(), 5.into());
        let sep = tame_separator(&g, &Weights::uniform(g.n()), &c)
            .expect("class instances decompose");
        let report = verify_separator(&g, &sep, false);
        prop_assert!(report.violations.is_empty(), "{:?}", report.violations);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_agrees_with_the_oracle_on_class_instances(
        seed in 0u64..10_000,
        n in 6usize..=12,
        raw in proptest::collection::vec(0i64..=50, 12),
    ) {
        let p = BigRational::new(1.into(), 4.into());
        let g = match generate::filtered_random(n, &p, seed, 20_000) {
            Ok(g) => g,
            Err(_) => return Ok(()),
        };
        let w = Weights::from_integers(&raw[..g.n()]);
        let config = SolveConfig {
            base_threshold: 6,
            spot_check: true,
            ..SolveConfig::default()
        };
        let fast = solve(&g, &w, &config).expect("class instance solves");
        let slow = brute_force_mwis(&g, &w).expect("small instance");
        prop_assert_eq!(fast.weight, slow.weight);
        prop_assert!(verify_solution(&g, &w, &fast));
        prop_assert!(verify_solution(&g, &w, &slow));
    }

    #[test]
    fn isolated_vertices_add_their_weight_exactly(
        (g, raw, t) in arb_graph(9).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), proptest::collection::vec(0i64..=50, n), 0i64..=100)
        })
    ) {
        let base = brute_force_mwis(&g, &Weights::from_integers(&raw))
            .expect("small instance");
        let grown = Graph::from_edges(g.n() + 1, &g.edges()).expect("same edge list");
        let mut raw2 = raw.clone();
        raw2.push(t);
        let bigger = brute_force_mwis(&grown, &Weights::from_integers(&raw2))
            .expect("small instance");
        prop_assert_eq!(bigger.weight, base.weight + t);
        prop_assert!(bigger.solution.contains(g.n()) || t == 0);
    }
}
