use lipexp::experiments::{ratio_le_exp_neg, tree_ball_size};
use lipexp::graph::{self, ball, boundary, Graph, RandomRegularOptions, TreeShape, VertexSet};
use lipexp::height::{self, format_function, parse_function, validate, HeightFunction, Mode};
use lipexp::samplers::{self, format_samples, parse_samples, McmcParams, SampleBatch, TreeDp};
use num_bigint::BigUint;
use proptest::prelude::*;

/// `(n, d, seed)` with `n·d` even and `d < n`.
fn regular_params() -> impl Strategy<Value = (usize, usize, u64)> {
    (3usize..7, 6usize..40, any::<u64>()).prop_map(|(d, n, seed)| {
        let n = n.max(d + 1);
        (n + n * d % 2, d, seed)
    })
}

fn regular((n, d, seed): (usize, usize, u64)) -> Graph {
    graph::gen_random_regular(n, d, seed, RandomRegularOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generator_is_deterministic_and_regular(p in regular_params()) {
        let g = regular(p);
        prop_assert_eq!(g.degree(), Some(p.1));
        prop_assert!(g.is_connected());
        let again = regular(p);
        prop_assert_eq!(g.edges().collect::<Vec<_>>(), again.edges().collect::<Vec<_>>());
        for (u, v) in g.edges() {
            prop_assert!(u < v);
        }
    }

    #[test]
    fn graph_text_round_trips(p in regular_params()) {
        let g = regular(p);
        let back = graph::parse_graph(&graph::format_graph(&g)).unwrap();
        prop_assert_eq!(g.edges().collect::<Vec<_>>(), back.edges().collect::<Vec<_>>());
    }

    #[test]
    fn balls_grow_by_neighbourhoods(p in regular_params(), v in 0usize..6, t in 0usize..5) {
        let g = regular(p);
        let b = ball(&g, v, t);
        let next = ball(&g, v, t + 1);
        prop_assert!(b.is_subset(&next));
        prop_assert_eq!(&next, &b.union(&boundary(&g, &b).neighborhood));
        let dist = g.distances_from(v);
        for w in 0..g.n() {
            prop_assert_eq!(b.contains(w), dist[w] <= t);
        }
    }

    #[test]
    fn boundary_layers_are_disjoint(p in regular_params(), bits in any::<u64>()) {
        let g = regular(p);
        let a = VertexSet::from_iter(g.n(), (0..g.n()).filter(|&v| bits >> (v % 64) & 1 == 1));
        let bd = boundary(&g, &a);
        prop_assert!(bd.outer.is_disjoint(&a));
        prop_assert!(bd.outer2.is_disjoint(&a));
        prop_assert!(bd.outer2.is_disjoint(&bd.outer));
        for x in bd.outer.iter() {
            prop_assert!(g.neighbors(x).iter().any(|&w| a.contains(w)));
        }
    }

    #[test]
    fn lipschitz_phase_is_antisymmetric(p in regular_params(), m in 1u32..3, seed in any::<u64>()) {
        let g = regular(p);
        let lambda = p.1 as f64;
        let params = McmcParams { burnin: 500, thin: 37, n_samples: 20 };
        for f in samplers::mcmc_sample(&g, 0, Mode::Lipschitz(m), params, seed).unwrap() {
            prop_assert!(validate(&g, &f).is_empty());
            let ph = height::phase(&g, &f, lambda).unwrap();
            prop_assert_eq!(height::phase(&g, &f.negated(), lambda).unwrap(), ph.negated());
            prop_assert_eq!(ph.top() - ph.base(), if f.is_zero() { 0 } else { m as i32 });
        }
    }

    #[test]
    fn function_and_batch_text_round_trip(values in prop::collection::vec(-50i32..50, 1..30)) {
        let f = HeightFunction::new(values.clone(), 0, Mode::Lipschitz(100));
        prop_assert_eq!(parse_function(&format_function(&f)).unwrap(), values.clone());
        let batch = SampleBatch { header: vec![("seed".into(), "3".into())], samples: vec![values.clone(), values] };
        prop_assert_eq!(parse_samples(&format_samples(&batch)).unwrap(), batch);
    }

    #[test]
    fn tree_ball_formula_matches_bfs(d in 3usize..5, h in 1usize..4, j in 0usize..4, t in 0usize..7) {
        let j = j.min(h);
        let g = graph::gen_tree(d, h, false).unwrap();
        let shape = TreeShape { arity: d, height: h, glued: false };
        prop_assert_eq!(tree_ball_size(shape, j, t) as usize, ball(&g, shape.first_at(j), t).len());
    }

    #[test]
    fn tree_samples_are_valid(d in 3usize..5, h in 1usize..4, hom in any::<bool>(), seed in any::<u64>()) {
        let mode = if hom { Mode::Homomorphism } else { Mode::Lipschitz(1) };
        let dp = TreeDp::new(d, h, mode).unwrap();
        let g = graph::gen_tree(d, h, true).unwrap();
        let f = samplers::tree_sample(&dp, seed, true).unwrap();
        prop_assert!(validate(&g, &f).is_empty());
        prop_assert_eq!(f.root(), g.glue_vertex().unwrap());
    }

    #[test]
    fn exact_exp_comparison_agrees_with_floats(p in 1u64..1000, q in 1u64..1000, a in 1u64..40, b in 1u32..8) {
        let lhs = (p as f64 / q as f64).ln();
        let rhs = -(a as f64) / b as f64;
        prop_assume!((lhs - rhs).abs() > 1e-9);
        let exact = ratio_le_exp_neg(&BigUint::from(p), &BigUint::from(q), &BigUint::from(a), b);
        prop_assert_eq!(exact, Some(lhs <= rhs));
    }
}

#[test]
fn path_and_even_cycle_counts() {
    // Pinned at an end, every step of a path is free: (2M+1)^(n-1).
    for n in 2..7 {
        for m in 1..3u32 {
            let count = samplers::enumerate(&graph::path(n), 0, Mode::Lipschitz(m), 1 << 20).unwrap().count;
            assert_eq!(count, (2 * m as usize + 1).pow(n as u32 - 1));
        }
    }
    // Homomorphisms of C_2k are ±1 step sequences summing to zero.
    for k in 2..7usize {
        let count = samplers::enumerate(&graph::cycle(2 * k), 0, Mode::Homomorphism, 1 << 20).unwrap().count;
        let binom = (1..=k).fold(1usize, |acc, i| acc * (k + i) / i);
        assert_eq!(count, binom);
    }
}
