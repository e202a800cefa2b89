//! Property tests over randomly generated graphs and monomials.

use num::{BigUint, One};
use proptest::prelude::*;

use frl_core::power::{divergence_degree, is_eg_primitive, period_convergence_precheck};
use frl_core::{
    are_isomorphic, coproduct, enumerate_graphs, wick_submonomials, Multigraph, VertexMonomial,
    VertexSubset,
};

/// Strategy: a graph on 1..=6 vertices with up to 9 random edges. Edge keys
/// map bijectively onto off-diagonal pairs so nothing gets rejected.
fn graph_strategy() -> impl Strategy<Value = Multigraph> {
    (1usize..=6).prop_flat_map(|n| {
        if n == 1 {
            return Just(Multigraph::edgeless(1).unwrap()).boxed();
        }
        proptest::collection::vec(0..n * (n - 1), 0..=9)
            .prop_map(move |keys| {
                let edges: Vec<(usize, usize)> = keys
                    .into_iter()
                    .map(|k| {
                        let i = k / (n - 1);
                        let r = k % (n - 1);
                        (i, r + usize::from(r >= i))
                    })
                    .collect();
                Multigraph::from_edges(n, &edges).unwrap()
            })
            .boxed()
    })
}

fn permutation_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn relabel(g: &Multigraph, perm: &[usize]) -> Multigraph {
    let edges: Vec<(usize, usize)> =
        g.edge_list().iter().map(|&(i, j)| (perm[i], perm[j])).collect();
    Multigraph::from_edges(g.n_vertices(), &edges).unwrap()
}

fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn loop_number_is_nonnegative_and_zero_on_forests(g in graph_strategy()) {
        // usize return type already forces nonnegativity; recompute by hand
        let c = g.connected_component_count();
        prop_assert_eq!(g.loop_number() as i64,
            g.edge_count() as i64 - g.n_vertices() as i64 + c as i64);
    }

    #[test]
    fn trees_have_loop_number_zero(n in 1usize..=7) {
        // random-ish spanning tree: attach each vertex to an earlier one
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v, v / 2)).collect();
        let t = Multigraph::from_edges(n, &edges).unwrap();
        prop_assert_eq!(t.loop_number(), 0);
    }

    #[test]
    fn induced_subgraphs_never_gain_edges(g in graph_strategy(), raw in proptest::collection::vec(0usize..6, 1..6)) {
        let members: Vec<usize> = raw.into_iter().map(|v| v % g.n_vertices()).collect();
        let subset = VertexSubset::new(members).unwrap();
        let sub = g.induced_subgraph(&subset).unwrap();
        prop_assert!(sub.edge_count() <= g.edge_count());
    }

    #[test]
    fn symmetry_factor_divides_edge_count_factorial(g in graph_strategy()) {
        let sym = g.symmetry_factor();
        let bound = factorial(g.edge_count());
        prop_assert!((&bound % &sym) == BigUint::ZERO, "{sym} does not divide {bound}");
    }

    #[test]
    fn isomorphism_is_an_equivalence(g in graph_strategy().prop_flat_map(|g| {
        let n = g.n_vertices();
        (Just(g), permutation_strategy(n), permutation_strategy(n))
    })) {
        let (g, p1, p2) = g;
        let a = relabel(&g, &p1);
        let b = relabel(&g, &p2);
        // reflexive, symmetric, transitive across relabelings
        prop_assert!(are_isomorphic(&g, &g).unwrap());
        prop_assert!(are_isomorphic(&g, &a).unwrap());
        prop_assert!(are_isomorphic(&a, &g).unwrap());
        prop_assert!(are_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn primitivity_predicates_coincide(g in graph_strategy(), d in prop_oneof![Just(4u32), Just(6), Just(8)]) {
        prop_assert_eq!(is_eg_primitive(&g, d), period_convergence_precheck(&g, d));
        if is_eg_primitive(&g, d) {
            prop_assert_eq!(divergence_degree(&g, d), 0);
        }
    }

    #[test]
    fn wick_submonomial_count_is_a_product(powers in proptest::collection::vec(1u32..5, 1..4)) {
        let factors: Vec<(String, u32)> = powers
            .iter()
            .enumerate()
            .map(|(i, &p)| (format!("f{i}"), p))
            .collect();
        let m = VertexMonomial::from_factors(factors).unwrap();
        let expected: usize = powers.iter().map(|&p| p as usize + 1).product();
        prop_assert_eq!(wick_submonomials(&m).len(), expected);
    }

    #[test]
    fn coproduct_sums_to_two_to_the_degree(powers in proptest::collection::vec(1u32..5, 1..4)) {
        let factors: Vec<(String, u32)> = powers
            .iter()
            .enumerate()
            .map(|(i, &p)| (format!("f{i}"), p))
            .collect();
        let m = VertexMonomial::from_factors(factors).unwrap();
        let total: u64 = coproduct(&m).iter().map(|t| t.coefficient).sum();
        prop_assert_eq!(total, 1u64 << m.total_degree());
    }
}

#[test]
fn enumerated_graphs_satisfy_structural_invariants() {
    for n in 1..=4usize {
        for g in enumerate_graphs(n, 3, false).unwrap() {
            for i in 0..n {
                assert_eq!(g.multiplicity(i, i), 0);
                for j in 0..n {
                    assert_eq!(g.multiplicity(i, j), g.multiplicity(j, i));
                }
            }
            let from_pairs: usize =
                g.vertex_pairs().iter().map(|&(_, _, m)| m as usize).sum();
            assert_eq!(from_pairs, g.edge_count());
            assert_eq!(g.edge_list().len(), g.edge_count());
        }
    }
}

#[test]
fn enumeration_is_lexicographic_and_complete() {
    let graphs = enumerate_graphs(3, 2, false).unwrap();
    let triangles: Vec<&[u32]> = graphs.iter().map(|g| g.upper_triangle()).collect();
    let mut sorted = triangles.clone();
    sorted.sort();
    assert_eq!(triangles, sorted);
    // tuples with sum <= 2 over three slots: C(3,0)+C(3,1)+C(3+1,2) = 10
    assert_eq!(graphs.len(), 10);
}
