//! Invariants over random inputs.

use planarwidth::arrangement::{
    arrangement_to_path_decomposition, edge_separation, span, vertex_separation, LinearArrangement,
};
use planarwidth::decomposition::{
    branch_to_carving, carving_to_branch, caterpillar_carving_from_arrangement, random_binary_tree,
    random_carving, restricted_partition, validate_branch, validate_carving,
    validate_restricted_partition, validate_tree_decomposition,
};
use planarwidth::drawing::{
    check_general_position, crossing_graph, crossings, planarize_drawing, Drawing,
};
use planarwidth::generators::random_connected;
use planarwidth::geometry::Point;
use planarwidth::planarize::{
    carving_guided_with, clustered_carving_with, convex_lift_with, Witness,
};
use planarwidth::{oracle, Execution, Graph, Solver, VertexKind};
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..=7, 0usize..=8, any::<u64>())
        .prop_map(|(n, extra, seed)| random_connected(n, extra, seed).unwrap())
}

fn medium_graph() -> impl Strategy<Value = Graph> {
    (4usize..=12, 0usize..=14, any::<u64>())
        .prop_map(|(n, extra, seed)| random_connected(n, extra, seed).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = LinearArrangement> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|p| LinearArrangement::new(p).unwrap())
}

fn graph_and_order() -> impl Strategy<Value = (Graph, LinearArrangement)> {
    medium_graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), permutation(n))
    })
}

/// Random integer points; drawings with a structural degeneracy are skipped.
fn drawing() -> impl Strategy<Value = Drawing> {
    (medium_graph(), any::<u64>()).prop_filter_map("degenerate", |(g, seed)| {
        let mut state = seed | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 1000) as i64
        };
        let pos = (0..g.n()).map(|_| Point::int(next(), next())).collect();
        let d = Drawing::new(g, pos).ok()?;
        match check_general_position(&d) {
            Ok(()) => Some(d),
            Err(v) if v.class() == 'a' => Some(d),
            Err(_) => None,
        }
    })
}

fn exec() -> Solver {
    Solver::sequential()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planarization_invariants(d in drawing()) {
        let g = d.graph();
        let events = crossings(&d).unwrap();
        prop_assert_eq!(events.len(), crossing_graph(&d).unwrap().m());
        let p = planarize_drawing(&d).unwrap();
        prop_assert!(p.is_planar());
        if p.planar.n() >= 3 {
            prop_assert!(p.planar.m() <= 3 * p.planar.n() - 6);
        }
        prop_assert_eq!(&p.contract().unwrap(), g);
        prop_assert_eq!(p.crossings(), events.len());
        for v in 0..p.planar.n() {
            match p.planar.kind(v) {
                VertexKind::Original => prop_assert_eq!(p.planar.degree(v), g.degree(v)),
                VertexKind::Dummy { .. } => prop_assert_eq!(p.planar.degree(v), 4),
            }
        }
    }

    #[test]
    fn exact_arrangement_solvers_match_oracles(g in small_graph()) {
        let s = exec();
        let (cw, a) = s.cutwidth(&g).unwrap();
        prop_assert_eq!(cw, oracle::cutwidth(&g).unwrap());
        prop_assert_eq!(edge_separation(&g, &a).unwrap(), cw);
        let (pw, a) = s.pathwidth(&g).unwrap();
        prop_assert_eq!(pw, oracle::pathwidth(&g).unwrap());
        prop_assert_eq!(vertex_separation(&g, &a).unwrap(), pw);
        let (bw, a) = s.bandwidth(&g).unwrap();
        prop_assert_eq!(bw, oracle::bandwidth(&g).unwrap());
        prop_assert_eq!(span(&g, &a).unwrap(), bw);
    }

    #[test]
    fn exact_tree_solvers_match_oracles(g in small_graph()) {
        let s = exec();
        let (tw, td) = s.treewidth(&g).unwrap();
        prop_assert_eq!(tw, oracle::treewidth_by_orderings(&g).unwrap());
        prop_assert_eq!(validate_tree_decomposition(&g, &td).unwrap(), tw);
        let (depth, forest) = s.treedepth(&g).unwrap();
        prop_assert_eq!(depth, oracle::treedepth(&g).unwrap());
        prop_assert_eq!(forest.validate(&g).unwrap(), depth);
        prop_assert!(tw <= s.pathwidth(&g).unwrap().0);
        prop_assert!(tw <= depth);
    }

    #[test]
    fn arrangement_widths((g, a) in graph_and_order()) {
        let es = edge_separation(&g, &a).unwrap();
        let vs = vertex_separation(&g, &a).unwrap();
        prop_assert!(vs <= es);
        let pd = arrangement_to_path_decomposition(&g, &a).unwrap();
        prop_assert_eq!(validate_tree_decomposition(&g, &pd).unwrap(), vs);
        let cd = caterpillar_carving_from_arrangement(&g, &a).unwrap();
        prop_assert!(validate_carving(&g, &cd).unwrap() <= es.max(g.max_degree()));
    }

    #[test]
    fn conversions_stay_valid(g in medium_graph(), seed in any::<u64>()) {
        let cd = random_carving(&g, seed);
        let cw = validate_carving(&g, &cd).unwrap();
        let bd = carving_to_branch(&g, &cd).unwrap();
        let bw = validate_branch(&g, &bd).unwrap();
        prop_assert!(bw <= g.max_degree() * cw);
        prop_assert!(bw <= 2 * cw);
        let back = branch_to_carving(&g, &bd).unwrap();
        prop_assert!(validate_carving(&g, &back).unwrap() <= g.max_degree() * bw);
    }

    #[test]
    fn restricted_partitions(leaves in 2usize..400, seed in any::<u64>(), z in 1usize..50) {
        let t = random_binary_tree(leaves, seed);
        let p = restricted_partition(&t, z).unwrap();
        prop_assert!(validate_restricted_partition(&t, &p).is_ok());
        prop_assert!(p.blocks.len() <= 6 * t.len().div_ceil(z));
    }

    #[test]
    fn convex_lift_keeps_edge_separation((g, a) in graph_and_order()) {
        let (_, r) = convex_lift_with(&g, &a, Execution::Sequential).unwrap();
        prop_assert!(r.planarization.is_planar());
        prop_assert_eq!(&r.planarization.contract().unwrap(), &g);
        let w = r.witness_arrangement().unwrap();
        prop_assert_eq!(edge_separation(&r.planarization.planar, w).unwrap(), edge_separation(&g, &a).unwrap());
        prop_assert_eq!(r.validated_width, r.claimed_width);
    }

    #[test]
    fn carving_guided_bounds(g in medium_graph(), seed in any::<u64>()) {
        let cd = random_carving(&g, seed);
        let w = validate_carving(&g, &cd).unwrap();
        let r = carving_guided_with(&g, &cd, Execution::Sequential).unwrap();
        prop_assert!(r.planarization.is_planar());
        prop_assert_eq!(&r.planarization.contract().unwrap(), &g);
        prop_assert!(r.validated_width <= w.max(4));
        let Witness::Carving(out) = &r.witness else { panic!("carving witness") };
        prop_assert_eq!(validate_carving(&r.planarization.planar, out).unwrap(), r.validated_width);
        let swaps: usize = r.routings.iter().map(|x| x.transpositions.len()).sum();
        prop_assert_eq!(swaps, r.crossings_added);
        for route in &r.routings {
            prop_assert_eq!(route.apply(), route.exit_order.clone());
        }
    }

    #[test]
    fn clustered_is_a_planarization(g in medium_graph(), seed in any::<u64>(), z in 1usize..8) {
        let cd = random_carving(&g, seed);
        let (r, stats) = clustered_carving_with(&g, &cd, z, Execution::Sequential).unwrap();
        prop_assert!(r.planarization.is_planar());
        prop_assert_eq!(&r.planarization.contract().unwrap(), &g);
        let Witness::Carving(out) = &r.witness else { panic!("carving witness") };
        prop_assert_eq!(validate_carving(&r.planarization.planar, out).unwrap(), r.validated_width);
        let inside: usize = stats.iter().map(|s| s.crossings).sum();
        prop_assert!(inside <= r.crossings_added);
    }

    #[test]
    fn parallel_matches_sequential(g in medium_graph(), seed in any::<u64>()) {
        let cd = random_carving(&g, seed);
        let a = carving_guided_with(&g, &cd, Execution::Sequential).unwrap();
        let b = carving_guided_with(&g, &cd, Execution::Parallel).unwrap();
        prop_assert_eq!(a, b);
        let order = LinearArrangement::fold(g.n());
        let a = convex_lift_with(&g, &order, Execution::Sequential).unwrap();
        let b = convex_lift_with(&g, &order, Execution::Parallel).unwrap();
        prop_assert_eq!(a, b);
    }
}
