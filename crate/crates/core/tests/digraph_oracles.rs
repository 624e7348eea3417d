//! Brute-force oracles for the digraph constructions, kept deliberately
//! independent of the library's own algorithms: no shared traversal code,
//! just definitions unfolded over small vertex sets.

use std::collections::BTreeSet;

use betagraph_core::corpus;
use betagraph_core::digraph::{
    chromatic_number, compose_pairs, Chromatic, ChromaticOptions, Digraph, Extent,
};
use betagraph_core::Budget;

fn graph(n: usize, edges: &[(usize, usize)]) -> Digraph {
    Digraph::new(n, edges.to_vec()).unwrap()
}

fn small_corpus() -> Vec<Digraph> {
    let mut graphs = corpus::enumerate_digraphs(3);
    let mut rng = corpus::rng(0xd16);
    for _ in 0..200 {
        graphs.push(corpus::random_digraph(&mut rng, 6));
    }
    graphs
}

// -- loops --------------------------------------------------------------

/// A loop is an edge equalizing source and target; nothing more to it.
fn loop_scan(g: &Digraph) -> Vec<usize> {
    (0..g.edge_count()).filter(|&e| g.source(e) == g.target(e)).collect()
}

#[test]
fn loop_edges_equal_the_equalizing_scan() {
    for g in small_corpus() {
        assert_eq!(g.loop_edges(), loop_scan(&g), "{g}");
    }
}

// -- weak components ----------------------------------------------------

/// Transitive closure of "some edge touches both", computed by naive
/// partition refinement rather than union-find.
fn component_scan(g: &Digraph) -> BTreeSet<BTreeSet<usize>> {
    let mut classes: Vec<BTreeSet<usize>> =
        (0..g.vertex_count()).map(|v| BTreeSet::from([v])).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(s, t) in g.edges() {
            let ci = classes.iter().position(|c| c.contains(&s)).unwrap();
            let cj = classes.iter().position(|c| c.contains(&t)).unwrap();
            if ci != cj {
                let merged: BTreeSet<usize> =
                    classes[ci].union(&classes[cj]).copied().collect();
                let (lo, hi) = (ci.min(cj), ci.max(cj));
                classes.remove(hi);
                classes[lo] = merged;
                changed = true;
            }
        }
    }
    classes.into_iter().collect()
}

#[test]
fn weak_components_match_partition_refinement() {
    for g in small_corpus() {
        let got: BTreeSet<BTreeSet<usize>> = g
            .weak_components()
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect();
        assert_eq!(got, component_scan(&g), "{g}");
        assert_eq!(g.is_weakly_connected(), got.len() == 1, "{g}");
    }
}

// -- edge graph (composable pairs) --------------------------------------

#[test]
fn edge_graph_joins_exactly_the_composable_edge_pairs() {
    for g in small_corpus() {
        let eg = g.edge_graph();
        assert_eq!(eg.vertex_count(), g.edge_count(), "{g}");
        for i in 0..g.edge_count() {
            for j in 0..g.edge_count() {
                let composable = g.target(i) == g.source(j);
                assert_eq!(eg.has_edge(i, j), composable, "{g} edges {i},{j}");
            }
        }
    }
}

#[test]
fn edge_graph_of_a_cycle_is_a_cycle() {
    let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let eg = g.edge_graph();
    assert_eq!(eg.vertex_count(), 4);
    assert_eq!(eg.edge_count(), 4);
    assert_eq!(eg.gamma_diameter(), Extent::Finite(3));
}

// -- pushout ------------------------------------------------------------

#[test]
fn pushout_glues_targets_onto_sources() {
    for g in small_corpus() {
        let p = g.pushout();
        // Every edge forces its source (left copy) and target (right copy)
        // into one class.
        for e in 0..g.edge_count() {
            assert_eq!(p.left[g.source(e)], p.right[g.target(e)], "{g} edge {e}");
        }
        // Class indices are exactly 0..class_count and every class is hit.
        let used: BTreeSet<usize> = p.left.iter().chain(p.right.iter()).copied().collect();
        assert_eq!(used, (0..p.class_count).collect(), "{g}");
        // An edgeless graph glues nothing: both copies stay disjoint.
        if g.edge_count() == 0 {
            assert_eq!(p.class_count, 2 * g.vertex_count(), "{g}");
        }
    }
}

#[test]
fn pushout_class_count_drops_by_matched_pairs() {
    // 0→1 identifies left-0 with right-1, leaving 3 of the 4 copies.
    let g = graph(2, &[(0, 1)]);
    assert_eq!(g.pushout().class_count, 3);
}

// -- walks and powers ----------------------------------------------------

/// Boolean matrix power: reachability in exactly `n` steps.
fn boolean_power(g: &Digraph, n: usize) -> Vec<Vec<bool>> {
    let size = g.vertex_count();
    let mut acc: Vec<Vec<bool>> =
        (0..size).map(|i| (0..size).map(|j| i == j).collect()).collect();
    for _ in 0..n {
        let mut next = vec![vec![false; size]; size];
        for i in 0..size {
            for k in 0..size {
                if acc[i][k] {
                    for &(s, t) in g.edges() {
                        if s == k {
                            next[i][t] = true;
                        }
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

#[test]
fn path_graphs_agree_with_boolean_matrix_powers() {
    let budget = Budget::unlimited();
    for g in small_corpus() {
        for n in 0..=3 {
            let matrix = boolean_power(&g, n);
            let power = g.power(n, &budget).unwrap().as_digraph();
            for i in 0..g.vertex_count() {
                for j in 0..g.vertex_count() {
                    assert_eq!(
                        power.has_edge(i, j),
                        matrix[i][j],
                        "{g} walk length {n}, {i} -> {j}"
                    );
                }
            }
        }
    }
}

#[test]
fn every_enumerated_path_is_a_real_walk() {
    let budget = Budget::unlimited();
    let g = graph(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]);
    let paths = g.power(3, &budget).unwrap();
    assert_eq!(paths.length(), 3);
    for p in paths.paths() {
        assert_eq!(p.edges.len(), 3);
        let mut at = p.source;
        for &e in &p.edges {
            assert_eq!(g.source(e), at);
            at = g.target(e);
        }
        assert_eq!(at, p.target);
    }
}

fn assert_composition_is_two_step_walks(a: &Digraph, b: &Digraph) {
    let composed = compose_pairs(a, b);
    for x in 0..a.vertex_count() {
        for z in 0..b.vertex_count() {
            let walk =
                (0..a.vertex_count()).any(|y| a.has_edge(x, y) && b.has_edge(y, z));
            assert_eq!(composed.contains(&(x, z)), walk, "{a} ; {b}");
        }
    }
}

#[test]
fn compose_pairs_is_the_two_step_walk_relation() {
    // Exhaustive over all pairs of digraphs on the same small vertex set.
    let all = corpus::enumerate_digraphs(2);
    for a in &all {
        for b in &all {
            if a.vertex_count() == b.vertex_count() {
                assert_composition_is_two_step_walks(a, b);
            }
        }
    }
    // Larger graphs against themselves and their reversals.
    let mut rng = corpus::rng(0xab);
    for _ in 0..60 {
        let a = corpus::random_digraph(&mut rng, 6);
        let reversed = Digraph::new(
            a.vertex_count(),
            a.edges().iter().map(|&(s, t)| (t, s)).collect(),
        )
        .unwrap();
        assert_composition_is_two_step_walks(&a, &a);
        assert_composition_is_two_step_walks(&a, &reversed);
    }
}

// -- distances -----------------------------------------------------------

/// Floyd–Warshall, the classic cubic closure, as the distance oracle.
fn all_pairs_oracle(g: &Digraph) -> Vec<Vec<Option<usize>>> {
    let n = g.vertex_count();
    let mut d: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(0);
    }
    for &(s, t) in g.edges() {
        if s != t && d[s][t].is_none() {
            d[s][t] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| c > a + b) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

#[test]
fn distances_match_floyd_warshall() {
    for g in small_corpus() {
        let oracle = all_pairs_oracle(&g);
        for i in 0..g.vertex_count() {
            for j in 0..g.vertex_count() {
                assert_eq!(g.distance(i, j), oracle[i][j], "{g} {i} -> {j}");
            }
        }
        let worst: Vec<Option<usize>> = oracle.iter().flatten().copied().collect();
        let expected = if worst.iter().any(Option::is_none) {
            Extent::Infinite
        } else {
            Extent::Finite(worst.into_iter().flatten().max().unwrap_or(0))
        };
        assert_eq!(g.gamma_diameter(), expected, "{g}");
    }
}

#[test]
fn distance_of_a_vertex_to_itself_is_zero_even_with_a_loop() {
    let g = graph(2, &[(0, 0), (0, 1)]);
    assert_eq!(g.distance(0, 0), Some(0));
    assert_eq!(g.distance(1, 1), Some(0));
    assert_eq!(g.distance(1, 0), None);
}

#[test]
fn one_vertex_graphs_have_diameter_zero() {
    assert_eq!(graph(1, &[]).gamma_diameter(), Extent::Finite(0));
    assert_eq!(graph(1, &[(0, 0)]).gamma_diameter(), Extent::Finite(0));
    assert_eq!(graph(0, &[]).gamma_diameter(), Extent::Finite(0));
}

#[test]
fn directed_three_cycle_has_diameter_two() {
    let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
    assert_eq!(g.gamma_diameter(), Extent::Finite(2));
}

#[test]
fn missing_reverse_edge_makes_the_diameter_infinite() {
    let g = graph(2, &[(0, 1)]);
    assert_eq!(g.gamma_diameter(), Extent::Infinite);
}

// -- reach sets ----------------------------------------------------------

#[test]
fn reach_sets_agree_with_walk_enumeration() {
    let budget = Budget::unlimited();
    for g in small_corpus() {
        for start in 0..g.vertex_count() {
            let from = BTreeSet::from([start]);
            for steps in 0..=3i64 {
                let reach = g.reach_set(&from, steps).unwrap();
                let paths = g.power(steps as usize, &budget).unwrap();
                let by_walks: BTreeSet<usize> = paths
                    .paths()
                    .iter()
                    .filter(|p| p.source == start)
                    .map(|p| p.target)
                    .collect();
                assert_eq!(reach, by_walks, "{g} from {start}, {steps} steps");
            }
        }
    }
}

#[test]
fn backward_reach_is_forward_reach_in_the_reversed_graph() {
    let mut rng = corpus::rng(0x4ea);
    for _ in 0..60 {
        let g = corpus::random_digraph(&mut rng, 6);
        let reversed = Digraph::new(
            g.vertex_count(),
            g.edges().iter().map(|&(s, t)| (t, s)).collect(),
        )
        .unwrap();
        for start in 0..g.vertex_count() {
            let from = BTreeSet::from([start]);
            assert_eq!(
                g.reach_set(&from, -2).unwrap(),
                reversed.reach_set(&from, 2).unwrap(),
                "{g} from {start}"
            );
        }
    }
}

// -- chromatic number ----------------------------------------------------

fn colourable_with(g: &Digraph, k: usize) -> bool {
    let n = g.vertex_count();
    let mut assignment = vec![0usize; n];
    loop {
        if g.edges().iter().all(|&(s, t)| s == t || assignment[s] != assignment[t]) {
            return true;
        }
        // Odometer step through all k^n assignments.
        let mut pos = 0;
        while pos < n {
            assignment[pos] += 1;
            if assignment[pos] < k {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
        if pos == n {
            return false;
        }
    }
}

/// Exhaustive search over all assignments, the definitional oracle. Only
/// sensible for tiny graphs.
fn chromatic_oracle(g: &Digraph) -> Chromatic {
    if !g.loop_edges().is_empty() {
        return Chromatic::NoColouring;
    }
    let n = g.vertex_count();
    if n == 0 {
        return Chromatic::Exact(0);
    }
    for k in 1..=n {
        if colourable_with(g, k) {
            return Chromatic::Exact(k);
        }
    }
    unreachable!("n colours always suffice on a loop-free graph")
}

#[test]
fn chromatic_number_matches_the_exhaustive_oracle_up_to_eight_vertices() {
    let opts = ChromaticOptions::default();
    let mut rng = corpus::rng(0xc440);
    let mut graphs = corpus::enumerate_digraphs(3);
    for _ in 0..60 {
        graphs.push(corpus::random_digraph(&mut rng, 8));
    }
    for g in graphs {
        assert_eq!(chromatic_number(&g, &opts), chromatic_oracle(&g), "{g}");
    }
}

#[test]
fn five_cycle_needs_three_colours() {
    let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
    assert_eq!(chromatic_number(&g, &ChromaticOptions::default()), Chromatic::Exact(3));
}

#[test]
fn opposite_edges_do_not_raise_the_chromatic_number() {
    // Orientation is ignored: a 2-cycle is just one undirected edge.
    let g = graph(2, &[(0, 1), (1, 0)]);
    assert_eq!(chromatic_number(&g, &ChromaticOptions::default()), Chromatic::Exact(2));
}

#[test]
fn over_the_cutoff_the_interval_still_brackets_the_truth() {
    let mut edges = Vec::new();
    // Complete loop-free digraph on 18 vertices: chromatic number 18,
    // over the default exact cutoff of 16.
    for i in 0..18 {
        for j in 0..18 {
            if i != j {
                edges.push((i, j));
            }
        }
    }
    let g = graph(18, &edges);
    match chromatic_number(&g, &ChromaticOptions::default()) {
        Chromatic::Interval { lower, upper } => {
            assert!(lower <= 18 && 18 <= upper, "interval {lower}..{upper} excludes 18");
        }
        Chromatic::Exact(k) => assert_eq!(k, 18),
        Chromatic::NoColouring => panic!("graph is loop-free"),
    }
}
