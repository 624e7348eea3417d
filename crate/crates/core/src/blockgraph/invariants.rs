//! Degree, diameter and chromatic invariants of a presented graph and of
//! its extension, each computed on its own side of the fence and then
//! compared. The graph side works with presented sets (slices, reachability
//! closures, the colouring constraint graph); the extension side works with
//! the finite type graph on representative types. The propositions record
//! which of the expected preservation statements held.

use crate::budget::Budget;
use crate::digraph::{chromatic_number, Chromatic, ChromaticOptions, Digraph, Extent};
use crate::smallrel::{block_relation_smallness, SmallnessVerdict};

use super::adjacency::{
    beta_loop_exists, generic_successors, point_successors, representative_types, slice_out,
    type_adjacent, LoopWitness, UltraType,
};
use super::colouring::finitely_colourable;
use super::reach::{reach_closure, type_distances};
use super::{BlockGraph, ConcreteVertex, PresentedSet};

/// Chromatic number of a possibly infinite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiValue {
    /// A loop forbids any proper colouring.
    NoColouring,
    /// Loop-free, but no finite number of colours suffices.
    Unbounded,
    Finite(usize),
}

impl std::fmt::Display for ChiValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChiValue::NoColouring => write!(f, "none"),
            ChiValue::Unbounded => write!(f, "unbounded"),
            ChiValue::Finite(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposition {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub degree_graph: Extent,
    pub degree_extension: Extent,
    /// None when the reachability budget ran out.
    pub diameter_graph: Option<Extent>,
    pub diameter_extension: Option<Extent>,
    pub chi_graph: ChiValue,
    pub chi_extension: ChiValue,
    pub propositions: Vec<Proposition>,
}

impl InvariantReport {
    pub fn all_hold(&self) -> bool {
        self.propositions.iter().all(|p| p.holds)
    }
}

/// Largest out-degree over the vertices of the presented graph.
pub fn graph_max_out_degree(bg: &BlockGraph) -> Extent {
    if bg.atoms().iter().any(|a| !a.src.is_empty() && a.tgt.is_infinite()) {
        return Extent::Infinite;
    }
    let mut max = 0;
    for t in representative_types(bg) {
        if let UltraType::Point(u) = t {
            let size = slice_out(bg, &u)
                .finite_size()
                .expect("no atom reaches an infinite target set");
            max = max.max(size);
        }
    }
    Extent::Finite(max)
}

/// Largest out-degree over the types of the extension: point successors
/// plus generic successors, maximized over representatives.
pub fn extension_max_out_degree(bg: &BlockGraph) -> Extent {
    let mut max = 0;
    for t in representative_types(bg) {
        let points = point_successors(bg, &t);
        match points.finite_size() {
            None => return Extent::Infinite,
            Some(size) => {
                max = max.max(size + generic_successors(bg, &t).len());
            }
        }
    }
    Extent::Finite(max)
}

/// Largest distance between vertices of the presented graph; None when the
/// budget ran out.
pub fn graph_diameter(bg: &BlockGraph, budget: &Budget) -> Option<Extent> {
    let full = PresentedSet::full(bg);
    let mut max = 0;
    for t in representative_types(bg) {
        let UltraType::Point(u) = t else { continue };
        let start = PresentedSet::singleton(bg.block_count(), &u);
        let (closure, radius) = reach_closure(bg, &start, true, budget)?;
        if closure != full {
            return Some(Extent::Infinite);
        }
        max = max.max(radius);
    }
    Some(Extent::Finite(max))
}

/// Largest distance between types of the extension.
pub fn extension_diameter(bg: &BlockGraph) -> Extent {
    let (_, dist) = type_distances(bg);
    let mut max = 0;
    for row in &dist {
        for d in row {
            match d {
                None => return Extent::Infinite,
                Some(d) => max = max.max(*d),
            }
        }
    }
    Extent::Finite(max)
}

/// Chromatic number of the presented graph. A point loop leaves nothing to
/// colour; a graph that is loop-free but not finitely colourable is
/// unbounded (its truncations need ever more colours).
pub fn graph_chi(bg: &BlockGraph) -> ChiValue {
    match beta_loop_exists(bg) {
        Some(LoopWitness::Point(_)) => ChiValue::NoColouring,
        Some(LoopWitness::Generic(_)) => ChiValue::Unbounded,
        None => match finitely_colourable(bg) {
            super::colouring::ColourabilityOutcome::Colourable(scheme) => {
                ChiValue::Finite(scheme.colour_count())
            }
            // The loop theorem says this cannot happen; surface it as
            // unbounded rather than panicking so the propositions flag it.
            super::colouring::ColourabilityOutcome::Obstructed(_) => ChiValue::Unbounded,
        },
    }
}

/// The type graph on representative types.
pub fn type_graph(bg: &BlockGraph) -> (Vec<UltraType>, Digraph) {
    let reps = representative_types(bg);
    let mut edges = Vec::new();
    for (i, t1) in reps.iter().enumerate() {
        for (j, t2) in reps.iter().enumerate() {
            if type_adjacent(bg, t1, t2) {
                edges.push((i, j));
            }
        }
    }
    let g = Digraph::new(reps.len(), edges).expect("type indices are in range");
    (reps, g)
}

/// Chromatic number of the extension, via the type graph.
pub fn extension_chi(bg: &BlockGraph) -> ChiValue {
    let (_, g) = type_graph(bg);
    let opts = ChromaticOptions {
        exact_vertex_cutoff: g.vertex_count().max(16),
        ..ChromaticOptions::default()
    };
    match chromatic_number(&g, &opts) {
        Chromatic::Exact(k) => ChiValue::Finite(k),
        Chromatic::NoColouring => ChiValue::NoColouring,
        Chromatic::Interval { .. } => unreachable!("cutoff covers the whole type graph"),
    }
}

/// Both sides of every invariant, with the preservation propositions.
pub fn invariant_report(bg: &BlockGraph, budget: &Budget) -> InvariantReport {
    let degree_graph = graph_max_out_degree(bg);
    let degree_extension = extension_max_out_degree(bg);
    let diameter_graph = graph_diameter(bg, budget);
    let diameter_extension = Some(extension_diameter(bg));
    let chi_graph = graph_chi(bg);
    let chi_extension = extension_chi(bg);
    let mut propositions = vec![Proposition {
        name: "max out-degree preserved",
        holds: degree_graph == degree_extension,
    }];
    match (diameter_graph, diameter_extension) {
        (Some(a), Some(b)) => {
            propositions.push(Proposition { name: "diameter preserved", holds: a == b });
        }
        _ => propositions.push(Proposition { name: "diameter resolved", holds: false }),
    }
    let chi_holds = match (chi_graph, chi_extension) {
        (ChiValue::Finite(a), ChiValue::Finite(b)) => a == b,
        (ChiValue::NoColouring, ChiValue::NoColouring) => true,
        // The extension of a loop-free, not finitely colourable graph
        // acquires a loop at a generic type.
        (ChiValue::Unbounded, ChiValue::NoColouring) => true,
        _ => false,
    };
    propositions.push(Proposition { name: "chromatic number preserved", holds: chi_holds });
    propositions.push(Proposition {
        name: "loop-free iff finitely colourable",
        holds: beta_loop_exists(bg).is_none() == matches!(chi_graph, ChiValue::Finite(_)),
    });
    InvariantReport {
        degree_graph,
        degree_extension,
        diameter_graph,
        diameter_extension,
        chi_graph,
        chi_extension,
        propositions,
    }
}

fn pick_distinct_pair(
    a: &PresentedSet,
    b: &PresentedSet,
    exclude_equal: bool,
) -> Option<(ConcreteVertex, ConcreteVertex)> {
    let u = a.least_member()?;
    let w = b.least_member()?;
    if !exclude_equal || u != w {
        return Some((u, w));
    }
    if let Some(w2) = b.without(&w).least_member() {
        return Some((u, w2));
    }
    if let Some(u2) = a.without(&u).least_member() {
        return Some((u2, w));
    }
    None
}

/// A pair of vertices joined by two parallel edges of the presented graph,
/// if any: two atoms whose rectangles overlap, an explicit edge inside an
/// atom, or a repeated explicit edge.
pub fn presented_multiedge(bg: &BlockGraph) -> Option<(ConcreteVertex, ConcreteVertex)> {
    let atoms = bg.atoms();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let a = atoms[i].src.intersect(&atoms[j].src);
            let b = atoms[i].tgt.intersect(&atoms[j].tgt);
            // A loop pair survives only when neither atom drops diagonals.
            let exclude_equal = atoms[i].exclude_diagonal || atoms[j].exclude_diagonal;
            if let Some(pair) = pick_distinct_pair(&a, &b, exclude_equal) {
                return Some(pair);
            }
        }
    }
    for (k, (u, v)) in bg.explicit_edges().iter().enumerate() {
        for atom in atoms {
            if atom.src.contains(u) && atom.tgt.contains(v) && (u != v || !atom.exclude_diagonal)
            {
                return Some((*u, *v));
            }
        }
        if bg.explicit_edges()[k + 1..].contains(&(*u, *v)) {
            return Some((*u, *v));
        }
    }
    None
}

/// Properness (no parallel edges) of the presented graph, cross-checked on
/// a deep truncation, together with the prediction for the extension: the
/// extension stays proper exactly when the graph is proper and its edge
/// relation is small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperReport {
    pub graph_proper: bool,
    pub truncation_proper: bool,
    pub edge_relation_small: bool,
    pub extension_proper_predicted: bool,
}

impl ProperReport {
    pub fn consistent(&self) -> bool {
        self.graph_proper == self.truncation_proper
    }
}

pub fn beta_proper_check(bg: &BlockGraph) -> ProperReport {
    let graph_proper = presented_multiedge(bg).is_none();
    let truncation_proper = bg.truncate(bg.guard_level() + 2).graph().is_proper();
    let edge_relation_small =
        matches!(block_relation_smallness(bg), SmallnessVerdict::Small { .. });
    ProperReport {
        graph_proper,
        truncation_proper,
        edge_relation_small,
        extension_proper_predicted: graph_proper && edge_relation_small,
    }
}

/// A pair of parallel extension edges visible at type level: two atoms that
/// are both cofinite on a common source block and both cofinite on a common
/// target block put two distinct edge types between the same generic
/// endpoints. Returns the (source block, target block) pair.
pub fn type_level_multiedge(bg: &BlockGraph) -> Option<(usize, usize)> {
    let atoms = bg.atoms();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            for b in 0..bg.block_count() {
                if !(atoms[i].src.cofinite_on(b) && atoms[j].src.cofinite_on(b)) {
                    continue;
                }
                for c in 0..bg.block_count() {
                    if atoms[i].tgt.cofinite_on(c) && atoms[j].tgt.cofinite_on(c) {
                        return Some((b, c));
                    }
                }
            }
        }
    }
    None
}

/// No atom relates cofinitely many vertices of some block to cofinitely
/// many vertices of the same block. Small edge relations are always weakly
/// sparse in this sense.
pub fn weakly_sparse(bg: &BlockGraph) -> bool {
    !bg.atoms().iter().any(|atom| {
        (0..bg.block_count()).any(|b| atom.src.cofinite_on(b) && atom.tgt.cofinite_on(b))
    })
}
