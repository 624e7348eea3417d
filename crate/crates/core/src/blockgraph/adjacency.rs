//! Adjacency in the extension of a presented graph.
//!
//! The extension adds, for every countable block, one generic type: the
//! ideal vertex every cofinite subset of the block is a neighbourhood of.
//! Edges to and from generic types are decided by cofiniteness of slices,
//! and two independent implementations of that decision live here: a direct
//! scan of the presentation (`type_adjacent`) and an oracle that first
//! computes neighbourhood sets in the Boolean algebra of presented sets and
//! then tests cofiniteness (`algebra_adjacency_oracle`). Tests play them
//! against each other.

use std::collections::BTreeSet;
use std::fmt;

use super::{BlockGraph, ConcreteVertex, PresentedSet};

/// A vertex of the extension that the presentation can address: an ordinary
/// vertex, or the generic type of a countable block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum UltraType {
    Point(ConcreteVertex),
    Generic(usize),
}

impl UltraType {
    pub fn label(&self, bg: &BlockGraph) -> String {
        match self {
            UltraType::Point(v) => format!("point {}", bg.vertex_name(v)),
            UltraType::Generic(b) => format!("generic {}", bg.blocks()[*b].name),
        }
    }
}

impl fmt::Display for UltraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltraType::Point(v) => write!(f, "point {}:{}", v.block, v.index),
            UltraType::Generic(b) => write!(f, "generic {b}"),
        }
    }
}

/// Whether the presented graph has the edge (u, v).
pub fn point_edge_exists(bg: &BlockGraph, u: &ConcreteVertex, v: &ConcreteVertex) -> bool {
    if bg.explicit_edges().iter().any(|(s, t)| s == u && t == v) {
        return true;
    }
    bg.atoms().iter().any(|a| {
        a.src.contains(u) && a.tgt.contains(v) && !(a.exclude_diagonal && u == v)
    })
}

/// Out-neighbourhood of a vertex as a presented set.
pub fn slice_out(bg: &BlockGraph, u: &ConcreteVertex) -> PresentedSet {
    let mut out = PresentedSet::absent(bg.block_count());
    for a in bg.atoms() {
        if a.src.contains(u) {
            let tgt = if a.exclude_diagonal { a.tgt.without(u) } else { a.tgt.clone() };
            out = out.union(&tgt);
        }
    }
    for (s, t) in bg.explicit_edges() {
        if s == u {
            out = out.union(&PresentedSet::singleton(bg.block_count(), t));
        }
    }
    out
}

/// In-neighbourhood of a vertex as a presented set.
pub fn slice_in(bg: &BlockGraph, v: &ConcreteVertex) -> PresentedSet {
    let mut out = PresentedSet::absent(bg.block_count());
    for a in bg.atoms() {
        if a.tgt.contains(v) {
            let src = if a.exclude_diagonal { a.src.without(v) } else { a.src.clone() };
            out = out.union(&src);
        }
    }
    for (s, t) in bg.explicit_edges() {
        if t == v {
            out = out.union(&PresentedSet::singleton(bg.block_count(), s));
        }
    }
    out
}

/// Edge relation of the extension, by direct scan of the presentation.
///
/// A diagonal exclusion never blocks an edge at a generic endpoint: removing
/// one vertex from a cofinite set leaves it cofinite.
pub fn type_adjacent(bg: &BlockGraph, from: &UltraType, to: &UltraType) -> bool {
    match (from, to) {
        (UltraType::Point(u), UltraType::Point(v)) => point_edge_exists(bg, u, v),
        (UltraType::Point(u), UltraType::Generic(c)) => {
            bg.atoms().iter().any(|a| a.src.contains(u) && a.tgt.cofinite_on(*c))
        }
        (UltraType::Generic(b), UltraType::Point(v)) => {
            bg.atoms().iter().any(|a| a.src.cofinite_on(*b) && a.tgt.contains(v))
        }
        (UltraType::Generic(b), UltraType::Generic(c)) => {
            bg.atoms().iter().any(|a| a.src.cofinite_on(*b) && a.tgt.cofinite_on(*c))
        }
    }
}

/// Point successors of a type, as a presented set. For a generic type these
/// are the vertices cofinitely many block members point at.
pub fn point_successors(bg: &BlockGraph, t: &UltraType) -> PresentedSet {
    match t {
        UltraType::Point(u) => slice_out(bg, u),
        UltraType::Generic(b) => {
            let mut out = PresentedSet::absent(bg.block_count());
            for a in bg.atoms() {
                if a.src.cofinite_on(*b) {
                    out = out.union(&a.tgt);
                }
            }
            out
        }
    }
}

/// Point predecessors of a type, as a presented set.
pub fn point_predecessors(bg: &BlockGraph, t: &UltraType) -> PresentedSet {
    match t {
        UltraType::Point(v) => slice_in(bg, v),
        UltraType::Generic(c) => {
            let mut out = PresentedSet::absent(bg.block_count());
            for a in bg.atoms() {
                if a.tgt.cofinite_on(*c) {
                    out = out.union(&a.src);
                }
            }
            out
        }
    }
}

/// Generic successors of a type.
pub fn generic_successors(bg: &BlockGraph, t: &UltraType) -> Vec<usize> {
    bg.omega_blocks()
        .into_iter()
        .filter(|&c| type_adjacent(bg, t, &UltraType::Generic(c)))
        .collect()
}

/// Generic predecessors of a type.
pub fn generic_predecessors(bg: &BlockGraph, t: &UltraType) -> Vec<usize> {
    bg.omega_blocks()
        .into_iter()
        .filter(|&b| type_adjacent(bg, &UltraType::Generic(b), t))
        .collect()
}

/// Independent oracle for `type_adjacent`.
///
/// Edges at generic endpoints are decided by computing the full
/// neighbourhood set of a sample vertex in the Boolean algebra and testing
/// its cofiniteness, instead of scanning for a single witnessing atom. For a
/// generic source, several fresh sample vertices are drawn from beyond every
/// index the presentation (or the given refinements) names; vertices that
/// deep in a block are interchangeable, and the oracle asserts their answers
/// agree.
pub fn algebra_adjacency_oracle(
    bg: &BlockGraph,
    from: &UltraType,
    to: &UltraType,
    refinements: &[PresentedSet],
) -> bool {
    let fresh_base = fresh_level(bg, refinements, &[from, to]);
    match (from, to) {
        (UltraType::Point(u), UltraType::Point(v)) => slice_out(bg, u).contains(v),
        (UltraType::Point(u), UltraType::Generic(c)) => slice_out(bg, u).cofinite_on(*c),
        (UltraType::Generic(b), UltraType::Point(v)) => slice_in(bg, v).cofinite_on(*b),
        (UltraType::Generic(b), UltraType::Generic(c)) => {
            let answers: Vec<bool> = (0..3)
                .map(|k| {
                    let sample = ConcreteVertex::new(*b, fresh_base + k);
                    slice_out(bg, &sample).cofinite_on(*c)
                })
                .collect();
            assert!(
                answers.windows(2).all(|w| w[0] == w[1]),
                "interchangeable sample vertices disagreed"
            );
            answers[0]
        }
    }
}

/// First index beyond everything named by the presentation, the refinements
/// and the types under discussion.
fn fresh_level(bg: &BlockGraph, refinements: &[PresentedSet], types: &[&UltraType]) -> usize {
    let mut level = bg.guard_level();
    let mut per_block = vec![BTreeSet::new(); bg.block_count()];
    for r in refinements {
        r.mentioned_indices(&mut per_block);
    }
    for indices in &per_block {
        if let Some(&max) = indices.iter().next_back() {
            level = level.max(max + 1);
        }
    }
    for t in types {
        if let UltraType::Point(v) = t {
            level = level.max(v.index + 1);
        }
    }
    level
}

/// Atoms of the Boolean algebra generated by every set the presentation
/// mentions (block sets, atom sides, explicit-edge singletons) plus the
/// given extras. The result partitions the vertex set.
pub fn subalgebra_cells(bg: &BlockGraph, extras: &[PresentedSet]) -> Vec<PresentedSet> {
    let mut generators: Vec<PresentedSet> = Vec::new();
    for b in 0..bg.block_count() {
        generators.push(PresentedSet::block(bg, b));
    }
    for a in bg.atoms() {
        generators.push(a.src.clone());
        generators.push(a.tgt.clone());
    }
    for (u, v) in bg.explicit_edges() {
        generators.push(PresentedSet::singleton(bg.block_count(), u));
        generators.push(PresentedSet::singleton(bg.block_count(), v));
    }
    generators.extend(extras.iter().cloned());
    let mut cells = vec![PresentedSet::full(bg)];
    for g in &generators {
        let mut next = Vec::new();
        for cell in cells {
            let inside = cell.intersect(g);
            let outside = cell.minus(g, bg);
            if !inside.is_empty() {
                next.push(inside);
            }
            if !outside.is_empty() {
                next.push(outside);
            }
        }
        cells = next;
    }
    cells.sort();
    cells
}

/// A loop in the extension: either an ordinary vertex with an edge to
/// itself, or a generic type adjacent to itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopWitness {
    Point(ConcreteVertex),
    Generic(usize),
}

impl LoopWitness {
    pub fn as_type(&self) -> UltraType {
        match self {
            LoopWitness::Point(v) => UltraType::Point(*v),
            LoopWitness::Generic(b) => UltraType::Generic(*b),
        }
    }
}

/// First loop of the extension in scan order: explicit loops, then diagonal
/// overlaps of atoms that keep their diagonal, then atoms spanning the tail
/// of one block on both sides (those give the generic type a loop whether or
/// not the diagonal is excluded).
pub fn beta_loop_exists(bg: &BlockGraph) -> Option<LoopWitness> {
    for (u, v) in bg.explicit_edges() {
        if u == v {
            return Some(LoopWitness::Point(*u));
        }
    }
    for a in bg.atoms() {
        if !a.exclude_diagonal {
            if let Some(v) = a.src.intersect(&a.tgt).least_member() {
                return Some(LoopWitness::Point(v));
            }
        }
    }
    for a in bg.atoms() {
        for b in bg.omega_blocks() {
            if a.src.cofinite_on(b) && a.tgt.cofinite_on(b) {
                return Some(LoopWitness::Generic(b));
            }
        }
    }
    None
}

/// Types standing in for every vertex of the extension: all named vertices,
/// every vertex of every finite block, three interchangeable deep vertices
/// per countable block, and the generic types. Any adjacency or distance
/// statement about the extension is decided by its value on these. Three
/// deep vertices because a shortest path between two of them may pass
/// through a third with the same profile.
pub fn representative_types(bg: &BlockGraph) -> Vec<UltraType> {
    let mut points: BTreeSet<ConcreteVertex> = bg.mentioned_vertices();
    let guard = bg.guard_level();
    for (b, block) in bg.blocks().iter().enumerate() {
        match block.size {
            super::BlockSize::Finite(n) => {
                for index in 0..n {
                    points.insert(ConcreteVertex::new(b, index));
                }
            }
            super::BlockSize::Omega => {
                for offset in 0..3 {
                    points.insert(ConcreteVertex::new(b, guard + offset));
                }
            }
        }
    }
    let mut out: Vec<UltraType> = points.into_iter().map(UltraType::Point).collect();
    out.extend(bg.omega_blocks().into_iter().map(UltraType::Generic));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudocompleteReport {
    pub holds: bool,
    pub counterexample: Option<(UltraType, UltraType)>,
}

/// Whether every ordered pair of types, equal pairs included, carries an
/// edge; the extension analogue of a digraph whose relation is full. By
/// interchangeability of deep vertices the representative types decide it.
pub fn beta_pseudocomplete(bg: &BlockGraph) -> PseudocompleteReport {
    let reps = representative_types(bg);
    for t1 in &reps {
        for t2 in &reps {
            if !type_adjacent(bg, t1, t2) {
                return PseudocompleteReport { holds: false, counterexample: Some((*t1, *t2)) };
            }
        }
    }
    PseudocompleteReport { holds: true, counterexample: None }
}
