//! Finite colourability of presented graphs.
//!
//! A presented graph is properly colourable with finitely many colours
//! exactly when its extension is loop-free, and the least number of colours
//! is computed exactly on a finite constraint graph: one node per named
//! vertex and one per countable block (standing for the block's deep
//! vertices, which all look alike). A colouring of the constraint graph
//! spells out as a scheme assigning every vertex a colour; conversely any
//! proper colouring of the graph gives, by pigeonhole on each block, a
//! proper colouring of the constraint graph with no more colours. The
//! constraint graph is built from neighbourhood slices, independently of
//! the loop scan in the adjacency module, so the two sides of the loop
//! theorem are computed by different code.

use std::collections::BTreeMap;

use super::adjacency::{beta_loop_exists, point_edge_exists, slice_in, slice_out, LoopWitness};
use super::{BlockGraph, BlockSize, ConcreteVertex};
use crate::digraph::{chromatic_number, Chromatic, ChromaticOptions, Digraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourScheme {
    colour_count: usize,
    /// Colour of the unnamed vertices of each countable block.
    block_base: Vec<Option<usize>>,
    overrides: BTreeMap<ConcreteVertex, usize>,
}

impl ColourScheme {
    pub fn colour_count(&self) -> usize {
        self.colour_count
    }

    pub fn colour_of(&self, v: &ConcreteVertex) -> usize {
        if let Some(&c) = self.overrides.get(v) {
            return c;
        }
        self.block_base[v.block].expect("finite-block vertices are all overridden")
    }

    pub fn overrides(&self) -> &BTreeMap<ConcreteVertex, usize> {
        &self.overrides
    }

    pub fn block_base(&self, block: usize) -> Option<usize> {
        self.block_base[block]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColourabilityOutcome {
    Colourable(ColourScheme),
    /// No finite proper colouring; the witness is a self-adjacent node of
    /// the constraint graph.
    Obstructed(LoopWitness),
}

impl ColourabilityOutcome {
    pub fn is_colourable(&self) -> bool {
        matches!(self, ColourabilityOutcome::Colourable(_))
    }

    pub fn scheme(&self) -> Option<&ColourScheme> {
        match self {
            ColourabilityOutcome::Colourable(s) => Some(s),
            ColourabilityOutcome::Obstructed(_) => None,
        }
    }
}

/// Nodes of the constraint graph: named vertices (every finite-block vertex
/// counts as named), then one node per countable block.
struct ConstraintGraph {
    named: Vec<ConcreteVertex>,
    blocks: Vec<usize>,
    graph: Digraph,
}

fn constraint_graph(bg: &BlockGraph) -> ConstraintGraph {
    let mut named: Vec<ConcreteVertex> = bg.mentioned_vertices().into_iter().collect();
    for (b, block) in bg.blocks().iter().enumerate() {
        if let BlockSize::Finite(n) = block.size {
            for index in 0..n {
                let v = ConcreteVertex::new(b, index);
                if !named.contains(&v) {
                    named.push(v);
                }
            }
        }
    }
    named.sort();
    let blocks = bg.omega_blocks();
    let n = named.len() + blocks.len();
    let mut edges = Vec::new();
    for (i, u) in named.iter().enumerate() {
        for (j, v) in named.iter().enumerate() {
            if j < i {
                continue;
            }
            let joined = if i == j {
                point_edge_exists(bg, u, u)
            } else {
                point_edge_exists(bg, u, v) || point_edge_exists(bg, v, u)
            };
            if joined {
                edges.push((i, j));
            }
        }
    }
    for (k, &c) in blocks.iter().enumerate() {
        let cnode = named.len() + k;
        for (i, u) in named.iter().enumerate() {
            if slice_out(bg, u).cofinite_on(c) || slice_in(bg, u).cofinite_on(c) {
                edges.push((i, cnode));
            }
        }
        for (l, &b) in blocks.iter().enumerate().take(k + 1) {
            let bnode = named.len() + l;
            let joined = bg.atoms().iter().any(|a| {
                (a.src.cofinite_on(b) && a.tgt.cofinite_on(c))
                    || (a.src.cofinite_on(c) && a.tgt.cofinite_on(b))
            });
            if joined {
                edges.push((bnode, cnode));
            }
        }
    }
    let graph = Digraph::new(n, edges).expect("constraint nodes are in range");
    ConstraintGraph { named, blocks, graph }
}

/// Decides finite colourability and produces either an optimal scheme or
/// the obstruction.
pub fn finitely_colourable(bg: &BlockGraph) -> ColourabilityOutcome {
    let h = constraint_graph(bg);
    if let Some(&(s, _)) = h.graph.edges().iter().find(|&&(s, t)| s == t) {
        let witness = if s < h.named.len() {
            LoopWitness::Point(h.named[s])
        } else {
            LoopWitness::Generic(h.blocks[s - h.named.len()])
        };
        return ColourabilityOutcome::Obstructed(witness);
    }
    let opts = ChromaticOptions {
        exact_vertex_cutoff: h.graph.vertex_count().max(16),
        ..ChromaticOptions::default()
    };
    let colouring = match chromatic_number(&h.graph, &opts) {
        Chromatic::Exact(k) => k,
        Chromatic::NoColouring => unreachable!("self-loops were handled above"),
        Chromatic::Interval { .. } => unreachable!("cutoff covers the whole graph"),
    };
    // Rebuild one optimal colouring. The chromatic solver only returns the
    // count, so colour greedily within that bound by backtracking again.
    let assignment = colour_with(&h.graph, colouring)
        .expect("a colouring with the chromatic number of colours exists");
    let mut overrides = BTreeMap::new();
    for (i, v) in h.named.iter().enumerate() {
        overrides.insert(*v, assignment[i]);
    }
    let mut block_base = vec![None; bg.block_count()];
    for (k, &b) in h.blocks.iter().enumerate() {
        block_base[b] = Some(assignment[h.named.len() + k]);
    }
    ColourabilityOutcome::Colourable(ColourScheme {
        colour_count: colouring,
        block_base,
        overrides,
    })
}

/// Backtracking colouring with exactly `colours` colours available.
fn colour_with(g: &Digraph, colours: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut neighbours = vec![Vec::new(); n];
    for &(s, t) in g.edges() {
        if s != t {
            neighbours[s].push(t);
            neighbours[t].push(s);
        }
    }
    let mut assignment = vec![usize::MAX; n];
    fn go(
        v: usize,
        n: usize,
        colours: usize,
        neighbours: &[Vec<usize>],
        assignment: &mut Vec<usize>,
    ) -> bool {
        if v == n {
            return true;
        }
        let used: Vec<usize> = neighbours[v]
            .iter()
            .map(|&w| assignment[w])
            .filter(|&c| c != usize::MAX)
            .collect();
        let max_new = assignment[..v]
            .iter()
            .filter(|&&c| c != usize::MAX)
            .max()
            .map(|&c| c + 1)
            .unwrap_or(0);
        for c in 0..colours.min(max_new + 1) {
            if used.contains(&c) {
                continue;
            }
            assignment[v] = c;
            if go(v + 1, n, colours, neighbours, assignment) {
                return true;
            }
            assignment[v] = usize::MAX;
        }
        false
    }
    if go(0, n, colours, &neighbours, &mut assignment) {
        Some(assignment)
    } else {
        None
    }
}

/// Edges of the truncation at `level` whose endpoints receive the same
/// colour (loops always violate).
pub fn scheme_violations(
    bg: &BlockGraph,
    scheme: &ColourScheme,
    level: usize,
) -> Vec<(ConcreteVertex, ConcreteVertex)> {
    let t = bg.truncate(level);
    let mut out = Vec::new();
    for &(s, e) in t.graph().edges() {
        let u = t.concrete_of(s);
        let v = t.concrete_of(e);
        if u == v || scheme.colour_of(&u) == scheme.colour_of(&v) {
            out.push((u, v));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopTheoremReport {
    pub loop_witness: Option<LoopWitness>,
    pub colourability: ColourabilityOutcome,
    pub consistent: bool,
}

/// The two sides of the loop theorem, computed independently: the loop scan
/// of the extension on one side, colourability via the constraint graph on
/// the other. They must always agree.
pub fn loop_theorem_check(bg: &BlockGraph) -> LoopTheoremReport {
    let loop_witness = beta_loop_exists(bg);
    let colourability = finitely_colourable(bg);
    let consistent = loop_witness.is_none() == colourability.is_colourable();
    LoopTheoremReport { loop_witness, colourability, consistent }
}

/// Chromatic numbers of growing truncations; bounded by the scheme size
/// when the graph is colourable, unbounded when it is not.
pub fn truncation_chi_profile(
    bg: &BlockGraph,
    levels: &[usize],
    opts: &ChromaticOptions,
) -> Vec<(usize, Chromatic)> {
    levels
        .iter()
        .map(|&level| (level, chromatic_number(bg.truncate(level).graph(), opts)))
        .collect()
}
