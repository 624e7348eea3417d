//! Deterministic corpora for cross-checking: hand-picked presentations with
//! known behaviour, plus seeded random generators for graphs, presentations,
//! relations and refinement sets.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blockgraph::{Block, BlockGraph, BlockSet, BlockSize, ConcreteVertex, EdgeAtom, PresentedSet};
use crate::digraph::Digraph;
use crate::smallrel::Relation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Presentations with known, hand-checked behaviour.
pub fn named_blockgraphs() -> Vec<(&'static str, BlockGraph)> {
    let texts = [
        ("complete", "blockgraph\nblock a omega\natom all(a) -> all(a) nodiag\n"),
        ("complete-loops", "blockgraph\nblock a omega\natom all(a) -> all(a)\n"),
        (
            "star",
            "blockgraph\nblock c finite 1\nblock a omega\natom all(c) -> all(a)\natom all(a) -> all(c)\n",
        ),
        (
            "two-way-flow",
            "blockgraph\nblock a omega\nblock b omega\natom all(a) -> all(b)\natom all(b) -> all(a)\n",
        ),
        (
            "cycle5",
            "blockgraph\nblock v finite 5\nedge v:0 v:1\nedge v:1 v:2\nedge v:2 v:3\nedge v:3 v:4\nedge v:4 v:0\n",
        ),
        (
            "cofinite-tail",
            "blockgraph\nblock a omega\natom finite(a; 0) -> cofinite(a; 0,1)\natom cofinite(a; 0) -> finite(a; 1) nodiag\n",
        ),
    ];
    texts
        .into_iter()
        .map(|(name, text)| (name, BlockGraph::parse(text).expect(name)))
        .collect()
}

fn random_indices(rng: &mut ChaCha8Rng, bound: usize, max_len: usize) -> BTreeSet<usize> {
    let len = rng.random_range(1..=max_len.min(bound.max(1)));
    (0..len).map(|_| rng.random_range(0..bound)).collect()
}

fn random_block_set(rng: &mut ChaCha8Rng, blocks: &[Block]) -> PresentedSet {
    let descriptors = blocks
        .iter()
        .map(|block| {
            let roll: f64 = rng.random_range(0.0..1.0);
            match block.size {
                BlockSize::Finite(n) => {
                    if roll < 0.45 {
                        BlockSet::Absent
                    } else {
                        BlockSet::Finite(random_indices(rng, n, 2))
                    }
                }
                BlockSize::Omega => {
                    if roll < 0.4 {
                        BlockSet::Absent
                    } else if roll < 0.7 {
                        BlockSet::Finite(random_indices(rng, 5, 2))
                    } else if rng.random_bool(0.5) {
                        BlockSet::Cofinite(random_indices(rng, 4, 2))
                    } else {
                        BlockSet::Cofinite(BTreeSet::new())
                    }
                }
            }
        })
        .collect();
    PresentedSet::from_descriptors(descriptors)
}

fn random_vertex(rng: &mut ChaCha8Rng, blocks: &[Block]) -> ConcreteVertex {
    let block = rng.random_range(0..blocks.len());
    let index = match blocks[block].size {
        BlockSize::Finite(n) => rng.random_range(0..n),
        BlockSize::Omega => rng.random_range(0..5),
    };
    ConcreteVertex::new(block, index)
}

/// Small random presentation: up to three blocks, up to four atoms, up to
/// two explicit edges.
pub fn random_blockgraph(rng: &mut ChaCha8Rng) -> BlockGraph {
    let block_count = rng.random_range(1..=3);
    let names = ["a", "b", "c"];
    let blocks: Vec<Block> = (0..block_count)
        .map(|i| Block {
            name: names[i].to_string(),
            size: if rng.random_bool(0.6) {
                BlockSize::Omega
            } else {
                BlockSize::Finite(rng.random_range(1..=3))
            },
        })
        .collect();
    random_blockgraph_over(rng, blocks)
}

/// Random presentation over a fixed block list, so pairs of presentations
/// can be composed.
pub fn random_blockgraph_over(rng: &mut ChaCha8Rng, blocks: Vec<Block>) -> BlockGraph {
    let atom_count = rng.random_range(0..=4);
    let atoms: Vec<EdgeAtom> = (0..atom_count)
        .map(|_| EdgeAtom {
            src: random_block_set(rng, &blocks),
            tgt: random_block_set(rng, &blocks),
            exclude_diagonal: rng.random_bool(0.3),
        })
        .collect();
    let edge_count = rng.random_range(0..=2);
    let explicit: Vec<(ConcreteVertex, ConcreteVertex)> = (0..edge_count)
        .map(|_| (random_vertex(rng, &blocks), random_vertex(rng, &blocks)))
        .collect();
    BlockGraph::new(blocks, atoms, explicit).expect("generated sets are well formed")
}

/// Refinement sets over the blocks of `bg`, for probing that adjacency
/// answers ignore which subalgebra generators happen to be present:
/// block sets, singletons of mentioned vertices, and random sets.
pub fn random_refinements(
    rng: &mut ChaCha8Rng,
    bg: &BlockGraph,
    count: usize,
) -> Vec<PresentedSet> {
    let mentioned: Vec<ConcreteVertex> = bg.mentioned_vertices().into_iter().collect();
    (0..count)
        .map(|_| {
            let roll: f64 = rng.random_range(0.0..1.0);
            if roll < 0.3 && !mentioned.is_empty() {
                let v = mentioned[rng.random_range(0..mentioned.len())];
                PresentedSet::singleton(bg.block_count(), &v)
            } else if roll < 0.5 {
                PresentedSet::block(bg, rng.random_range(0..bg.block_count()))
            } else {
                random_block_set(rng, bg.blocks())
            }
        })
        .collect()
}

/// Random digraph on up to `max_vertices` vertices, edge probability 0.3.
pub fn random_digraph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Digraph {
    let n = rng.random_range(1..=max_vertices.max(1));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.random_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges).expect("edges are in range")
}

/// Every digraph on at most `max_vertices` vertices (no parallel edges),
/// exhaustively. Counts grow as 2^(n^2); keep `max_vertices` at three.
pub fn enumerate_digraphs(max_vertices: usize) -> Vec<Digraph> {
    let mut out = Vec::new();
    for n in 0..=max_vertices {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        for mask in 0u64..(1 << slots.len()) {
            let edges: Vec<(usize, usize)> = slots
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            out.push(Digraph::new(n, edges).expect("slots are in range"));
        }
    }
    out
}

/// Random relation between sides of at most `max_side`, density 0.4.
pub fn random_relation(rng: &mut ChaCha8Rng, max_side: usize) -> Relation {
    let x = rng.random_range(1..=max_side.max(1));
    let y = rng.random_range(1..=max_side.max(1));
    let mut pairs = BTreeSet::new();
    for a in 0..x {
        for b in 0..y {
            if rng.random_bool(0.4) {
                pairs.insert((a, b));
            }
        }
    }
    Relation::new(x, y, pairs).expect("pairs are in range")
}

/// Random subrelation of `rho`, keeping each pair with probability 0.6.
pub fn random_subrelation(rng: &mut ChaCha8Rng, rho: &Relation) -> Relation {
    let pairs: BTreeSet<(usize, usize)> = rho
        .pairs()
        .iter()
        .filter(|_| rng.random_bool(0.6))
        .copied()
        .collect();
    Relation::new(rho.x_size(), rho.y_size(), pairs).expect("subset of a valid relation")
}
