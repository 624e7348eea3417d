//! Relational composition of block presentations.
//!
//! The composite of two presentations over the same blocks is again a block
//! presentation: each pair of atoms contributes the rectangle of pairs that
//! admit a middle vertex, and the shape of that contribution depends only on
//! the intersection of the first target with the second source. Three or
//! more candidate middles make every pair realizable; one or two middles
//! interact with diagonal exclusions and carve out at most two pairs.

use std::collections::BTreeSet;

use crate::digraph::compose_pairs;
use crate::digraph::Digraph;

use super::adjacency::{representative_types, type_adjacent, UltraType};
use super::{BlockGraph, EdgeAtom, PresentedSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("presentations use different block lists")]
    BlockMismatch,
}

/// Atoms plus the explicit edges rewritten as singleton rectangles, so that
/// composition only ever deals with atoms.
pub fn normalized_atoms(bg: &BlockGraph) -> Vec<EdgeAtom> {
    let mut out = bg.atoms().to_vec();
    for (u, v) in bg.explicit_edges() {
        out.push(EdgeAtom {
            src: PresentedSet::singleton(bg.block_count(), u),
            tgt: PresentedSet::singleton(bg.block_count(), v),
            exclude_diagonal: false,
        });
    }
    out
}

/// Edge set of `sub` is contained in the edge set of `sup`.
fn atom_subsumed(sub: &EdgeAtom, sup: &EdgeAtom, bg: &BlockGraph) -> bool {
    if !sub.src.is_subset_of(&sup.src, bg) || !sub.tgt.is_subset_of(&sup.tgt, bg) {
        return false;
    }
    if !sup.exclude_diagonal {
        return true;
    }
    sub.exclude_diagonal || sub.src.intersect(&sub.tgt).is_empty()
}

fn prune_atoms(mut atoms: Vec<EdgeAtom>, bg: &BlockGraph) -> Vec<EdgeAtom> {
    // Exact duplicates first, then strict subsumption.
    let mut kept: Vec<EdgeAtom> = Vec::new();
    for atom in atoms.drain(..) {
        if !kept.contains(&atom) {
            kept.push(atom);
        }
    }
    // Mutually subsuming atoms (equal edge sets, different spelling) keep
    // their first representative.
    let survives: Vec<bool> = (0..kept.len())
        .map(|i| {
            !(0..kept.len()).any(|j| {
                i != j
                    && atom_subsumed(&kept[i], &kept[j], bg)
                    && (!atom_subsumed(&kept[j], &kept[i], bg) || j < i)
            })
        })
        .collect();
    kept.into_iter()
        .zip(survives)
        .filter_map(|(atom, keep)| keep.then_some(atom))
        .collect()
}

/// Presentation of the relational composite: x -> z exactly when some y
/// admits x -> y in `first` and y -> z in `second`.
pub fn compose_presentations(
    first: &BlockGraph,
    second: &BlockGraph,
) -> Result<BlockGraph, ComposeError> {
    if first.blocks() != second.blocks() {
        return Err(ComposeError::BlockMismatch);
    }
    let mut atoms = Vec::new();
    for a1 in &normalized_atoms(first) {
        for a2 in &normalized_atoms(second) {
            let middles = a1.tgt.intersect(&a2.src);
            if middles.is_empty() {
                continue;
            }
            let src = a1.src.clone();
            let tgt = a2.tgt.clone();
            match middles.finite_members() {
                // Infinitely many middles: every pair dodges the at most two
                // diagonal exclusions.
                None => atoms.push(EdgeAtom { src, tgt, exclude_diagonal: false }),
                Some(members) => match members.as_slice() {
                    [] => continue,
                    [v] => {
                        let src = if a1.exclude_diagonal { src.without(v) } else { src };
                        let tgt = if a2.exclude_diagonal { tgt.without(v) } else { tgt };
                        atoms.push(EdgeAtom { src, tgt, exclude_diagonal: false });
                    }
                    [v1, v2] if a1.exclude_diagonal && a2.exclude_diagonal => {
                        // Only the pairs (v1, v2) and (v2, v1) lose both
                        // middles; everything else keeps one.
                        atoms.push(EdgeAtom {
                            src: src.without(v1).without(v2),
                            tgt: tgt.clone(),
                            exclude_diagonal: false,
                        });
                        if src.contains(v1) {
                            atoms.push(EdgeAtom {
                                src: PresentedSet::singleton(first.block_count(), v1),
                                tgt: tgt.without(v2),
                                exclude_diagonal: false,
                            });
                        }
                        if src.contains(v2) {
                            atoms.push(EdgeAtom {
                                src: PresentedSet::singleton(first.block_count(), v2),
                                tgt: tgt.without(v1),
                                exclude_diagonal: false,
                            });
                        }
                    }
                    // Two middles with at most one exclusion, or three and
                    // more middles: no pair can lose them all.
                    _ => atoms.push(EdgeAtom { src, tgt, exclude_diagonal: false }),
                },
            }
        }
    }
    let atoms = prune_atoms(atoms, first);
    Ok(BlockGraph::new(first.blocks().to_vec(), atoms, Vec::new())
        .expect("composite atoms reuse validated sets"))
}

/// n-fold relational power of the presentation, n >= 1.
pub fn power_presentation(bg: &BlockGraph, n: usize) -> BlockGraph {
    assert!(n >= 1, "powers start at 1");
    let mut out = bg.clone();
    for _ in 1..n {
        out = compose_presentations(&out, bg).expect("same block list throughout");
    }
    out
}

/// Outcome of checking a claimed composite against both of its factors.
#[derive(Clone, Debug)]
pub struct CompositionCheck {
    pub truncation_level: usize,
    pub truncation_agrees: bool,
    pub type_pool: Vec<UltraType>,
    pub type_agrees: bool,
    pub mismatches: Vec<String>,
    pub composite: BlockGraph,
}

impl CompositionCheck {
    pub fn agrees(&self) -> bool {
        self.truncation_agrees && self.type_agrees
    }
}

const MISMATCH_CAP: usize = 8;

fn truncation_mismatches(
    claimed: &BlockGraph,
    level: usize,
    want: &BTreeSet<(usize, usize)>,
    mismatches: &mut Vec<String>,
) -> bool {
    let tc = claimed.truncate(level);
    let got = tc.graph().adjacency_pairs();
    let mut agrees = true;
    for &(u, v) in want.symmetric_difference(&got) {
        agrees = false;
        if mismatches.len() < MISMATCH_CAP {
            let side = if want.contains(&(u, v)) { "walks" } else { "composite" };
            mismatches.push(format!(
                "level {level}: edge {} -> {} only on the {side} side",
                claimed.vertex_name(&tc.concrete_of(u)),
                claimed.vertex_name(&tc.concrete_of(v)),
            ));
        }
    }
    agrees
}

/// Pool of types that decides middle-vertex questions for all the graphs
/// involved: every profile that occurs in any of them has a representative,
/// and the deepest fresh points are uniform for all three at once.
fn shared_pool(graphs: &[&BlockGraph]) -> Vec<UltraType> {
    let mut pool: BTreeSet<UltraType> = BTreeSet::new();
    for g in graphs {
        pool.extend(representative_types(g));
    }
    pool.into_iter().collect()
}

/// Check a composite presentation against its factors, on two independent
/// levels: deep truncations compared edge by edge against relational
/// composition of the factor truncations, and extension types compared
/// against the existence of a middle type.
pub fn composition_check(
    first: &BlockGraph,
    second: &BlockGraph,
) -> Result<CompositionCheck, ComposeError> {
    let composite = compose_presentations(first, second)?;
    let level = first
        .guard_level()
        .max(second.guard_level())
        .max(composite.guard_level())
        + 4;
    let mut mismatches = Vec::new();
    let want = compose_pairs(first.truncate(level).graph(), second.truncate(level).graph());
    let truncation_agrees = truncation_mismatches(&composite, level, &want, &mut mismatches);

    let pool = shared_pool(&[first, second, &composite]);
    let mut type_agrees = true;
    for s in &pool {
        for t in &pool {
            let direct = type_adjacent(&composite, s, t);
            let via_middle = pool
                .iter()
                .any(|m| type_adjacent(first, s, m) && type_adjacent(second, m, t));
            if direct != via_middle {
                type_agrees = false;
                if mismatches.len() < MISMATCH_CAP {
                    mismatches.push(format!(
                        "types {} -> {}: composite {direct}, middle search {via_middle}",
                        s.label(&composite),
                        t.label(&composite),
                    ));
                }
            }
        }
    }
    Ok(CompositionCheck {
        truncation_level: level,
        truncation_agrees,
        type_pool: pool,
        type_agrees,
        mismatches,
        composite,
    })
}

/// Outcome of checking the n-th power presentation against walks of
/// length n.
#[derive(Clone, Debug)]
pub struct PowerCheck {
    pub exponent: usize,
    pub truncation_level: usize,
    pub truncation_agrees: bool,
    pub type_agrees: bool,
    pub mismatches: Vec<String>,
    pub power: BlockGraph,
}

impl PowerCheck {
    pub fn agrees(&self) -> bool {
        self.truncation_agrees && self.type_agrees
    }
}

/// Check the n-th power presentation (1 <= n <= 3) against walks of length
/// n, both in deep truncations and on the type pool. Short walks only ever
/// need to dodge their immediate neighbours, so three fresh points per
/// countable block decide the type side.
pub fn power_check(bg: &BlockGraph, n: usize) -> PowerCheck {
    assert!((1..=3).contains(&n), "power checks cover exponents 1 to 3");
    let power = power_presentation(bg, n);
    let level = bg.guard_level().max(power.guard_level()) + 4;
    let mut mismatches = Vec::new();

    let base = bg.truncate(level);
    let mut pairs = base.graph().adjacency_pairs();
    for _ in 1..n {
        let walked = Digraph::new(base.vertex_count(), pairs.into_iter().collect())
            .expect("pairs index truncation vertices");
        pairs = compose_pairs(&walked, base.graph());
    }
    let truncation_agrees = truncation_mismatches(&power, level, &pairs, &mut mismatches);

    let pool = shared_pool(&[bg, &power]);
    let step: Vec<Vec<bool>> = pool
        .iter()
        .map(|s| pool.iter().map(|t| type_adjacent(bg, s, t)).collect())
        .collect();
    let mut walks = step.clone();
    for _ in 1..n {
        walks = (0..pool.len())
            .map(|i| {
                (0..pool.len())
                    .map(|j| (0..pool.len()).any(|m| walks[i][m] && step[m][j]))
                    .collect()
            })
            .collect();
    }
    let mut type_agrees = true;
    for (i, s) in pool.iter().enumerate() {
        for (j, t) in pool.iter().enumerate() {
            let direct = type_adjacent(&power, s, t);
            if direct != walks[i][j] {
                type_agrees = false;
                if mismatches.len() < MISMATCH_CAP {
                    mismatches.push(format!(
                        "types {} -> {}: power {direct}, {n}-step walk {}",
                        s.label(&power),
                        t.label(&power),
                        walks[i][j],
                    ));
                }
            }
        }
    }
    PowerCheck {
        exponent: n,
        truncation_level: level,
        truncation_agrees,
        type_agrees,
        mismatches,
        power,
    }
}
