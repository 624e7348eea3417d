//! Reachability in presented graphs and their extensions.
//!
//! The image of a presented set under one step of the edge relation is
//! presented again, so exact n-step sets, balls and closures are all finite
//! computations. The path membership check plays two such computations
//! against each other: a walk of types in the extension on one side, the
//! n-step vertex set tested for membership in a type on the other. Their
//! agreement is the finite content of the statement that n-step
//! reachability in the extension is decided by n-step reachability sets.

use std::collections::BTreeSet;

use super::adjacency::{point_successors, representative_types, UltraType};
use super::{BlockGraph, ConcreteVertex, PresentedSet};
use crate::budget::{Budget, StepCounter};

/// Image of a set under one forward step of the edge relation.
pub fn step_forward(bg: &BlockGraph, s: &PresentedSet) -> PresentedSet {
    let mut out = PresentedSet::absent(bg.block_count());
    for a in bg.atoms() {
        let hit = s.intersect(&a.src);
        if hit.is_empty() {
            continue;
        }
        let contribution = if a.exclude_diagonal {
            // A single hit vertex cannot be its own target; two distinct
            // hits already reach every target.
            match (hit.finite_size(), hit.least_member()) {
                (Some(1), Some(only)) => a.tgt.without(&only),
                _ => a.tgt.clone(),
            }
        } else {
            a.tgt.clone()
        };
        out = out.union(&contribution);
    }
    for (u, v) in bg.explicit_edges() {
        if s.contains(u) {
            out = out.union(&PresentedSet::singleton(bg.block_count(), v));
        }
    }
    out
}

/// Image of a set under one backward step of the edge relation.
pub fn step_backward(bg: &BlockGraph, s: &PresentedSet) -> PresentedSet {
    let mut out = PresentedSet::absent(bg.block_count());
    for a in bg.atoms() {
        let hit = s.intersect(&a.tgt);
        if hit.is_empty() {
            continue;
        }
        let contribution = if a.exclude_diagonal {
            match (hit.finite_size(), hit.least_member()) {
                (Some(1), Some(only)) => a.src.without(&only),
                _ => a.src.clone(),
            }
        } else {
            a.src.clone()
        };
        out = out.union(&contribution);
    }
    for (u, v) in bg.explicit_edges() {
        if s.contains(v) {
            out = out.union(&PresentedSet::singleton(bg.block_count(), u));
        }
    }
    out
}

/// Exact n-step image; negative steps walk edges backwards.
pub fn presented_reach(bg: &BlockGraph, start: &PresentedSet, steps: i64) -> PresentedSet {
    let mut s = start.clone();
    for _ in 0..steps.unsigned_abs() {
        s = if steps >= 0 { step_forward(bg, &s) } else { step_backward(bg, &s) };
    }
    s
}

/// Ball of radius |steps|: everything within that many steps, direction by
/// sign.
pub fn reach_within(bg: &BlockGraph, start: &PresentedSet, steps: i64) -> PresentedSet {
    let mut ball = start.clone();
    for _ in 0..steps.unsigned_abs() {
        let image =
            if steps >= 0 { step_forward(bg, &ball) } else { step_backward(bg, &ball) };
        ball = ball.union(&image);
    }
    ball
}

/// Reachability closure with the radius at which the ball stabilized, or
/// None when the budget ran out first. Balls are monotone in the finite
/// lattice of presented sets built from the atom sides, so stabilization is
/// guaranteed; the budget is a belt on top.
pub fn reach_closure(
    bg: &BlockGraph,
    start: &PresentedSet,
    forward: bool,
    budget: &Budget,
) -> Option<(PresentedSet, usize)> {
    let mut counter = StepCounter::new(budget);
    let mut ball = start.clone();
    let mut radius = 0;
    loop {
        if !counter.tick() {
            return None;
        }
        let image = if forward { step_forward(bg, &ball) } else { step_backward(bg, &ball) };
        let next = ball.union(&image);
        if next == ball {
            return Some((ball, radius));
        }
        ball = next;
        radius += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectivityOutcome {
    /// From the least vertex, the forward ball fills the graph at the first
    /// radius and the backward ball at the second; any two vertices of the
    /// extension are then joined within their sum.
    Connected { forward_radius: usize, backward_radius: usize },
    Disconnected { forward_closure: PresentedSet, backward_closure: PresentedSet },
    /// Budget ran out. Never reported as one of the other two.
    Unresolved,
}

/// Strong connectivity of the extension. The empty graph counts as
/// disconnected.
pub fn beta_strongly_connected(bg: &BlockGraph, budget: &Budget) -> ConnectivityOutcome {
    let full = PresentedSet::full(bg);
    let Some(base) = full.least_member() else {
        let empty = PresentedSet::absent(bg.block_count());
        return ConnectivityOutcome::Disconnected {
            forward_closure: empty.clone(),
            backward_closure: empty,
        };
    };
    let start = PresentedSet::singleton(bg.block_count(), &base);
    let Some((fwd, forward_radius)) = reach_closure(bg, &start, true, budget) else {
        return ConnectivityOutcome::Unresolved;
    };
    let Some((bwd, backward_radius)) = reach_closure(bg, &start, false, budget) else {
        return ConnectivityOutcome::Unresolved;
    };
    if fwd == full && bwd == full {
        ConnectivityOutcome::Connected { forward_radius, backward_radius }
    } else {
        ConnectivityOutcome::Disconnected { forward_closure: fwd, backward_closure: bwd }
    }
}

/// Walk frontier in the extension: the points reachable by a type walk of
/// the current length, and the blocks whose generic type is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeFrontier {
    pub points: PresentedSet,
    pub generics: BTreeSet<usize>,
}

impl TypeFrontier {
    pub fn start_at(bg: &BlockGraph, v: &ConcreteVertex) -> Self {
        TypeFrontier {
            points: PresentedSet::singleton(bg.block_count(), v),
            generics: BTreeSet::new(),
        }
    }

    /// One forward step through the type graph of the extension.
    pub fn step(&self, bg: &BlockGraph) -> Self {
        let mut points = step_forward(bg, &self.points);
        let mut generics = BTreeSet::new();
        for &b in &self.generics {
            points = points.union(&point_successors(bg, &UltraType::Generic(b)));
        }
        for a in bg.atoms() {
            let from_points = !self.points.intersect(&a.src).is_empty();
            let from_generics =
                self.generics.iter().any(|&b| a.src.cofinite_on(b));
            if from_points || from_generics {
                for c in bg.omega_blocks() {
                    if a.tgt.cofinite_on(c) {
                        generics.insert(c);
                    }
                }
            }
        }
        TypeFrontier { points, generics }
    }

    pub fn contains(&self, t: &UltraType) -> bool {
        match t {
            UltraType::Point(v) => self.points.contains(v),
            UltraType::Generic(b) => self.generics.contains(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMembershipStep {
    pub length: usize,
    pub walk_points: PresentedSet,
    pub reach_points: PresentedSet,
    pub walk_generics: BTreeSet<usize>,
    pub reach_generics: BTreeSet<usize>,
}

impl PathMembershipStep {
    pub fn agrees(&self) -> bool {
        self.walk_points == self.reach_points && self.walk_generics == self.reach_generics
    }
}

/// For each length up to `max_len`: the types reached by walks of that
/// length from `from` (computed step by step through the type graph) against
/// the exact n-step vertex set read as a filter (a point is a member when it
/// lies in the set, a generic type when the set is cofinite on its block).
pub fn path_membership_check(
    bg: &BlockGraph,
    from: &ConcreteVertex,
    max_len: usize,
) -> Vec<PathMembershipStep> {
    path_membership_check_from(bg, &UltraType::Point(*from), max_len)
}

/// Same comparison, but the walk may also start at a generic type; its
/// first successor set is then read off the atoms rather than stepped from
/// a singleton.
pub fn path_membership_check_from(
    bg: &BlockGraph,
    from: &UltraType,
    max_len: usize,
) -> Vec<PathMembershipStep> {
    let mut out = Vec::new();
    let mut frontier = match from {
        UltraType::Point(v) => TypeFrontier::start_at(bg, v),
        UltraType::Generic(b) => TypeFrontier {
            points: PresentedSet::absent(bg.block_count()),
            generics: BTreeSet::from([*b]),
        },
    };
    let mut reach = PresentedSet::absent(bg.block_count());
    for length in 1..=max_len {
        frontier = frontier.step(bg);
        reach = if length == 1 {
            point_successors(bg, from)
        } else {
            step_forward(bg, &reach)
        };
        let reach_generics: BTreeSet<usize> = bg
            .omega_blocks()
            .into_iter()
            .filter(|&b| reach.cofinite_on(b))
            .collect();
        out.push(PathMembershipStep {
            length,
            walk_points: frontier.points.clone(),
            reach_points: reach.clone(),
            walk_generics: frontier.generics.clone(),
            reach_generics,
        });
    }
    out
}

/// Distances between representative types, by search through the type
/// graph; None where unreachable. Indexing follows `representative_types`.
pub fn type_distances(bg: &BlockGraph) -> (Vec<UltraType>, Vec<Vec<Option<usize>>>) {
    use super::adjacency::type_adjacent;
    let reps = representative_types(bg);
    let n = reps.len();
    let mut dist = vec![vec![None; n]; n];
    for s in 0..n {
        dist[s][s] = Some(0);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if dist[s][j].is_none() && type_adjacent(bg, &reps[i], &reps[j]) {
                    dist[s][j] = Some(dist[s][i].unwrap() + 1);
                    queue.push_back(j);
                }
            }
        }
    }
    (reps, dist)
}
