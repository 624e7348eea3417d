//! Finite directed multigraphs given by parallel source/target maps.
//!
//! A graph is a vertex count plus an ordered list of (source, target) pairs;
//! edge ids are positions in that list, so parallel edges and loops are both
//! representable. Set-valued results are always emitted in ascending index
//! order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::budget::{Budget, StepCounter};
use crate::textio::{content_lines, expect_header, parse_usize, ParseError};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DigraphError {
    #[error("edge {edge} endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange { edge: usize, endpoint: usize, vertex_count: usize },
    #[error("vertex counts differ: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },
    #[error("colouring does not cover this graph: {reason}")]
    InvalidColouring { reason: String },
    #[error("search budget exhausted after {steps} steps")]
    BudgetExhausted { steps: u64 },
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
}

/// Finite or infinite magnitude, used for distances and degree bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Extent {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(n) => write!(f, "{n}"),
            Extent::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, DigraphError> {
        for (id, &(s, t)) in edges.iter().enumerate() {
            for endpoint in [s, t] {
                if endpoint >= vertex_count {
                    return Err(DigraphError::EndpointOutOfRange {
                        edge: id,
                        endpoint,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Digraph { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self, edge: usize) -> usize {
        self.edges[edge].0
    }

    pub fn target(&self, edge: usize) -> usize {
        self.edges[edge].1
    }

    /// Distinct (source, target) pairs, ascending.
    pub fn adjacency_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.edges.iter().any(|&(s, t)| s == source && t == target)
    }

    /// Ids of edges whose endpoints coincide, ascending.
    ///
    /// This is the equaliser of the source and target maps.
    pub fn loop_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(s, t))| s == t)
            .map(|(id, _)| id)
            .collect()
    }

    /// Partition of the vertices into weak connectivity classes.
    ///
    /// Classes are listed by their least member; members ascend. This is the
    /// coequaliser of the source and target maps, so the empty graph has no
    /// classes and [`Digraph::is_weakly_connected`] is false for it.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(s, t) in &self.edges {
            uf.union(s, t);
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertex_count {
            classes.entry(uf.find(v)).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = classes.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() == 1
    }

    /// True when every ordered vertex pair, loops included, carries an edge.
    pub fn is_pseudocomplete(&self) -> bool {
        let pairs = self.adjacency_pairs();
        pairs.len() == self.vertex_count * self.vertex_count
    }

    /// True when no two edges share both endpoints.
    pub fn is_proper(&self) -> bool {
        self.adjacency_pairs().len() == self.edges.len()
    }

    /// True when every vertex has at least one incident edge.
    pub fn no_isolated(&self) -> bool {
        let mut touched = vec![false; self.vertex_count];
        for &(s, t) in &self.edges {
            touched[s] = true;
            touched[t] = true;
        }
        touched.iter().all(|&b| b)
    }

    /// The graph of composable edge pairs: vertices are edge ids of `self`,
    /// and (e, f) is an edge exactly when target(e) = source(f).
    ///
    /// This is the pullback of the target map against the source map.
    pub fn edge_graph(&self) -> Digraph {
        let mut edges = Vec::new();
        for (i, &(_, t)) in self.edges.iter().enumerate() {
            for (j, &(s, _)) in self.edges.iter().enumerate() {
                if t == s {
                    edges.push((i, j));
                }
            }
        }
        Digraph { vertex_count: self.edges.len(), edges }
    }

    /// Pushout of the two endpoint maps: two copies of the vertex set glued
    /// by identifying the source copy of s(e) with the target copy of t(e)
    /// for every edge e.
    pub fn pushout(&self) -> Pushout {
        let n = self.vertex_count;
        let mut uf = UnionFind::new(2 * n);
        for &(s, t) in &self.edges {
            uf.union(s, n + t);
        }
        let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut assign = |uf: &mut UnionFind, node: usize| {
            let root = uf.find(node);
            let next = class_of_root.len();
            *class_of_root.entry(root).or_insert(next)
        };
        let left: Vec<usize> = (0..n).map(|v| assign(&mut uf, v)).collect();
        let right: Vec<usize> = (0..n).map(|v| assign(&mut uf, n + v)).collect();
        Pushout { class_count: class_of_root.len(), left, right }
    }

    /// Set of vertices reachable from `from` in exactly `steps` steps;
    /// negative `steps` walks edges backwards.
    pub fn reach_set(
        &self,
        from: &BTreeSet<usize>,
        steps: i64,
    ) -> Result<BTreeSet<usize>, DigraphError> {
        for &v in from {
            self.check_vertex(v)?;
        }
        let mut current = from.clone();
        for _ in 0..steps.unsigned_abs() {
            let mut next = BTreeSet::new();
            for &(s, t) in &self.edges {
                if steps > 0 {
                    if current.contains(&s) {
                        next.insert(t);
                    }
                } else if current.contains(&t) {
                    next.insert(s);
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// Length of a shortest directed path, None when unreachable.
    /// distance(x, x) = 0 always, whether or not a loop sits at x.
    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        if to >= self.vertex_count {
            return None;
        }
        self.distances_from(from)?[to]
    }

    /// Distances from one source to every vertex at once; a None row entry
    /// means unreachable, a None result an out-of-range source.
    pub fn distances_from(&self, from: usize) -> Option<Vec<Option<usize>>> {
        if from >= self.vertex_count {
            return None;
        }
        let succ = self.successor_lists();
        let mut dist = vec![None; self.vertex_count];
        dist[from] = Some(0);
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &succ[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        Some(dist)
    }

    /// Largest directed distance over all ordered vertex pairs.
    ///
    /// The empty and the one-vertex loopless graph both measure 0; any
    /// unreachable ordered pair makes the result infinite.
    pub fn gamma_diameter(&self) -> Extent {
        let succ = self.successor_lists();
        let mut worst = 0usize;
        for start in 0..self.vertex_count {
            let mut dist = vec![usize::MAX; self.vertex_count];
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &succ[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            match dist.iter().max() {
                Some(&usize::MAX) => return Extent::Infinite,
                Some(&d) => worst = worst.max(d),
                None => {}
            }
        }
        Extent::Finite(worst)
    }

    /// Largest number of distinct successors over all vertices.
    pub fn max_out_degree(&self) -> usize {
        self.successor_sets()
            .iter()
            .map(|s| s.len())
            .max()
            .unwrap_or(0)
    }

    /// Total functions f_1..f_d, d = max_out_degree, such that the successor
    /// set of every vertex x is exactly { f_i(x) } minus the padding; vertices
    /// with fewer successors repeat x itself.
    pub fn successor_functions(&self) -> Vec<Vec<usize>> {
        let degree = self.max_out_degree();
        let succ = self.successor_sets();
        (0..degree)
            .map(|i| {
                (0..self.vertex_count)
                    .map(|x| succ[x].iter().copied().nth(i).unwrap_or(x))
                    .collect()
            })
            .collect()
    }

    /// Whether the edge relation of `composite` equals the relational
    /// composite of `self` followed by `mid`.
    pub fn relation_compose_check(
        &self,
        mid: &Digraph,
        composite: &Digraph,
    ) -> Result<bool, DigraphError> {
        for other in [mid, composite] {
            if other.vertex_count != self.vertex_count {
                return Err(DigraphError::VertexCountMismatch {
                    left: self.vertex_count,
                    right: other.vertex_count,
                });
            }
        }
        Ok(compose_pairs(self, mid) == composite.adjacency_pairs())
    }

    /// The graph of length-`length` edge paths.
    ///
    /// Its adjacency relation is the `length`-fold relational power of the
    /// edge relation. Path counts above the budget abort with an error rather
    /// than silently truncating.
    pub fn power(&self, length: usize, budget: &Budget) -> Result<PathGraph, DigraphError> {
        let mut counter = StepCounter::new(budget);
        let mut paths: Vec<Path> = (0..self.vertex_count)
            .map(|v| Path { source: v, edges: Vec::new(), target: v })
            .collect();
        for _ in 0..length {
            let mut next = Vec::new();
            for p in &paths {
                for (id, &(s, t)) in self.edges.iter().enumerate() {
                    if s == p.target {
                        if !counter.tick() {
                            return Err(DigraphError::BudgetExhausted { steps: counter.steps() });
                        }
                        let mut edges = p.edges.clone();
                        edges.push(id);
                        next.push(Path { source: p.source, edges, target: t });
                    }
                }
            }
            paths = next;
        }
        Ok(PathGraph { vertex_count: self.vertex_count, length, paths })
    }

    fn successor_sets(&self) -> Vec<BTreeSet<usize>> {
        let mut succ = vec![BTreeSet::new(); self.vertex_count];
        for &(s, t) in &self.edges {
            succ[s].insert(t);
        }
        succ
    }

    fn successor_lists(&self) -> Vec<Vec<usize>> {
        self.successor_sets()
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect()
    }

    fn check_vertex(&self, v: usize) -> Result<(), DigraphError> {
        if v >= self.vertex_count {
            return Err(DigraphError::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count });
        }
        Ok(())
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = content_lines(input);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "empty document, expected `digraph <n>`"))?;
        let args = expect_header(line_no, header, "digraph")?;
        if args.len() != 1 {
            return Err(ParseError::new(line_no, "expected `digraph <vertex_count>`"));
        }
        let vertex_count = parse_usize(line_no, args[0], "a vertex count")?;
        let mut edges = Vec::new();
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(ParseError::new(line_no, "expected `<source> <target>`"));
            }
            let s = parse_usize(line_no, fields[0], "a source vertex")?;
            let t = parse_usize(line_no, fields[1], "a target vertex")?;
            for endpoint in [s, t] {
                if endpoint >= vertex_count {
                    return Err(ParseError::new(
                        line_no,
                        format!("vertex {endpoint} out of range, graph has {vertex_count} vertices"),
                    ));
                }
            }
            edges.push((s, t));
        }
        Ok(Digraph { vertex_count, edges })
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "digraph {}", self.vertex_count)?;
        for &(s, t) in &self.edges {
            writeln!(f, "{s} {t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub class_count: usize,
    /// Class of each vertex in the source-side copy.
    pub left: Vec<usize>,
    /// Class of each vertex in the target-side copy.
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub source: usize,
    pub edges: Vec<usize>,
    pub target: usize,
}

/// All directed edge paths of one fixed length in a base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathGraph {
    vertex_count: usize,
    length: usize,
    paths: Vec<Path>,
}

impl PathGraph {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// The graph on the base vertices with one edge per path.
    pub fn as_digraph(&self) -> Digraph {
        Digraph {
            vertex_count: self.vertex_count,
            edges: self.paths.iter().map(|p| (p.source, p.target)).collect(),
        }
    }
}

/// Relational composite of the edge relations: x -> z when some y admits
/// x -> y in `first` and y -> z in `second`.
pub fn compose_pairs(first: &Digraph, second: &Digraph) -> BTreeSet<(usize, usize)> {
    let mut continuations: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (y, z) in second.adjacency_pairs() {
        continuations.entry(y).or_default().push(z);
    }
    let mut out = BTreeSet::new();
    for &(x, y) in &first.adjacency_pairs() {
        if let Some(tails) = continuations.get(&y) {
            out.extend(tails.iter().map(|&z| (x, z)));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Colourings

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    colour_of: Vec<usize>,
    colour_count: usize,
}

impl Colouring {
    pub fn new(colour_of: Vec<usize>, colour_count: usize) -> Result<Self, DigraphError> {
        if let Some(&bad) = colour_of.iter().find(|&&c| c >= colour_count) {
            return Err(DigraphError::InvalidColouring {
                reason: format!("colour {bad} out of range for {colour_count} colours"),
            });
        }
        Ok(Colouring { colour_of, colour_count })
    }

    pub fn colour_count(&self) -> usize {
        self.colour_count
    }

    pub fn colour_of(&self, vertex: usize) -> usize {
        self.colour_of[vertex]
    }

    pub fn vertex_count(&self) -> usize {
        self.colour_of.len()
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = content_lines(input);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "empty document, expected `colouring <n>`"))?;
        let args = expect_header(line_no, header, "colouring")?;
        if args.len() != 1 {
            return Err(ParseError::new(line_no, "expected `colouring <colour_count>`"));
        }
        let colour_count = parse_usize(line_no, args[0], "a colour count")?;
        let mut assignments: BTreeMap<usize, usize> = BTreeMap::new();
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(ParseError::new(line_no, "expected `<vertex> <colour>`"));
            }
            let v = parse_usize(line_no, fields[0], "a vertex index")?;
            let c = parse_usize(line_no, fields[1], "a colour index")?;
            if c >= colour_count {
                return Err(ParseError::new(
                    line_no,
                    format!("colour {c} out of range, {colour_count} colours declared"),
                ));
            }
            if assignments.insert(v, c).is_some() {
                return Err(ParseError::new(line_no, format!("vertex {v} coloured twice")));
            }
        }
        let n = assignments.len();
        let mut colour_of = vec![0; n];
        for (v, c) in assignments {
            if v >= n {
                return Err(ParseError::new(
                    1,
                    format!("vertex {v} named but the assignment has gaps; expected 0..{n}"),
                ));
            }
            colour_of[v] = c;
        }
        Ok(Colouring { colour_of, colour_count })
    }
}

impl fmt::Display for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "colouring {}", self.colour_count)?;
        for (v, c) in self.colour_of.iter().enumerate() {
            writeln!(f, "{v} {c}")?;
        }
        Ok(())
    }
}

fn check_colouring_shape(g: &Digraph, c: &Colouring) -> Result<(), DigraphError> {
    if c.vertex_count() != g.vertex_count {
        return Err(DigraphError::InvalidColouring {
            reason: format!(
                "colouring covers {} vertices, graph has {}",
                c.vertex_count(),
                g.vertex_count
            ),
        });
    }
    Ok(())
}

/// True when every edge joins two distinctly coloured vertices.
pub fn is_colouring(g: &Digraph, c: &Colouring) -> Result<bool, DigraphError> {
    check_colouring_shape(g, c)?;
    Ok(g.edges.iter().all(|&(s, t)| c.colour_of[s] != c.colour_of[t]))
}

/// The image of the graph under the colouring: vertices are colours, every
/// edge maps to the edge between its endpoint colours. A colouring is valid
/// exactly when this image has no loop edges.
pub fn colouring_image(g: &Digraph, c: &Colouring) -> Result<Digraph, DigraphError> {
    check_colouring_shape(g, c)?;
    Ok(Digraph {
        vertex_count: c.colour_count,
        edges: g
            .edges
            .iter()
            .map(|&(s, t)| (c.colour_of[s], c.colour_of[t]))
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chromatic {
    Exact(usize),
    /// Loops admit no colouring at all.
    NoColouring,
    /// Certified bounds, reported when the instance is over the exact-search
    /// cutoff or the budget ran out; never a wrong number.
    Interval { lower: usize, upper: usize },
}

#[derive(Clone, Debug)]
pub struct ChromaticOptions {
    /// Largest vertex count still searched exactly.
    pub exact_vertex_cutoff: usize,
    pub budget: Budget,
}

impl Default for ChromaticOptions {
    fn default() -> Self {
        ChromaticOptions { exact_vertex_cutoff: 16, budget: Budget::unlimited() }
    }
}

/// Least number of colours admitting a valid colouring.
pub fn chromatic_number(g: &Digraph, opts: &ChromaticOptions) -> Chromatic {
    if !g.loop_edges().is_empty() {
        return Chromatic::NoColouring;
    }
    if g.vertex_count == 0 {
        return Chromatic::Exact(0);
    }
    let adj = undirected_adjacency(g);
    if adj.iter().all(|s| s.is_empty()) {
        return Chromatic::Exact(1);
    }
    let clique = greedy_clique(&adj);
    let upper = greedy_colouring_size(&adj);
    let mut lower = clique.len();
    if lower == upper {
        return Chromatic::Exact(lower);
    }
    if g.vertex_count > opts.exact_vertex_cutoff {
        return Chromatic::Interval { lower, upper };
    }
    let mut counter = StepCounter::new(&opts.budget);
    let order = degree_order(&adj);
    for k in lower..upper {
        match colourable_with(&adj, &order, k, &mut counter) {
            Some(true) => return Chromatic::Exact(k),
            Some(false) => lower = k + 1,
            None => return Chromatic::Interval { lower, upper },
        }
    }
    Chromatic::Exact(upper)
}

fn undirected_adjacency(g: &Digraph) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); g.vertex_count];
    for &(s, t) in &g.edges {
        if s != t {
            adj[s].insert(t);
            adj[t].insert(s);
        }
    }
    adj
}

fn degree_order(adj: &[BTreeSet<usize>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..adj.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    order
}

fn greedy_clique(adj: &[BTreeSet<usize>]) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    for &v in &degree_order(adj) {
        if clique.iter().all(|&u| adj[u].contains(&v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

fn greedy_colouring_size(adj: &[BTreeSet<usize>]) -> usize {
    let mut colour = vec![usize::MAX; adj.len()];
    let mut used = 0;
    for &v in &degree_order(adj) {
        let taken: BTreeSet<usize> = adj[v]
            .iter()
            .filter(|&&u| colour[u] != usize::MAX)
            .map(|&u| colour[u])
            .collect();
        let c = (0..).find(|c| !taken.contains(c)).unwrap();
        colour[v] = c;
        used = used.max(c + 1);
    }
    used
}

/// Backtracking k-colourability; None when the budget ran out first.
fn colourable_with(
    adj: &[BTreeSet<usize>],
    order: &[usize],
    k: usize,
    counter: &mut StepCounter,
) -> Option<bool> {
    fn go(
        adj: &[BTreeSet<usize>],
        order: &[usize],
        k: usize,
        pos: usize,
        max_used: usize,
        colour: &mut [usize],
        counter: &mut StepCounter,
    ) -> Option<bool> {
        if pos == order.len() {
            return Some(true);
        }
        if !counter.tick() {
            return None;
        }
        let v = order[pos];
        // Colours beyond the first unused one are interchangeable.
        let limit = k.min(max_used + 1);
        for c in 0..limit {
            if adj[v].iter().all(|&u| colour[u] != c) {
                colour[v] = c;
                match go(adj, order, k, pos + 1, max_used.max(c + 1), colour, counter) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => return None,
                }
                colour[v] = usize::MAX;
            }
        }
        Some(false)
    }
    let mut colour = vec![usize::MAX; adj.len()];
    go(adj, order, k, 0, 0, &mut colour, counter)
}

// ---------------------------------------------------------------------------
// Separating set covers

/// Outcome of building a colouring from edge-separating sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymdiffColouring {
    Coloured(Colouring),
    /// Least edge id no given set separates.
    Uncovered { edge: usize },
}

/// Builds the power-set colouring from sets that separate every edge.
///
/// Edge e is separated by A when exactly one of its endpoints lies in A. If
/// every edge is separated by some set, colouring each vertex by its
/// membership bit pattern is valid and uses at most 2^sets.len() colours.
pub fn colouring_from_symdiff_cover(g: &Digraph, sets: &[BTreeSet<usize>]) -> SymdiffColouring {
    assert!(sets.len() < usize::BITS as usize, "too many separating sets");
    for (id, &(s, t)) in g.edges.iter().enumerate() {
        if !sets.iter().any(|a| a.contains(&s) != a.contains(&t)) {
            return SymdiffColouring::Uncovered { edge: id };
        }
    }
    let colour_of: Vec<usize> = (0..g.vertex_count)
        .map(|v| {
            sets.iter()
                .enumerate()
                .filter(|(_, a)| a.contains(&v))
                .fold(0usize, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    SymdiffColouring::Coloured(Colouring { colour_of, colour_count: 1 << sets.len() })
}

/// Binary-encodes a valid colouring as ceil(log2(colour_count)) separating
/// sets; the round trip through [`colouring_from_symdiff_cover`] then yields
/// a valid colouring with at most the next power of two many colours.
pub fn symdiff_cover_from_colouring(
    g: &Digraph,
    c: &Colouring,
) -> Result<Vec<BTreeSet<usize>>, DigraphError> {
    if !is_colouring(g, c)? {
        return Err(DigraphError::InvalidColouring {
            reason: "an edge joins two equally coloured vertices".into(),
        });
    }
    let bits = usize::BITS as usize - c.colour_count.saturating_sub(1).leading_zeros() as usize;
    Ok((0..bits)
        .map(|i| {
            (0..g.vertex_count)
                .filter(|&v| c.colour_of[v] & (1 << i) != 0)
                .collect()
        })
        .collect())
}

/// Edges grouped by the ordered colour pair of their endpoints.
///
/// For a valid colouring the off-diagonal cells partition the edge set and
/// every diagonal cell is empty.
#[derive(Clone, Debug)]
pub struct ColourPairPartition {
    colour_count: usize,
    cells: BTreeMap<(usize, usize), Vec<usize>>,
}

impl ColourPairPartition {
    pub fn colour_count(&self) -> usize {
        self.colour_count
    }

    /// Edge ids coloured (i, j), ascending; empty slice for untouched cells.
    pub fn cell(&self, i: usize, j: usize) -> &[usize] {
        self.cells.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn nonempty_cells(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<usize>)> {
        self.cells.iter()
    }
}

pub fn colour_pair_partition(
    g: &Digraph,
    c: &Colouring,
) -> Result<ColourPairPartition, DigraphError> {
    if !is_colouring(g, c)? {
        return Err(DigraphError::InvalidColouring {
            reason: "an edge joins two equally coloured vertices".into(),
        });
    }
    let mut cells: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (id, &(s, t)) in g.edges.iter().enumerate() {
        cells
            .entry((c.colour_of[s], c.colour_of[t]))
            .or_default()
            .push(id);
    }
    Ok(ColourPairPartition { colour_count: c.colour_count, cells })
}

// ---------------------------------------------------------------------------

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so class numbering is reproducible.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
