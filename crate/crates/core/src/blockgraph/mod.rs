//! Finitely presented infinite digraphs.
//!
//! A block graph presents a digraph on a disjoint union of blocks, each
//! finite or countable. Vertex sets are described block by block as finite
//! lists or cofinite complements, edges as rectangles between two such sets
//! (optionally minus the diagonal) plus finitely many explicit pairs. Every
//! question about the extension of such a graph reduces to finite data in
//! this language; the sibling modules implement the reductions.

pub mod adjacency;
pub mod colouring;
pub mod compose;
pub mod invariants;
pub mod reach;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::digraph::Digraph;
use crate::textio::{content_lines, expect_header, parse_usize, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockSize {
    Finite(usize),
    Omega,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub size: BlockSize,
}

/// A vertex named concretely: block id and index within the block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConcreteVertex {
    pub block: usize,
    pub index: usize,
}

impl ConcreteVertex {
    pub fn new(block: usize, index: usize) -> Self {
        ConcreteVertex { block, index }
    }
}

/// Trace of a presented set on one block.
///
/// Normal form: on finite blocks only Absent or in-range nonempty Finite;
/// empty Finite collapses to Absent everywhere.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockSet {
    Absent,
    Finite(BTreeSet<usize>),
    /// Whole block minus the listed indices; countable blocks only.
    Cofinite(BTreeSet<usize>),
}

impl BlockSet {
    fn contains(&self, index: usize) -> bool {
        match self {
            BlockSet::Absent => false,
            BlockSet::Finite(s) => s.contains(&index),
            BlockSet::Cofinite(e) => !e.contains(&index),
        }
    }

    fn is_cofinite(&self) -> bool {
        matches!(self, BlockSet::Cofinite(_))
    }
}

/// A set of vertices described block by block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PresentedSet {
    descriptors: Vec<BlockSet>,
}

impl PresentedSet {
    pub fn absent(block_count: usize) -> Self {
        PresentedSet { descriptors: vec![BlockSet::Absent; block_count] }
    }

    pub fn full(bg: &BlockGraph) -> Self {
        let descriptors = bg
            .blocks
            .iter()
            .map(|b| match b.size {
                BlockSize::Finite(n) => BlockSet::Finite((0..n).collect()),
                BlockSize::Omega => BlockSet::Cofinite(BTreeSet::new()),
            })
            .collect();
        PresentedSet { descriptors }
    }

    pub fn block(bg: &BlockGraph, block: usize) -> Self {
        let mut out = PresentedSet::absent(bg.block_count());
        out.descriptors[block] = match bg.blocks[block].size {
            BlockSize::Finite(n) => BlockSet::Finite((0..n).collect()),
            BlockSize::Omega => BlockSet::Cofinite(BTreeSet::new()),
        };
        out
    }

    pub fn singleton(block_count: usize, v: &ConcreteVertex) -> Self {
        let mut out = PresentedSet::absent(block_count);
        out.descriptors[v.block] = BlockSet::Finite([v.index].into());
        out
    }

    pub fn from_descriptors(descriptors: Vec<BlockSet>) -> Self {
        PresentedSet { descriptors }
    }

    pub fn descriptors(&self) -> &[BlockSet] {
        &self.descriptors
    }

    pub fn trace_on(&self, block: usize) -> &BlockSet {
        &self.descriptors[block]
    }

    pub fn contains(&self, v: &ConcreteVertex) -> bool {
        v.block < self.descriptors.len() && self.descriptors[v.block].contains(v.index)
    }

    pub fn cofinite_on(&self, block: usize) -> bool {
        self.descriptors[block].is_cofinite()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.iter().all(|d| matches!(d, BlockSet::Absent))
    }

    pub fn is_infinite(&self) -> bool {
        self.descriptors.iter().any(|d| d.is_cofinite())
    }

    /// Number of vertices, when finite.
    pub fn finite_size(&self) -> Option<usize> {
        let mut total = 0;
        for d in &self.descriptors {
            match d {
                BlockSet::Absent => {}
                BlockSet::Finite(s) => total += s.len(),
                BlockSet::Cofinite(_) => return None,
            }
        }
        Some(total)
    }

    pub fn union(&self, other: &PresentedSet) -> PresentedSet {
        let descriptors = self
            .descriptors
            .iter()
            .zip(&other.descriptors)
            .map(|(a, b)| {
                normalize_block_set(match (a, b) {
                    (BlockSet::Absent, x) | (x, BlockSet::Absent) => x.clone(),
                    (BlockSet::Finite(s), BlockSet::Finite(t)) => {
                        BlockSet::Finite(s.union(t).copied().collect())
                    }
                    (BlockSet::Finite(s), BlockSet::Cofinite(e))
                    | (BlockSet::Cofinite(e), BlockSet::Finite(s)) => {
                        BlockSet::Cofinite(e.difference(s).copied().collect())
                    }
                    (BlockSet::Cofinite(e1), BlockSet::Cofinite(e2)) => {
                        BlockSet::Cofinite(e1.intersection(e2).copied().collect())
                    }
                })
            })
            .collect();
        PresentedSet { descriptors }
    }

    pub fn intersect(&self, other: &PresentedSet) -> PresentedSet {
        let descriptors = self
            .descriptors
            .iter()
            .zip(&other.descriptors)
            .map(|(a, b)| {
                normalize_block_set(match (a, b) {
                    (BlockSet::Absent, _) | (_, BlockSet::Absent) => BlockSet::Absent,
                    (BlockSet::Finite(s), BlockSet::Finite(t)) => {
                        BlockSet::Finite(s.intersection(t).copied().collect())
                    }
                    (BlockSet::Finite(s), BlockSet::Cofinite(e))
                    | (BlockSet::Cofinite(e), BlockSet::Finite(s)) => {
                        BlockSet::Finite(s.difference(e).copied().collect())
                    }
                    (BlockSet::Cofinite(e1), BlockSet::Cofinite(e2)) => {
                        BlockSet::Cofinite(e1.union(e2).copied().collect())
                    }
                })
            })
            .collect();
        PresentedSet { descriptors }
    }

    pub fn complement(&self, bg: &BlockGraph) -> PresentedSet {
        let descriptors = self
            .descriptors
            .iter()
            .enumerate()
            .map(|(b, d)| {
                normalize_block_set(match (d, bg.blocks[b].size) {
                    (BlockSet::Absent, BlockSize::Finite(n)) => {
                        BlockSet::Finite((0..n).collect())
                    }
                    (BlockSet::Absent, BlockSize::Omega) => BlockSet::Cofinite(BTreeSet::new()),
                    (BlockSet::Finite(s), BlockSize::Finite(n)) => {
                        BlockSet::Finite((0..n).filter(|i| !s.contains(i)).collect())
                    }
                    (BlockSet::Finite(s), BlockSize::Omega) => BlockSet::Cofinite(s.clone()),
                    (BlockSet::Cofinite(e), _) => BlockSet::Finite(e.clone()),
                })
            })
            .collect();
        PresentedSet { descriptors }
    }

    pub fn minus(&self, other: &PresentedSet, bg: &BlockGraph) -> PresentedSet {
        self.intersect(&other.complement(bg))
    }

    /// The set minus one vertex; needs no block sizes.
    pub fn without(&self, v: &ConcreteVertex) -> PresentedSet {
        let mut out = self.clone();
        out.descriptors[v.block] = normalize_block_set(match &out.descriptors[v.block] {
            BlockSet::Absent => BlockSet::Absent,
            BlockSet::Finite(s) => {
                BlockSet::Finite(s.iter().copied().filter(|&i| i != v.index).collect())
            }
            BlockSet::Cofinite(e) => {
                let mut e = e.clone();
                e.insert(v.index);
                BlockSet::Cofinite(e)
            }
        });
        out
    }

    /// The members as a list, when the set is finite.
    pub fn finite_members(&self) -> Option<Vec<ConcreteVertex>> {
        let mut out = Vec::new();
        for (block, d) in self.descriptors.iter().enumerate() {
            match d {
                BlockSet::Absent => {}
                BlockSet::Finite(s) => {
                    out.extend(s.iter().map(|&index| ConcreteVertex { block, index }));
                }
                BlockSet::Cofinite(_) => return None,
            }
        }
        Some(out)
    }

    pub fn is_subset_of(&self, other: &PresentedSet, bg: &BlockGraph) -> bool {
        self.minus(other, bg).is_empty()
    }

    /// Least vertex in block-then-index order, if any.
    pub fn least_member(&self) -> Option<ConcreteVertex> {
        for (block, d) in self.descriptors.iter().enumerate() {
            match d {
                BlockSet::Absent => {}
                BlockSet::Finite(s) => {
                    if let Some(&index) = s.first() {
                        return Some(ConcreteVertex { block, index });
                    }
                }
                BlockSet::Cofinite(e) => {
                    let index = (0..).find(|i| !e.contains(i)).expect("cofinite sets are nonempty");
                    return Some(ConcreteVertex { block, index });
                }
            }
        }
        None
    }

    /// Finite members plus cofinite exclusion indices, block by block; the
    /// indices a truncation guard has to clear.
    fn mentioned_indices(&self, per_block: &mut [BTreeSet<usize>]) {
        for (b, d) in self.descriptors.iter().enumerate() {
            match d {
                BlockSet::Absent => {}
                BlockSet::Finite(s) | BlockSet::Cofinite(s) => {
                    per_block[b].extend(s.iter().copied());
                }
            }
        }
    }

    /// Human-readable form, used by reports.
    pub fn describe(&self, bg: &BlockGraph) -> String {
        let parts: Vec<String> = self
            .descriptors
            .iter()
            .enumerate()
            .filter_map(|(b, d)| format_block_set(bg, b, d))
            .collect();
        if parts.is_empty() {
            "(empty)".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn normalize_block_set(d: BlockSet) -> BlockSet {
    match d {
        BlockSet::Finite(s) if s.is_empty() => BlockSet::Absent,
        other => other,
    }
}

fn format_block_set(bg: &BlockGraph, block: usize, d: &BlockSet) -> Option<String> {
    let name = &bg.blocks[block].name;
    match d {
        BlockSet::Absent => None,
        BlockSet::Finite(s) => {
            if let BlockSize::Finite(n) = bg.blocks[block].size {
                if s.len() == n {
                    return Some(format!("all({name})"));
                }
            }
            Some(format!("finite({name}; {})", index_list(s)))
        }
        BlockSet::Cofinite(e) if e.is_empty() => Some(format!("all({name})")),
        BlockSet::Cofinite(e) => Some(format!("cofinite({name}; {})", index_list(e))),
    }
}

fn index_list(s: &BTreeSet<usize>) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// One rectangle of edges: everything in src times everything in tgt,
/// optionally minus the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeAtom {
    pub src: PresentedSet,
    pub tgt: PresentedSet,
    pub exclude_diagonal: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BlockGraphError {
    #[error("block {0} has size zero")]
    ZeroBlock(String),
    #[error("duplicate block name {0}")]
    DuplicateBlock(String),
    #[error("descriptor count {got} does not match block count {want}")]
    DescriptorArity { got: usize, want: usize },
    #[error("index {index} out of range for block {block}")]
    IndexOutOfRange { block: String, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGraph {
    blocks: Vec<Block>,
    atoms: Vec<EdgeAtom>,
    explicit: Vec<(ConcreteVertex, ConcreteVertex)>,
}

impl BlockGraph {
    /// Validates and normalizes: cofinite descriptors on finite blocks become
    /// explicit lists, empty lists become Absent, and atoms with an empty
    /// side are dropped (they present no edges).
    pub fn new(
        blocks: Vec<Block>,
        atoms: Vec<EdgeAtom>,
        explicit: Vec<(ConcreteVertex, ConcreteVertex)>,
    ) -> Result<Self, BlockGraphError> {
        let mut names = BTreeSet::new();
        for b in &blocks {
            if let BlockSize::Finite(0) = b.size {
                return Err(BlockGraphError::ZeroBlock(b.name.clone()));
            }
            if !names.insert(b.name.clone()) {
                return Err(BlockGraphError::DuplicateBlock(b.name.clone()));
            }
        }
        let mut bg = BlockGraph { blocks, atoms: Vec::new(), explicit: Vec::new() };
        for atom in atoms {
            let src = bg.normalize_set(atom.src)?;
            let tgt = bg.normalize_set(atom.tgt)?;
            if src.is_empty() || tgt.is_empty() {
                continue;
            }
            bg.atoms.push(EdgeAtom { src, tgt, exclude_diagonal: atom.exclude_diagonal });
        }
        for (u, v) in explicit {
            bg.check_vertex(&u)?;
            bg.check_vertex(&v)?;
            bg.explicit.push((u, v));
        }
        Ok(bg)
    }

    fn normalize_set(&self, set: PresentedSet) -> Result<PresentedSet, BlockGraphError> {
        if set.descriptors.len() != self.blocks.len() {
            return Err(BlockGraphError::DescriptorArity {
                got: set.descriptors.len(),
                want: self.blocks.len(),
            });
        }
        let mut descriptors = Vec::with_capacity(set.descriptors.len());
        for (b, d) in set.descriptors.into_iter().enumerate() {
            let block = &self.blocks[b];
            let normalized = match (d, block.size) {
                (BlockSet::Finite(s), BlockSize::Finite(n)) => {
                    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                        return Err(BlockGraphError::IndexOutOfRange {
                            block: block.name.clone(),
                            index: bad,
                        });
                    }
                    BlockSet::Finite(s)
                }
                (BlockSet::Cofinite(e), BlockSize::Finite(n)) => {
                    BlockSet::Finite((0..n).filter(|i| !e.contains(i)).collect())
                }
                (d, _) => d,
            };
            descriptors.push(normalize_block_set(normalized));
        }
        Ok(PresentedSet { descriptors })
    }

    fn check_vertex(&self, v: &ConcreteVertex) -> Result<(), BlockGraphError> {
        let block = &self.blocks[v.block];
        if let BlockSize::Finite(n) = block.size {
            if v.index >= n {
                return Err(BlockGraphError::IndexOutOfRange {
                    block: block.name.clone(),
                    index: v.index,
                });
            }
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn atoms(&self) -> &[EdgeAtom] {
        &self.atoms
    }

    pub fn explicit_edges(&self) -> &[(ConcreteVertex, ConcreteVertex)] {
        &self.explicit
    }

    pub fn block_id(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.name == name)
    }

    pub fn is_omega(&self, block: usize) -> bool {
        matches!(self.blocks[block].size, BlockSize::Omega)
    }

    pub fn omega_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&b| self.is_omega(b)).collect()
    }

    pub fn is_finite_graph(&self) -> bool {
        self.omega_blocks().is_empty()
    }

    pub fn vertex_name(&self, v: &ConcreteVertex) -> String {
        format!("{}:{}", self.blocks[v.block].name, v.index)
    }

    /// Every vertex the presentation names: explicit endpoints, finite list
    /// members and cofinite exclusions.
    pub fn mentioned_vertices(&self) -> BTreeSet<ConcreteVertex> {
        let mut per_block = vec![BTreeSet::new(); self.blocks.len()];
        for atom in &self.atoms {
            atom.src.mentioned_indices(&mut per_block);
            atom.tgt.mentioned_indices(&mut per_block);
        }
        let mut out = BTreeSet::new();
        for (b, indices) in per_block.into_iter().enumerate() {
            for index in indices {
                out.insert(ConcreteVertex { block: b, index });
            }
        }
        for &(u, v) in &self.explicit {
            out.insert(u);
            out.insert(v);
        }
        out
    }

    /// Truncation levels at or above this see every named index of every
    /// countable block.
    pub fn guard_level(&self) -> usize {
        self.mentioned_vertices()
            .iter()
            .filter(|v| self.is_omega(v.block))
            .map(|v| v.index + 1)
            .max()
            .unwrap_or(0)
    }

    /// Finite subgraph on the vertices of index below `level` in countable
    /// blocks (finite blocks contribute everything). Atoms spell out their
    /// rectangles in order, then the explicit edges whose endpoints survive;
    /// multiplicity across atoms is preserved.
    pub fn truncate(&self, level: usize) -> Truncation {
        let mut vertices = Vec::new();
        for (b, block) in self.blocks.iter().enumerate() {
            let bound = match block.size {
                BlockSize::Finite(n) => n,
                BlockSize::Omega => level,
            };
            for index in 0..bound {
                vertices.push(ConcreteVertex { block: b, index });
            }
        }
        let lookup: BTreeMap<ConcreteVertex, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for atom in &self.atoms {
            let srcs: Vec<usize> = (0..vertices.len())
                .filter(|&i| atom.src.contains(&vertices[i]))
                .collect();
            let tgts: Vec<usize> = (0..vertices.len())
                .filter(|&i| atom.tgt.contains(&vertices[i]))
                .collect();
            for &u in &srcs {
                for &v in &tgts {
                    if atom.exclude_diagonal && u == v {
                        continue;
                    }
                    edges.push((u, v));
                }
            }
        }
        for (u, v) in &self.explicit {
            if let (Some(&iu), Some(&iv)) = (lookup.get(u), lookup.get(v)) {
                edges.push((iu, iv));
            }
        }
        let graph = Digraph::new(vertices.len(), edges).expect("truncation edges are in range");
        Truncation { graph, vertices, lookup }
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = content_lines(input);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "empty document, expected `blockgraph`"))?;
        let args = expect_header(line_no, header, "blockgraph")?;
        if !args.is_empty() {
            return Err(ParseError::new(line_no, "the blockgraph header takes no arguments"));
        }
        let mut blocks: Vec<Block> = Vec::new();
        let mut atoms: Vec<(usize, EdgeAtom)> = Vec::new();
        let mut explicit: Vec<(usize, (ConcreteVertex, ConcreteVertex))> = Vec::new();
        for (line_no, line) in lines {
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("block") => {
                    let name = fields
                        .next()
                        .ok_or_else(|| ParseError::new(line_no, "expected a block name"))?;
                    let size = match (fields.next(), fields.next(), fields.next()) {
                        (Some("omega"), None, _) => BlockSize::Omega,
                        (Some("finite"), Some(n), None) => {
                            BlockSize::Finite(parse_usize(line_no, n, "a block size")?)
                        }
                        _ => {
                            return Err(ParseError::new(
                                line_no,
                                "expected `block <name> omega` or `block <name> finite <n>`",
                            ))
                        }
                    };
                    blocks.push(Block { name: name.to_string(), size });
                }
                Some("atom") => {
                    let rest = line.trim_start().strip_prefix("atom").unwrap_or("");
                    atoms.push((line_no, parse_atom(line_no, rest, &blocks)?));
                }
                Some("edge") => {
                    let u = fields
                        .next()
                        .ok_or_else(|| ParseError::new(line_no, "expected two endpoints"))?;
                    let v = fields
                        .next()
                        .ok_or_else(|| ParseError::new(line_no, "expected two endpoints"))?;
                    if fields.next().is_some() {
                        return Err(ParseError::new(line_no, "expected exactly two endpoints"));
                    }
                    let u = parse_vertex(line_no, u, &blocks)?;
                    let v = parse_vertex(line_no, v, &blocks)?;
                    explicit.push((line_no, (u, v)));
                }
                Some(other) => {
                    return Err(ParseError::new(
                        line_no,
                        format!("expected `block`, `atom` or `edge`, found `{other}`"),
                    ))
                }
                None => unreachable!("content lines are nonempty"),
            }
        }
        let first_body_line = atoms
            .first()
            .map(|&(l, _)| l)
            .or(explicit.first().map(|&(l, _)| l))
            .unwrap_or(line_no);
        BlockGraph::new(
            blocks,
            atoms.into_iter().map(|(_, a)| a).collect(),
            explicit.into_iter().map(|(_, e)| e).collect(),
        )
        .map_err(|e| ParseError::new(first_body_line, e.to_string()))
    }
}

fn parse_atom(line_no: usize, rest: &str, blocks: &[Block]) -> Result<EdgeAtom, ParseError> {
    let Some((lhs, rhs)) = rest.split_once("->") else {
        return Err(ParseError::new(line_no, "expected `atom <set> -> <set> [nodiag]`"));
    };
    let mut rhs = rhs.trim();
    let mut exclude_diagonal = false;
    if let Some(stripped) = rhs.strip_suffix("nodiag") {
        exclude_diagonal = true;
        rhs = stripped.trim();
    }
    let src = parse_set(line_no, lhs.trim(), blocks)?;
    let tgt = parse_set(line_no, rhs, blocks)?;
    Ok(EdgeAtom { src, tgt, exclude_diagonal })
}

fn parse_set(line_no: usize, text: &str, blocks: &[Block]) -> Result<PresentedSet, ParseError> {
    if text.is_empty() {
        return Err(ParseError::new(line_no, "empty set description"));
    }
    let mut out = PresentedSet::absent(blocks.len());
    for component in text.split('+') {
        let component = component.trim();
        let (kind, inner) = component
            .split_once('(')
            .and_then(|(k, rest)| rest.strip_suffix(')').map(|inner| (k.trim(), inner)))
            .ok_or_else(|| {
                ParseError::new(
                    line_no,
                    format!("malformed set component `{component}`, expected `kind(block; ...)`"),
                )
            })?;
        let (name, list) = match inner.split_once(';') {
            Some((name, list)) => (name.trim(), Some(list)),
            None => (inner.trim(), None),
        };
        let block = blocks.iter().position(|b| b.name == name).ok_or_else(|| {
            ParseError::new(line_no, format!("unknown block `{name}` (declare blocks first)"))
        })?;
        let mut indices = BTreeSet::new();
        if let Some(list) = list {
            for token in list.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    continue;
                }
                indices.insert(parse_usize(line_no, token, "a vertex index")?);
            }
        }
        let descriptor = match kind {
            "all" => {
                if list.is_some() {
                    return Err(ParseError::new(line_no, "`all(block)` takes no index list"));
                }
                match blocks[block].size {
                    BlockSize::Finite(n) => BlockSet::Finite((0..n).collect()),
                    BlockSize::Omega => BlockSet::Cofinite(BTreeSet::new()),
                }
            }
            "finite" => BlockSet::Finite(indices),
            "cofinite" => BlockSet::Cofinite(indices),
            other => {
                return Err(ParseError::new(
                    line_no,
                    format!("unknown set kind `{other}`, expected all, finite or cofinite"),
                ))
            }
        };
        let mut single = PresentedSet::absent(blocks.len());
        single.descriptors[block] = descriptor;
        out = out.union(&single);
    }
    Ok(out)
}

fn parse_vertex(line_no: usize, token: &str, blocks: &[Block]) -> Result<ConcreteVertex, ParseError> {
    let Some((name, index)) = token.split_once(':') else {
        return Err(ParseError::new(line_no, format!("expected `block:index`, found `{token}`")));
    };
    let block = blocks.iter().position(|b| b.name == name).ok_or_else(|| {
        ParseError::new(line_no, format!("unknown block `{name}` (declare blocks first)"))
    })?;
    let index = parse_usize(line_no, index, "a vertex index")?;
    Ok(ConcreteVertex { block, index })
}

impl fmt::Display for BlockGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "blockgraph")?;
        for b in &self.blocks {
            match b.size {
                BlockSize::Finite(n) => writeln!(f, "block {} finite {}", b.name, n)?,
                BlockSize::Omega => writeln!(f, "block {} omega", b.name)?,
            }
        }
        for atom in &self.atoms {
            let suffix = if atom.exclude_diagonal { " nodiag" } else { "" };
            writeln!(
                f,
                "atom {} -> {}{}",
                atom.src.describe(self),
                atom.tgt.describe(self),
                suffix
            )?;
        }
        for (u, v) in &self.explicit {
            writeln!(f, "edge {} {}", self.vertex_name(u), self.vertex_name(v))?;
        }
        Ok(())
    }
}

/// A truncation of a block graph to a finite digraph, with the vertex
/// dictionary in both directions.
#[derive(Clone, Debug)]
pub struct Truncation {
    graph: Digraph,
    vertices: Vec<ConcreteVertex>,
    lookup: BTreeMap<ConcreteVertex, usize>,
}

impl Truncation {
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn concrete_of(&self, id: usize) -> ConcreteVertex {
        self.vertices[id]
    }

    pub fn vertex_of(&self, v: &ConcreteVertex) -> Option<usize> {
        self.lookup.get(v).copied()
    }

    /// Truncation vertices lying in the cofinite part of the set: members
    /// whose block descriptor is cofinite.
    pub fn core_vertices(&self, set: &PresentedSet) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| {
                let v = self.vertices[i];
                set.cofinite_on(v.block) && set.contains(&v)
            })
            .collect()
    }

    /// Reads a presented set off as truncation vertex ids.
    pub fn members(&self, set: &PresentedSet) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| set.contains(&self.vertices[i])).collect()
    }
}
