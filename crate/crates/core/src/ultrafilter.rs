//! Ultrafilters over small finite universes.
//!
//! Over a finite universe every ultrafilter is principal, so the type is a
//! universe size plus a base point; the interest is in the decision
//! procedures around it: the finite intersection property with refutation
//! witnesses, membership via the meets-everything characterisation, and the
//! action on maps. Subsets are 64-bit masks, which bounds universes at 64
//! elements; everything here runs at desk scale far below that.

use std::fmt;

use crate::digraph::Digraph;
use crate::textio::{content_lines, expect_header, parse_usize, ParseError};

pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum UltrafilterError {
    #[error("universe of size {0} exceeds the {MAX_UNIVERSE}-element bound")]
    UniverseTooLarge(usize),
    #[error("index {index} out of range for a universe of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("subset sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("not a partition: {reason}")]
    NotAPartition { reason: String },
    #[error("no ultrafilter exists over an empty universe")]
    EmptyUniverse,
    #[error("map sends {index} to {image}, outside a codomain of size {size}")]
    ImageOutOfRange { index: usize, image: usize, size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Universe {
    size: usize,
}

impl Universe {
    pub fn new(size: usize) -> Result<Self, UltrafilterError> {
        if size > MAX_UNIVERSE {
            return Err(UltrafilterError::UniverseTooLarge(size));
        }
        Ok(Universe { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// Subset of a fixed-size universe, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subset {
    size: usize,
    bits: u64,
}

impl Subset {
    pub fn empty(universe: Universe) -> Self {
        Subset { size: universe.size, bits: 0 }
    }

    pub fn full(universe: Universe) -> Self {
        let bits = if universe.size == 64 { u64::MAX } else { (1u64 << universe.size) - 1 };
        Subset { size: universe.size, bits }
    }

    pub fn from_indices(universe: Universe, indices: &[usize]) -> Result<Self, UltrafilterError> {
        let mut s = Subset::empty(universe);
        for &i in indices {
            if i >= universe.size {
                return Err(UltrafilterError::IndexOutOfRange { index: i, size: universe.size });
            }
            s.bits |= 1 << i;
        }
        Ok(s)
    }

    pub fn universe_size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.size && self.bits & (1 << index) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn least(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(|&i| self.contains(i))
    }

    fn check_size(&self, other: &Subset) -> Result<(), UltrafilterError> {
        if self.size != other.size {
            return Err(UltrafilterError::SizeMismatch { left: self.size, right: other.size });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Subset) -> Result<Subset, UltrafilterError> {
        self.check_size(other)?;
        Ok(Subset { size: self.size, bits: self.bits & other.bits })
    }

    pub fn union(&self, other: &Subset) -> Result<Subset, UltrafilterError> {
        self.check_size(other)?;
        Ok(Subset { size: self.size, bits: self.bits | other.bits })
    }

    pub fn complement(&self) -> Subset {
        let full = if self.size == 64 { u64::MAX } else { (1u64 << self.size) - 1 };
        Subset { size: self.size, bits: full & !self.bits }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.size == other.size && self.bits & !other.bits == 0
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    universe: Universe,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(universe: Universe, members: Vec<Subset>) -> Result<Self, UltrafilterError> {
        for m in &members {
            if m.universe_size() != universe.size {
                return Err(UltrafilterError::SizeMismatch {
                    left: universe.size,
                    right: m.universe_size(),
                });
            }
        }
        Ok(SetFamily { universe, members })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = content_lines(input);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "empty document, expected `universe <n>`"))?;
        let args = expect_header(line_no, header, "universe")?;
        if args.len() != 1 {
            return Err(ParseError::new(line_no, "expected `universe <size>`"));
        }
        let size = parse_usize(line_no, args[0], "a universe size")?;
        let universe = Universe::new(size)
            .map_err(|e| ParseError::new(line_no, e.to_string()))?;
        let mut members = Vec::new();
        for (line_no, line) in lines {
            let mut indices = Vec::new();
            for token in line.split_whitespace() {
                indices.push(parse_usize(line_no, token, "an element index")?);
            }
            let member = Subset::from_indices(universe, &indices)
                .map_err(|e| ParseError::new(line_no, e.to_string()))?;
            members.push(member);
        }
        Ok(SetFamily { universe, members })
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "universe {}", self.universe.size)?;
        for m in &self.members {
            let indices: Vec<String> = m.iter().map(|i| i.to_string()).collect();
            writeln!(f, "{}", indices.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ultrafilter {
    universe: Universe,
    point: usize,
}

impl Ultrafilter {
    pub fn principal(universe: Universe, point: usize) -> Result<Self, UltrafilterError> {
        if point >= universe.size {
            return Err(UltrafilterError::IndexOutOfRange { index: point, size: universe.size });
        }
        Ok(Ultrafilter { universe, point })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn member(&self, set: &Subset) -> bool {
        set.contains(self.point)
    }
}

/// Whether every finite subfamily has nonempty intersection. Over a finite
/// universe this reduces to the total intersection being nonempty; the
/// reduction itself is exercised exhaustively in the test suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FipOutcome {
    Holds { intersection: Subset },
    /// Member indices of an inclusion-minimal subfamily with empty
    /// intersection, found by greedy removal in ascending index order.
    Fails { refuting: Vec<usize> },
}

pub fn has_fip(family: &SetFamily) -> FipOutcome {
    let total = family
        .members
        .iter()
        .fold(Subset::full(family.universe), |acc, m| acc.intersect(m).unwrap());
    if !total.is_empty() {
        return FipOutcome::Holds { intersection: total };
    }
    let mut kept: Vec<usize> = (0..family.members.len()).collect();
    for i in 0..family.members.len() {
        let without: Vec<usize> = kept.iter().copied().filter(|&j| j != i).collect();
        let inter = without
            .iter()
            .fold(Subset::full(family.universe), |acc, &j| {
                acc.intersect(&family.members[j]).unwrap()
            });
        if inter.is_empty() {
            kept = without;
        }
    }
    FipOutcome::Fails { refuting: kept }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UltraExtension {
    /// Principal at the least element of the total intersection.
    Extended(Ultrafilter),
    Refuted { refuting: Vec<usize> },
}

/// Extends a family with the finite intersection property to an ultrafilter
/// containing every member.
pub fn extend_to_ultrafilter(family: &SetFamily) -> Result<UltraExtension, UltrafilterError> {
    match has_fip(family) {
        FipOutcome::Holds { intersection } => {
            let point = intersection.least().ok_or(UltrafilterError::EmptyUniverse)?;
            Ok(UltraExtension::Extended(Ultrafilter { universe: family.universe, point }))
        }
        FipOutcome::Fails { refuting } => Ok(UltraExtension::Refuted { refuting }),
    }
}

/// Index of the unique partition block the ultrafilter contains.
pub fn partition_member(
    u: &Ultrafilter,
    partition: &[Subset],
) -> Result<usize, UltrafilterError> {
    let mut seen = Subset::empty(u.universe);
    for block in partition {
        if block.universe_size() != u.universe.size {
            return Err(UltrafilterError::SizeMismatch {
                left: u.universe.size,
                right: block.universe_size(),
            });
        }
        if !seen.intersect(block)?.is_empty() {
            return Err(UltrafilterError::NotAPartition { reason: "blocks overlap".into() });
        }
        seen = seen.union(block)?;
    }
    if seen != Subset::full(u.universe) {
        return Err(UltrafilterError::NotAPartition {
            reason: "blocks do not cover the universe".into(),
        });
    }
    let hits: Vec<usize> = partition
        .iter()
        .enumerate()
        .filter(|(_, b)| u.member(b))
        .map(|(i, _)| i)
        .collect();
    // A partition puts the base point in exactly one block.
    assert_eq!(hits.len(), 1, "partition membership must be unique");
    Ok(hits[0])
}

/// True when `w` intersects every member of `u`; equivalently, when `w`
/// itself is a member. For universes of at most 12 elements the quantified
/// form is recomputed by enumeration and checked against the membership
/// answer.
pub fn meets_every(w: &Subset, u: &Ultrafilter) -> Result<bool, UltrafilterError> {
    if w.universe_size() != u.universe.size {
        return Err(UltrafilterError::SizeMismatch {
            left: u.universe.size,
            right: w.universe_size(),
        });
    }
    let by_membership = u.member(w);
    if u.universe.size <= 12 {
        debug_assert_eq!(
            meets_every_quantified(w, u),
            Some(by_membership),
            "membership shortcut disagrees with the quantified form"
        );
    }
    Ok(by_membership)
}

/// Direct evaluation of "w meets every member of u" by enumerating all
/// members; None when the universe is too large to enumerate.
pub fn meets_every_quantified(w: &Subset, u: &Ultrafilter) -> Option<bool> {
    if u.universe.size > 20 {
        return None;
    }
    let n = u.universe.size;
    for bits in 0..(1u64 << n) {
        let v = Subset { size: n, bits };
        if u.member(&v) && w.intersect(&v).unwrap().is_empty() {
            return Some(false);
        }
    }
    Some(true)
}

/// Total map between two universes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniverseMap {
    domain: Universe,
    codomain: Universe,
    map: Vec<usize>,
}

impl UniverseMap {
    pub fn new(
        domain: Universe,
        codomain: Universe,
        map: Vec<usize>,
    ) -> Result<Self, UltrafilterError> {
        if map.len() != domain.size {
            return Err(UltrafilterError::SizeMismatch { left: domain.size, right: map.len() });
        }
        for (i, &y) in map.iter().enumerate() {
            if y >= codomain.size {
                return Err(UltrafilterError::ImageOutOfRange {
                    index: i,
                    image: y,
                    size: codomain.size,
                });
            }
        }
        Ok(UniverseMap { domain, codomain, map })
    }

    pub fn identity(universe: Universe) -> Self {
        UniverseMap { domain: universe, codomain: universe, map: (0..universe.size).collect() }
    }

    pub fn domain(&self) -> Universe {
        self.domain
    }

    pub fn codomain(&self) -> Universe {
        self.codomain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn compose(&self, then: &UniverseMap) -> Result<UniverseMap, UltrafilterError> {
        if self.codomain != then.domain {
            return Err(UltrafilterError::SizeMismatch {
                left: self.codomain.size,
                right: then.domain.size,
            });
        }
        Ok(UniverseMap {
            domain: self.domain,
            codomain: then.codomain,
            map: self.map.iter().map(|&x| then.map[x]).collect(),
        })
    }

    pub fn preimage(&self, set: &Subset) -> Result<Subset, UltrafilterError> {
        if set.universe_size() != self.codomain.size {
            return Err(UltrafilterError::SizeMismatch {
                left: self.codomain.size,
                right: set.universe_size(),
            });
        }
        let indices: Vec<usize> = (0..self.domain.size).filter(|&x| set.contains(self.map[x])).collect();
        Subset::from_indices(self.domain, &indices)
    }
}

/// Image of an ultrafilter under a map: a set belongs to the image exactly
/// when its preimage belongs to the original. For principal ultrafilters
/// this is the principal ultrafilter at the image of the base point; the
/// extensional characterisation is rechecked for codomains of at most 12
/// elements.
pub fn beta_map(f: &UniverseMap, u: &Ultrafilter) -> Result<Ultrafilter, UltrafilterError> {
    if u.universe != f.domain {
        return Err(UltrafilterError::SizeMismatch {
            left: f.domain.size,
            right: u.universe.size,
        });
    }
    let image = Ultrafilter { universe: f.codomain, point: f.map[u.point] };
    if f.codomain.size <= 12 {
        debug_assert_eq!(
            beta_map_extensional_check(f, u, &image),
            Some(true),
            "preimage characterisation failed"
        );
    }
    Ok(image)
}

/// Checks `V in image <=> preimage(V) in u` over every subset V of the
/// codomain; None when the codomain is too large to enumerate.
pub fn beta_map_extensional_check(
    f: &UniverseMap,
    u: &Ultrafilter,
    image: &Ultrafilter,
) -> Option<bool> {
    if f.codomain.size > 20 {
        return None;
    }
    for bits in 0..(1u64 << f.codomain.size) {
        let v = Subset { size: f.codomain.size, bits };
        let lhs = image.member(&v);
        let rhs = u.member(&f.preimage(&v).unwrap());
        if lhs != rhs {
            return Some(false);
        }
    }
    Some(true)
}

/// Result of pushing a finite graph through the ultrafilter extension:
/// the extension of a finite graph is the graph itself, witnessed by an
/// explicit isomorphism and element-wise commuting endpoint squares.
#[derive(Clone, Debug)]
pub struct FiniteExtensionReport {
    pub graph: Digraph,
    pub source_square_commutes: bool,
    pub target_square_commutes: bool,
    pub isomorphic: bool,
}

impl FiniteExtensionReport {
    pub fn all_hold(&self) -> bool {
        self.source_square_commutes && self.target_square_commutes && self.isomorphic
    }
}

pub fn beta_finite_graph(g: &Digraph) -> Result<FiniteExtensionReport, UltrafilterError> {
    let vertex_universe = Universe::new(g.vertex_count())?;
    let edge_universe = Universe::new(g.edge_count())?;
    let source_map = UniverseMap::new(
        edge_universe,
        vertex_universe,
        g.edges().iter().map(|&(s, _)| s).collect(),
    )?;
    let target_map = UniverseMap::new(
        edge_universe,
        vertex_universe,
        g.edges().iter().map(|&(_, t)| t).collect(),
    )?;
    let mut extended_edges = Vec::with_capacity(g.edge_count());
    let mut source_ok = true;
    let mut target_ok = true;
    for e in 0..g.edge_count() {
        let unit_e = Ultrafilter::principal(edge_universe, e)?;
        let s_image = beta_map(&source_map, &unit_e)?;
        let t_image = beta_map(&target_map, &unit_e)?;
        // Unit-then-extension must match endpoint-then-unit, element by
        // element.
        let unit_of_source = Ultrafilter::principal(vertex_universe, g.source(e))?;
        let unit_of_target = Ultrafilter::principal(vertex_universe, g.target(e))?;
        source_ok &= s_image == unit_of_source;
        target_ok &= t_image == unit_of_target;
        extended_edges.push((s_image.point, t_image.point));
    }
    let graph = Digraph::new(g.vertex_count(), extended_edges).expect("points stay in range");
    let isomorphic = graph == *g;
    Ok(FiniteExtensionReport {
        graph,
        source_square_commutes: source_ok,
        target_square_commutes: target_ok,
        isomorphic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    fn subset(n: usize, indices: &[usize]) -> Subset {
        Subset::from_indices(universe(n), indices).unwrap()
    }

    #[test]
    fn fip_holds_iff_total_intersection_nonempty() {
        let fam = SetFamily::new(
            universe(5),
            vec![subset(5, &[0, 1, 2]), subset(5, &[1, 2, 3]), subset(5, &[2, 3, 4])],
        )
        .unwrap();
        match has_fip(&fam) {
            FipOutcome::Holds { intersection } => {
                assert_eq!(intersection, subset(5, &[2]));
            }
            other => panic!("expected FIP, got {other:?}"),
        }
    }

    #[test]
    fn fip_refutation_is_minimal() {
        // {0,1}, {1,2}, {0,2}, {3}: total intersection empty; the greedy
        // minimal refutation keeps {0,1} and a disjoint partner.
        let fam = SetFamily::new(
            universe(4),
            vec![subset(4, &[0, 1]), subset(4, &[1, 2]), subset(4, &[0, 2]), subset(4, &[3])],
        )
        .unwrap();
        match has_fip(&fam) {
            FipOutcome::Fails { refuting } => {
                let inter = refuting
                    .iter()
                    .fold(Subset::full(universe(4)), |acc, &i| {
                        acc.intersect(&fam.members()[i]).unwrap()
                    });
                assert!(inter.is_empty());
                // Minimality: dropping any index restores a nonempty meet.
                for drop in &refuting {
                    let rest = refuting
                        .iter()
                        .filter(|&i| i != drop)
                        .fold(Subset::full(universe(4)), |acc, &i| {
                            acc.intersect(&fam.members()[i]).unwrap()
                        });
                    assert!(!rest.is_empty(), "refutation not minimal at {drop}");
                }
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn empty_family_over_nonempty_universe_extends_to_zero() {
        let fam = SetFamily::new(universe(3), vec![]).unwrap();
        match extend_to_ultrafilter(&fam).unwrap() {
            UltraExtension::Extended(u) => assert_eq!(u.point(), 0),
            other => panic!("expected extension, got {other:?}"),
        }
    }

    #[test]
    fn family_with_empty_member_is_refuted() {
        let fam = SetFamily::new(universe(3), vec![subset(3, &[])]).unwrap();
        match extend_to_ultrafilter(&fam).unwrap() {
            UltraExtension::Refuted { refuting } => assert_eq!(refuting, vec![0]),
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn extension_point_lies_in_every_member() {
        let fam = SetFamily::new(
            universe(6),
            vec![subset(6, &[2, 3, 5]), subset(6, &[3, 5]), subset(6, &[1, 3])],
        )
        .unwrap();
        match extend_to_ultrafilter(&fam).unwrap() {
            UltraExtension::Extended(u) => {
                for m in fam.members() {
                    assert!(u.member(m));
                }
            }
            other => panic!("expected extension, got {other:?}"),
        }
    }

    #[test]
    fn partition_member_finds_the_unique_block() {
        let u = Ultrafilter::principal(universe(5), 3).unwrap();
        let partition = vec![subset(5, &[0, 1]), subset(5, &[2, 3]), subset(5, &[4])];
        assert_eq!(partition_member(&u, &partition).unwrap(), 1);
    }

    #[test]
    fn partition_member_rejects_non_partitions() {
        let u = Ultrafilter::principal(universe(3), 0).unwrap();
        let overlapping = vec![subset(3, &[0, 1]), subset(3, &[1, 2])];
        assert!(matches!(
            partition_member(&u, &overlapping),
            Err(UltrafilterError::NotAPartition { .. })
        ));
        let gappy = vec![subset(3, &[0])];
        assert!(matches!(
            partition_member(&u, &gappy),
            Err(UltrafilterError::NotAPartition { .. })
        ));
    }

    #[test]
    fn meets_every_matches_membership() {
        let u = Ultrafilter::principal(universe(6), 2).unwrap();
        assert!(meets_every(&subset(6, &[2, 4]), &u).unwrap());
        assert!(!meets_every(&subset(6, &[1, 4]), &u).unwrap());
        assert_eq!(meets_every_quantified(&subset(6, &[2, 4]), &u), Some(true));
        assert_eq!(meets_every_quantified(&subset(6, &[1, 4]), &u), Some(false));
    }

    #[test]
    fn beta_map_is_functorial_on_points() {
        let f = UniverseMap::new(universe(3), universe(2), vec![0, 1, 1]).unwrap();
        let g = UniverseMap::new(universe(2), universe(4), vec![3, 0]).unwrap();
        for p in 0..3 {
            let u = Ultrafilter::principal(universe(3), p).unwrap();
            let via_composite = beta_map(&f.compose(&g).unwrap(), &u).unwrap();
            let via_stages = beta_map(&g, &beta_map(&f, &u).unwrap()).unwrap();
            assert_eq!(via_composite, via_stages);
            let ident = beta_map(&UniverseMap::identity(universe(3)), &u).unwrap();
            assert_eq!(ident, u);
        }
    }

    #[test]
    fn finite_graph_extension_is_the_identity() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1)]).unwrap();
        let report = beta_finite_graph(&g).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.graph, g);
    }

    #[test]
    fn set_family_parse_round_trip() {
        let fam = SetFamily::parse("universe 4\n0 1\n2 3\n1\n").unwrap();
        assert_eq!(fam.members().len(), 3);
        assert_eq!(fam.members()[2], subset(4, &[1]));
        assert_eq!(SetFamily::parse(&fam.to_string()).unwrap(), fam);
        assert!(SetFamily::parse("universe 4\n0 9\n").is_err());
        assert!(SetFamily::parse("universe 100\n").is_err());
    }
}
