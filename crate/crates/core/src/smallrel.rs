//! Relative rectangle covers of finite relations.
//!
//! A subrelation Q of rho is covered by rectangles A_i x B_i when
//! rho intersected with their union is exactly Q; equivalently, the
//! rectangles jointly cover Q and no rectangle's intersection with rho
//! escapes Q. The least number of rectangles needed measures how far rho is
//! from decomposing over Q, and its growth along a family of instances is
//! the desk-scale refutation instrument for relations that fail to be small
//! at infinite scale.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blockgraph::BlockGraph;
use crate::budget::{Budget, StepCounter};
use crate::textio::{content_lines, expect_header, parse_usize, ParseError};

/// Solver-side bound; relations are desk scale by design.
pub const MAX_SIDE: usize = 64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RelationError {
    #[error("relation sides must be positive")]
    EmptySide,
    #[error("side of size {0} exceeds the {MAX_SIDE}-element bound")]
    SideTooLarge(usize),
    #[error("pair ({0}, {1}) out of range")]
    PairOutOfRange(usize, usize),
    #[error("({0}, {1}) lies in the subrelation but not in the relation")]
    NotASubrelation(usize, usize),
    #[error("ambient sizes differ: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },
    #[error("rectangle index {0} out of range")]
    RectangleOutOfRange(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    x_size: usize,
    y_size: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn new(
        x_size: usize,
        y_size: usize,
        pairs: BTreeSet<(usize, usize)>,
    ) -> Result<Self, RelationError> {
        if x_size == 0 || y_size == 0 {
            return Err(RelationError::EmptySide);
        }
        if x_size > MAX_SIDE {
            return Err(RelationError::SideTooLarge(x_size));
        }
        if y_size > MAX_SIDE {
            return Err(RelationError::SideTooLarge(y_size));
        }
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= x_size || y >= y_size) {
            return Err(RelationError::PairOutOfRange(x, y));
        }
        Ok(Relation { x_size, y_size, pairs })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn is_subrelation_of(&self, other: &Relation) -> bool {
        self.x_size == other.x_size
            && self.y_size == other.y_size
            && self.pairs.is_subset(&other.pairs)
    }

    /// Same pairs read inside a larger ambient product.
    pub fn pad(&self, extra_x: usize, extra_y: usize) -> Result<Relation, RelationError> {
        Relation::new(self.x_size + extra_x, self.y_size + extra_y, self.pairs.clone())
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut lines = content_lines(input);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "empty document, expected `relation <x> <y>`"))?;
        let args = expect_header(line_no, header, "relation")?;
        if args.len() != 2 {
            return Err(ParseError::new(line_no, "expected `relation <x_size> <y_size>`"));
        }
        let x_size = parse_usize(line_no, args[0], "an x size")?;
        let y_size = parse_usize(line_no, args[1], "a y size")?;
        let mut pairs = BTreeSet::new();
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(ParseError::new(line_no, "expected `<x> <y>`"));
            }
            let x = parse_usize(line_no, fields[0], "an x index")?;
            let y = parse_usize(line_no, fields[1], "a y index")?;
            if x >= x_size || y >= y_size {
                let e = RelationError::PairOutOfRange(x, y);
                return Err(ParseError::new(line_no, e.to_string()));
            }
            pairs.insert((x, y));
        }
        Relation::new(x_size, y_size, pairs)
            .map_err(|e| ParseError::new(line_no, e.to_string()))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "relation {} {}", self.x_size, self.y_size)?;
        for &(x, y) in &self.pairs {
            writeln!(f, "{x} {y}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rectangle {
    pub rows: BTreeSet<usize>,
    pub cols: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RectangleCover {
    pub rectangles: Vec<Rectangle>,
}

impl RectangleCover {
    pub fn len(&self) -> usize {
        self.rectangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rectangles.is_empty()
    }
}

/// Whether `cover` decomposes `q` relative to `rho`: the union of the
/// rectangles, intersected with rho, must equal q exactly.
pub fn is_cover(
    rho: &Relation,
    q: &Relation,
    cover: &RectangleCover,
) -> Result<bool, RelationError> {
    check_subrelation(rho, q)?;
    for rect in &cover.rectangles {
        for &x in &rect.rows {
            if x >= rho.x_size {
                return Err(RelationError::RectangleOutOfRange(x));
            }
        }
        for &y in &rect.cols {
            if y >= rho.y_size {
                return Err(RelationError::RectangleOutOfRange(y));
            }
        }
    }
    let mut trace = BTreeSet::new();
    for rect in &cover.rectangles {
        for &x in &rect.rows {
            for &y in &rect.cols {
                if rho.contains(x, y) {
                    trace.insert((x, y));
                }
            }
        }
    }
    Ok(trace == q.pairs)
}

fn check_subrelation(rho: &Relation, q: &Relation) -> Result<(), RelationError> {
    if rho.x_size != q.x_size || rho.y_size != q.y_size {
        return Err(RelationError::AmbientMismatch {
            left: format!("{}x{}", rho.x_size, rho.y_size),
            right: format!("{}x{}", q.x_size, q.y_size),
        });
    }
    if let Some(&(x, y)) = q.pairs.difference(&rho.pairs).next() {
        return Err(RelationError::NotASubrelation(x, y));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CoverOptions {
    /// Largest |X|*|Y| still solved exactly.
    pub exact_cell_cap: usize,
    pub budget: Budget,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { exact_cell_cap: 36, budget: Budget::unlimited() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverOutcome {
    Exact { cover: RectangleCover },
    /// Certified bounds: fooling-set lower bound, greedy (or interrupted
    /// search) upper bound with its witness. Reported above the exact cap or
    /// on budget exhaustion; never a wrong number.
    Bounds { lower: usize, upper: usize, witness: RectangleCover },
}

impl CoverOutcome {
    pub fn exact_size(&self) -> Option<usize> {
        match self {
            CoverOutcome::Exact { cover } => Some(cover.len()),
            CoverOutcome::Bounds { lower, upper, .. } if lower == upper => Some(*lower),
            CoverOutcome::Bounds { .. } => None,
        }
    }

    pub fn upper_witness(&self) -> &RectangleCover {
        match self {
            CoverOutcome::Exact { cover } => cover,
            CoverOutcome::Bounds { witness, .. } => witness,
        }
    }
}

/// Least rectangle cover of `q` relative to `rho`.
///
/// Instances within the cell cap are solved exactly: all maximal admissible
/// rectangles are enumerated (every admissible rectangle extends to a
/// maximal one without losing coverage, so nothing is missed) and a
/// branch-and-bound set cover runs over them. Larger instances get a greedy
/// upper bound and a fooling-set lower bound; when the two meet the result
/// is certified exact anyway.
pub fn min_cover(
    rho: &Relation,
    q: &Relation,
    opts: &CoverOptions,
) -> Result<CoverOutcome, RelationError> {
    check_subrelation(rho, q)?;
    if q.pairs.is_empty() {
        return Ok(CoverOutcome::Exact { cover: RectangleCover::default() });
    }
    // Rows and columns rho never touches are free: rectangles may use them
    // at no cost and minimality ignores them. Strip them first, so the
    // answer cannot depend on how much empty ambient space surrounds rho.
    let rows: Vec<usize> =
        (0..rho.x_size).filter(|&x| rho.pairs.iter().any(|&(a, _)| a == x)).collect();
    let cols: Vec<usize> =
        (0..rho.y_size).filter(|&y| rho.pairs.iter().any(|&(_, b)| b == y)).collect();
    if rows.len() < rho.x_size || cols.len() < rho.y_size {
        let row_of: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let col_of: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let squeeze = |r: &Relation| {
            Relation::new(
                rows.len(),
                cols.len(),
                r.pairs.iter().map(|&(x, y)| (row_of[&x], col_of[&y])).collect(),
            )
        };
        let widen = |cover: RectangleCover| RectangleCover {
            rectangles: cover
                .rectangles
                .into_iter()
                .map(|rect| Rectangle {
                    rows: rect.rows.iter().map(|&i| rows[i]).collect(),
                    cols: rect.cols.iter().map(|&i| cols[i]).collect(),
                })
                .collect(),
        };
        return Ok(match min_cover(&squeeze(rho)?, &squeeze(q)?, opts)? {
            CoverOutcome::Exact { cover } => CoverOutcome::Exact { cover: widen(cover) },
            CoverOutcome::Bounds { lower, upper, witness } => {
                CoverOutcome::Bounds { lower, upper, witness: widen(witness) }
            }
        });
    }
    let cells = rho.x_size * rho.y_size;
    if cells <= opts.exact_cell_cap {
        let concepts = maximal_admissible_rectangles(rho, q);
        let q_pairs: Vec<(usize, usize)> = q.pairs.iter().copied().collect();
        let masks: Vec<u64> = concepts.iter().map(|r| coverage_mask(r, &q_pairs)).collect();
        let full = full_mask(q_pairs.len());
        let (picked, certified) = branch_and_bound_cover(&masks, full, &opts.budget);
        let cover = RectangleCover {
            rectangles: picked.iter().map(|&i| concepts[i].clone()).collect(),
        };
        debug_assert_eq!(is_cover(rho, q, &cover), Ok(true));
        if certified {
            return Ok(CoverOutcome::Exact { cover });
        }
        let (lower, _) = fooling_set_lower_bound(rho, q)?;
        return Ok(CoverOutcome::Bounds { lower, upper: cover.len(), witness: cover });
    }
    let witness = greedy_cover(rho, q)?;
    let (lower, _) = fooling_set_lower_bound(rho, q)?;
    debug_assert!(lower <= witness.len());
    if lower == witness.len() {
        return Ok(CoverOutcome::Exact { cover: witness });
    }
    Ok(CoverOutcome::Bounds { lower, upper: witness.len(), witness })
}

/// Greedy cover: repeatedly take the admissible rectangle covering the most
/// still-uncovered pairs of q, breaking ties towards the lexicographically
/// smallest row set.
pub fn greedy_cover(rho: &Relation, q: &Relation) -> Result<RectangleCover, RelationError> {
    check_subrelation(rho, q)?;
    if q.pairs.is_empty() {
        return Ok(RectangleCover::default());
    }
    let pool = if rho.x_size.min(rho.y_size) <= 12 {
        maximal_admissible_rectangles(rho, q)
    } else {
        line_closures(rho, q)
    };
    let cover_sets: Vec<BTreeSet<(usize, usize)>> = pool
        .iter()
        .map(|r| {
            q.pairs
                .iter()
                .copied()
                .filter(|&(x, y)| r.rows.contains(&x) && r.cols.contains(&y))
                .collect()
        })
        .collect();
    let mut uncovered = q.pairs.clone();
    let mut rectangles = Vec::new();
    while !uncovered.is_empty() {
        // The pool is sorted, so on ties max_by keeps the earlier entry,
        // which is the lexicographically smaller rectangle.
        let best = (0..pool.len())
            .max_by(|&a, &b| {
                let ca = cover_sets[a].intersection(&uncovered).count();
                let cb = cover_sets[b].intersection(&uncovered).count();
                ca.cmp(&cb).then(b.cmp(&a))
            })
            .expect("pool covers every pair");
        let gained: Vec<(usize, usize)> =
            cover_sets[best].intersection(&uncovered).copied().collect();
        assert!(!gained.is_empty(), "pool failed to cover q");
        for p in gained {
            uncovered.remove(&p);
        }
        rectangles.push(pool[best].clone());
    }
    Ok(RectangleCover { rectangles })
}

/// Greedy fooling set: pairs of q no admissible rectangle can contain two
/// of. Admissibility is closed under subrectangles, so any rectangle
/// containing two such pairs would contain the four-cell rectangle they
/// span; the count is a certified lower bound on every cover.
pub fn fooling_set_lower_bound(
    rho: &Relation,
    q: &Relation,
) -> Result<(usize, Vec<(usize, usize)>), RelationError> {
    check_subrelation(rho, q)?;
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for &p in &q.pairs {
        if chosen.iter().all(|&c| !spanned_admissible(rho, q, p, c)) {
            chosen.push(p);
        }
    }
    Ok((chosen.len(), chosen))
}

/// Whether the four-cell rectangle spanned by two pairs is admissible.
fn spanned_admissible(
    rho: &Relation,
    q: &Relation,
    (x1, y1): (usize, usize),
    (x2, y2): (usize, usize),
) -> bool {
    for row in [x1, x2] {
        for col in [y1, y2] {
            if rho.contains(row, col) && !q.contains(row, col) {
                return false;
            }
        }
    }
    true
}

/// All maximal rectangles whose rho-trace stays inside q, sorted by row set.
fn maximal_admissible_rectangles(rho: &Relation, q: &Relation) -> Vec<Rectangle> {
    let transposed = rho.x_size > rho.y_size;
    let (x_size, y_size) = if transposed {
        (rho.y_size, rho.x_size)
    } else {
        (rho.x_size, rho.y_size)
    };
    // allowed[x] = columns y whose (x, y) cell is not forbidden, where the
    // forbidden cells are rho minus q.
    let mut allowed: Vec<u64> = vec![full_mask(y_size); x_size];
    for &(px, py) in rho.pairs.difference(&q.pairs) {
        let (x, y) = if transposed { (py, px) } else { (px, py) };
        allowed[x] &= !(1u64 << y);
    }
    let mut seen = BTreeSet::new();
    for bits in 0u64..(1 << x_size) {
        let mut cols = full_mask(y_size);
        for x in 0..x_size {
            if bits & (1 << x) != 0 {
                cols &= allowed[x];
            }
        }
        if cols == 0 {
            continue;
        }
        let mut rows = 0u64;
        for x in 0..x_size {
            if allowed[x] & cols == cols {
                rows |= 1 << x;
            }
        }
        if rows == 0 {
            continue;
        }
        seen.insert((rows, cols));
    }
    let mut out: Vec<Rectangle> = seen
        .into_iter()
        .map(|(rows, cols)| {
            let rect = Rectangle {
                rows: mask_indices(rows),
                cols: mask_indices(cols),
            };
            if transposed {
                Rectangle { rows: rect.cols, cols: rect.rows }
            } else {
                rect
            }
        })
        .collect();
    out.sort();
    out
}

/// Fallback pool for wide instances: row and column closures only.
fn line_closures(rho: &Relation, q: &Relation) -> Vec<Rectangle> {
    let mut forbidden = vec![BTreeSet::new(); rho.x_size];
    for &(x, y) in rho.pairs.difference(&q.pairs) {
        forbidden[x].insert(y);
    }
    let mut out = BTreeSet::new();
    for x in 0..rho.x_size {
        let cols: BTreeSet<usize> = (0..rho.y_size).filter(|y| !forbidden[x].contains(y)).collect();
        if cols.is_empty() {
            continue;
        }
        let rows: BTreeSet<usize> = (0..rho.x_size)
            .filter(|&r| cols.iter().all(|y| !forbidden[r].contains(y)))
            .collect();
        out.insert(Rectangle { rows, cols });
    }
    for y in 0..rho.y_size {
        let rows: BTreeSet<usize> = (0..rho.x_size).filter(|&x| !forbidden[x].contains(&y)).collect();
        if rows.is_empty() {
            continue;
        }
        let cols: BTreeSet<usize> = (0..rho.y_size)
            .filter(|&c| rows.iter().all(|&x| !forbidden[x].contains(&c)))
            .collect();
        out.insert(Rectangle { rows, cols });
    }
    out.into_iter().collect()
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_indices(mask: u64) -> BTreeSet<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

fn coverage_mask(rect: &Rectangle, q_pairs: &[(usize, usize)]) -> u64 {
    debug_assert!(q_pairs.len() <= 64);
    let mut mask = 0u64;
    for (i, &(x, y)) in q_pairs.iter().enumerate() {
        if rect.rows.contains(&x) && rect.cols.contains(&y) {
            mask |= 1 << i;
        }
    }
    mask
}

/// Minimum set cover by branch and bound; the bool reports whether the
/// search completed (false means the budget ran out and the result is only
/// an upper bound).
fn branch_and_bound_cover(sets: &[u64], full: u64, budget: &Budget) -> (Vec<usize>, bool) {
    // Greedy start for the incumbent.
    let mut incumbent = Vec::new();
    let mut uncovered = full;
    while uncovered != 0 {
        let best = (0..sets.len())
            .max_by(|&a, &b| {
                let ca = (sets[a] & uncovered).count_ones();
                let cb = (sets[b] & uncovered).count_ones();
                ca.cmp(&cb).then(b.cmp(&a))
            })
            .expect("cover must exist");
        debug_assert!(sets[best] & uncovered != 0);
        uncovered &= !sets[best];
        incumbent.push(best);
    }
    let max_cover = sets.iter().map(|s| s.count_ones() as usize).max().unwrap_or(1).max(1);
    let mut counter = StepCounter::new(budget);
    let mut best = incumbent.clone();
    let mut chosen: Vec<usize> = Vec::new();
    let mut complete = true;
    fn go(
        sets: &[u64],
        uncovered: u64,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        max_cover: usize,
        counter: &mut StepCounter,
        complete: &mut bool,
    ) {
        if uncovered == 0 {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        if !counter.tick() {
            *complete = false;
            return;
        }
        let remaining = uncovered.count_ones() as usize;
        if chosen.len() + remaining.div_ceil(max_cover) >= best.len() {
            return;
        }
        // Branch on the uncovered pair with the fewest candidate rectangles.
        let mut pick = None;
        let mut fewest = usize::MAX;
        let mut bit = uncovered;
        while bit != 0 {
            let e = bit & bit.wrapping_neg();
            let count = sets.iter().filter(|&&s| s & e != 0).count();
            if count < fewest {
                fewest = count;
                pick = Some(e);
            }
            bit &= !e;
        }
        let e = pick.expect("uncovered nonempty");
        for (i, &s) in sets.iter().enumerate() {
            if s & e != 0 {
                chosen.push(i);
                go(sets, uncovered & !s, chosen, best, max_cover, counter, complete);
                chosen.pop();
                if !*complete {
                    return;
                }
            }
        }
    }
    go(sets, full, &mut chosen, &mut best, max_cover, &mut counter, &mut complete);
    (best, complete)
}

// ---------------------------------------------------------------------------
// Built-in relation families

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationFamily {
    /// Pairs (i, j) with i <= j on an n x n grid.
    Staircase,
    /// Everything on an n x n grid.
    Full,
    /// The diagonal of an n x n grid.
    Identity,
    /// Full n x 1: a countable side squashed to one point on the right.
    TallHalf,
    /// Full 1 x n: the mirror factor.
    WideHalf,
}

impl RelationFamily {
    pub fn generate(&self, n: usize) -> Result<Relation, RelationError> {
        let pairs: BTreeSet<(usize, usize)> = match self {
            RelationFamily::Staircase => {
                (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
            }
            RelationFamily::Full => {
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
            }
            RelationFamily::Identity => (0..n).map(|i| (i, i)).collect(),
            RelationFamily::TallHalf => (0..n).map(|i| (i, 0)).collect(),
            RelationFamily::WideHalf => (0..n).map(|j| (0, j)).collect(),
        };
        match self {
            RelationFamily::TallHalf => Relation::new(n, 1, pairs),
            RelationFamily::WideHalf => Relation::new(1, n, pairs),
            _ => Relation::new(n, n, pairs),
        }
    }
}

/// Full ambient grid of the same shape as `r`.
pub fn ambient_grid(r: &Relation) -> Relation {
    let pairs = (0..r.x_size)
        .flat_map(|x| (0..r.y_size).map(move |y| (x, y)))
        .collect();
    Relation { x_size: r.x_size, y_size: r.y_size, pairs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthPoint {
    pub n: usize,
    pub exact: Option<usize>,
    pub fooling_lower: usize,
    pub greedy_upper: usize,
}

/// Cover number of the staircase inside its ambient grid, for n up to
/// `max_n`. The staircase is the canonical subrelation that is not a finite
/// union of rectangles at infinite scale; here its cover number grows
/// exactly like n, with the diagonal pairs as the fooling set.
pub fn staircase_growth(max_n: usize, opts: &CoverOptions) -> Result<Vec<GrowthPoint>, RelationError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let q = RelationFamily::Staircase.generate(n)?;
        let rho = ambient_grid(&q);
        let (fooling_lower, _) = fooling_set_lower_bound(&rho, &q)?;
        let greedy_upper = greedy_cover(&rho, &q)?.len();
        let exact = min_cover(&rho, &q, opts)?.exact_size();
        out.push(GrowthPoint { n, exact, fooling_lower, greedy_upper });
    }
    Ok(out)
}

/// Relational composite: x -> z when some y joins them.
pub fn compose(first: &Relation, second: &Relation) -> Result<Relation, RelationError> {
    if first.y_size != second.x_size {
        return Err(RelationError::AmbientMismatch {
            left: format!("{}x{}", first.x_size, first.y_size),
            right: format!("{}x{}", second.x_size, second.y_size),
        });
    }
    let mut pairs = BTreeSet::new();
    for &(x, y) in &first.pairs {
        for &(y2, z) in &second.pairs {
            if y == y2 {
                pairs.insert((x, z));
            }
        }
    }
    Relation::new(first.x_size, second.y_size, pairs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionCounterexample {
    pub n: usize,
    /// Worst cover number over every subrelation of the n x 1 factor.
    pub tall_worst: usize,
    /// Worst cover number over every subrelation of the 1 x n factor.
    pub wide_worst: usize,
    /// Cover number of the staircase inside the composite n x n grid.
    pub composite_staircase: usize,
}

/// The two half-products cover every subrelation with one rectangle, yet
/// their composite is the full grid, whose staircase subrelation needs n.
pub fn composition_counterexample(
    n: usize,
    opts: &CoverOptions,
) -> Result<CompositionCounterexample, RelationError> {
    assert!(n >= 1 && n <= 16, "worst-case scan enumerates all 2^n subrelations");
    let tall = RelationFamily::TallHalf.generate(n)?;
    let wide = RelationFamily::WideHalf.generate(n)?;
    let composite = compose(&tall, &wide)?;
    debug_assert_eq!(composite, RelationFamily::Full.generate(n)?);
    let tall_worst = worst_case_cover(&tall, opts)?;
    let wide_worst = worst_case_cover(&wide, opts)?;
    let staircase = RelationFamily::Staircase.generate(n)?;
    let outcome = min_cover(&composite, &staircase, opts)?;
    let composite_staircase = outcome
        .exact_size()
        .expect("staircase instance within the exact cap");
    Ok(CompositionCounterexample { n, tall_worst, wide_worst, composite_staircase })
}

/// Max of min_cover over every subrelation of rho (exhaustive; |rho| <= 16).
pub fn worst_case_cover(rho: &Relation, opts: &CoverOptions) -> Result<usize, RelationError> {
    let pairs: Vec<(usize, usize)> = rho.pairs.iter().copied().collect();
    assert!(pairs.len() <= 16, "exhaustive subrelation scan");
    let mut worst = 0;
    for bits in 0u32..(1 << pairs.len()) {
        let subset: BTreeSet<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        let q = Relation::new(rho.x_size, rho.y_size, subset)?;
        let size = min_cover(rho, &q, opts)?
            .exact_size()
            .expect("subrelation instance within the exact cap");
        worst = worst.max(size);
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Law checks over random samples

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealLawsReport {
    pub cases: usize,
    pub empty_cover_failures: usize,
    pub subrelation_failures: usize,
    pub union_failures: usize,
}

impl IdealLawsReport {
    pub fn all_hold(&self) -> bool {
        self.empty_cover_failures == 0
            && self.subrelation_failures == 0
            && self.union_failures == 0
    }
}

/// Checks the ideal laws of relative covers on seeded random instances:
/// the empty subrelation has cover size 0, every subrelation of a covered
/// one still admits a cover, and concatenating covers of Q1 and Q2 covers
/// their union.
pub fn ideal_laws_check(seed: u64, cases: usize) -> IdealLawsReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = CoverOptions::default();
    let mut report = IdealLawsReport {
        cases,
        empty_cover_failures: 0,
        subrelation_failures: 0,
        union_failures: 0,
    };
    for _ in 0..cases {
        let x_size = rng.random_range(1..=5);
        let y_size = rng.random_range(1..=5);
        let mut pairs = BTreeSet::new();
        for x in 0..x_size {
            for y in 0..y_size {
                if rng.random_bool(0.5) {
                    pairs.insert((x, y));
                }
            }
        }
        let rho = Relation::new(x_size, y_size, pairs).unwrap();
        let empty = Relation::new(x_size, y_size, BTreeSet::new()).unwrap();
        match min_cover(&rho, &empty, &opts) {
            Ok(CoverOutcome::Exact { cover }) if cover.is_empty() => {}
            _ => report.empty_cover_failures += 1,
        }
        let q1 = random_subrelation(&rho, &mut rng);
        let q2 = random_subrelation(&rho, &mut rng);
        let sub = random_subrelation(&q1, &mut rng);
        for q in [&q1, &q2, &sub] {
            match min_cover(&rho, q, &opts) {
                Ok(outcome) => {
                    if is_cover(&rho, q, outcome.upper_witness()) != Ok(true) {
                        report.subrelation_failures += 1;
                    }
                }
                Err(_) => report.subrelation_failures += 1,
            }
        }
        let c1 = min_cover(&rho, &q1, &opts).unwrap();
        let c2 = min_cover(&rho, &q2, &opts).unwrap();
        let mut union_pairs = q1.pairs.clone();
        union_pairs.extend(q2.pairs.iter().copied());
        let q_union = Relation::new(x_size, y_size, union_pairs).unwrap();
        let mut rectangles = c1.upper_witness().rectangles.clone();
        rectangles.extend(c2.upper_witness().rectangles.iter().cloned());
        let concat = RectangleCover { rectangles };
        if is_cover(&rho, &q_union, &concat) != Ok(true) {
            report.union_failures += 1;
        }
    }
    report
}

fn random_subrelation(of: &Relation, rng: &mut ChaCha8Rng) -> Relation {
    let pairs: BTreeSet<(usize, usize)> = of
        .pairs
        .iter()
        .copied()
        .filter(|_| rng.random_bool(0.5))
        .collect();
    Relation { x_size: of.x_size, y_size: of.y_size, pairs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsolutenessReport {
    pub is_cover_same: bool,
    pub min_cover_same: bool,
}

impl AbsolutenessReport {
    pub fn all_hold(&self) -> bool {
        self.is_cover_same && self.min_cover_same
    }
}

/// Cover verdicts must not depend on the ambient product: padding both
/// relations with fresh rows and columns changes neither the is_cover
/// verdict of a given cover nor the minimal cover size.
pub fn absoluteness_check(
    rho: &Relation,
    q: &Relation,
    cover: &RectangleCover,
    extra_x: usize,
    extra_y: usize,
) -> Result<AbsolutenessReport, RelationError> {
    let rho_padded = rho.pad(extra_x, extra_y)?;
    let q_padded = q.pad(extra_x, extra_y)?;
    let verdict = is_cover(rho, q, cover)?;
    let verdict_padded = is_cover(&rho_padded, &q_padded, cover)?;
    let opts = CoverOptions::default();
    let original = min_cover(rho, q, &opts)?.exact_size();
    let padded = min_cover(&rho_padded, &q_padded, &opts)?.exact_size();
    Ok(AbsolutenessReport {
        is_cover_same: verdict == verdict_padded,
        min_cover_same: original.is_some() && original == padded,
    })
}

// ---------------------------------------------------------------------------
// Smallness of presented edge relations

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmallnessVerdict {
    /// Every subrelation of the presented edge relation has a cover of at
    /// most `cover_bound` rectangles, at any truncation size.
    Small { cover_bound: usize },
    /// The atom at this index relates two infinite sides.
    NotSmall { atom: usize },
}

/// A presented edge relation is small exactly when no atom has descriptors
/// of infinite extent on both sides. For small presentations each atom is
/// covered line by line through its finite side, giving a cover bound that
/// does not grow with truncation size; a double-infinite atom embeds ever
/// larger staircase instances instead.
pub fn block_relation_smallness(bg: &BlockGraph) -> SmallnessVerdict {
    let mut bound = bg.explicit_edges().len();
    for (i, atom) in bg.atoms().iter().enumerate() {
        let src = atom.src.finite_size();
        let tgt = atom.tgt.finite_size();
        match (src, tgt) {
            (None, None) => return SmallnessVerdict::NotSmall { atom: i },
            (Some(s), None) => bound += s,
            (None, Some(t)) => bound += t,
            (Some(s), Some(t)) => bound += s.min(t),
        }
    }
    SmallnessVerdict::Small { cover_bound: bound }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallnessCrossCheck {
    pub verdict: SmallnessVerdict,
    /// For small verdicts: sampled subrelations of growing truncations all
    /// stayed within the structural bound.
    pub bound_respected: bool,
    /// For not-small verdicts: fooling-set lower bounds along truncations,
    /// strictly increasing.
    pub growth: Vec<usize>,
    pub growth_unbounded_signature: bool,
}

impl SmallnessCrossCheck {
    pub fn consistent(&self) -> bool {
        match self.verdict {
            SmallnessVerdict::Small { .. } => self.bound_respected,
            SmallnessVerdict::NotSmall { .. } => self.growth_unbounded_signature,
        }
    }
}

/// Cross-validates the smallness criterion against truncations: small
/// verdicts must exhibit covers within the structural bound on sampled
/// subrelations, not-small verdicts must show growing staircase lower
/// bounds.
pub fn smallness_cross_check(bg: &BlockGraph, seed: u64, samples: usize) -> SmallnessCrossCheck {
    let verdict = block_relation_smallness(bg);
    match &verdict {
        SmallnessVerdict::Small { cover_bound } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ok = true;
            for n in [2usize, 4, 6] {
                let trunc = bg.truncate(n);
                let g = trunc.graph();
                if g.vertex_count() == 0 || g.vertex_count() > MAX_SIDE {
                    continue;
                }
                let rho = Relation::new(
                    g.vertex_count(),
                    g.vertex_count(),
                    g.adjacency_pairs(),
                )
                .expect("truncation fits the solver bound");
                for _ in 0..samples {
                    let q = random_subrelation(&rho, &mut rng);
                    match structural_cover(bg, &trunc, &q) {
                        Some(cover) => {
                            if cover.len() > *cover_bound
                                || is_cover(&rho, &q, &cover) != Ok(true)
                            {
                                ok = false;
                            }
                        }
                        None => ok = false,
                    }
                }
            }
            SmallnessCrossCheck {
                verdict,
                bound_respected: ok,
                growth: Vec::new(),
                growth_unbounded_signature: true,
            }
        }
        SmallnessVerdict::NotSmall { atom } => {
            // Start past the guard level so cofinite exclusions are already
            // absorbed and the double-infinite core grows with every step.
            let base = bg.guard_level().max(4);
            let mut growth = Vec::new();
            for n in [base, base + 2, base + 4, base + 6] {
                growth.push(staircase_lower_bound_in_truncation(bg, *atom, n));
            }
            let strictly_up = growth.windows(2).all(|w| w[0] < w[1]);
            SmallnessCrossCheck {
                verdict,
                bound_respected: true,
                growth,
                growth_unbounded_signature: strictly_up,
            }
        }
    }
}

/// Line-by-line cover of q through each atom's finite side plus singleton
/// rectangles for explicit edges. Returns None if some pair of q is not
/// accounted for (which would indicate a presentation/truncation mismatch).
fn structural_cover(
    bg: &BlockGraph,
    trunc: &crate::blockgraph::Truncation,
    q: &Relation,
) -> Option<RectangleCover> {
    let mut assigned: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut rectangles = Vec::new();
    for atom in bg.atoms() {
        // Cover through whichever side is finite; prefer the smaller.
        let by_rows = match (atom.src.finite_size(), atom.tgt.finite_size()) {
            (Some(s), Some(t)) => s <= t,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => return None,
        };
        let mut lines: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        for &(x, y) in q.pairs.iter() {
            if assigned.contains(&(x, y)) {
                continue;
            }
            let vx = trunc.concrete_of(x);
            let vy = trunc.concrete_of(y);
            if atom.src.contains(&vx) && atom.tgt.contains(&vy) && (!atom.exclude_diagonal || vx != vy)
            {
                if by_rows {
                    lines.entry(x).or_default().insert(y);
                } else {
                    lines.entry(y).or_default().insert(x);
                }
                assigned.insert((x, y));
            }
        }
        for (line, others) in lines {
            let (rows, cols) = if by_rows {
                ([line].into(), others)
            } else {
                (others, [line].into())
            };
            rectangles.push(Rectangle { rows, cols });
        }
    }
    for &(u, v) in bg.explicit_edges() {
        if let (Some(x), Some(y)) = (trunc.vertex_of(&u), trunc.vertex_of(&v)) {
            if q.contains(x, y) && !assigned.contains(&(x, y)) {
                assigned.insert((x, y));
                rectangles.push(Rectangle { rows: [x].into(), cols: [y].into() });
            }
        }
    }
    if assigned == *q.pairs() {
        Some(RectangleCover { rectangles })
    } else {
        None
    }
}

/// Fooling-set lower bound for a staircase pattern inside the double
/// infinite core of the offending atom, at truncation size n.
fn staircase_lower_bound_in_truncation(bg: &BlockGraph, atom: usize, n: usize) -> usize {
    let trunc = bg.truncate(n);
    let g = trunc.graph();
    if g.vertex_count() == 0 || g.vertex_count() > MAX_SIDE {
        return 0;
    }
    let rho = Relation::new(g.vertex_count(), g.vertex_count(), g.adjacency_pairs())
        .expect("truncation fits the solver bound");
    let a = &bg.atoms()[atom];
    let src_core = trunc.core_vertices(&a.src);
    let tgt_core = trunc.core_vertices(&a.tgt);
    // Keep chosen sources disjoint from chosen targets (so the diagonal
    // survives nodiag atoms): exclusive vertices go to their own side,
    // shared ones to whichever side is behind.
    let shared: Vec<usize> =
        src_core.iter().copied().filter(|v| tgt_core.contains(v)).collect();
    let mut rows: Vec<usize> =
        src_core.iter().copied().filter(|v| !tgt_core.contains(v)).collect();
    let mut cols: Vec<usize> =
        tgt_core.iter().copied().filter(|v| !src_core.contains(v)).collect();
    for v in shared {
        if rows.len() <= cols.len() {
            rows.push(v);
        } else {
            cols.push(v);
        }
    }
    let k = rows.len().min(cols.len());
    let mut pairs = BTreeSet::new();
    for p in 0..k {
        for qi in p..k {
            pairs.insert((rows[p], cols[qi]));
        }
    }
    let q = match Relation::new(rho.x_size, rho.y_size, pairs) {
        Ok(q) if q.is_subrelation_of(&rho) => q,
        _ => return 0,
    };
    // The diagonal pairs form a fooling family: for p < qi the cell
    // (rows[qi], cols[p]) lies in rho but below the staircase. Verify
    // rather than trust the construction.
    let diagonal: Vec<(usize, usize)> = (0..k).map(|p| (rows[p], cols[p])).collect();
    let verified = (0..k).all(|p| {
        (p + 1..k).all(|qi| !spanned_admissible(&rho, &q, diagonal[p], diagonal[qi]))
    });
    if verified {
        k
    } else {
        fooling_set_lower_bound(&rho, &q).map(|(b, _)| b).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn staircase(n: usize) -> Relation {
        RelationFamily::Staircase.generate(n).unwrap()
    }

    fn grid(n: usize) -> Relation {
        RelationFamily::Full.generate(n).unwrap()
    }

    fn rect(rows: &[usize], cols: &[usize]) -> Rectangle {
        Rectangle { rows: rows.iter().copied().collect(), cols: cols.iter().copied().collect() }
    }

    #[test]
    fn row_rectangles_cover_the_staircase() {
        let q = staircase(3);
        let cover = RectangleCover {
            rectangles: (0..3).map(|i| rect(&[i], &(i..3).collect::<Vec<_>>())).collect(),
        };
        assert!(is_cover(&staircase(3), &q, &cover).unwrap());
        assert!(is_cover(&grid(3), &q, &cover).unwrap());
    }

    #[test]
    fn is_cover_rejects_escaping_rectangles() {
        let rho = grid(2);
        let q = Relation::new(2, 2, [(0, 0)].into()).unwrap();
        let escaping = RectangleCover { rectangles: vec![rect(&[0, 1], &[0])] };
        assert!(!is_cover(&rho, &q, &escaping).unwrap());
        let exact = RectangleCover { rectangles: vec![rect(&[0], &[0])] };
        assert!(is_cover(&rho, &q, &exact).unwrap());
    }

    #[test]
    fn is_cover_demands_a_subrelation() {
        let rho = Relation::new(2, 2, [(0, 0)].into()).unwrap();
        let q = Relation::new(2, 2, [(1, 1)].into()).unwrap();
        assert_eq!(
            is_cover(&rho, &q, &RectangleCover::default()),
            Err(RelationError::NotASubrelation(1, 1))
        );
    }

    #[test]
    fn staircase_in_grid_needs_exactly_n() {
        let opts = CoverOptions::default();
        for n in 1..=6 {
            let q = staircase(n);
            let rho = ambient_grid(&q);
            let outcome = min_cover(&rho, &q, &opts).unwrap();
            assert_eq!(outcome.exact_size(), Some(n), "staircase {n}");
        }
    }

    #[test]
    fn staircase_relative_to_itself_collapses_to_one() {
        // With rho = q every rectangle is admissible, so the full grid
        // rectangle alone works: the instrument needs the ambient grid.
        let q = staircase(4);
        let outcome = min_cover(&q, &q, &CoverOptions::default()).unwrap();
        assert_eq!(outcome.exact_size(), Some(1));
    }

    #[test]
    fn fooling_diagonal_reaches_twenty() {
        for n in [1, 5, 12, 20] {
            let q = staircase(n);
            let rho = ambient_grid(&q);
            let (bound, witness) = fooling_set_lower_bound(&rho, &q).unwrap();
            assert_eq!(bound, n, "fooling bound at {n}");
            assert!(witness.iter().all(|&(i, j)| i == j), "diagonal witness at {n}");
        }
    }

    #[test]
    fn growth_table_matches_n() {
        let points = staircase_growth(6, &CoverOptions::default()).unwrap();
        for p in &points {
            assert_eq!(p.exact, Some(p.n));
            assert_eq!(p.fooling_lower, p.n);
            assert!(p.greedy_upper >= p.n);
        }
    }

    #[test]
    fn function_graphs_cover_with_one_rectangle() {
        // rho = graph of f(x) = x div 2 on 4 points.
        let rho = Relation::new(4, 2, [(0, 0), (1, 0), (2, 1), (3, 1)].into()).unwrap();
        let q = Relation::new(4, 2, [(0, 0), (2, 1)].into()).unwrap();
        let outcome = min_cover(&rho, &q, &CoverOptions::default()).unwrap();
        assert_eq!(outcome.exact_size(), Some(1));
    }

    #[test]
    fn full_relation_worst_case_is_the_short_side() {
        let opts = CoverOptions::default();
        let rho = Relation::new(
            3,
            4,
            (0..3).flat_map(|x| (0..4).map(move |y| (x, y))).collect(),
        )
        .unwrap();
        let worst = worst_case_cover(&rho, &opts).unwrap();
        assert_eq!(worst, 3);
    }

    #[test]
    fn composition_counterexample_at_four() {
        let c = composition_counterexample(4, &CoverOptions::default()).unwrap();
        assert_eq!(c.tall_worst, 1);
        assert_eq!(c.wide_worst, 1);
        assert_eq!(c.composite_staircase, 4);
    }

    #[test]
    fn compose_matches_hand_composite() {
        let tall = RelationFamily::TallHalf.generate(3).unwrap();
        let wide = RelationFamily::WideHalf.generate(3).unwrap();
        assert_eq!(compose(&tall, &wide).unwrap(), grid(3));
        assert!(compose(&wide, &grid(4)).is_err());
    }

    #[test]
    fn ideal_laws_hold_on_random_instances() {
        let report = ideal_laws_check(0xb07a, 40);
        assert!(report.all_hold(), "{report:?}");
    }

    #[test]
    fn padding_changes_nothing() {
        let q = staircase(3);
        let rho = ambient_grid(&q);
        let cover = greedy_cover(&rho, &q).unwrap();
        let report = absoluteness_check(&rho, &q, &cover, 2, 1).unwrap();
        assert!(report.all_hold(), "{report:?}");
    }

    #[test]
    fn parse_round_trip() {
        let r = Relation::parse("relation 3 2\n0 0\n2 1\n").unwrap();
        assert_eq!(r.pairs().len(), 2);
        assert_eq!(Relation::parse(&r.to_string()).unwrap(), r);
        assert!(Relation::parse("relation 2 2\n5 0\n").is_err());
        assert!(Relation::parse("relation 0 2\n").is_err());
    }

    #[test]
    fn exhaustive_small_instances_match_brute_force() {
        // Every rho on a 3x3 grid with every Q would be huge; sample the
        // diagonal-ish corner deterministically instead: all rho over a 2x2
        // grid, all Q, checked against brute force over all rectangle
        // families of size <= 4.
        let opts = CoverOptions::default();
        for rho_bits in 0u32..16 {
            let rho_pairs: BTreeSet<(usize, usize)> = (0..4)
                .filter(|i| rho_bits & (1 << i) != 0)
                .map(|i| (i / 2, i % 2))
                .collect();
            let rho = Relation::new(2, 2, rho_pairs).unwrap();
            let rho_vec: Vec<(usize, usize)> = rho.pairs().iter().copied().collect();
            for q_bits in 0u32..(1 << rho_vec.len()) {
                let q_pairs: BTreeSet<(usize, usize)> = rho_vec
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| q_bits & (1 << i) != 0)
                    .map(|(_, &p)| p)
                    .collect();
                let q = Relation::new(2, 2, q_pairs).unwrap();
                let got = min_cover(&rho, &q, &opts).unwrap().exact_size().unwrap();
                let want = brute_force_min_cover(&rho, &q);
                assert_eq!(got, want, "rho {rho_vec:?} q {:?}", q.pairs());
            }
        }
    }

    /// Oracle: tries every family of up to 4 rectangles over the 2x2 grid.
    fn brute_force_min_cover(rho: &Relation, q: &Relation) -> usize {
        if q.pairs().is_empty() {
            return 0;
        }
        let rects: Vec<Rectangle> = (1u32..4)
            .flat_map(|rows| (1u32..4).map(move |cols| (rows, cols)))
            .map(|(rows, cols)| Rectangle {
                rows: (0..2).filter(|i| rows & (1 << i) != 0).collect(),
                cols: (0..2).filter(|i| cols & (1 << i) != 0).collect(),
            })
            .collect();
        for size in 1..=4 {
            if found_cover_of_size(rho, q, &rects, size, 0, &mut Vec::new()) {
                return size;
            }
        }
        panic!("singletons always cover");
    }

    fn found_cover_of_size(
        rho: &Relation,
        q: &Relation,
        rects: &[Rectangle],
        size: usize,
        from: usize,
        chosen: &mut Vec<Rectangle>,
    ) -> bool {
        if chosen.len() == size {
            return is_cover(rho, q, &RectangleCover { rectangles: chosen.clone() }) == Ok(true);
        }
        for i in from..rects.len() {
            chosen.push(rects[i].clone());
            if found_cover_of_size(rho, q, rects, size, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}
