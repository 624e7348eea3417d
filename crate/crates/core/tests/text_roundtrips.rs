//! Text round-trips and algebraic laws, driven by proptest: anything the
//! library can print it must be able to read back verbatim, and relation
//! composition must behave like the arrow composition it claims to be.

use std::collections::BTreeSet;

use betagraph_core::blockgraph::BlockGraph;
use betagraph_core::corpus;
use betagraph_core::digraph::Digraph;
use betagraph_core::smallrel::{compose, Relation, RelationFamily};
use proptest::prelude::*;

fn arbitrary_relation(max_side: usize) -> impl Strategy<Value = Relation> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(x, y)| {
        proptest::collection::btree_set((0..x, 0..y), 0..=x * y)
            .prop_map(move |pairs| Relation::new(x, y, pairs).unwrap())
    })
}

fn transpose(r: &Relation) -> Relation {
    let pairs: BTreeSet<(usize, usize)> =
        r.pairs().iter().map(|&(x, y)| (y, x)).collect();
    Relation::new(r.y_size(), r.x_size(), pairs).unwrap()
}

fn random_relation_between(
    rng: &mut impl rand::Rng,
    x_size: usize,
    y_size: usize,
) -> Relation {
    let mut pairs = BTreeSet::new();
    for x in 0..x_size {
        for y in 0..y_size {
            if rng.random_bool(0.5) {
                pairs.insert((x, y));
            }
        }
    }
    Relation::new(x_size, y_size, pairs).unwrap()
}

proptest! {
    #[test]
    fn relations_roundtrip_through_their_text_form(r in arbitrary_relation(7)) {
        let text = r.to_string();
        prop_assert_eq!(Relation::parse(&text).unwrap(), r);
    }

    #[test]
    fn digraphs_roundtrip_through_their_text_form(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let g = corpus::random_digraph(&mut rng, 7);
        let text = g.to_string();
        prop_assert_eq!(Digraph::parse(&text).unwrap(), g);
    }

    #[test]
    fn block_presentations_roundtrip_through_their_text_form(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let bg = corpus::random_blockgraph(&mut rng);
        let text = bg.to_string();
        let reparsed = BlockGraph::parse(&text).unwrap();
        prop_assert_eq!(reparsed.to_string(), text, "printing must be a fixed point");
    }

    #[test]
    fn padding_preserves_pairs_and_extends_the_ambient(
        r in arbitrary_relation(6),
        dx in 0usize..4,
        dy in 0usize..4,
    ) {
        let padded = r.pad(dx, dy).unwrap();
        prop_assert_eq!(padded.x_size(), r.x_size() + dx);
        prop_assert_eq!(padded.y_size(), r.y_size() + dy);
        prop_assert_eq!(padded.pairs(), r.pairs());
    }

    #[test]
    fn composition_is_associative(
        seed in any::<u64>(),
        a in 1usize..5,
        b in 1usize..5,
        c in 1usize..5,
        d in 1usize..5,
    ) {
        let mut rng = corpus::rng(seed);
        let ab = random_relation_between(&mut rng, a, b);
        let bc = random_relation_between(&mut rng, b, c);
        let cd = random_relation_between(&mut rng, c, d);
        let left = compose(&compose(&ab, &bc).unwrap(), &cd).unwrap();
        let right = compose(&ab, &compose(&bc, &cd).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_neutral_for_composition(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = corpus::rng(seed);
        let r = random_relation_between(&mut rng, n, n);
        let id = RelationFamily::Identity.generate(n).unwrap();
        prop_assert_eq!(&compose(&id, &r).unwrap(), &r);
        prop_assert_eq!(&compose(&r, &id).unwrap(), &r);
    }

    #[test]
    fn transposing_reverses_composition(
        seed in any::<u64>(),
        a in 1usize..5,
        b in 1usize..5,
        c in 1usize..5,
    ) {
        let mut rng = corpus::rng(seed);
        let ab = random_relation_between(&mut rng, a, b);
        let bc = random_relation_between(&mut rng, b, c);
        let direct = transpose(&compose(&ab, &bc).unwrap());
        let reversed = compose(&transpose(&bc), &transpose(&ab)).unwrap();
        prop_assert_eq!(direct, reversed);
    }
}

#[test]
fn parse_errors_carry_the_offending_line() {
    let broken = "relation 2 2\n0 0\n5 1\n";
    let err = Relation::parse(broken).unwrap_err().to_string();
    assert!(err.contains("line 3"), "unhelpful diagnostic: {err}");

    let broken = "digraph two\n";
    let err = Digraph::parse(broken).unwrap_err().to_string();
    assert!(err.contains("line 1"), "unhelpful diagnostic: {err}");

    let broken = "blockgraph\nblock a omega\natom all(b) -> all(a)\n";
    let err = BlockGraph::parse(broken).unwrap_err().to_string();
    assert!(err.contains("line 3"), "unhelpful diagnostic: {err}");
}

#[test]
fn families_print_their_own_members() {
    // The staircase is the canonical growth witness; pin its text form.
    let r = RelationFamily::Staircase.generate(3).unwrap();
    assert_eq!(r.to_string(), "relation 3 3\n0 0\n0 1\n0 2\n1 1\n1 2\n2 2\n");
}
