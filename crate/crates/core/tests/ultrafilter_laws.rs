//! The ultrafilter axioms and the finite-extension identity, checked by
//! exhaustive enumeration over small universes. Everything here is decidable
//! outright, so the tests unfold the definitions rather than trusting any
//! library shortcut.

use betagraph_core::corpus;
use rand::Rng;
use betagraph_core::ultrafilter::{
    beta_finite_graph, beta_map, beta_map_extensional_check, extend_to_ultrafilter, has_fip,
    meets_every, meets_every_quantified, partition_member, FipOutcome, SetFamily, Subset,
    UltraExtension, Ultrafilter, Universe, UniverseMap,
};

fn universe(n: usize) -> Universe {
    Universe::new(n).unwrap()
}

fn all_subsets(n: usize) -> Vec<Subset> {
    let u = universe(n);
    (0..(1usize << n))
        .map(|bits| {
            let indices: Vec<usize> = (0..n).filter(|i| bits >> i & 1 == 1).collect();
            Subset::from_indices(u, &indices).unwrap()
        })
        .collect()
}

/// Every family of at most `max_members` subsets of an `n`-element universe.
fn all_families(n: usize, max_members: usize) -> Vec<SetFamily> {
    let subsets = all_subsets(n);
    let mut families = vec![SetFamily::new(universe(n), Vec::new()).unwrap()];
    let mut frontier: Vec<Vec<Subset>> = vec![Vec::new()];
    for _ in 0..max_members {
        let mut next = Vec::new();
        for members in &frontier {
            for s in &subsets {
                let mut grown = members.clone();
                grown.push(s.clone());
                families.push(SetFamily::new(universe(n), grown.clone()).unwrap());
                next.push(grown);
            }
        }
        frontier = next;
    }
    families
}

// -- finite intersection property ----------------------------------------

/// The definition verbatim: every subfamily has a nonempty intersection.
fn fip_oracle(family: &SetFamily) -> bool {
    let members = family.members();
    for mask in 0..(1usize << members.len()) {
        let mut meet = Subset::full(family.universe());
        for (i, m) in members.iter().enumerate() {
            if mask >> i & 1 == 1 {
                meet = meet.intersect(m).unwrap();
            }
        }
        if meet.is_empty() {
            return false;
        }
    }
    true
}

#[test]
fn fip_decision_matches_the_subfamily_oracle() {
    for family in all_families(3, 3) {
        let expected = fip_oracle(&family);
        match has_fip(&family) {
            FipOutcome::Holds { intersection } => {
                assert!(expected, "claimed FIP on a refutable family");
                assert!(!intersection.is_empty());
                for m in family.members() {
                    assert!(intersection.is_subset_of(m));
                }
            }
            FipOutcome::Fails { refuting } => {
                assert!(!expected, "refuted a family with the FIP");
                // The refuting indices really name a subfamily with an
                // empty intersection.
                let mut meet = Subset::full(family.universe());
                for &r in &refuting {
                    meet = meet.intersect(&family.members()[r]).unwrap();
                }
                assert!(meet.is_empty(), "refutation does not refute");
            }
        }
    }
}

#[test]
fn fip_extends_exactly_when_it_holds() {
    for family in all_families(3, 3) {
        let fip = matches!(has_fip(&family), FipOutcome::Holds { .. });
        match extend_to_ultrafilter(&family).unwrap() {
            UltraExtension::Extended(u) => {
                assert!(fip, "extended a family without the FIP");
                for m in family.members() {
                    assert!(u.member(m), "extension misses a member");
                }
            }
            UltraExtension::Refuted { .. } => assert!(!fip, "refused a family with the FIP"),
        }
    }
}

// -- ultrafilter axioms ----------------------------------------------------

#[test]
fn principal_ultrafilters_satisfy_the_axioms() {
    for n in 1..=4 {
        let subsets = all_subsets(n);
        for point in 0..n {
            let u = Ultrafilter::principal(universe(n), point).unwrap();
            for a in &subsets {
                // Dichotomy: exactly one of A and its complement belongs.
                assert_ne!(u.member(a), u.member(&a.complement()));
                // Membership is point membership.
                assert_eq!(u.member(a), a.contains(point));
                for b in &subsets {
                    // Closure under intersection and supersets.
                    if u.member(a) && u.member(b) {
                        assert!(u.member(&a.intersect(b).unwrap()));
                    }
                    if u.member(a) && a.is_subset_of(b) {
                        assert!(u.member(b));
                    }
                }
            }
            assert!(!u.member(&Subset::empty(universe(n))));
            assert!(u.member(&Subset::full(universe(n))));
        }
    }
}

#[test]
fn partitions_are_hit_in_exactly_one_block() {
    let n = 5;
    let u = Ultrafilter::principal(universe(n), 3).unwrap();
    let blocks = vec![
        Subset::from_indices(universe(n), &[0, 2]).unwrap(),
        Subset::from_indices(universe(n), &[1, 3]).unwrap(),
        Subset::from_indices(universe(n), &[4]).unwrap(),
    ];
    assert_eq!(partition_member(&u, &blocks).unwrap(), 1);
    // Overlapping or non-covering block lists are rejected.
    assert!(partition_member(&u, &blocks[..2]).is_err());
    let overlapping = vec![
        Subset::from_indices(universe(n), &[0, 1, 2]).unwrap(),
        Subset::from_indices(universe(n), &[2, 3, 4]).unwrap(),
    ];
    assert!(partition_member(&u, &overlapping).is_err());
}

#[test]
fn meeting_every_member_is_the_same_as_membership() {
    for n in 1..=4 {
        for point in 0..n {
            let u = Ultrafilter::principal(universe(n), point).unwrap();
            for w in all_subsets(n) {
                let direct = meets_every(&w, &u).unwrap();
                assert_eq!(meets_every_quantified(&w, &u), Some(direct));
                assert_eq!(direct, u.member(&w));
            }
        }
    }
}

// -- pushforward maps -------------------------------------------------------

fn random_map(rng: &mut impl rand::Rng, dom: Universe, max_cod: usize) -> UniverseMap {
    let cod = universe(rng.random_range(1..=max_cod));
    let values: Vec<usize> =
        (0..dom.size()).map(|_| rng.random_range(0..cod.size())).collect();
    UniverseMap::new(dom, cod, values).unwrap()
}

#[test]
fn pushforwards_are_principal_at_the_image_point() {
    let mut rng = corpus::rng(0xbe7a);
    for _ in 0..200 {
        let dom = universe(rng.random_range(1..=5));
        let f = random_map(&mut rng, dom, 5);
        for x in 0..dom.size() {
            let u = Ultrafilter::principal(dom, x).unwrap();
            let v = beta_map(&f, &u).unwrap();
            assert_eq!(v.point(), f.apply(x));
            assert_eq!(v.universe().size(), f.codomain().size());
            assert_eq!(beta_map_extensional_check(&f, &u, &v), Some(true));
        }
    }
}

#[test]
fn pushforward_respects_composition() {
    let mut rng = corpus::rng(0xc09e);
    for _ in 0..200 {
        let dom = universe(rng.random_range(1..=4));
        let f = random_map(&mut rng, dom, 4);
        let g = random_map(&mut rng, f.codomain(), 4);
        let gf = f.compose(&g).unwrap();
        for x in 0..dom.size() {
            let u = Ultrafilter::principal(dom, x).unwrap();
            let one_step = beta_map(&gf, &u).unwrap();
            let two_step = beta_map(&g, &beta_map(&f, &u).unwrap()).unwrap();
            assert_eq!(one_step, two_step);
        }
    }
}

#[test]
fn identity_pushforward_is_the_identity() {
    for n in 1..=5 {
        let id = UniverseMap::identity(universe(n));
        for x in 0..n {
            let u = Ultrafilter::principal(universe(n), x).unwrap();
            assert_eq!(beta_map(&id, &u).unwrap(), u);
        }
    }
}

// -- finite graphs are their own extensions ---------------------------------

#[test]
fn finite_graphs_collapse_exhaustively() {
    for g in corpus::enumerate_digraphs(3) {
        if g.vertex_count() == 0 {
            continue; // no ultrafilters on an empty universe
        }
        let report = beta_finite_graph(&g).unwrap();
        assert!(report.all_hold(), "{g}: {report:?}");
        assert_eq!(report.graph, g);
    }
}

#[test]
fn finite_graphs_collapse_on_random_instances() {
    let mut rng = corpus::rng(0xf17a1);
    for _ in 0..300 {
        let g = corpus::random_digraph(&mut rng, 7);
        if g.vertex_count() == 0 {
            continue;
        }
        let report = beta_finite_graph(&g).unwrap();
        assert!(report.all_hold(), "{g}: {report:?}");
    }
}
