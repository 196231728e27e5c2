mod common;

use modtower::builtin;
use modtower::gcomplete::{is_gcomplete, is_p_gcomplete, p_prime_classes};
use modtower::group::FiniteGroup;

#[test]
fn full_class_set_implies_every_prime() {
    for g in [
        builtin::a4(),
        builtin::a5(),
        builtin::dihedral(5),
        builtin::dihedral(7),
    ] {
        let g = FiniteGroup::from_perms(&g.perms, 1000).unwrap();
        let all: Vec<usize> = (0..g.conjugacy_classes().len()).collect();
        let full = is_gcomplete(&g, &all, 1_000_000).unwrap();
        for p in [2, 3, 5, 7] {
            let v = is_p_gcomplete(&g, p, 1_000_000).unwrap();
            if v.complete {
                assert!(full.complete, "p-gcomplete at {p} but not gcomplete");
            }
            if let Some(w) = &v.witness {
                assert!(w.order < g.order());
                let required = p_prime_classes(&g, p);
                assert!(required
                    .iter()
                    .all(|&c| w.elements.iter().any(|&x| g.class_of(x) == c)));
                assert_eq!(g.closure(&w.generators), w.elements);
            }
        }
    }
}

#[test]
fn completeness_passes_up_the_first_level() {
    let level = common::a5_level_one();
    assert!(is_p_gcomplete(&level.base, 2, 1_000_000).unwrap().complete);
    assert!(is_p_gcomplete(&level.total, 2, 1_000_000).unwrap().complete);
}

#[test]
fn dihedral_groups_are_not_complete_at_their_prime() {
    for (n, largest) in [(5usize, 2usize), (25, 10)] {
        let g = builtin::dihedral(n).group().unwrap();
        let v = is_p_gcomplete(&g, 5, 1_000_000).unwrap();
        assert!(!v.complete);
        assert_eq!(v.witness.unwrap().order, largest);
    }
}
