mod common;

use modtower::group::FiniteGroup;
use modtower::linalg::{Fp, Matrix, Subspace};
use modtower::nielsen::{
    gamma0, gamma1, gamma_inf, q1_q3inv, sh, sh_inv, twist, twist_inv, Canonicalizer,
};
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn a5() -> &'static Arc<FiniteGroup> {
    static G: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    G.get_or_init(common::a5_group)
}

fn reduced() -> &'static Canonicalizer {
    static C: OnceLock<Canonicalizer> = OnceLock::new();
    C.get_or_init(|| Canonicalizer::new(a5().clone(), true))
}

fn inner() -> &'static Canonicalizer {
    static C: OnceLock<Canonicalizer> = OnceLock::new();
    C.get_or_init(|| Canonicalizer::new(a5().clone(), false))
}

/// A 4-tuple with product one from three free entries.
fn tuple_from(a: u32, b: u32, c: u32) -> Vec<u32> {
    let g = a5();
    let last = g.inv(g.product(&[a, b, c]));
    vec![a, b, c, last]
}

#[test]
fn deterministic_suites_cover_ten_thousand_checks() {
    let t = common::run_all();
    let n = t.count;
    println!(
        "{n} checks, bound applied {} times, equality predicted {} times",
        t.bound_applicable, t.equality_expected
    );
    assert!(n >= 10_000, "only {n} checks");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn braid_moves_preserve_the_product(a in 0u32..60, b in 0u32..60, c in 0u32..60, i in 1usize..4) {
        let g = a5();
        let t = tuple_from(a, b, c);
        let moved = twist(g, &t, i);
        prop_assert_eq!(g.product(&moved), 0);
        prop_assert_eq!(twist_inv(g, &moved, i), t.clone());
        prop_assert_eq!(g.product(&sh(&t)), 0);
        prop_assert_eq!(sh_inv(&sh(&t)), t.clone());
        prop_assert_eq!(sh(&sh(&sh(&sh(&t)))), t);
    }

    #[test]
    fn adjacent_twists_satisfy_the_braid_relation(a in 0u32..60, b in 0u32..60, c in 0u32..60) {
        let g = a5();
        let t = tuple_from(a, b, c);
        let left = twist(g, &twist(g, &twist(g, &t, 1), 2), 1);
        let right = twist(g, &twist(g, &twist(g, &t, 2), 1), 2);
        prop_assert_eq!(left, right);
        let far = twist(g, &twist(g, &t, 1), 3);
        prop_assert_eq!(far, twist(g, &twist(g, &t, 3), 1));
    }

    #[test]
    fn gamma_zero_undoes_gamma_one_then_gamma_inf(a in 0u32..60, b in 0u32..60, c in 0u32..60) {
        let g = a5();
        let t = tuple_from(a, b, c);
        prop_assert_eq!(gamma0(g, &gamma_inf(g, &gamma1(&t))), t.clone());
        let m = gamma_inf(g, &t);
        prop_assert_eq!(g.mul(m[1], m[2]), g.mul(t[1], t[2]));
    }

    #[test]
    fn canonical_forms_are_invariant(a in 0u32..60, b in 0u32..60, c in 0u32..60, x in 0u32..60) {
        let g = a5();
        let t = tuple_from(a, b, c);
        let conj: Vec<u32> = t.iter().map(|&e| g.conj(e, x)).collect();
        prop_assert_eq!(inner().canonical(&conj), inner().canonical(&t));
        let r = reduced().canonical(&t);
        prop_assert_eq!(reduced().canonical(&conj), r.clone());
        prop_assert_eq!(reduced().canonical(&q1_q3inv(g, &t)), r.clone());
        prop_assert_eq!(reduced().canonical(&sh(&sh(&t))), r.clone());
        prop_assert_eq!(reduced().canonical(&r), r);
    }

    #[test]
    fn group_axioms_hold(a in 0u32..60, b in 0u32..60, c in 0u32..60) {
        let g = a5();
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        prop_assert_eq!(g.pow(a, g.element_order(a) as i64), 0);
        prop_assert_eq!(g.class_of(g.conj(a, b)), g.class_of(a));
    }

    #[test]
    fn rank_and_kernel_are_complementary(
        p in prop::sample::select(vec![2u32, 3, 5, 7]),
        rows in 1usize..6,
        cols in 1usize..6,
        seed in prop::collection::vec(0u8..7, 36),
    ) {
        let f = Fp::new(p);
        let data: Vec<Vec<u8>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 6 + c] % p as u8).collect()).collect();
        let m = Matrix::from_rows(f, cols, &data);
        let kernel = m.right_kernel();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.transpose().apply(v).iter().all(|&x| x == 0));
        }
        let span = Subspace::span(f, cols, &data);
        prop_assert_eq!(span.dim(), m.rank());
        for r in &data {
            prop_assert!(span.contains(r));
        }
    }
}
