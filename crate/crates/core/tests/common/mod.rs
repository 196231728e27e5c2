#![allow(dead_code)]

pub mod oracle;

use modtower::builtin;
use modtower::frattini::{dihedral_level, FrattiniLevel};
use modtower::group::FiniteGroup;
use modtower::hurwitz::{
    check_goup, component_report, genus_lower_bound, level_compare, orbits_from_blocks,
    sh_incidence, Actions, LevelView,
};
use modtower::induction::{level_one, normalizer_induction};
use modtower::nielsen::{
    gamma_inf, lift_nielsen_class, project_classes, NielsenClass, NielsenSpec,
};
use modtower::presentation::cayley_presentation;
use modtower::schur::{
    abelian_test, check_modassume, enumerate_schur_quotients, implication_chain, pair_census,
    vd_set, CentralExt, SchurSlice,
};
use std::sync::Arc;

/// Counts passed checks; panics on the first failure.
#[derive(Debug, Default)]
pub struct Tally {
    pub count: usize,
    /// Level pairs where the genus bound applied.
    pub bound_applicable: usize,
    /// Level pairs where equality with the bound was predicted.
    pub equality_expected: usize,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        assert!(ok, "{}", what());
        self.count += 1;
    }
}

pub fn a5_group() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::from_perms(&builtin::a5().perms, 100).unwrap())
}

pub fn a5_level_zero() -> NielsenClass {
    let spec = NielsenSpec::from_labels(a5_group(), &["3A"; 4], 2).unwrap();
    NielsenClass::enumerate(spec, 1 << 24).unwrap()
}

pub fn a5_level_one() -> FrattiniLevel {
    let a5 = builtin::a5();
    level_one(a5_group(), a5.presentation.as_ref().unwrap(), 2, 1 << 16)
        .unwrap()
        .level
}

pub fn a4_level_one() -> FrattiniLevel {
    let a4 = Arc::new(FiniteGroup::from_perms(&builtin::a4().perms, 100).unwrap());
    normalizer_induction(a4, 2, 1 << 16).unwrap().split.level
}

pub fn involution_class(g: Arc<FiniteGroup>, p: u32) -> NielsenClass {
    let spec = NielsenSpec::from_labels(g, &["2A"; 4], p).unwrap();
    NielsenClass::enumerate(spec, 1 << 24).unwrap()
}

/// Braid relations and genus bookkeeping on one reduced class.
pub fn braid_suite(ni: &NielsenClass, t: &mut Tally) {
    let g = ni.group();
    let a = Actions::compute(ni).unwrap();
    for x in 0..ni.len() {
        let y = x as u32;
        let g1 = &a.gamma1;
        let g0 = &a.gamma0;
        t.check(g1[g1[x] as usize] == y, || format!("γ1² moves class {x}"));
        t.check(g0[g0[g0[x] as usize] as usize] == y, || {
            format!("γ0³ moves class {x}")
        });
        let tuple = &ni.reps[x];
        let moved = gamma_inf(g, tuple);
        t.check(
            g.mul(moved[1], moved[2]) == g.mul(tuple[1], tuple[2]),
            || format!("γ∞ changes g2g3 on class {x}"),
        );
        t.check(g.product(&moved) == 0, || {
            format!("γ∞ breaks the product on class {x}")
        });
    }
    let orbits = ni.orbits().unwrap();
    for o in &orbits {
        let r = component_report(ni, &a, o).unwrap();
        t.check((r.ind0 + r.ind1 + r.indinf).is_multiple_of(2), || {
            "index sum is odd".into()
        });
        t.check(
            2 * (r.orbit_size as i64 + r.genus as i64 - 1) == (r.ind0 + r.ind1 + r.indinf) as i64,
            || "genus formula does not balance".into(),
        );
        t.check(r.cusp_widths.iter().sum::<usize>() == o.len(), || {
            "cusp widths do not sum to the orbit size".into()
        });
    }
    let inc = sh_incidence(ni, &a.gamma1, &a.gamma_inf);
    t.check(inc.is_symmetric(), || {
        "sh-incidence is not symmetric".into()
    });
    t.check(orbits_from_blocks(&inc) == orbits, || {
        "sh-incidence blocks differ from orbits".into()
    });
}

/// Middle products over p-divisible cusps, the genus bound, and its
/// equality case, for every upper orbit of a level pair.
pub fn level_suite(
    level: &FrattiniLevel,
    lower: &NielsenClass,
    upper: &NielsenClass,
    t: &mut Tally,
) {
    let proj = project_classes(level, lower, upper).unwrap();
    let a0 = Actions::compute(lower).unwrap();
    let a1 = Actions::compute(upper).unwrap();
    let lower_orbits = lower.orbits().unwrap();
    for o in upper.orbits().unwrap() {
        let below = &lower_orbits[lower_orbits
            .iter()
            .position(|lo| lo.contains(&proj[o[0] as usize]))
            .unwrap()];
        let lv = LevelView {
            ni: lower,
            actions: &a0,
            orbit: below,
        };
        let uv = LevelView {
            ni: upper,
            actions: &a1,
            orbit: &o,
        };
        let cmp = level_compare(level, &lv, &uv, &proj).unwrap();
        t.check(cmp.mpr_multiplied, || {
            "mpr does not multiply by p over a p-divisible cusp".into()
        });
        for &x in &o {
            let lo = &lower.reps[proj[x as usize] as usize];
            let up = &upper.reps[x as usize];
            let (gl, gu) = (lower.group(), upper.group());
            let (ml, mu) = (
                gl.element_order(gl.mul(lo[1], lo[2])),
                gu.element_order(gu.mul(up[1], up[2])),
            );
            if ml % level.p == 0 {
                t.check(mu == level.p * ml, || {
                    format!("mpr {mu} over p-divisible {ml}")
                });
            } else {
                t.check(mu == ml || mu == level.p * ml, || {
                    format!("mpr {mu} over {ml}")
                });
            }
        }
        let lower_genus = component_report(lower, &a0, below).unwrap().genus;
        let genus = component_report(upper, &a1, &o).unwrap().genus;
        let v = check_goup(
            genus_lower_bound(cmp.t_prime, cmp.degree, &cmp.u, level.p),
            genus,
            lower_genus,
            &cmp,
        );
        if v.applicable {
            t.bound_applicable += 1;
            t.check(v.bound_holds, || format!("genus {genus} below the bound"));
        }
        if v.equality_expected {
            t.equality_expected += 1;
            t.check(v.equality_holds, || {
                format!("genus {genus} differs from the bound with clear detectors")
            });
        }
    }
}

/// Every central extension built over a level: lift-independence of p-th
/// powers, the allowed pair types, and the implication chain.
pub fn schur_suite(level: &FrattiniLevel, quotients: &[CentralExt], t: &mut Tally) {
    for e in quotients {
        let slice = SchurSlice::new(level, e).unwrap();
        t.check(slice.pth_power_well_defined(), || {
            "p-th powers depend on the lift".into()
        });
        let vd = vd_set(&slice);
        t.check(vd.contains(0), || "identity outside V_D".into());
        let flags = check_modassume(&slice, &vd);
        let w = abelian_test(&slice, &vd).unwrap();
        t.check(implication_chain(&slice, &vd, flags, &w), || {
            "implication chain fails".into()
        });
        let census = pair_census(&slice, &vd).unwrap();
        let pairs: usize = census.values().sum();
        t.count += pairs;
    }
}

pub fn dihedral_pair(p: u32) -> (FrattiniLevel, NielsenClass, NielsenClass) {
    let level = dihedral_level(p, 1).unwrap();
    let lower = involution_class(level.base.clone(), p);
    let upper = lift_nielsen_class(&level, &lower).unwrap();
    (level, lower, upper)
}

/// All deterministic property suites.
pub fn run_all() -> Tally {
    let mut t = Tally::default();
    let ni0 = a5_level_zero();
    braid_suite(&ni0, &mut t);
    let l1 = a5_level_one();
    let ni1 = lift_nielsen_class(&l1, &ni0).unwrap();
    braid_suite(&ni1, &mut t);
    level_suite(&l1, &ni0, &ni1, &mut t);
    for p in [3, 5, 7] {
        let (level, lower, upper) = dihedral_pair(p);
        braid_suite(&lower, &mut t);
        braid_suite(&upper, &mut t);
        level_suite(&level, &lower, &upper, &mut t);
    }
    for p in [11, 13] {
        let d = dihedral_level(p, 0).unwrap();
        braid_suite(&involution_class(d.total.clone(), p), &mut t);
    }
    let a4l = a4_level_one();
    let g1 = a4l.total.clone();
    let qs = enumerate_schur_quotients(g1.clone(), &cayley_presentation(&g1), 2).unwrap();
    schur_suite(&a4l, &qs, &mut t);
    let g1 = l1.total.clone();
    let qs = enumerate_schur_quotients(g1, l1.presentation.as_ref().unwrap(), 2).unwrap();
    schur_suite(&l1, &qs, &mut t);
    t
}
