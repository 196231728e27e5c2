mod common;

use common::oracle::agree;
use modtower::builtin;
use modtower::frattini::{splits_over, verify_frattini, verify_order_lifting};
use modtower::gcomplete::is_p_gcomplete;
use modtower::group::FiniteGroup;
use modtower::hurwitz::component_reports;
use modtower::induction::{level_one, normalizer_induction};
use modtower::loewy::{is_indecomposable, loewy_layers};
use modtower::nielsen::lift_nielsen_class;
use modtower::perm::Perm;
use modtower::presentation::cayley_presentation;
use modtower::schur::{enumerate_schur_quotients, schur_reports};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn dihedral_oracle() -> Outcome {
    let mut parts = Vec::new();
    for (p, k) in [(5, 0), (7, 0), (11, 0), (5, 1)] {
        let c = agree(p, k);
        parts.push(format!(
            "N={}: genus {}, {} cusps",
            (p as i64).pow(k + 1),
            c.genus,
            c.cusp_widths.len()
        ));
    }
    Ok(parts.join("; "))
}

fn a5_level_zero() -> Outcome {
    let ni = common::a5_level_zero();
    let r = component_reports(&ni).map_err(|e| e.to_string())?;
    ensure(r.len() == 1, format!("{} orbits", r.len()))?;
    ensure(
        r[0].genus == 0 && r[0].t_prime == 0,
        format!("genus {} t' {}", r[0].genus, r[0].t_prime),
    )?;
    Ok(format!("{} classes, one orbit, genus 0, t' = 0", ni.len()))
}

fn a5_first_level() -> Outcome {
    let a5 = builtin::a5();
    let g = common::a5_group();
    let one =
        level_one(g, a5.presentation.as_ref().unwrap(), 2, 1 << 16).map_err(|e| e.to_string())?;
    ensure(one.h2.dim == 1, format!("H^2 dimension {}", one.h2.dim))?;
    ensure(
        one.level.total.order() == 1920,
        format!("order {}", one.level.total.order()),
    )?;
    ensure(verify_frattini(&one.level), "not a Frattini cover")?;
    let lifting = verify_order_lifting(&one.level);
    ensure(
        lifting.passed(),
        format!("{} order-lifting violations", lifting.violations.len()),
    )?;
    let base = &one.level.base;
    let sub: Vec<u32> = ["(1,2)(3,4)", "(1,2,3)"]
        .iter()
        .map(|c| {
            base.element_of_perm(&Perm::parse_cycles(c, 5).unwrap())
                .unwrap()
        })
        .collect();
    let a4_pres = builtin::a4().presentation.unwrap();
    ensure(
        !splits_over(&one.level, &sub, &a4_pres).map_err(|e| e.to_string())?,
        "splits over A4",
    )?;
    Ok(format!(
        "H^2 dim 1, order 1920, {} order checks, nonsplit over A4",
        lifting.checked
    ))
}

fn a5_level_one_orbits() -> Outcome {
    let ni0 = common::a5_level_zero();
    let level = common::a5_level_one();
    let ni1 = lift_nielsen_class(&level, &ni0).map_err(|e| e.to_string())?;
    let reports = component_reports(&ni1).map_err(|e| e.to_string())?;
    let mut genera: Vec<u64> = reports.iter().map(|r| r.genus).collect();
    genera.sort_unstable();
    ensure(genera == vec![9, 12], format!("genera {genera:?}"))?;
    ensure(
        reports.iter().any(|r| !r.hm_cusps.is_empty()),
        "no orbit holds an H-M class",
    )?;
    Ok(format!(
        "{} classes, orbits of sizes {:?}, genera {{12, 9}}",
        ni1.len(),
        reports.iter().map(|r| r.orbit_size).collect::<Vec<_>>()
    ))
}

fn a5_at_five() -> Outcome {
    let ind = normalizer_induction(common::a5_group(), 5, 1 << 16).map_err(|e| e.to_string())?;
    ensure(ind.normalizer.len() == 10, "normalizer is not D5")?;
    ensure(
        ind.induced.dim == 6,
        format!("dimension {}", ind.induced.dim),
    )?;
    ensure(is_indecomposable(&ind.induced), "decomposable")?;
    let l = loewy_layers(&ind.induced).map_err(|e| e.to_string())?;
    let names = l.layer_names();
    ensure(
        l.layer_dims() == vec![3, 3] && names[0] == names[1],
        format!("layers {}", l.display()),
    )?;
    Ok(format!("dim 6, indecomposable, Loewy {}", l.display()))
}

fn a4_split_tower() -> Outcome {
    let a4 = Arc::new(FiniteGroup::from_perms(&builtin::a4().perms, 100).unwrap());
    let ind = normalizer_induction(a4, 2, 1 << 16).map_err(|e| e.to_string())?;
    let level = &ind.split.level;
    ensure(
        level.kernel_dim() == 5,
        format!("dim M0 {}", level.kernel_dim()),
    )?;
    ensure(
        level.total.order() == 384,
        format!("order {}", level.total.order()),
    )?;
    let l = loewy_layers(&level.kernel_module).map_err(|e| e.to_string())?;
    ensure(
        l.display() == "2a → 2a ⊕ 1",
        format!("Loewy {}", l.display()),
    )?;
    Ok(format!("dim 5, order 384, Loewy {}", l.display()))
}

fn a4_schur() -> Outcome {
    let level = common::a4_level_one();
    let g1 = level.total.clone();
    let qs = enumerate_schur_quotients(g1.clone(), &cayley_presentation(&g1), 2)
        .map_err(|e| e.to_string())?;
    ensure(qs.len() == 3, format!("{} quotients", qs.len()))?;
    let base = level.base.clone();
    let earlier = enumerate_schur_quotients(base.clone(), &cayley_presentation(&base), 2)
        .map_err(|e| e.to_string())?;
    let reports = schur_reports(&level, &qs, &earlier).map_err(|e| e.to_string())?;
    let mut types: Vec<String> = reports.iter().filter_map(|r| r.top_type.clone()).collect();
    types.sort();
    ensure(
        types == ["Q8+Z/2", "Q8.Z/4", "Z/4+Z/2+Z/2"],
        format!("types {types:?}"),
    )?;
    ensure(
        reports.iter().all(|r| r.socle_lifts_order_p),
        "a socle element lifts to order 4",
    )?;
    let abelian: Vec<_> = reports.iter().filter(|r| r.abelian).collect();
    ensure(
        abelian.len() == 1 && abelian[0].top_type.as_deref() == Some("Z/4+Z/2+Z/2"),
        "abelian quotient mismatch",
    )?;
    ensure(
        abelian[0].antecedent_of == vec![0],
        "abelian quotient lacks the SL2(3) antecedent",
    )?;
    Ok(format!(
        "3 quotients, tops {types:?}, socle lifts of order 2, antecedent on the abelian one"
    ))
}

fn a5_gcomplete() -> Outcome {
    let g = common::a5_group();
    let v2 = is_p_gcomplete(&g, 2, 1_000_000).map_err(|e| e.to_string())?;
    ensure(v2.complete, "not 2-gcomplete")?;
    let v3 = is_p_gcomplete(&g, 3, 1_000_000).map_err(|e| e.to_string())?;
    let w3 = v3.witness.ok_or("3-gcomplete")?;
    ensure(
        w3.order == 10 && w3.elements.iter().any(|&x| g.element_order(x) == 5),
        "witness at 3 is not D5",
    )?;
    let v5 = is_p_gcomplete(&g, 5, 1_000_000).map_err(|e| e.to_string())?;
    let w5 = v5.witness.ok_or("5-gcomplete")?;
    let involutions = w5
        .elements
        .iter()
        .filter(|&&x| g.element_order(x) == 2)
        .count();
    ensure(w5.order == 12 && involutions == 3, "witness at 5 is not A4")?;
    Ok("2-gcomplete; witnesses D5 at 3 and A4 at 5".into())
}

fn properties() -> Outcome {
    let t = common::run_all();
    ensure(t.count >= 10_000, format!("only {} checks", t.count))?;
    Ok(format!(
        "{} checks; bound applied on {} orbits, equality predicted on {}",
        t.count, t.bound_applicable, t.equality_expected
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("dihedral curves match the X_1(N) oracle", dihedral_oracle),
        ("A5 3-cycles level 0", a5_level_zero),
        ("G1(A5) construction", a5_first_level),
        ("A5 3-cycles level 1 orbits", a5_level_one_orbits),
        ("A5 at 5 induced module", a5_at_five),
        ("A4 split tower", a4_split_tower),
        ("G1(A4) Schur quotients", a4_schur),
        ("A5 gcompleteness", a5_gcomplete),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
