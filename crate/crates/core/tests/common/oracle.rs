//! The modular curve `X_1(N)` computed independently from the coset action
//! of `PSL_2(Z)` on `±Γ_1(N)`, and the matching data read off reduced Nielsen
//! classes of four involutions in `D_N`.

use modtower::frattini::dihedral_level;
use modtower::hurwitz::component_reports;
use modtower::nielsen::{NielsenClass, NielsenSpec};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveData {
    pub degree: usize,
    pub components: usize,
    pub cusp_widths: Vec<usize>,
    pub genus: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Cosets of `±Γ_1(N)` are the bottom rows `±(c, d)` of order `N` in
/// `(Z/N)^2`; `S` and `T` act on the right.
pub fn x1_oracle(n: i64) -> CurveData {
    let canon = |c: i64, d: i64| {
        let (c, d) = (c.rem_euclid(n), d.rem_euclid(n));
        let neg = ((n - c) % n, (n - d) % n);
        std::cmp::min((c, d), neg)
    };
    let mut points: Vec<(i64, i64)> = Vec::new();
    for c in 0..n {
        for d in 0..n {
            if gcd(gcd(c, d), n) == 1 && canon(c, d) == (c, d) {
                points.push((c, d));
            }
        }
    }
    let index: HashMap<(i64, i64), usize> =
        points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let t: Vec<usize> = points
        .iter()
        .map(|&(c, d)| index[&canon(c, c + d)])
        .collect();
    let s: Vec<usize> = points.iter().map(|&(c, d)| index[&canon(d, -c)]).collect();
    let st: Vec<usize> = (0..points.len()).map(|i| t[s[i]]).collect();
    let cycles = |perm: &[usize]| -> Vec<usize> {
        let mut seen = vec![false; perm.len()];
        let mut out = Vec::new();
        for i in 0..perm.len() {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
                len += 1;
            }
            out.push(len);
        }
        out
    };
    let mut widths = cycles(&t);
    widths.sort_unstable();
    let e2 = cycles(&s).iter().filter(|&&l| l == 1).count() as i64;
    let e3 = cycles(&st).iter().filter(|&&l| l == 1).count() as i64;
    let mu = points.len() as i64;
    let twelve_g = 12 + mu - 3 * e2 - 4 * e3 - 6 * widths.len() as i64;
    assert_eq!(twelve_g % 12, 0);
    let mut comp = vec![usize::MAX; points.len()];
    let mut components = 0;
    for i in 0..points.len() {
        if comp[i] != usize::MAX {
            continue;
        }
        let mut stack = vec![i];
        comp[i] = components;
        while let Some(x) = stack.pop() {
            for y in [t[x], s[x]] {
                if comp[y] == usize::MAX {
                    comp[y] = components;
                    stack.push(y);
                }
            }
        }
        components += 1;
    }
    CurveData {
        degree: points.len(),
        components,
        cusp_widths: widths,
        genus: twelve_g / 12,
    }
}

pub fn nielsen_side(p: u32, k: u32) -> CurveData {
    let level = dihedral_level(p, k).unwrap();
    let spec = NielsenSpec::from_labels(level.total.clone(), &["2A"; 4], p).unwrap();
    let ni = NielsenClass::enumerate(spec, 10_000_000).unwrap();
    let reports = component_reports(&ni).unwrap();
    let mut widths: Vec<usize> = reports.iter().flat_map(|r| r.cusp_widths.clone()).collect();
    widths.sort_unstable();
    CurveData {
        degree: ni.len(),
        components: reports.len(),
        cusp_widths: widths,
        genus: reports.iter().map(|r| r.genus as i64).sum(),
    }
}

pub fn agree(p: u32, k: u32) -> CurveData {
    let n = (p as i64).pow(k + 1);
    let oracle = x1_oracle(n);
    let ours = nielsen_side(p, k);
    assert_eq!(ours.components, oracle.components, "components for N = {n}");
    assert_eq!(ours.degree, oracle.degree, "degree for N = {n}");
    assert_eq!(
        ours.cusp_widths, oracle.cusp_widths,
        "cusp widths for N = {n}"
    );
    assert_eq!(ours.genus, oracle.genus, "genus for N = {n}");
    oracle
}
