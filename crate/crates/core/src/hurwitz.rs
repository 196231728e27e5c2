//! Component data for reduced Hurwitz spaces read off from braid actions on
//! reduced Nielsen classes: cusps, genus, sh-incidence, and comparisons
//! between consecutive levels of a tower.

use crate::error::{Error, Result};
use crate::frattini::FrattiniLevel;
use crate::nielsen::{
    cycles_on, middle_product, q1_q3inv, sh, twist, BraidOp, Canonicalizer, NielsenClass,
};
use num_rational::Ratio;
use serde::Serialize;
use std::collections::HashMap;

/// The permutations `γ_0`, `γ_1`, `γ_∞` of the reduced classes.
#[derive(Debug, Clone)]
pub struct Actions {
    pub gamma0: Vec<u32>,
    pub gamma1: Vec<u32>,
    pub gamma_inf: Vec<u32>,
}

impl Actions {
    pub fn compute(ni: &NielsenClass) -> Result<Actions> {
        if ni.spec.r() != 4 {
            return Err(Error::InvalidInput("the γ actions need r = 4".into()));
        }
        Ok(Actions {
            gamma0: ni.action(BraidOp::Gamma0)?,
            gamma1: ni.action(BraidOp::Gamma1)?,
            gamma_inf: ni.action(BraidOp::GammaInf)?,
        })
    }
}

/// `|O|` minus the number of cycles of `perm` on the invariant set `orbit`.
pub fn index_on(perm: &[u32], orbit: &[u32]) -> usize {
    orbit.len() - cycles_on(perm, orbit).len()
}

/// The same index computed from fixed points: for a permutation of prime
/// order `ell` on `orbit`, `ind = (|O| - fixed)(ell - 1)/ell`.
pub fn index_from_fixed_points(perm: &[u32], orbit: &[u32], ell: usize) -> usize {
    let fixed = orbit.iter().filter(|&&x| perm[x as usize] == x).count();
    (orbit.len() - fixed) * (ell - 1) / ell
}

/// Solve `2(|O| + g - 1) = ind_0 + ind_1 + ind_∞` for `g`.
pub fn component_genus(size: usize, ind0: usize, ind1: usize, indinf: usize) -> Result<u64> {
    let twice = (ind0 + ind1 + indinf) as i64 - 2 * size as i64 + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::NonIntegralGenus(twice));
    }
    Ok((twice / 2) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub orbit_size: usize,
    pub cusp_widths: Vec<usize>,
    pub ind0: usize,
    pub ind1: usize,
    pub indinf: usize,
    pub genus: u64,
    pub t_prime: usize,
    /// Indices into `cusp_widths` of cusps containing an H-M class.
    pub hm_cusps: Vec<usize>,
    pub b_fine: bool,
    pub fine: bool,
}

/// Cusps of one orbit: `γ_∞` cycles with their widths and middle products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspCensus {
    pub cusps: Vec<Vec<u32>>,
    pub widths: Vec<usize>,
    pub middle_products: Vec<u32>,
    pub p_divisible: Vec<bool>,
    pub hm: Vec<bool>,
}

impl CuspCensus {
    pub fn t_prime(&self) -> usize {
        self.p_divisible.iter().filter(|&&b| b).count()
    }
}

/// Middle products are required to be constant on each cusp.
pub fn cusp_census(
    ni: &NielsenClass,
    actions: &Actions,
    orbit: &[u32],
    p: u32,
) -> Result<CuspCensus> {
    let g = ni.group();
    let cusps = cycles_on(&actions.gamma_inf, orbit);
    let mut middle_products = Vec::with_capacity(cusps.len());
    for c in &cusps {
        let m = middle_product(g, &ni.reps[c[0] as usize]);
        if c.iter()
            .any(|&x| middle_product(g, &ni.reps[x as usize]) != m)
        {
            return Err(Error::InvariantViolation(
                "middle product varies along a cusp".into(),
            ));
        }
        middle_products.push(m);
    }
    Ok(CuspCensus {
        widths: cusps.iter().map(|c| c.len()).collect(),
        p_divisible: middle_products.iter().map(|m| m % p == 0).collect(),
        hm: cusps
            .iter()
            .map(|c| c.iter().any(|&x| ni.has_hm(x as usize)))
            .collect(),
        middle_products,
        cusps,
    })
}

/// Whether `Q''` acts faithfully on the inner classes over `orbit`.
pub fn is_b_fine(ni: &NielsenClass, orbit: &[u32]) -> bool {
    let g = ni.group();
    let inner = Canonicalizer::new(ni.spec.group.clone(), false);
    let moves = |f: &dyn Fn(&[u32]) -> Vec<u32>| {
        orbit.iter().any(|&x| {
            let t = &ni.reps[x as usize];
            inner.canonical(&f(t)) != inner.canonical(t)
        })
    };
    let a = |t: &[u32]| q1_q3inv(g, t);
    let b = |t: &[u32]| sh(&sh(t));
    let ab = |t: &[u32]| sh(&sh(&q1_q3inv(g, t)));
    moves(&a) && moves(&b) && moves(&ab)
}

/// b-fine, and neither `γ_0` nor `γ_1` has a fixed point on `orbit`.
pub fn is_fine(ni: &NielsenClass, actions: &Actions, orbit: &[u32]) -> bool {
    is_b_fine(ni, orbit)
        && orbit
            .iter()
            .all(|&x| actions.gamma0[x as usize] != x && actions.gamma1[x as usize] != x)
}

pub fn component_report(
    ni: &NielsenClass,
    actions: &Actions,
    orbit: &[u32],
) -> Result<ComponentReport> {
    let census = cusp_census(ni, actions, orbit, ni.spec.p)?;
    let ind0 = index_on(&actions.gamma0, orbit);
    let ind1 = index_on(&actions.gamma1, orbit);
    let indinf = index_on(&actions.gamma_inf, orbit);
    let genus = component_genus(orbit.len(), ind0, ind1, indinf)?;
    let b_fine = is_b_fine(ni, orbit);
    Ok(ComponentReport {
        orbit_size: orbit.len(),
        t_prime: census.t_prime(),
        hm_cusps: (0..census.cusps.len()).filter(|&i| census.hm[i]).collect(),
        cusp_widths: census.widths,
        ind0,
        ind1,
        indinf,
        genus,
        b_fine,
        fine: b_fine && is_fine(ni, actions, orbit),
    })
}

/// Reports for every orbit, in orbit order.
pub fn component_reports(ni: &NielsenClass) -> Result<Vec<ComponentReport>> {
    let actions = Actions::compute(ni)?;
    ni.orbits()?
        .iter()
        .map(|o| component_report(ni, &actions, o))
        .collect()
}

/// `(i, j)` entry `|(O_i)sh ∩ O_j|` over all `γ_∞` orbits of the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShIncidence {
    pub cusps: Vec<Vec<u32>>,
    pub matrix: Vec<Vec<usize>>,
    /// Connected components of the nonzero pattern, as cusp index lists.
    pub blocks: Vec<Vec<usize>>,
}

impl ShIncidence {
    pub fn is_symmetric(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// CSV with cusp labels `O1..On` as header row and column.
    pub fn to_csv(&self) -> String {
        let n = self.matrix.len();
        let labels: Vec<String> = (1..=n).map(|i| format!("O{i}")).collect();
        let mut out = format!(",{}\n", labels.join(","));
        for (i, row) in self.matrix.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{},{}\n", labels[i], cells.join(",")));
        }
        out
    }
}

pub fn sh_incidence(ni: &NielsenClass, shift: &[u32], gamma_inf: &[u32]) -> ShIncidence {
    let all: Vec<u32> = (0..ni.len() as u32).collect();
    let cusps = cycles_on(gamma_inf, &all);
    let mut cusp_of = vec![0usize; ni.len()];
    for (i, c) in cusps.iter().enumerate() {
        for &x in c {
            cusp_of[x as usize] = i;
        }
    }
    let n = cusps.len();
    let mut matrix = vec![vec![0usize; n]; n];
    for (i, c) in cusps.iter().enumerate() {
        for &x in c {
            matrix[i][cusp_of[shift[x as usize] as usize]] += 1;
        }
    }
    let links: Vec<Vec<u32>> = {
        // Treat the pattern as an undirected graph and reuse the orbit search.
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] > 0 || matrix[j][i] > 0 {
                    adj[i].push(j as u32);
                }
            }
        }
        adj
    };
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut block = vec![s];
        let mut head = 0;
        while head < block.len() {
            let x = block[head];
            head += 1;
            for &y in &links[x] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    block.push(y as usize);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    ShIncidence {
        cusps,
        matrix,
        blocks,
    }
}

/// Cusps of `orbit` whose width is less than the length of the
/// corresponding `q_2` orbit on inner classes.
pub fn shortening_detect(ni: &NielsenClass, actions: &Actions, orbit: &[u32]) -> Vec<usize> {
    let g = ni.group();
    let inner = Canonicalizer::new(ni.spec.group.clone(), false);
    cycles_on(&actions.gamma_inf, orbit)
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let start = &ni.reps[c[0] as usize];
            let key = inner.canonical(start);
            let mut t = twist(g, start, 2);
            let mut len = 1;
            while inner.canonical(&t) != key {
                t = twist(g, &t, 2);
                len += 1;
            }
            len > c.len()
        })
        .map(|(i, _)| i)
        .collect()
}

/// Whether some class upstairs over a `γ_0` or `γ_1` fixed point downstairs
/// is not itself fixed.
pub fn elliptic_detect(
    lower: &Actions,
    upper: &Actions,
    upper_orbit: &[u32],
    projection: &[u32],
) -> bool {
    upper_orbit.iter().any(|&y| {
        let x = projection[y as usize] as usize;
        (lower.gamma0[x] == x as u32 && upper.gamma0[y as usize] != y)
            || (lower.gamma1[x] == x as u32 && upper.gamma1[y as usize] != y)
    })
}

/// Data comparing one orbit upstairs with the orbit below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelComparison {
    pub degree: usize,
    /// Number of `p`-divisible cusps of the lower orbit.
    pub t_prime: usize,
    /// For each non-`p`-divisible cusp below, the number of `p`-divisible
    /// cusps above it.
    pub u: Vec<usize>,
    /// Middle products over `p`-divisible cusps are multiplied by `p`.
    pub mpr_multiplied: bool,
    pub elliptic_ramification: bool,
    /// Shortened cusps of the lower and upper orbits.
    pub lower_shortening: Vec<usize>,
    pub upper_shortening: Vec<usize>,
    /// Upper cusps whose width ratio to the cusp below differs from the
    /// ratio of middle products.
    pub width_mismatches: Vec<usize>,
}

impl LevelComparison {
    pub fn no_shortening(&self) -> bool {
        self.lower_shortening.is_empty()
            && self.upper_shortening.is_empty()
            && self.width_mismatches.is_empty()
    }
}

pub struct LevelView<'a> {
    pub ni: &'a NielsenClass,
    pub actions: &'a Actions,
    pub orbit: &'a [u32],
}

/// `projection` maps upstairs class indices to downstairs ones.
pub fn level_compare(
    level: &FrattiniLevel,
    lower: &LevelView,
    upper: &LevelView,
    projection: &[u32],
) -> Result<LevelComparison> {
    let p = level.p;
    let mut fiber_sizes: HashMap<u32, usize> = HashMap::new();
    for &y in upper.orbit {
        *fiber_sizes.entry(projection[y as usize]).or_default() += 1;
    }
    if fiber_sizes.len() != lower.orbit.len()
        || lower.orbit.iter().any(|x| !fiber_sizes.contains_key(x))
    {
        return Err(Error::MismatchedLevels(
            "the upper orbit does not cover the lower orbit".into(),
        ));
    }
    let degree = fiber_sizes[&lower.orbit[0]];
    if fiber_sizes.values().any(|&s| s != degree) || degree * lower.orbit.len() != upper.orbit.len()
    {
        return Err(Error::MismatchedLevels(
            "fiber sizes vary across the lower orbit".into(),
        ));
    }
    let low = cusp_census(lower.ni, lower.actions, lower.orbit, p)?;
    let up = cusp_census(upper.ni, upper.actions, upper.orbit, p)?;
    let mut cusp_below = vec![0usize; up.cusps.len()];
    let mut low_cusp_of: HashMap<u32, usize> = HashMap::new();
    for (i, c) in low.cusps.iter().enumerate() {
        for &x in c {
            low_cusp_of.insert(x, i);
        }
    }
    for (j, c) in up.cusps.iter().enumerate() {
        cusp_below[j] = low_cusp_of[&projection[c[0] as usize]];
    }
    let width_mismatches = (0..up.cusps.len())
        .filter(|&j| {
            let i = cusp_below[j];
            up.widths[j] as u64 * low.middle_products[i] as u64
                != low.widths[i] as u64 * up.middle_products[j] as u64
        })
        .collect();
    let mut u_all = vec![0usize; low.cusps.len()];
    let mut mpr_multiplied = true;
    for (j, &i) in cusp_below.iter().enumerate() {
        if low.p_divisible[i] {
            mpr_multiplied &= up.middle_products[j] == p * low.middle_products[i];
        } else if up.p_divisible[j] {
            u_all[i] += 1;
        }
    }
    let u = (0..low.cusps.len())
        .filter(|&i| !low.p_divisible[i])
        .map(|i| u_all[i])
        .collect();
    Ok(LevelComparison {
        degree,
        t_prime: low.t_prime(),
        u,
        mpr_multiplied,
        elliptic_ramification: elliptic_detect(
            lower.actions,
            upper.actions,
            upper.orbit,
            projection,
        ),
        lower_shortening: shortening_detect(lower.ni, lower.actions, lower.orbit),
        upper_shortening: shortening_detect(upper.ni, upper.actions, upper.orbit),
        width_mismatches,
    })
}

/// `((p-1)/(2p) t' - 1) deg + 1 + (p-1)/2 Σ U_i`.
pub fn genus_lower_bound(t_prime: usize, degree: usize, u: &[usize], p: u32) -> Ratio<i64> {
    let p = p as i64;
    let half = Ratio::new(p - 1, 2 * p);
    let sum_u: i64 = u.iter().map(|&x| x as i64).sum();
    (half * t_prime as i64 - 1) * degree as i64 + 1 + Ratio::new(p - 1, 2) * sum_u
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoingUpVerdict {
    /// The bound applies: the lower genus is 0 and no shortening was seen.
    pub applicable: bool,
    pub bound_holds: bool,
    /// Equality is predicted when, in addition, there is no elliptic
    /// ramification.
    pub equality_expected: bool,
    pub equality_holds: bool,
}

pub fn check_goup(
    bound: Ratio<i64>,
    actual: u64,
    lower_genus: u64,
    cmp: &LevelComparison,
) -> GoingUpVerdict {
    let applicable = lower_genus == 0 && cmp.no_shortening();
    let actual = Ratio::from_integer(actual as i64);
    let equality_expected = applicable && !cmp.elliptic_ramification;
    GoingUpVerdict {
        applicable,
        bound_holds: actual >= bound,
        equality_expected,
        equality_holds: actual == bound,
    }
}

/// Orbit partition of a class recovered from sh-incidence blocks, for
/// cross-checking against [`NielsenClass::orbits`].
pub fn orbits_from_blocks(inc: &ShIncidence) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = inc
        .blocks
        .iter()
        .map(|b| {
            let mut o: Vec<u32> = b
                .iter()
                .flat_map(|&i| inc.cusps[i].iter().copied())
                .collect();
            o.sort_unstable();
            o
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::group::FiniteGroup;
    use crate::induction::level_one;
    use crate::nielsen::{lift_nielsen_class, project_classes, NielsenSpec};
    use std::sync::Arc;

    #[test]
    fn bound_arithmetic() {
        assert_eq!(genus_lower_bound(4, 2, &[], 2), Ratio::from_integer(1));
        assert_eq!(genus_lower_bound(0, 3, &[0, 0], 2), Ratio::from_integer(-2));
    }

    #[test]
    fn a5_levels_zero_and_one() {
        let a5 = builtin::a5();
        let g = Arc::new(FiniteGroup::from_perms(&a5.perms, 100).unwrap());
        let spec = NielsenSpec::from_labels(g.clone(), &["3A"; 4], 2).unwrap();
        let ni0 = NielsenClass::enumerate(spec, 1 << 24).unwrap();
        let reports = component_reports(&ni0).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!((reports[0].genus, reports[0].t_prime), (0, 0));
        let one = level_one(g, a5.presentation.as_ref().unwrap(), 2, 1 << 16).unwrap();
        let ni1 = lift_nielsen_class(&one.level, &ni0).unwrap();
        let mut genera: Vec<u64> = component_reports(&ni1)
            .unwrap()
            .iter()
            .map(|r| r.genus)
            .collect();
        genera.sort_unstable();
        assert_eq!(genera, vec![9, 12]);
        let proj = project_classes(&one.level, &ni0, &ni1).unwrap();
        let a0 = Actions::compute(&ni0).unwrap();
        let a1 = Actions::compute(&ni1).unwrap();
        let o0 = ni0.orbits().unwrap();
        for o in ni1.orbits().unwrap() {
            let lower = LevelView {
                ni: &ni0,
                actions: &a0,
                orbit: &o0[0],
            };
            let upper = LevelView {
                ni: &ni1,
                actions: &a1,
                orbit: &o,
            };
            let cmp = level_compare(&one.level, &lower, &upper, &proj).unwrap();
            assert!(cmp.mpr_multiplied);
            assert_eq!(cmp.degree * o0[0].len(), o.len());
            let genus = component_report(&ni1, &a1, &o).unwrap().genus;
            let v = check_goup(
                genus_lower_bound(cmp.t_prime, cmp.degree, &cmp.u, 2),
                genus,
                0,
                &cmp,
            );
            assert!(v.bound_holds);
        }
        let inc = sh_incidence(&ni1, &a1.gamma1, &a1.gamma_inf);
        assert!(inc.is_symmetric());
        assert_eq!(orbits_from_blocks(&inc), ni1.orbits().unwrap());
    }
}
