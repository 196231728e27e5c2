//! Nielsen classes: tuples `(g_1, ..., g_r)` of elements in prescribed
//! conjugacy classes with product one that generate the group, up to inner
//! conjugation and, for `r = 4`, the Klein group `Q''` generated by
//! `q_1 q_3^{-1}` and `sh^2`. Braid operators act on reduced classes.

use crate::error::{Error, Result};
use crate::frattini::{lift_class, FrattiniLevel};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

/// A group, a list of `p'` conjugacy classes (as class indices), and `p`.
#[derive(Debug, Clone)]
pub struct NielsenSpec {
    pub group: Arc<FiniteGroup>,
    pub classes: Vec<usize>,
    pub p: u32,
}

impl NielsenSpec {
    pub fn new(group: Arc<FiniteGroup>, classes: Vec<usize>, p: u32) -> Result<NielsenSpec> {
        if classes.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "need at least 3 classes, got {}",
                classes.len()
            )));
        }
        let all = group.conjugacy_classes();
        for &c in &classes {
            let class = all
                .get(c)
                .ok_or_else(|| Error::InvalidInput(format!("class index {c} out of range")))?;
            if class.element_order % p == 0 {
                return Err(Error::NotPPrime(p));
            }
        }
        Ok(NielsenSpec { group, classes, p })
    }

    /// Classes given by labels such as `3A`.
    pub fn from_labels(group: Arc<FiniteGroup>, labels: &[&str], p: u32) -> Result<NielsenSpec> {
        let classes = labels
            .iter()
            .map(|l| {
                group
                    .class_by_label(l)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown class label {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        NielsenSpec::new(group, classes, p)
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    fn sorted_classes(&self) -> Vec<usize> {
        let mut c = self.classes.clone();
        c.sort_unstable();
        c
    }

    /// Product one, generation, and class multiset matching the [`NielsenSpec`].
    pub fn contains(&self, t: &[u32]) -> bool {
        if t.len() != self.r() || self.group.product(t) != 0 {
            return false;
        }
        let mut cls: Vec<usize> = t.iter().map(|&x| self.group.class_of(x)).collect();
        cls.sort_unstable();
        cls == self.sorted_classes() && self.group.generates(t)
    }
}

/// A validated Nielsen tuple together with the position in the [`NielsenSpec`] class
/// list each entry was matched to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenTuple {
    pub entries: Vec<u32>,
    pub class_assignment: Vec<usize>,
}

impl NielsenTuple {
    pub fn new(spec: &NielsenSpec, entries: Vec<u32>) -> Result<NielsenTuple> {
        if !spec.contains(&entries) {
            return Err(Error::InvalidInput(
                "tuple is not in the Nielsen class".into(),
            ));
        }
        let mut used = vec![false; spec.r()];
        let class_assignment = entries
            .iter()
            .map(|&x| {
                let c = spec.group.class_of(x);
                let k = (0..spec.r())
                    .find(|&k| !used[k] && spec.classes[k] == c)
                    .expect("class multiset already matched");
                used[k] = true;
                k
            })
            .collect();
        Ok(NielsenTuple {
            entries,
            class_assignment,
        })
    }
}

/// A reduced Nielsen class, stored by its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedClass {
    pub canonical: Vec<u32>,
}

/// Braid operators. Twists are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidOp {
    Shift,
    ShiftInv,
    Twist(usize),
    TwistInv(usize),
    GammaInf,
    Gamma1,
    Gamma0,
}

pub fn sh(t: &[u32]) -> Vec<u32> {
    let mut v = t[1..].to_vec();
    v.push(t[0]);
    v
}

pub fn sh_inv(t: &[u32]) -> Vec<u32> {
    let mut v = vec![t[t.len() - 1]];
    v.extend_from_slice(&t[..t.len() - 1]);
    v
}

/// `q_i`: `(.., g_i, g_{i+1}, ..) -> (.., g_i g_{i+1} g_i^{-1}, g_i, ..)`.
pub fn twist(g: &FiniteGroup, t: &[u32], i: usize) -> Vec<u32> {
    let mut v = t.to_vec();
    let (a, b) = (t[i - 1], t[i]);
    v[i - 1] = g.conj(b, g.inv(a));
    v[i] = a;
    v
}

/// `q_i^{-1}`: `(.., g_i, g_{i+1}, ..) -> (.., g_{i+1}, g_{i+1}^{-1} g_i g_{i+1}, ..)`.
pub fn twist_inv(g: &FiniteGroup, t: &[u32], i: usize) -> Vec<u32> {
    let mut v = t.to_vec();
    let (a, b) = (t[i - 1], t[i]);
    v[i - 1] = b;
    v[i] = g.conj(a, b);
    v
}

pub fn gamma_inf(g: &FiniteGroup, t: &[u32]) -> Vec<u32> {
    twist(g, t, 2)
}

pub fn gamma1(t: &[u32]) -> Vec<u32> {
    sh(t)
}

/// `γ_0 = (γ_1 γ_∞)^{-1}` for right actions: undo `γ_∞`, then undo `sh`.
pub fn gamma0(g: &FiniteGroup, t: &[u32]) -> Vec<u32> {
    sh_inv(&twist_inv(g, t, 2))
}

pub fn apply(g: &FiniteGroup, op: BraidOp, t: &[u32]) -> Vec<u32> {
    match op {
        BraidOp::Shift | BraidOp::Gamma1 => sh(t),
        BraidOp::ShiftInv => sh_inv(t),
        BraidOp::Twist(i) => twist(g, t, i),
        BraidOp::TwistInv(i) => twist_inv(g, t, i),
        BraidOp::GammaInf => gamma_inf(g, t),
        BraidOp::Gamma0 => gamma0(g, t),
    }
}

/// `q_1 q_3^{-1}` on a 4-tuple.
pub fn q1_q3inv(g: &FiniteGroup, t: &[u32]) -> Vec<u32> {
    twist_inv(g, &twist(g, t, 1), 3)
}

/// The four `Q''` images of a 4-tuple (before conjugation).
pub fn q2_variants(g: &FiniteGroup, t: &[u32]) -> [Vec<u32>; 4] {
    let a = q1_q3inv(g, t);
    let b = sh(&sh(t));
    let ab = sh(&sh(&a));
    [t.to_vec(), a, b, ab]
}

/// Harbater-Mumford form `(g_1, g_1^{-1}, g_2, g_2^{-1}, ...)`.
pub fn is_hm(g: &FiniteGroup, t: &[u32]) -> bool {
    t.len().is_multiple_of(2) && t.chunks(2).all(|c| c[1] == g.inv(c[0]))
}

/// Order of `g_2 g_3`.
pub fn middle_product(g: &FiniteGroup, t: &[u32]) -> u32 {
    g.element_order(g.mul(t[1], t[2]))
}

pub fn is_p_divisible(g: &FiniteGroup, t: &[u32], p: u32) -> bool {
    middle_product(g, t).is_multiple_of(p)
}

/// Lexicographically least representative over inner conjugation and, for
/// 4-tuples when `reduced` is set, over `Q''`.
#[derive(Debug, Clone)]
pub struct Canonicalizer {
    group: Arc<FiniteGroup>,
    /// For each element `a`, some `t` with `t^{-1} rep(a) t = a`.
    transversal: Vec<u32>,
    centralizers: Vec<Vec<u32>>,
    reduced: bool,
}

impl Canonicalizer {
    pub fn new(group: Arc<FiniteGroup>, reduced: bool) -> Canonicalizer {
        let n = group.order();
        let classes = group.conjugacy_classes();
        let mut transversal = vec![u32::MAX; n];
        let gens = group.generators().to_vec();
        let mut centralizers = Vec::with_capacity(classes.len());
        for c in classes {
            let rep = c.representative;
            transversal[rep as usize] = 0;
            let mut queue = vec![rep];
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &s in &gens {
                    let y = group.conj(x, s);
                    if transversal[y as usize] == u32::MAX {
                        transversal[y as usize] = group.mul(transversal[x as usize], s);
                        queue.push(y);
                    }
                }
            }
            centralizers.push(group.centralizer_of(rep));
        }
        Canonicalizer {
            group,
            transversal,
            centralizers,
            reduced,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn canonical(&self, t: &[u32]) -> Vec<u32> {
        let g = &*self.group;
        let variants: Vec<Vec<u32>> = if self.reduced && t.len() == 4 {
            q2_variants(g, t).to_vec()
        } else {
            vec![t.to_vec()]
        };
        let rep_of = |a: u32| g.conjugacy_classes()[g.class_of(a)].representative;
        let first = variants
            .iter()
            .map(|v| rep_of(v[0]))
            .min()
            .expect("at least one variant");
        let mut best: Option<Vec<u32>> = None;
        for v in variants.iter().filter(|v| rep_of(v[0]) == first) {
            let t_inv = g.inv(self.transversal[v[0] as usize]);
            for &c in &self.centralizers[g.class_of(v[0])] {
                let x = g.mul(t_inv, c);
                let w: Vec<u32> = v.iter().map(|&e| g.conj(e, x)).collect();
                if best.as_ref().is_none_or(|b| w < *b) {
                    best = Some(w);
                }
            }
        }
        best.expect("nonempty variant list")
    }
}

/// The reduced classes of a Nielsen class, sorted by canonical tuple.
#[derive(Debug, Clone)]
pub struct NielsenClass {
    pub spec: NielsenSpec,
    pub canon: Canonicalizer,
    pub reps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
}

impl NielsenClass {
    /// Build from arbitrary members: canonicalize, dedupe, sort.
    pub fn from_tuples(
        spec: NielsenSpec,
        tuples: impl IntoIterator<Item = Vec<u32>>,
    ) -> NielsenClass {
        let canon = Canonicalizer::new(spec.group.clone(), spec.r() == 4);
        let set: HashSet<Vec<u32>> = tuples.into_iter().map(|t| canon.canonical(&t)).collect();
        let mut reps: Vec<Vec<u32>> = set.into_iter().collect();
        reps.sort_unstable();
        let index = reps
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        NielsenClass {
            spec,
            canon,
            reps,
            index,
        }
    }

    /// Backtracking enumeration. The first entry runs over class
    /// representatives only, the next `r - 2` over class members, and the
    /// last is forced by the product. `budget` bounds the number of partial
    /// tuples visited.
    pub fn enumerate(spec: NielsenSpec, budget: usize) -> Result<NielsenClass> {
        let g = spec.group.clone();
        let r = spec.r();
        let classes = g.conjugacy_classes();
        let estimate = spec.classes[..r - 1]
            .iter()
            .skip(1)
            .fold(1f64, |acc, &c| acc * classes[c].size() as f64);
        if estimate * (r as f64) > budget as f64 {
            return Err(Error::Budget(format!(
                "about {estimate:.0} partial Nielsen tuples"
            )));
        }
        let wanted = spec.sorted_classes();
        let mut firsts: Vec<usize> = wanted.clone();
        firsts.dedup();
        let found: Vec<Vec<u32>> = firsts
            .par_iter()
            .flat_map_iter(|&c0| {
                let mut out = Vec::new();
                let mut remaining = wanted.clone();
                let pos = remaining
                    .iter()
                    .position(|&c| c == c0)
                    .expect("class from the list");
                remaining.remove(pos);
                let mut tuple = vec![classes[c0].representative];
                backtrack(&g, &mut tuple, &mut remaining, r, &mut out);
                out
            })
            .collect();
        let canon = Canonicalizer::new(g.clone(), r == 4);
        let set: HashSet<Vec<u32>> = found.par_iter().map(|t| canon.canonical(t)).collect();
        let mut reps: Vec<Vec<u32>> = set.into_iter().collect();
        reps.sort_unstable();
        let index = reps
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Ok(NielsenClass {
            spec,
            canon,
            reps,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.spec.group
    }

    pub fn find(&self, t: &[u32]) -> Option<usize> {
        self.index
            .get(&self.canon.canonical(t))
            .map(|&i| i as usize)
    }

    pub fn reduced_class(&self, i: usize) -> ReducedClass {
        ReducedClass {
            canonical: self.reps[i].clone(),
        }
    }

    /// The permutation of reduced classes induced by `op`.
    pub fn action(&self, op: BraidOp) -> Result<Vec<u32>> {
        let g = &*self.spec.group;
        self.reps
            .par_iter()
            .map(|t| {
                let img = apply(g, op, t);
                self.find(&img).map(|i| i as u32).ok_or_else(|| {
                    Error::InvariantViolation(format!("{op:?} left the Nielsen class"))
                })
            })
            .collect()
    }

    /// Orbits of `⟨γ_1, γ_∞⟩` for `r = 4`, of `⟨sh, q_2⟩` otherwise. Orbits
    /// are sorted lists of class indices, ordered by their first element.
    pub fn orbits(&self) -> Result<Vec<Vec<u32>>> {
        let gens = if self.spec.r() == 4 {
            vec![
                self.action(BraidOp::Gamma1)?,
                self.action(BraidOp::GammaInf)?,
            ]
        } else {
            vec![
                self.action(BraidOp::Shift)?,
                self.action(BraidOp::Twist(2))?,
            ]
        };
        Ok(orbits_of(self.len(), &gens))
    }

    /// Whether the reduced class `i` contains a tuple in Harbater-Mumford form.
    pub fn has_hm(&self, i: usize) -> bool {
        let g = &*self.spec.group;
        let t = &self.reps[i];
        if t.len() == 4 {
            q2_variants(g, t).iter().any(|v| is_hm(g, v))
        } else {
            is_hm(g, t)
        }
    }

    pub fn hm_classes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.has_hm(i)).collect()
    }

    pub fn format_tuple(&self, t: &[u32]) -> String {
        format_tuple(&self.spec.group, t)
    }
}

fn backtrack(
    g: &FiniteGroup,
    tuple: &mut Vec<u32>,
    remaining: &mut Vec<usize>,
    r: usize,
    out: &mut Vec<Vec<u32>>,
) {
    let classes = g.conjugacy_classes();
    if tuple.len() == r - 1 {
        let last = g.inv(g.product(tuple));
        if remaining.len() == 1 && g.class_of(last) == remaining[0] {
            tuple.push(last);
            if g.generates(tuple) {
                out.push(tuple.clone());
            }
            tuple.pop();
        }
        return;
    }
    let mut tried = remaining.clone();
    tried.dedup();
    for c in tried {
        let pos = remaining.iter().position(|&x| x == c).expect("present");
        remaining.remove(pos);
        for &x in &classes[c].members {
            tuple.push(x);
            backtrack(g, tuple, remaining, r, out);
            tuple.pop();
        }
        remaining.insert(pos, c);
    }
}

/// Orbits of the group generated by permutations of `0..n`.
pub fn orbits_of(n: usize, gens: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orbit = vec![s as u32];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head] as usize;
            head += 1;
            for p in gens {
                let y = p[x];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Cycles of a permutation restricted to an invariant subset, each starting
/// at its least element, ordered by that element.
pub fn cycles_on(perm: &[u32], subset: &[u32]) -> Vec<Vec<u32>> {
    let mut seen: HashSet<u32> = HashSet::new();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for &s in &sorted {
        if !seen.insert(s) {
            continue;
        }
        let mut cyc = vec![s];
        let mut x = perm[s as usize];
        while x != s {
            seen.insert(x);
            cyc.push(x);
            x = perm[x as usize];
        }
        out.push(cyc);
    }
    out
}

/// The [`NielsenSpec`] one level up: each class replaced by the unique `p'` class
/// over it.
pub fn lifted_spec(level: &FrattiniLevel, spec: &NielsenSpec) -> Result<NielsenSpec> {
    let base_classes = level.base.conjugacy_classes();
    let classes = spec
        .classes
        .iter()
        .map(|&c| {
            lift_class(level, &base_classes[c]).map(|cl| level.total.class_of(cl.representative))
        })
        .collect::<Result<Vec<_>>>()?;
    NielsenSpec::new(level.total.clone(), classes, spec.p)
}

/// Canonical reduced classes one level up lying entrywise over `t`.
pub fn lift_tuples(level: &FrattiniLevel, t: &[u32], upper: &NielsenSpec) -> Result<Vec<Vec<u32>>> {
    let lifts = lifts_over(level, t, upper)?;
    let canon = Canonicalizer::new(upper.group.clone(), upper.r() == 4);
    let set: HashSet<Vec<u32>> = lifts.iter().map(|l| canon.canonical(l)).collect();
    let mut out: Vec<Vec<u32>> = set
        .into_iter()
        .filter(|l| upper.group.generates(l))
        .collect();
    if out.is_empty() {
        return Err(Error::EmptyFiber);
    }
    out.sort_unstable();
    Ok(out)
}

/// All tuples over `t` with entries in the lifted classes and product one.
/// Generation is not checked.
fn lifts_over(level: &FrattiniLevel, t: &[u32], upper: &NielsenSpec) -> Result<Vec<Vec<u32>>> {
    let big = &*level.total;
    let r = t.len();
    if r != upper.r() {
        return Err(Error::MismatchedLevels(format!(
            "tuple of length {r} for {} classes",
            upper.r()
        )));
    }
    let lift_of = |b: u32| -> Result<usize> {
        let c = lift_class(
            level,
            &level.base.conjugacy_classes()[level.base.class_of(b)],
        )?;
        Ok(big.class_of(c.representative))
    };
    let targets: Vec<usize> = t.iter().map(|&b| lift_of(b)).collect::<Result<_>>()?;
    let candidates: Vec<Vec<u32>> = t
        .iter()
        .zip(&targets)
        .map(|(&b, &c)| {
            level
                .fiber(b)
                .into_iter()
                .filter(|&x| big.class_of(x) == c)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; r - 1];
    if candidates[..r - 1].iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    loop {
        let prefix: Vec<u32> = (0..r - 1).map(|i| candidates[i][idx[i]]).collect();
        let last = big.inv(big.product(&prefix));
        if big.class_of(last) == targets[r - 1] {
            let mut full = prefix;
            full.push(last);
            out.push(full);
        }
        let mut k = 0;
        loop {
            if k == r - 1 {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The reduced Nielsen class one level up, found by lifting every reduced
/// class of `lower`. Every reduced class upstairs has a member over some
/// canonical representative downstairs, so nothing is missed.
pub fn lift_nielsen_class(level: &FrattiniLevel, lower: &NielsenClass) -> Result<NielsenClass> {
    let upper = lifted_spec(level, &lower.spec)?;
    let canon = Canonicalizer::new(upper.group.clone(), upper.r() == 4);
    let per_rep: Vec<Vec<Vec<u32>>> = lower
        .reps
        .par_iter()
        .map(|t| {
            let lifts = lifts_over(level, t, &upper)?;
            let set: HashSet<Vec<u32>> = lifts.iter().map(|l| canon.canonical(l)).collect();
            Ok(set.into_iter().collect())
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<Vec<u32>> = per_rep.into_iter().flatten().collect();
    all.sort_unstable();
    all.dedup();
    let all: Vec<Vec<u32>> = all
        .into_par_iter()
        .filter(|t| upper.group.generates(t))
        .collect();
    let index = all
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i as u32))
        .collect();
    Ok(NielsenClass {
        spec: upper,
        canon,
        reps: all,
        index,
    })
}

/// Projection of each reduced class one level up to its class below.
pub fn project_classes(
    level: &FrattiniLevel,
    lower: &NielsenClass,
    upper: &NielsenClass,
) -> Result<Vec<u32>> {
    upper
        .reps
        .iter()
        .map(|t| {
            let down: Vec<u32> = t.iter().map(|&x| level.projection[x as usize]).collect();
            lower.find(&down).map(|i| i as u32).ok_or_else(|| {
                Error::MismatchedLevels("a lifted tuple projects outside the lower class".into())
            })
        })
        .collect()
}

/// `[(1,2,3), (1,3,2), ...]` using the group's permutation representation
/// when it has one, element indices otherwise.
pub fn format_tuple(g: &FiniteGroup, t: &[u32]) -> String {
    let parts: Vec<String> = t
        .iter()
        .map(|&x| {
            g.element_perm(x)
                .map(|p| p.to_string())
                .unwrap_or_else(|| format!("#{x}"))
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

pub fn parse_tuple(g: &FiniteGroup, text: &str) -> Result<Vec<u32>> {
    let body = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse("tuple must be enclosed in [ ]".into()))?;
    let degree = g
        .generator_perms()
        .and_then(|p| p.first())
        .map(|p| p.degree())
        .ok_or_else(|| Error::InvalidInput("group has no permutation representation".into()))?;
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let end = next_entry_end(rest);
        let entry = rest[..end].trim();
        let perm = Perm::parse_cycles(entry, degree)?;
        out.push(
            g.element_of_perm(&perm)
                .ok_or_else(|| Error::InvalidInput(format!("{entry} is not in the group")))?,
        );
        rest = rest[end..]
            .trim_start()
            .trim_start_matches(',')
            .trim_start();
    }
    Ok(out)
}

/// End of the first entry: entries are runs of cycles separated by commas
/// outside parentheses.
fn next_entry_end(s: &str) -> usize {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return i,
            _ => {}
        }
    }
    s.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn a5() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_perms(&builtin::a5().perms, 100).unwrap())
    }

    fn perm(g: &FiniteGroup, s: &str) -> u32 {
        g.element_of_perm(&Perm::parse_cycles(s, 5).unwrap())
            .unwrap()
    }

    #[test]
    fn a5_three_cycles_level_zero() {
        let g = a5();
        let spec = NielsenSpec::from_labels(g.clone(), &["3A"; 4], 2).unwrap();
        let ni = NielsenClass::enumerate(spec, 1 << 24).unwrap();
        assert!(!ni.is_empty());
        let orbits = ni.orbits().unwrap();
        assert_eq!(orbits.len(), 1);
        let g1 = ni.action(BraidOp::Gamma1).unwrap();
        let g0 = ni.action(BraidOp::Gamma0).unwrap();
        for i in 0..ni.len() {
            assert_eq!(g1[g1[i] as usize] as usize, i);
            assert_eq!(g0[g0[g0[i] as usize] as usize] as usize, i);
        }
        assert!(!ni.hm_classes().is_empty());
    }

    #[test]
    fn shift_and_twist_formulas() {
        let g = a5();
        let t = [
            perm(&g, "(1,2,3)"),
            perm(&g, "(1,3,2)"),
            perm(&g, "(3,4,5)"),
            perm(&g, "(3,5,4)"),
        ];
        assert_eq!(sh(&t), vec![t[1], t[2], t[3], t[0]]);
        assert_eq!(sh_inv(&sh(&t)), t.to_vec());
        assert_eq!(twist_inv(&g, &twist(&g, &t, 2), 2), t.to_vec());
        assert!(is_hm(&g, &t));
        assert_eq!(middle_product(&g, &t), g.element_order(g.mul(t[1], t[2])));
        let q = q1_q3inv(&g, &q1_q3inv(&g, &t));
        let canon = Canonicalizer::new(g.clone(), false);
        assert_eq!(canon.canonical(&q), canon.canonical(&t));
    }

    #[test]
    fn tuple_text_round_trip() {
        let g = a5();
        let t = vec![
            perm(&g, "(1,2,3)"),
            perm(&g, "(1,3,2)"),
            perm(&g, "(1,4,5)"),
            perm(&g, "(1,5,4)"),
        ];
        let s = format_tuple(&g, &t);
        assert_eq!(parse_tuple(&g, &s).unwrap(), t);
        assert_eq!(
            parse_tuple(&g, "[(1 2 3), (1 3 2), (1 4 5), (1 5 4)]").unwrap(),
            t
        );
    }

    #[test]
    fn dihedral_involutions() {
        let d5 = builtin::dihedral(5);
        let g = Arc::new(FiniteGroup::from_perms(&d5.perms, 100).unwrap());
        let spec = NielsenSpec::from_labels(g, &["2A"; 4], 5).unwrap();
        let ni = NielsenClass::enumerate(spec, 1 << 20).unwrap();
        assert!(!ni.hm_classes().is_empty());
        let ginf = ni.action(BraidOp::GammaInf).unwrap();
        let widths: Vec<usize> = cycles_on(&ginf, &(0..ni.len() as u32).collect::<Vec<_>>())
            .iter()
            .map(|c| c.len())
            .collect();
        assert!(widths.contains(&1) && widths.contains(&5));
    }
}
