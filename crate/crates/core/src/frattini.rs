//! Frattini levels `G_{k+1} -> G_k` with elementary abelian kernel: the
//! dihedral chain, the split case `P ⋊ H` built from Frattini quotients of a
//! free group, and checks of the cover properties.

use crate::error::{Error, Result};
use crate::group::{ConjClass, FiniteGroup};
use crate::linalg::{index_to_vec, vec_to_index, Fp, Matrix};
use crate::module::GModule;
use crate::presentation::{
    commutator_word, schreier_generators, todd_coxeter, word_pow, Presentation,
};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// An extension `1 -> M -> total -> base -> 1` with `M` elementary abelian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrattiniLevel {
    pub p: u32,
    pub total: Arc<FiniteGroup>,
    pub base: Arc<FiniteGroup>,
    /// Image in `base` of each element of `total`.
    pub projection: Vec<u32>,
    /// Kernel elements indexed by the base-`p` code of their coordinates.
    pub kernel_elements: Vec<u32>,
    /// `M` with the conjugation action of `base`: `m^g = s(g)^-1 m s(g)`.
    pub kernel_module: GModule,
    /// A set-theoretic lift of each base element.
    pub section: Vec<u32>,
    /// Relators on the generators of `total`, when known.
    pub presentation: Option<Presentation>,
    kernel_code: Vec<u32>,
}

impl FrattiniLevel {
    /// Assemble a level from its parts; `kernel_elements[vec_to_index(v)]` must
    /// be the kernel element with coordinates `v`.
    pub fn new(
        p: u32,
        total: Arc<FiniteGroup>,
        base: Arc<FiniteGroup>,
        projection: Vec<u32>,
        kernel_elements: Vec<u32>,
        kernel_module: GModule,
        section: Vec<u32>,
        presentation: Option<Presentation>,
    ) -> FrattiniLevel {
        let mut kernel_code = vec![u32::MAX; total.order()];
        for (i, &k) in kernel_elements.iter().enumerate() {
            kernel_code[k as usize] = i as u32;
        }
        FrattiniLevel {
            p,
            total,
            base,
            projection,
            kernel_elements,
            kernel_module,
            section,
            presentation,
            kernel_code,
        }
    }

    /// Build a level from a surjective homomorphism whose kernel is
    /// elementary abelian. The kernel basis is chosen greedily in element
    /// index order, and the section picks the smallest element of each fiber.
    pub fn from_projection(
        total: Arc<FiniteGroup>,
        base: Arc<FiniteGroup>,
        projection: Vec<u32>,
        p: u32,
    ) -> Result<FrattiniLevel> {
        if projection.len() != total.order() {
            return Err(Error::DimensionMismatch(
                "projection has the wrong length".into(),
            ));
        }
        for x in 0..total.order() as u32 {
            for i in 0..total.num_gens() {
                let g = total.generators()[i];
                if projection[total.mul_gen(x, i) as usize]
                    != base.mul(projection[x as usize], projection[g as usize])
                {
                    return Err(Error::InvalidInput(
                        "projection is not a homomorphism".into(),
                    ));
                }
            }
        }
        let kernel: Vec<u32> = (0..total.order() as u32)
            .filter(|&x| projection[x as usize] == 0)
            .collect();
        if total.order() != kernel.len() * base.order() {
            return Err(Error::InvalidInput("projection is not surjective".into()));
        }
        for &a in &kernel {
            if total.pow(a, p as i64) != 0
                || kernel.iter().any(|&b| total.mul(a, b) != total.mul(b, a))
            {
                return Err(Error::InvalidInput(
                    "kernel is not elementary abelian".into(),
                ));
            }
        }
        let mut basis = Vec::new();
        let mut span = vec![0u32];
        for &k in &kernel {
            if span.binary_search(&k).is_err() {
                basis.push(k);
                span = total.closure(&basis);
            }
        }
        let n = basis.len();
        let field = Fp::new(p);
        let size = (p as usize).pow(n as u32);
        let mut kernel_elements = vec![0u32; size];
        for (idx, slot) in kernel_elements.iter_mut().enumerate() {
            let v = index_to_vec(idx, p, n);
            *slot = v
                .iter()
                .zip(&basis)
                .fold(0, |acc, (&c, &b)| total.mul(acc, total.pow(b, c as i64)));
        }
        let mut section = vec![u32::MAX; base.order()];
        for x in 0..total.order() as u32 {
            let b = projection[x as usize] as usize;
            if section[b] == u32::MAX {
                section[b] = x;
            }
        }
        let mut code = vec![u32::MAX; total.order()];
        for (i, &k) in kernel_elements.iter().enumerate() {
            code[k as usize] = i as u32;
        }
        let gens = base
            .generators()
            .iter()
            .map(|&g| {
                let s = section[g as usize];
                let rows: Vec<Vec<u8>> = basis
                    .iter()
                    .map(|&b| index_to_vec(code[total.conj(b, s) as usize] as usize, p, n))
                    .collect();
                Matrix::from_rows(field, n, &rows)
            })
            .collect();
        let module = GModule::new(base.clone(), field, gens)?;
        Ok(FrattiniLevel::new(
            p,
            total,
            base,
            projection,
            kernel_elements,
            module,
            section,
            None,
        ))
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_module.dim
    }

    /// Coordinates of a kernel element.
    pub fn kernel_vector(&self, x: u32) -> Option<Vec<u8>> {
        let c = self.kernel_code[x as usize];
        (c != u32::MAX).then(|| index_to_vec(c as usize, self.p, self.kernel_dim()))
    }

    pub fn kernel_element(&self, v: &[u8]) -> u32 {
        self.kernel_elements[vec_to_index(v, self.p)]
    }

    /// All elements of `total` over `b`.
    pub fn fiber(&self, b: u32) -> Vec<u32> {
        let s = self.section[b as usize];
        self.kernel_elements
            .iter()
            .map(|&k| self.total.mul(s, k))
            .collect()
    }

    /// Check the level invariants: order, homomorphism, kernel action.
    pub fn check(&self) -> Result<()> {
        let expected = self.base.order() * self.kernel_elements.len();
        if self.total.order() != expected {
            return Err(Error::Collapse {
                got: self.total.order(),
                expected,
            });
        }
        let t = &self.total;
        for x in 0..t.order() as u32 {
            for (i, &g) in t.generators().iter().enumerate() {
                if self.projection[t.mul_gen(x, i) as usize]
                    != self
                        .base
                        .mul(self.projection[x as usize], self.projection[g as usize])
                {
                    return Err(Error::InvariantViolation(
                        "projection is not a homomorphism".into(),
                    ));
                }
            }
        }
        for b in 0..self.base.order() as u32 {
            if self.projection[self.section[b as usize] as usize] != b {
                return Err(Error::InvariantViolation("section does not lift".into()));
            }
            for (idx, &k) in self.kernel_elements.iter().enumerate() {
                let v = index_to_vec(idx, self.p, self.kernel_dim());
                let moved = t.conj(k, self.section[b as usize]);
                if self.kernel_vector(moved) != Some(self.kernel_module.act(&v, b)) {
                    return Err(Error::InvariantViolation(
                        "kernel action disagrees with the module".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Dihedral group of order `2n` with generators `r`, `s`.
fn dihedral_group(n: usize) -> Result<FiniteGroup> {
    crate::builtin::dihedral(n).group()
}

/// `D_{p^{k+1}} -> D_{p^k}` reducing the rotation; for `k = 0` the identity
/// map of `D_p`.
pub fn dihedral_level(p: u32, k: u32) -> Result<FrattiniLevel> {
    if p.is_multiple_of(2) || !crate::linalg::is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let n_top = (p as usize)
        .checked_pow(k + 1)
        .filter(|&n| n <= 1 << 20)
        .ok_or(Error::OrderExceeded(1 << 21))?;
    let total = Arc::new(dihedral_group(n_top)?);
    if k == 0 {
        let base = total.clone();
        let projection = (0..total.order() as u32).collect();
        return FrattiniLevel::from_projection(total, base, projection, p);
    }
    let base = Arc::new(dihedral_group(n_top / p as usize)?);
    let projection = total.hom_from_gen_images(&base, base.generators())?;
    FrattiniLevel::from_projection(total, base, projection, p)
}

/// The chain of dihedral levels `1..=k`.
pub fn dihedral_chain(p: u32, k: u32) -> Result<Vec<FrattiniLevel>> {
    (1..=k).map(|j| dihedral_level(p, j)).collect()
}

/// Result of [`split_level`]: the level `G_1 -> G_0` for `G_0 = P_0 ⋊ H`.
#[derive(Debug, Clone)]
pub struct SplitLevel {
    pub level: FrattiniLevel,
    /// `P_1`, the rank-`d` free group modulo `Φ(Φ(F))`.
    pub p1: Arc<FiniteGroup>,
    /// Images in `P_1` of the generators of `P_1` under each generator of `H`.
    pub action_lift: Vec<Vec<u32>>,
}

/// Compose element maps: first `a`, then `b`.
fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// Build `G_1 = P_1 ⋊ H -> G_0 = P_0 ⋊ H` where `P_0 = F_p^d` carries the
/// `H`-module `action`. `P_1` is enumerated as `F / Φ(Φ(F))` for the free
/// group `F` of rank `d`, and each generator of `H` is lifted to the
/// lexicographically first automorphism of `P_1` inducing its action on
/// `P_0` such that the lifts define an action of `H`.
pub fn split_level(action: &GModule, max_order: usize) -> Result<SplitLevel> {
    let p = action.p();
    let d = action.dim;
    let h = action.group().clone();
    let field = action.field;
    // Φ(F) as the kernel of F -> (Z/p)^d.
    let mut p0_rels = Vec::new();
    for i in 0..d as i32 {
        p0_rels.push(vec![i + 1; p as usize]);
        for j in (i + 1)..d as i32 {
            p0_rels.push(commutator_word(&[i + 1], &[j + 1]));
        }
    }
    let p0_pres = Presentation::new(d, p0_rels);
    let phi_table = todd_coxeter(&p0_pres, &[], max_order)?;
    let schreier = schreier_generators(&phi_table);
    let mut p1_rels = Vec::new();
    for (i, s) in schreier.iter().enumerate() {
        p1_rels.push(word_pow(s, p as i64));
        for t in &schreier[i + 1..] {
            p1_rels.push(commutator_word(s, t));
        }
    }
    let p1_pres = Presentation::new(d, p1_rels);
    let p1 = Arc::new(todd_coxeter(&p1_pres, &[], max_order)?.regular_group()?);
    let p0 = p0_pres.to_group(max_order)?;
    let to_p0 = p1.hom_from_gen_images(&p0, p0.generators())?;
    // Coordinates of P_0 elements.
    let mut p0_vec = vec![Vec::new(); p0.order()];
    for idx in 0..(p as usize).pow(d as u32) {
        let v = index_to_vec(idx, p, d);
        let e = v.iter().enumerate().fold(0, |acc, (i, &c)| {
            p0.mul(acc, p0.pow(p0.generators()[i], c as i64))
        });
        p0_vec[e as usize] = v;
    }
    let fibers: Vec<Vec<u32>> = {
        let mut f = vec![Vec::new(); p0.order()];
        for x in 0..p1.order() as u32 {
            f[to_p0[x as usize] as usize].push(x);
        }
        f
    };
    let vec_elem =
        |v: &[u8]| -> u32 { p0_vec.iter().position(|w| w.as_slice() == v).unwrap() as u32 };
    // Candidate images of the P_1 generators for each H generator.
    let choices: Vec<Vec<&Vec<u32>>> = action
        .generator_matrices()
        .iter()
        .map(|a| {
            (0..d)
                .map(|i| &fibers[vec_elem(a.row(i)) as usize])
                .collect()
        })
        .collect();
    let lift = search_action_lift(&p1, &h, &choices)?;
    // All sigma_h for h in H, as element maps of P_1 (right action).
    let mut sigma: Vec<Vec<u32>> = vec![(0..p1.order() as u32).collect()];
    for a in 1..h.order() as u32 {
        let (par, g) = h.parent(a);
        sigma.push(compose(&sigma[par as usize], &lift[g as usize]));
    }
    // G_1 = P_1 ⋊ H acting on pairs (x, h) = x*h; (x h)(y) = x σ_{h^-1}(y) h.
    let (np, nh) = (p1.order(), h.order());
    let ng1 = d + h.num_gens();
    let mut act1 = vec![0u32; np * nh * ng1];
    for x in 0..np as u32 {
        for hh in 0..nh as u32 {
            let pt = x as usize * nh + hh as usize;
            let sinv = &sigma[h.inv(hh) as usize];
            for i in 0..d {
                let y = sinv[p1.generators()[i] as usize];
                act1[pt * ng1 + i] = p1.mul(x, y) * nh as u32 + hh;
            }
            for j in 0..h.num_gens() {
                act1[pt * ng1 + d + j] = x * nh as u32 + h.mul_gen(hh, j);
            }
        }
    }
    let g1 = FiniteGroup::from_right_action(np * nh, ng1, &act1)?;
    // G_0 = P_0 ⋊ H with (u h)(v) = (u + v A_{h^-1}) h.
    let n0 = p0.order();
    let mut act0 = vec![0u32; n0 * nh * ng1];
    for u in 0..n0 as u32 {
        for hh in 0..nh as u32 {
            let pt = u as usize * nh + hh as usize;
            let ainv = action.matrix(h.inv(hh));
            for i in 0..d {
                let mut e = vec![0u8; d];
                e[i] = 1;
                let moved = ainv.apply(&e);
                let sum: Vec<u8> = p0_vec[u as usize]
                    .iter()
                    .zip(&moved)
                    .map(|(&a, &b)| field.add(a, b))
                    .collect();
                act0[pt * ng1 + i] = vec_elem(&sum) * nh as u32 + hh;
            }
            for j in 0..h.num_gens() {
                act0[pt * ng1 + d + j] = u * nh as u32 + h.mul_gen(hh, j);
            }
        }
    }
    let g0 = Arc::new(FiniteGroup::from_right_action(n0 * nh, ng1, &act0)?);
    let g1 = Arc::new(g1);
    let projection = g1
        .hom_from_gen_images(&g0, g0.generators())
        .map_err(|_| Error::ActionLiftFailed)?;
    let level = FrattiniLevel::from_projection(g1, g0, projection, p)?;
    Ok(SplitLevel {
        level,
        p1,
        action_lift: lift,
    })
}

/// Lexicographically first assignment of generator images (one list per `H`
/// generator) that defines automorphisms of `P` forming an action of `H`.
fn search_action_lift(
    p: &FiniteGroup,
    h: &FiniteGroup,
    choices: &[Vec<&Vec<u32>>],
) -> Result<Vec<Vec<u32>>> {
    let mut autos_per_gen: Vec<Vec<Vec<u32>>> = Vec::new();
    for gen_choices in choices {
        let mut autos = Vec::new();
        let sizes: Vec<usize> = gen_choices.iter().map(|c| c.len()).collect();
        let total: usize = sizes.iter().product();
        for mut idx in 0..total {
            let mut images = vec![0u32; sizes.len()];
            for k in (0..sizes.len()).rev() {
                images[k] = gen_choices[k][idx % sizes[k]];
                idx /= sizes[k];
            }
            if let Ok(map) = p.hom_from_gen_images(p, &images) {
                autos.push(map);
            }
        }
        autos_per_gen.push(autos);
    }
    // Joint search over the per-generator automorphisms in lexicographic order.
    let counts: Vec<usize> = autos_per_gen.iter().map(|a| a.len()).collect();
    if counts.contains(&0) {
        return Err(Error::ActionLiftFailed);
    }
    let total: usize = counts.iter().product();
    for mut idx in 0..total {
        let mut pick = vec![0usize; counts.len()];
        for k in (0..counts.len()).rev() {
            pick[k] = idx % counts[k];
            idx /= counts[k];
        }
        let lift: Vec<Vec<u32>> = pick
            .iter()
            .enumerate()
            .map(|(k, &i)| autos_per_gen[k][i].clone())
            .collect();
        if defines_action(p, h, &lift) {
            return Ok(lift);
        }
    }
    Err(Error::ActionLiftFailed)
}

fn defines_action(p: &FiniteGroup, h: &FiniteGroup, lift: &[Vec<u32>]) -> bool {
    let mut sigma: Vec<Vec<u32>> = vec![(0..p.order() as u32).collect()];
    for a in 1..h.order() as u32 {
        let (par, g) = h.parent(a);
        sigma.push(compose(&sigma[par as usize], &lift[g as usize]));
    }
    (0..h.order() as u32).all(|a| {
        (0..h.num_gens())
            .all(|g| sigma[h.mul_gen(a, g) as usize] == compose(&sigma[a as usize], &lift[g]))
    })
}

/// Violations of order lifting: elements of order divisible by `p` must lift
/// only to elements of `p` times their order, and each `p'` element must have
/// its `p'` lifts in exactly one conjugacy class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderLiftingReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl OrderLiftingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_order_lifting(level: &FrattiniLevel) -> OrderLiftingReport {
    let mut report = OrderLiftingReport::default();
    let p = level.p;
    let t = &level.total;
    for b in 0..level.base.order() as u32 {
        let ob = level.base.element_order(b);
        report.checked += 1;
        if ob.is_multiple_of(p) {
            if let Some(&bad) = level
                .fiber(b)
                .iter()
                .find(|&&x| t.element_order(x) != p * ob)
            {
                report.violations.push(format!(
                    "element {b} of order {ob} has a lift of order {}",
                    t.element_order(bad)
                ));
            }
        } else {
            let mut classes: Vec<usize> = level
                .fiber(b)
                .iter()
                .filter(|&&x| !t.element_order(x).is_multiple_of(p))
                .map(|&x| t.class_of(x))
                .collect();
            classes.sort_unstable();
            classes.dedup();
            if classes.len() != 1 {
                report.violations.push(format!(
                    "p' element {b} has p' lifts in {} classes",
                    classes.len()
                ));
            }
        }
    }
    report
}

/// Whether every choice of lifts of the base generators generates `total`.
/// Choices are enumerated exhaustively up to `2^16` of them, and otherwise a
/// deterministic stride through them is tested.
pub fn verify_frattini(level: &FrattiniLevel) -> bool {
    let gens = level.base.generators();
    let k = level.kernel_elements.len();
    let total_choices = (k as f64).powi(gens.len() as i32);
    let count = total_choices.min(65536.0) as usize;
    let stride = if total_choices <= 65536.0 {
        1
    } else {
        (total_choices / 65536.0) as usize | 1
    };
    let t = &level.total;
    (0..count).all(|n| {
        let mut idx = n.wrapping_mul(stride);
        let lifts: Vec<u32> = gens
            .iter()
            .map(|&g| {
                let kk = level.kernel_elements[idx % k];
                idx /= k;
                t.mul(level.section[g as usize], kk)
            })
            .collect();
        t.closure_bounded(&lifts, t.order()).map(|c| c.len()) == Some(t.order())
    })
}

/// The unique `p'` class of `total` over a `p'` class of `base`.
pub fn lift_class(level: &FrattiniLevel, class: &ConjClass) -> Result<ConjClass> {
    if class.element_order.is_multiple_of(level.p) {
        return Err(Error::NotPPrime(level.p));
    }
    let t = &level.total;
    let mut classes: Vec<usize> = level
        .fiber(class.representative)
        .iter()
        .filter(|&&x| !t.element_order(x).is_multiple_of(level.p))
        .map(|&x| t.class_of(x))
        .collect();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() != 1 {
        return Err(Error::InvariantViolation(format!(
            "{} p' classes lie over one class",
            classes.len()
        )));
    }
    Ok(t.conjugacy_classes()[classes[0]].clone())
}

/// Whether the extension splits over the subgroup of `base` generated by
/// `sub_gens`, which satisfy the relators of `sub_pres`: it splits exactly
/// when some choice of lifts satisfies the relators.
pub fn splits_over(
    level: &FrattiniLevel,
    sub_gens: &[u32],
    sub_pres: &Presentation,
) -> Result<bool> {
    if sub_gens.len() != sub_pres.num_gens() {
        return Err(Error::DimensionMismatch(
            "generator count does not match the presentation".into(),
        ));
    }
    for r in &sub_pres.relators {
        let v = r.iter().fold(0, |acc, &l| {
            let g = sub_gens[(l.unsigned_abs() - 1) as usize];
            level
                .base
                .mul(acc, if l > 0 { g } else { level.base.inv(g) })
        });
        if v != 0 {
            return Err(Error::InvalidInput(
                "subgroup generators do not satisfy the relators".into(),
            ));
        }
    }
    let t = &level.total;
    let fibers: Vec<Vec<u32>> = sub_gens.iter().map(|&g| level.fiber(g)).collect();
    let k = level.kernel_elements.len();
    let total = k.pow(sub_gens.len() as u32);
    for mut idx in 0..total {
        let mut lifts = Vec::with_capacity(sub_gens.len());
        for f in &fibers {
            lifts.push(f[idx % k]);
            idx /= k;
        }
        let ok = sub_pres.relators.iter().all(|r| {
            r.iter().fold(0, |acc, &l| {
                let g = lifts[(l.unsigned_abs() - 1) as usize];
                t.mul(acc, if l > 0 { g } else { t.inv(g) })
            }) == 0
        });
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}
