//! Central `Z/p` extensions of a level and the analysis of the pullback
//! `M̂_D` of the level's kernel: which kernel elements lift to order `p`,
//! the groups generated by two lifts, and antecedents one level down.

use crate::error::{Error, Result};
use crate::extension::{build_extension, h2_classes};
use crate::frattini::FrattiniLevel;
use crate::group::FiniteGroup;
use crate::linalg::{index_to_vec, vec_to_index, Subspace};
use crate::loewy::socle;
use crate::module::GModule;
use crate::presentation::Presentation;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// `1 -> Z/p -> total -> base -> 1` with central kernel.
#[derive(Debug, Clone)]
pub struct CentralExt {
    pub p: u32,
    pub total: Arc<FiniteGroup>,
    pub base: Arc<FiniteGroup>,
    pub projection: Vec<u32>,
    pub center_gen: u32,
}

impl CentralExt {
    pub fn from_level(level: &FrattiniLevel) -> Result<CentralExt> {
        if level.kernel_dim() != 1 || !level.kernel_module.is_trivial_action() {
            return Err(Error::InvalidInput(
                "a central extension needs a trivial one-dimensional kernel".into(),
            ));
        }
        Ok(CentralExt {
            p: level.p,
            total: level.total.clone(),
            base: level.base.clone(),
            projection: level.projection.clone(),
            center_gen: level.kernel_element(&[1]),
        })
    }

    /// Elements of `total` over `b`.
    pub fn fiber(&self, b: u32) -> Vec<u32> {
        let s = (0..self.total.order() as u32)
            .find(|&x| self.projection[x as usize] == b)
            .expect("surjective projection");
        (0..self.p as i64)
            .map(|k| self.total.mul(s, self.total.pow(self.center_gen, k)))
            .collect()
    }
}

/// One central extension per line of `H^2(G, F_p)`, in lexicographic order
/// of normalized class coordinates.
pub fn enumerate_schur_quotients(
    g: Arc<FiniteGroup>,
    pres: &Presentation,
    p: u32,
) -> Result<Vec<CentralExt>> {
    if !g.is_p_perfect(p) {
        return Err(Error::NotPPerfect(p));
    }
    let m = GModule::trivial(g.clone(), crate::linalg::Fp::new(p), 1);
    let h2 = h2_classes(pres, &m)?;
    let f = m.field;
    let mut out = Vec::new();
    for idx in 1..(p as usize).pow(h2.dim as u32) {
        let coeffs = index_to_vec(idx, p, h2.dim);
        if coeffs.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut tail = vec![0u8; pres.relators.len()];
        for (c, b) in coeffs.iter().zip(&h2.basis) {
            for (x, &y) in tail.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*c, y));
            }
        }
        out.push(CentralExt::from_level(&build_extension(pres, &m, &tail)?)?);
    }
    Ok(out)
}

/// The pullback `M̂_D` of `M_k = ker(G_{k+1} -> G_k)` in `R_D -> G_{k+1}`.
#[derive(Debug, Clone)]
pub struct SchurSlice<'a> {
    pub level: &'a FrattiniLevel,
    pub ext: &'a CentralExt,
    /// One lift to `R_D` of each kernel element, by coordinate index.
    pub lifts: Vec<u32>,
    /// Sorted elements of `M̂_D`.
    pub elements: Vec<u32>,
}

impl<'a> SchurSlice<'a> {
    pub fn new(level: &'a FrattiniLevel, ext: &'a CentralExt) -> Result<SchurSlice<'a>> {
        if ext.base.order() != level.total.order() || ext.p != level.p {
            return Err(Error::IncompatibleLevels(
                "the central extension does not sit over the level".into(),
            ));
        }
        let mut first = vec![u32::MAX; level.total.order()];
        for x in (0..ext.total.order() as u32).rev() {
            first[ext.projection[x as usize] as usize] = x;
        }
        let lifts: Vec<u32> = level
            .kernel_elements
            .iter()
            .map(|&k| first[k as usize])
            .collect();
        let mut elements: Vec<u32> = (0..ext.total.order() as u32)
            .filter(|&x| level.kernel_vector(ext.projection[x as usize]).is_some())
            .collect();
        elements.sort_unstable();
        Ok(SchurSlice {
            level,
            ext,
            lifts,
            elements,
        })
    }

    pub fn dim(&self) -> usize {
        self.level.kernel_dim()
    }

    fn lift(&self, v: &[u8]) -> u32 {
        self.lifts[vec_to_index(v, self.level.p)]
    }

    /// `m̂^p` as a power of the central generator.
    pub fn pth_power(&self, v: &[u8]) -> u32 {
        let r = &self.ext.total;
        let x = r.pow(self.lift(v), self.level.p as i64);
        (0..self.level.p)
            .find(|&k| r.pow(self.ext.center_gen, k as i64) == x)
            .expect("p-th powers of kernel lifts are central")
    }

    /// `m̂^p` is the same for every lift of every `m`.
    pub fn pth_power_well_defined(&self) -> bool {
        let r = &self.ext.total;
        let p = self.level.p as i64;
        self.lifts.iter().all(|&x| {
            let want = r.pow(x, p);
            (0..p).all(|k| r.pow(r.mul(x, r.pow(self.ext.center_gen, k)), p) == want)
        })
    }

    pub fn is_abelian(&self) -> bool {
        let r = &self.ext.total;
        self.lifts
            .iter()
            .all(|&a| self.lifts.iter().all(|&b| r.mul(a, b) == r.mul(b, a)))
    }
}

/// `V_D`: kernel elements (by coordinate index) whose lifts have order dividing `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VDSet {
    pub members: Vec<usize>,
    pub is_submodule: bool,
}

impl VDSet {
    pub fn contains(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }
}

pub fn vd_set(slice: &SchurSlice) -> VDSet {
    let p = slice.level.p;
    let n = slice.dim();
    let members: Vec<usize> = (0..(p as usize).pow(n as u32))
        .filter(|&i| slice.pth_power(&index_to_vec(i, p, n)) == 0)
        .collect();
    let vecs: Vec<Vec<u8>> = members.iter().map(|&i| index_to_vec(i, p, n)).collect();
    let span = Subspace::span(slice.level.kernel_module.field, n, &vecs);
    let is_submodule =
        span.elements().len() == members.len() && slice.level.kernel_module.is_submodule(&span);
    VDSet {
        members,
        is_submodule,
    }
}

/// Isomorphism types of groups generated by two lifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum P3Type {
    Klein4,
    D4,
    Q8,
    Z4xZ2,
    ElemAbelian,
    Up,
    HpWp,
    Zp2xZp,
}

/// Type of `⟨m̂_1, m̂_2⟩` from its order, commutativity, exponent and
/// number of elements of order `p`.
pub fn classify_pair(slice: &SchurSlice, m1: &[u8], m2: &[u8]) -> Result<P3Type> {
    let p = slice.level.p;
    let f = slice.level.kernel_module.field;
    if Subspace::span(f, slice.dim(), &[m1.to_vec(), m2.to_vec()]).dim() != 2 {
        return Err(Error::RankDeficient);
    }
    let r = &slice.ext.total;
    let (a, b) = (slice.lift(m1), slice.lift(m2));
    let sub = r.closure(&[a, b]);
    let abelian = r.mul(a, b) == r.mul(b, a);
    let exponent_p = sub.iter().all(|&x| r.pow(x, p as i64) == 0);
    let order_p = sub
        .iter()
        .filter(|&&x| x != 0 && r.pow(x, p as i64) == 0)
        .count();
    let q = p as usize;
    let t = match (sub.len() == q * q, abelian, exponent_p, p == 2) {
        (true, _, _, true) => P3Type::Klein4,
        (true, _, _, false) => P3Type::ElemAbelian,
        (false, true, true, _) => P3Type::ElemAbelian,
        (false, true, false, true) => P3Type::Z4xZ2,
        (false, true, false, false) => P3Type::Zp2xZp,
        (false, false, true, false) => P3Type::HpWp,
        (false, false, false, false) => P3Type::Up,
        (false, false, _, true) if order_p == 1 => P3Type::Q8,
        (false, false, _, true) => P3Type::D4,
    };
    Ok(t)
}

/// Whether a pair type is allowed for the given `V_D` memberships. For
/// `p = 2` the nonabelian group of order 8 with a noncentral involution,
/// `U_2`, is `D4`.
pub fn pair_type_allowed(t: P3Type, p: u32, m1_in_vd: bool, m2_in_vd: bool) -> bool {
    use P3Type::*;
    match (m1_in_vd, m2_in_vd, p == 2) {
        (true, true, true) => matches!(t, Klein4 | D4),
        (true, true, false) => matches!(t, ElemAbelian | Up | HpWp),
        (false, false, true) => matches!(t, Z4xZ2 | Zp2xZp | Q8),
        (false, false, false) => matches!(t, Zp2xZp | Up),
        (_, _, true) => matches!(t, Z4xZ2 | D4),
        _ => matches!(t, Zp2xZp | Up),
    }
}

/// Census of pair types over all independent pairs `m_1 < m_2` (by index).
pub fn pair_census(slice: &SchurSlice, vd: &VDSet) -> Result<BTreeMap<String, usize>> {
    let p = slice.level.p;
    let n = slice.dim();
    let size = (p as usize).pow(n as u32);
    let mut census = BTreeMap::new();
    for i in 1..size {
        for j in (i + 1)..size {
            let (a, b) = (index_to_vec(i, p, n), index_to_vec(j, p, n));
            match classify_pair(slice, &a, &b) {
                Ok(t) => {
                    if !pair_type_allowed(t, p, vd.contains(i), vd.contains(j)) {
                        return Err(Error::InvariantViolation(format!(
                            "pair type {t:?} outside the allowed list"
                        )));
                    }
                    let both_outside = !vd.contains(i) && !vd.contains(j);
                    if both_outside
                        && span_meets_vd0(slice, vd, &a, &b)
                        && !matches!(t, P3Type::Z4xZ2 | P3Type::Zp2xZp)
                    {
                        return Err(Error::InvariantViolation(format!(
                            "pair type {t:?} where Z/p^2 x Z/p is forced"
                        )));
                    }
                    *census.entry(format!("{t:?}")).or_insert(0) += 1;
                }
                Err(Error::RankDeficient) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(census)
}

fn span_meets_vd0(slice: &SchurSlice, vd: &VDSet, a: &[u8], b: &[u8]) -> bool {
    let p = slice.level.p;
    let span = Subspace::span(
        slice.level.kernel_module.field,
        slice.dim(),
        &[a.to_vec(), b.to_vec()],
    );
    span.elements()
        .iter()
        .any(|v| v.iter().any(|&c| c != 0) && vd.contains(vec_to_index(v, p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Modassume {
    /// Every rank-two span of two elements outside `V_D` meets `V_D^0`.
    pub a: bool,
    /// The elements outside `V_D` span `M_k`.
    pub b: bool,
    /// `V_D` is a submodule.
    pub c: bool,
}

pub fn check_modassume(slice: &SchurSlice, vd: &VDSet) -> Modassume {
    let p = slice.level.p;
    let n = slice.dim();
    let f = slice.level.kernel_module.field;
    let size = (p as usize).pow(n as u32);
    let outside: Vec<usize> = (0..size).filter(|&i| !vd.contains(i)).collect();
    let a = outside.iter().all(|&i| {
        outside.iter().all(|&j| {
            let (x, y) = (index_to_vec(i, p, n), index_to_vec(j, p, n));
            Subspace::span(f, n, &[x.clone(), y.clone()]).dim() < 2
                || span_meets_vd0(slice, vd, &x, &y)
        })
    });
    let outside_vecs: Vec<Vec<u8>> = outside.iter().map(|&i| index_to_vec(i, p, n)).collect();
    let b = Subspace::span(f, n, &outside_vecs).dim() == n;
    Modassume {
        a,
        b,
        c: vd.is_submodule,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianWitness {
    /// The least element outside `V_D`.
    pub alpha: Vec<u8>,
    pub abelian: bool,
    /// Invariant factors of `M̂_D` when it is abelian.
    pub invariants: Option<Vec<usize>>,
}

pub fn abelian_test(slice: &SchurSlice, vd: &VDSet) -> Result<AbelianWitness> {
    let p = slice.level.p;
    let n = slice.dim();
    let alpha = (0..(p as usize).pow(n as u32))
        .find(|&i| !vd.contains(i))
        .ok_or(Error::NoAlpha)?;
    let abelian = slice.is_abelian();
    let invariants = if abelian {
        Some(abelian_p_invariants(
            &quotient_group(&slice.ext.total, &slice.elements, &[0])?,
            p,
        ))
    } else {
        None
    };
    Ok(AbelianWitness {
        alpha: index_to_vec(alpha, p, n),
        abelian,
        invariants,
    })
}

/// Checks the implications `(a) ∧ (b) ⇒ abelian ⇒ (c)`, the covering
/// `∪ V_D α^j = M_k` under `(a) ∧ (b)`, and for `p = 2`,
/// `(a) ∧ (c) ⇒ abelian`.
pub fn implication_chain(
    slice: &SchurSlice,
    vd: &VDSet,
    flags: Modassume,
    w: &AbelianWitness,
) -> bool {
    let p = slice.level.p;
    let n = slice.dim();
    let f = slice.level.kernel_module.field;
    let mut ok = true;
    if flags.a && flags.b {
        ok &= w.abelian && flags.c;
        let covered = (0..(p as usize).pow(n as u32)).all(|i| {
            let v = index_to_vec(i, p, n);
            (0..p as u8).any(|j| {
                let shifted: Vec<u8> = v
                    .iter()
                    .zip(&w.alpha)
                    .map(|(&x, &a)| f.sub(x, f.mul(j, a)))
                    .collect();
                vd.contains(vec_to_index(&shifted, p))
            })
        });
        ok &= covered;
    }
    if w.abelian {
        ok &= flags.c;
    }
    if p == 2 && flags.a && flags.c {
        ok &= w.abelian;
    }
    ok
}

/// Lifts of the socle of `M_k` that have order dividing `p`.
pub fn socle_lifts_order_p(slice: &SchurSlice) -> Result<bool> {
    let s = socle(&slice.level.kernel_module)?;
    Ok(s.elements().iter().all(|v| slice.pth_power(v) == 0))
}

/// The quotient of `M̂_D` by a normal lift of the socle of `M_k`, when the
/// socle lifts to an elementary abelian group; returned as a group of
/// order `p · |M_k / soc|`. The lift is a complement to the center inside
/// the socle pullback, normal in the whole extension when possible and
/// otherwise normal in `M̂_D`.
pub fn top_quotient(slice: &SchurSlice) -> Result<Option<FiniteGroup>> {
    let r = &slice.ext.total;
    let p = slice.level.p;
    let soc = socle(&slice.level.kernel_module)?;
    let soc_elems: Vec<u32> = soc.elements().iter().map(|v| slice.lift(v)).collect();
    let gens: Vec<u32> = soc.basis.iter().map(|v| slice.lift(v)).collect();
    let center = r.closure(&[slice.ext.center_gen]);
    let pull = r.closure(&[gens.clone(), vec![slice.ext.center_gen]].concat());
    if pull.len() != soc_elems.len() * p as usize || pull.iter().any(|&x| r.pow(x, p as i64) != 0) {
        return Ok(None);
    }
    // Complements are spanned by basis lifts twisted by central powers.
    let k = gens.len();
    let complements: Vec<(Vec<u32>, Vec<u32>)> = (0..(p as usize).pow(k as u32))
        .filter_map(|idx| {
            let twist = index_to_vec(idx, p, k);
            let cgens: Vec<u32> = gens
                .iter()
                .zip(&twist)
                .map(|(&g, &t)| r.mul(g, r.pow(slice.ext.center_gen, t as i64)))
                .collect();
            let comp = r.closure(&cgens);
            let meets_center = comp
                .iter()
                .any(|x| *x != 0 && center.binary_search(x).is_ok());
            (comp.len() == soc_elems.len() && !meets_center).then_some((cgens, comp))
        })
        .collect();
    let stable = |by: &[u32], cgens: &[u32], comp: &[u32]| {
        by.iter().all(|&s| {
            cgens
                .iter()
                .all(|&c| comp.binary_search(&r.conj(c, s)).is_ok())
        })
    };
    let chosen = complements
        .iter()
        .find(|(c, comp)| stable(r.generators(), c, comp))
        .or_else(|| {
            complements
                .iter()
                .find(|(c, comp)| stable(&slice.lifts, c, comp))
        });
    match chosen {
        Some((_, comp)) => Ok(Some(quotient_group(r, &slice.elements, comp)?)),
        None => Ok(None),
    }
}

/// `sub / normal` as a group in its right regular action on cosets.
pub fn quotient_group(g: &FiniteGroup, sub: &[u32], normal: &[u32]) -> Result<FiniteGroup> {
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for &x in sub {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &n in normal {
            coset_of[g.mul(n, x) as usize] = c;
        }
    }
    let gens = g.small_generating_set(sub);
    let mut action = Vec::with_capacity(reps.len() * gens.len());
    for &x in &reps {
        for &s in &gens {
            action.push(coset_of[g.mul(x, s) as usize]);
        }
    }
    FiniteGroup::from_right_action(reps.len(), gens.len(), &action)
}

/// Invariant factors of an abelian `p`-group, largest first, from the
/// counts of elements killed by `p^i`.
pub fn abelian_p_invariants(g: &FiniteGroup, p: u32) -> Vec<usize> {
    let log = |n: usize| (n as f64).log(p as f64).round() as usize;
    let mut ranks = Vec::new();
    let mut q = 1i64;
    loop {
        q *= p as i64;
        let killed = (0..g.order() as u32).filter(|&x| g.pow(x, q) == 0).count();
        ranks.push(log(killed));
        if killed == g.order() {
            break;
        }
    }
    // ranks[i] = Σ_j min(e_j, i+1); the number of factors with e_j > i is the jump.
    let mut above: Vec<usize> = Vec::new();
    let mut prev = 0;
    for &r in &ranks {
        above.push(r - prev);
        prev = r;
    }
    let mut out = Vec::new();
    for (i, &c) in above.iter().enumerate() {
        let next = above.get(i + 1).copied().unwrap_or(0);
        for _ in 0..c - next {
            out.push((p as usize).pow(i as u32 + 1));
        }
    }
    out.reverse();
    out
}

/// Names for the small `p`-groups that arise as top quotients.
pub fn small_group_name(g: &FiniteGroup, p: u32) -> String {
    if g.is_abelian() {
        let inv = abelian_p_invariants(g, p);
        if inv.is_empty() {
            return "1".into();
        }
        return inv
            .iter()
            .map(|n| format!("Z/{n}"))
            .collect::<Vec<_>>()
            .join("+");
    }
    let involutions = (1..g.order() as u32)
        .filter(|&x| g.element_order(x) == 2)
        .count();
    let exponent = (0..g.order() as u32)
        .map(|x| g.element_order(x))
        .max()
        .unwrap_or(1);
    match (g.order(), exponent, involutions) {
        (8, 4, 1) => "Q8".into(),
        (8, 4, 5) => "D4".into(),
        (16, 4, 3) => "Q8+Z/2".into(),
        (16, 4, 7) => "Q8.Z/4".into(),
        (16, 4, 11) => "D4+Z/2".into(),
        (n, e, i) => format!("order {n} exponent {e} involutions {i}"),
    }
}

/// Whether the Schur quotient `prev` one level down (a central extension of
/// `G_k`) is antecedent to `slice`'s extension: with `ψ: M_k -> Z/p`
/// induced by the lift `G_{k+1} -> R_prev`, `ψ` is nonzero and its kernel
/// is exactly `V_D`.
pub fn antecedent_test(slice: &SchurSlice, vd: &VDSet, prev: &CentralExt) -> Result<bool> {
    let level = slice.level;
    let (top, base) = (&level.total, &level.base);
    if prev.base.order() != base.order()
        || prev.base.generators() != base.generators()
        || prev.p != level.p
    {
        return Err(Error::IncompatibleLevels(
            "the earlier extension is not over the lower group".into(),
        ));
    }
    let fibers: Vec<Vec<u32>> = top
        .generators()
        .iter()
        .map(|&x| prev.fiber(level.projection[x as usize]))
        .collect();
    let p = level.p as usize;
    let choices = p.pow(fibers.len() as u32);
    let phi = (0..choices)
        .find_map(|mut idx| {
            let images: Vec<u32> = fibers
                .iter()
                .map(|f| {
                    let x = f[idx % p];
                    idx /= p;
                    x
                })
                .collect();
            top.hom_from_gen_images(&prev.total, &images).ok()
        })
        .ok_or_else(|| {
            Error::IncompatibleLevels(
                "the upper group does not map onto the earlier extension".into(),
            )
        })?;
    let r = &prev.total;
    let n = slice.dim();
    let mut nonzero = false;
    for i in 0..p.pow(n as u32) {
        let v = index_to_vec(i, level.p, n);
        let img = phi[level.kernel_element(&v) as usize];
        let trivial = img == 0;
        if !trivial && (0..p as i64).all(|k| r.pow(prev.center_gen, k) != img) {
            return Err(Error::IncompatibleLevels(
                "the kernel does not map into the center".into(),
            ));
        }
        nonzero |= !trivial;
        if trivial != vd.contains(i) {
            return Ok(false);
        }
    }
    Ok(nonzero)
}

/// Per-quotient summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchurReport {
    pub kernel_gen: u32,
    pub vd_size: usize,
    pub modassume: [bool; 3],
    pub abelian: bool,
    pub invariants: Option<Vec<usize>>,
    pub top_type: Option<String>,
    pub socle_lifts_order_p: bool,
    pub p3_census: BTreeMap<String, usize>,
    pub antecedent_of: Vec<usize>,
}

/// Analyse every quotient over `level`; `earlier` are the Schur quotients
/// of the lower group, tested as antecedents.
pub fn schur_reports(
    level: &FrattiniLevel,
    quotients: &[CentralExt],
    earlier: &[CentralExt],
) -> Result<Vec<SchurReport>> {
    quotients
        .iter()
        .map(|e| {
            let slice = SchurSlice::new(level, e)?;
            if !slice.pth_power_well_defined() {
                return Err(Error::InvariantViolation(
                    "p-th powers depend on the lift".into(),
                ));
            }
            let vd = vd_set(&slice);
            let flags = check_modassume(&slice, &vd);
            let w = abelian_test(&slice, &vd)?;
            if !implication_chain(&slice, &vd, flags, &w) {
                return Err(Error::InvariantViolation(
                    "modassume implications fail".into(),
                ));
            }
            let antecedent_of = earlier
                .iter()
                .enumerate()
                .filter_map(|(i, prev)| match antecedent_test(&slice, &vd, prev) {
                    Ok(true) => Some(Ok(i)),
                    Ok(false) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SchurReport {
                kernel_gen: e.center_gen,
                vd_size: vd.members.len(),
                modassume: [flags.a, flags.b, flags.c],
                abelian: w.abelian,
                invariants: w.invariants,
                top_type: top_quotient(&slice)?.map(|q| small_group_name(&q, level.p)),
                socle_lifts_order_p: socle_lifts_order_p(&slice)?,
                p3_census: pair_census(&slice, &vd)?,
                antecedent_of,
            })
        })
        .collect()
}
