//! Submodule structure of small modules: socles and radicals by spinning
//! vectors, radical layers with labelled simple constituents, endomorphism
//! idempotents and Fitting decompositions.

use crate::error::{Error, Result};
use crate::linalg::{index_to_vec, Matrix, Subspace};
use crate::module::{GModule, ModuleMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Vector enumeration is refused beyond this many vectors.
pub const MAX_ENUMERATED_VECTORS: usize = 1 << 20;

/// A simple module identified by its dimension and its traces on the
/// representatives of the `p'` classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleLabel {
    pub dim: usize,
    pub trivial: bool,
    pub fingerprint: Vec<u8>,
}

impl SimpleLabel {
    pub fn of(m: &GModule) -> SimpleLabel {
        let g = m.group();
        let fingerprint = g
            .conjugacy_classes()
            .iter()
            .filter(|c| c.element_order % m.p() != 0)
            .map(|c| m.matrix(c.representative).trace())
            .collect();
        SimpleLabel {
            dim: m.dim,
            trivial: m.dim == 1 && m.is_trivial_action(),
            fingerprint,
        }
    }
}

/// Radical layers, head first: `layers[j]` lists the simple constituents of
/// `rad^j M / rad^{j+1} M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoewyData {
    pub layers: Vec<Vec<SimpleLabel>>,
    /// `(j, top, bottom)`: a cyclic subquotient of `rad^j M / rad^{j+2} M`
    /// with simple head `top` has `bottom` in its radical.
    pub arrows: Vec<(usize, SimpleLabel, SimpleLabel)>,
    pub names: Vec<(SimpleLabel, String)>,
}

impl LoewyData {
    pub fn name(&self, l: &SimpleLabel) -> &str {
        self.names
            .iter()
            .find(|(k, _)| k == l)
            .map(|(_, n)| n.as_str())
            .unwrap_or("?")
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers
            .iter()
            .map(|l| l.iter().map(|s| s.dim).sum())
            .collect()
    }

    /// Constituent names per layer, larger constituents first.
    pub fn layer_names(&self) -> Vec<Vec<String>> {
        self.layers
            .iter()
            .map(|l| {
                let mut sorted: Vec<&SimpleLabel> = l.iter().collect();
                sorted.sort_by(|a, b| {
                    b.dim
                        .cmp(&a.dim)
                        .then_with(|| self.name(a).cmp(self.name(b)))
                });
                sorted
                    .into_iter()
                    .map(|s| self.name(s).to_string())
                    .collect()
            })
            .collect()
    }

    /// Socle layer first, each layer's constituents joined by ` ⊕ `, layers
    /// joined by ` → `; for example `2a → 2a ⊕ 1`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .layer_names()
            .iter()
            .rev()
            .map(|l| l.join(" ⊕ "))
            .collect();
        parts.join(" → ")
    }
}

impl fmt::Display for LoewyData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

fn check_size(m: &GModule) -> Result<()> {
    let too_large = (m.dim as f64) * (m.p() as f64).log2() > (MAX_ENUMERATED_VECTORS as f64).log2();
    if too_large {
        return Err(Error::TooLarge {
            dim: m.dim,
            p: m.p(),
        });
    }
    Ok(())
}

/// All distinct simple submodules.
pub fn simple_submodules(m: &GModule) -> Result<Vec<Subspace>> {
    check_size(m)?;
    let p = m.p();
    let mut cyclic: HashSet<Vec<Vec<u8>>> = HashSet::new();
    let mut spins = Vec::new();
    for idx in 1..m.size() {
        let v = index_to_vec(idx, p, m.dim);
        let s = m.spin(&[v]);
        if cyclic.insert(s.basis.clone()) {
            spins.push(s);
        }
    }
    spins.sort_by_key(|s| (s.dim(), s.basis.clone()));
    let mut simples: Vec<Subspace> = Vec::new();
    for s in spins {
        // A cyclic submodule is simple when it contains no smaller simple one.
        if !simples
            .iter()
            .any(|t| t.dim() < s.dim() && s.contains_space(t))
        {
            simples.push(s);
        }
    }
    Ok(simples)
}

pub fn socle(m: &GModule) -> Result<Subspace> {
    let mut soc = Subspace::zero(m.field, m.dim);
    for s in simple_submodules(m)? {
        soc = soc.sum(&s);
    }
    Ok(soc)
}

/// `rad M`, the annihilator of `soc(M*)`.
pub fn radical(m: &GModule) -> Result<Subspace> {
    Ok(socle(&m.dual())?.annihilator())
}

pub fn is_simple(m: &GModule) -> Result<bool> {
    if m.dim == 0 {
        return Ok(false);
    }
    check_size(m)?;
    Ok((1..m.size()).all(|idx| m.spin(&[index_to_vec(idx, m.p(), m.dim)]).dim() == m.dim))
}

/// Map coordinates of a submodule back into the ambient space.
fn lift(sub: &Subspace, coords: &[u8]) -> Vec<u8> {
    let f = sub.field;
    let mut v = vec![0u8; sub.ambient];
    for (c, b) in coords.iter().zip(&sub.basis) {
        if *c != 0 {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(*c, y));
            }
        }
    }
    v
}

/// Radical series `M = R_0 ⊋ R_1 ⊋ ... ⊋ R_l = 0` as ambient subspaces.
pub fn radical_series(m: &GModule) -> Result<Vec<Subspace>> {
    let mut series = vec![Subspace::full(m.field, m.dim)];
    loop {
        let cur = series.last().unwrap().clone();
        if cur.dim() == 0 {
            break;
        }
        let sub = m.submodule(&cur)?;
        let r = radical(&sub)?;
        let ambient: Vec<Vec<u8>> = r.basis.iter().map(|c| lift(&cur, c)).collect();
        series.push(Subspace::span(m.field, m.dim, &ambient));
    }
    Ok(series)
}

/// Labels of the composition factors, sorted.
pub fn composition_factors(m: &GModule) -> Result<Vec<SimpleLabel>> {
    let mut out = Vec::new();
    let mut cur = m.clone();
    while cur.dim > 0 {
        let s = simple_submodules(&cur)?
            .into_iter()
            .next()
            .expect("nonzero module has a simple submodule");
        out.push(SimpleLabel::of(&cur.submodule(&s)?));
        cur = cur.quotient(&s)?;
    }
    out.sort();
    Ok(out)
}

/// Radical layers with labelled constituents and the arrows between
/// consecutive layers.
pub fn loewy_layers(m: &GModule) -> Result<LoewyData> {
    let series = radical_series(m)?;
    let mut layers = Vec::new();
    for w in series.windows(2) {
        let top = m.submodule(&w[0])?;
        let inner: Vec<Vec<u8>> = w[1].basis.iter().map(|b| w[0].coordinates(b)).collect();
        let inner = Subspace::span(m.field, w[0].dim(), &inner);
        layers.push(composition_factors(&top.quotient(&inner)?)?);
    }
    let mut arrows = Vec::new();
    for j in 0..series.len().saturating_sub(2) {
        arrows.extend(
            layer_arrows(m, &series[j], &series[j + 1], &series[j + 2])?
                .into_iter()
                .map(|(a, b)| (j, a, b)),
        );
    }
    let mut distinct: Vec<SimpleLabel> = layers.iter().flatten().cloned().collect();
    distinct.sort();
    distinct.dedup();
    let mut names = Vec::new();
    for l in &distinct {
        let name = if l.trivial {
            "1".to_string()
        } else {
            let k = names
                .iter()
                .filter(|(o, _): &&(SimpleLabel, String)| o.dim == l.dim && !o.trivial)
                .count();
            format!("{}{}", l.dim, (b'a' + k as u8) as char)
        };
        names.push((l.clone(), name));
    }
    Ok(LoewyData {
        layers,
        arrows,
        names,
    })
}

fn layer_arrows(
    m: &GModule,
    r0: &Subspace,
    r1: &Subspace,
    r2: &Subspace,
) -> Result<Vec<(SimpleLabel, SimpleLabel)>> {
    // Work in Q = R0 / R2 with radical R1 / R2.
    let top = m.submodule(r0)?;
    let coords = |s: &Subspace| -> Subspace {
        let vs: Vec<Vec<u8>> = s.basis.iter().map(|b| r0.coordinates(b)).collect();
        Subspace::span(m.field, r0.dim(), &vs)
    };
    let k2 = coords(r2);
    let q = top.quotient(&k2)?;
    let free = top.quotient_positions(&k2);
    let rad_q: Vec<Vec<u8>> = coords(r1)
        .basis
        .iter()
        .map(|b| free.iter().map(|&c| k2.reduce(b)[c]).collect())
        .collect();
    let rad_q = Subspace::span(m.field, q.dim, &rad_q);
    check_size(&q)?;
    let mut seen: HashSet<Vec<Vec<u8>>> = HashSet::new();
    let mut arrows = Vec::new();
    for idx in 1..q.size() {
        let v = index_to_vec(idx, q.p(), q.dim);
        if rad_q.contains(&v) {
            continue;
        }
        let s = q.spin(&[v]);
        if !seen.insert(s.basis.clone()) {
            continue;
        }
        let below = s.intersection(&rad_q);
        let sub = q.submodule(&s)?;
        let below_coords: Vec<Vec<u8>> = below.basis.iter().map(|b| s.coordinates(b)).collect();
        let below_in_s = Subspace::span(m.field, s.dim(), &below_coords);
        let head = sub.quotient(&below_in_s)?;
        if !is_simple(&head)? || below.dim() == 0 {
            continue;
        }
        let head_label = SimpleLabel::of(&head);
        for b in composition_factors(&sub.submodule(&below_in_s)?)? {
            let arrow = (head_label.clone(), b);
            if !arrows.contains(&arrow) {
                arrows.push(arrow);
            }
        }
    }
    arrows.sort();
    Ok(arrows)
}

/// Kernel and image of `e^N` once they stop changing.
pub fn fitting_decompose(m: &GModule, e: &ModuleMap) -> (Subspace, Subspace) {
    let mut power = e.matrix.clone();
    let mut rank = power.rank();
    loop {
        let next = power.mul(&e.matrix);
        let r = next.rank();
        power = next;
        if r == rank {
            break;
        }
        rank = r;
    }
    let kernel = Subspace::span(m.field, m.dim, &power.left_kernel());
    let image = Subspace::span(m.field, m.dim, &power.row_vecs());
    (kernel, image)
}

fn combine(basis: &[Matrix], coeffs: &[u8], n: usize, field: crate::linalg::Fp) -> Matrix {
    let mut acc = Matrix::zeros(field, n, n);
    for (c, b) in coeffs.iter().zip(basis) {
        if *c != 0 {
            acc = acc.add(&b.scale(*c));
        }
    }
    acc
}

/// A direct-sum splitting `M = A ⊕ B` into nonzero submodules, if one exists.
///
/// The endomorphism algebra is searched exhaustively for idempotents when it
/// has at most `2^20` elements. Larger algebras are probed with Fitting
/// decompositions of `f(phi)` for seeded random endomorphisms `phi` and all
/// monic `f` of degree at most 2; for an indecomposable module every
/// endomorphism is nilpotent or invertible, so no false splitting can occur.
pub fn find_splitting(m: &GModule) -> Option<(Subspace, Subspace)> {
    if m.dim <= 1 {
        return None;
    }
    let basis = m.endomorphisms();
    let p = m.p();
    let n = m.dim;
    let bits = basis.len() as f64 * (p as f64).log2();
    if bits <= 20.0 {
        let total = (p as usize).pow(basis.len() as u32);
        for idx in 1..total {
            let e = combine(&basis, &index_to_vec(idx, p, basis.len()), n, m.field);
            if e.mul(&e) == e && !e.is_identity() {
                let (k, i) = fitting_decompose(m, &ModuleMap { matrix: e });
                return Some((i, k));
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xf177);
    let id = Matrix::identity(m.field, n);
    for _ in 0..64 {
        let coeffs: Vec<u8> = (0..basis.len())
            .map(|_| rng.gen_range(0..p) as u8)
            .collect();
        let phi = combine(&basis, &coeffs, n, m.field);
        let phi2 = phi.mul(&phi);
        for a in 0..p as u8 {
            for b in 0..p as u8 {
                for deg2 in [false, true] {
                    if !deg2 && a != 0 {
                        continue;
                    }
                    // f(x) = x - b, or x^2 + a x + b.
                    let f = if deg2 {
                        phi2.add(&phi.scale(a)).add(&id.scale(b))
                    } else {
                        phi.sub(&id.scale(b))
                    };
                    let (k, i) = fitting_decompose(m, &ModuleMap { matrix: f });
                    if k.dim() > 0 && i.dim() > 0 {
                        return Some((i, k));
                    }
                }
            }
        }
    }
    None
}

pub fn is_indecomposable(m: &GModule) -> bool {
    m.dim > 0 && find_splitting(m).is_none()
}

/// Decompose into indecomposable summands, returned as ambient subspaces
/// sorted by (dimension, basis).
pub fn decompose(m: &GModule) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    let mut stack = vec![Subspace::full(m.field, m.dim)];
    while let Some(s) = stack.pop() {
        let sub = m.submodule(&s)?;
        match find_splitting(&sub) {
            None => out.push(s),
            Some((a, b)) => {
                for part in [a, b] {
                    let ambient: Vec<Vec<u8>> = part.basis.iter().map(|c| lift(&s, c)).collect();
                    stack.push(Subspace::span(m.field, m.dim, &ambient));
                }
            }
        }
    }
    out.sort_by_key(|s| (s.dim(), s.basis.clone()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::linalg::Fp;
    use std::sync::Arc;

    fn perm_module(g: Arc<crate::FiniteGroup>, p: u32) -> GModule {
        let f = Fp::new(p);
        let mats = g
            .generator_perms()
            .unwrap()
            .iter()
            .map(|q| {
                let n = q.degree();
                let mut m = Matrix::zeros(f, n, n);
                for i in 0..n {
                    m.set(i, q.image(i as u32) as usize, 1);
                }
                m
            })
            .collect();
        GModule::new(g, f, mats).unwrap()
    }

    #[test]
    fn trivial_module_single_layer() {
        let g = Arc::new(builtin::a4().group().unwrap());
        let one = GModule::trivial(g, Fp::new(2), 1);
        let l = loewy_layers(&one).unwrap();
        assert_eq!(l.display(), "1");
    }

    #[test]
    fn permutation_module_of_a4_over_f2() {
        // F_2^4 with A_4 permuting coordinates is uniserial 1 / 2 / 1.
        let g = Arc::new(builtin::a4().group().unwrap());
        let m = perm_module(g, 2);
        let l = loewy_layers(&m).unwrap();
        assert_eq!(l.layer_dims(), vec![1, 2, 1]);
        assert_eq!(l.display(), "1 → 2a → 1");
        assert!(is_indecomposable(&m));
    }

    #[test]
    fn decomposable_sum() {
        let g = Arc::new(builtin::a5().group().unwrap());
        // Over F_3 the 5-point permutation module is 1 ⊕ 4.
        let m = perm_module(g, 3);
        let parts = decompose(&m).unwrap();
        assert_eq!(
            parts.iter().map(|s| s.dim()).collect::<Vec<_>>(),
            vec![1, 4]
        );
    }

    #[test]
    fn fitting_of_nilpotent() {
        let g = Arc::new(builtin::a4().group().unwrap());
        let m = GModule::trivial(g, Fp::new(2), 2);
        let e = ModuleMap {
            matrix: Matrix::from_rows(m.field, 2, &[vec![0, 1], vec![0, 0]]),
        };
        let (k, i) = fitting_decompose(&m, &e);
        assert_eq!((k.dim(), i.dim()), (2, 0));
    }
}
