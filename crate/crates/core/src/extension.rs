//! Extensions of a finite group by a module, parametrized by relator tails.
//!
//! For a presentation `<x | r>` of `G` and an `F_p[G]`-module `M`, an
//! extension is described on `G × M` by
//! `(g, m) x̂_i = (g x_i, c(g, i) + m A_i)`, with `c` vanishing on the BFS
//! tree of `G`. Each relator must then act as a translation by its tail
//! `t_r ∈ M`. Solving these linear conditions gives the space of valid tails;
//! modulo the image of the Fox Jacobian it is `H^2(G, M)`. The resulting
//! multiplication is `(g, m)(h, m') = (gh, m^h + m' + α(g, h))`.

use crate::error::{Error, Result};
use crate::frattini::FrattiniLevel;
use crate::group::FiniteGroup;
use crate::linalg::{index_to_vec, vec_to_index, Fp, IncrementalEchelon, Matrix, Subspace};
use crate::module::GModule;
use crate::presentation::{commutator_word, concat, invert_word, word_pow, Presentation, Word};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A sparse linear form over the unknowns.
type Form = Vec<(u32, u8)>;

fn form_axpy(field: Fp, a: u8, x: &Form, y: &Form) -> Form {
    // a * x + y, both sorted by variable.
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            let v = field.mul(a, x[i].1);
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
        } else if take_y {
            out.push(y[j]);
            j += 1;
        } else {
            let v = field.add(field.mul(a, x[i].1), y[j].1);
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Layout of the unknowns `c(g, i)` on non-tree edges.
struct Unknowns {
    edge_var: Vec<u32>,
    num_edges: usize,
}

impl Unknowns {
    fn new(g: &FiniteGroup) -> Unknowns {
        let d = g.num_gens();
        let mut edge_var = vec![u32::MAX; g.order() * d];
        let mut count = 0u32;
        for a in 0..g.order() as u32 {
            for i in 0..d {
                let b = g.mul_gen(a, i);
                if b != 0 && g.parent(b) == (a, i as u32) {
                    continue;
                }
                edge_var[a as usize * d + i] = count;
                count += 1;
            }
        }
        Unknowns {
            edge_var,
            num_edges: count as usize,
        }
    }
}

struct Tracer<'a> {
    g: &'a FiniteGroup,
    m: &'a GModule,
    inverses: Vec<Matrix>,
    unknowns: Unknowns,
    identity_action: bool,
}

impl<'a> Tracer<'a> {
    fn new(m: &'a GModule) -> Tracer<'a> {
        let g = m.group().as_ref();
        Tracer {
            g,
            m,
            inverses: m
                .generator_matrices()
                .iter()
                .map(|a| a.inverse().expect("invertible"))
                .collect(),
            unknowns: Unknowns::new(g),
            identity_action: m.is_trivial_action(),
        }
    }

    fn num_c_vars(&self) -> usize {
        self.unknowns.num_edges * self.m.dim
    }

    fn c_forms(&self, a: u32, i: usize) -> Option<Vec<Form>> {
        let e = self.unknowns.edge_var[a as usize * self.g.num_gens() + i];
        (e != u32::MAX).then(|| {
            (0..self.m.dim)
                .map(|k| vec![(e * self.m.dim as u32 + k as u32, 1u8)])
                .collect()
        })
    }

    fn apply(&self, forms: &[Form], a: &Matrix) -> Vec<Form> {
        if self.identity_action {
            return forms.to_vec();
        }
        let f = self.m.field;
        let n = self.m.dim;
        (0..n)
            .map(|k| {
                let mut acc = Form::new();
                for (j, fj) in forms.iter().enumerate() {
                    let coef = a.get(j, k);
                    if coef != 0 && !fj.is_empty() {
                        acc = form_axpy(f, coef, fj, &acc);
                    }
                }
                acc
            })
            .collect()
    }

    /// Forms for the module coordinate reached by tracing `word` from `(g, 0)`.
    fn trace(&self, start: u32, word: &[i32]) -> Vec<Form> {
        let f = self.m.field;
        let n = self.m.dim;
        let mut forms: Vec<Form> = vec![Form::new(); n];
        let mut g = start;
        for &l in word {
            let i = (l.unsigned_abs() - 1) as usize;
            if l > 0 {
                let mut next = self.apply(&forms, &self.m.generator_matrices()[i]);
                if let Some(c) = self.c_forms(g, i) {
                    for k in 0..n {
                        next[k] = form_axpy(f, 1, &c[k], &next[k]);
                    }
                }
                forms = next;
                g = self.g.mul_gen(g, i);
            } else {
                let h = self.g.mul(g, self.g.inv(self.g.generators()[i]));
                if let Some(c) = self.c_forms(h, i) {
                    for k in 0..n {
                        forms[k] = form_axpy(f, f.neg(1), &c[k], &forms[k]);
                    }
                }
                forms = self.apply(&forms, &self.inverses[i]);
                g = h;
            }
        }
        debug_assert_eq!(g, start);
        forms
    }
}

fn check_presentation(pres: &Presentation, g: &FiniteGroup) -> Result<()> {
    if pres.num_gens() != g.num_gens() {
        return Err(Error::DimensionMismatch(
            "presentation and group have different generator counts".into(),
        ));
    }
    if pres.relators.iter().any(|r| g.eval_word(r) != 0) {
        return Err(Error::InvalidInput(
            "a relator is not trivial in the group".into(),
        ));
    }
    Ok(())
}

/// Second cohomology computed from relator tails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Data {
    pub p: u32,
    /// `dim_{F_p} H^2(G, M)`.
    pub dim: usize,
    /// Tails spanning a complement of the coboundaries in the valid tails.
    pub basis: Vec<Vec<u8>>,
    pub valid_dim: usize,
    pub coboundary_dim: usize,
}

impl H2Data {
    /// One tail per cohomology class, in lexicographic order of coefficients
    /// (the zero class first).
    pub fn class_representatives(&self) -> Vec<Vec<u8>> {
        let f = Fp::new(self.p);
        let len = self.basis.first().map(|b| b.len()).unwrap_or(0);
        (0..(self.p as usize).pow(self.dim as u32))
            .map(|idx| {
                let coeffs = index_to_vec(idx, self.p, self.dim);
                let mut t = vec![0u8; len];
                for (c, b) in coeffs.iter().zip(&self.basis) {
                    for (x, &y) in t.iter_mut().zip(b) {
                        *x = f.add(*x, f.mul(*c, y));
                    }
                }
                t
            })
            .collect()
    }
}

/// The valid tails, `H^2(G, M)` and a basis of representatives. The
/// presentation's generators must be the generators of `M`'s group.
pub fn h2_classes(pres: &Presentation, m: &GModule) -> Result<H2Data> {
    let g = m.group().as_ref();
    check_presentation(pres, g)?;
    let n = m.dim;
    let f = m.field;
    let tracer = Tracer::new(m);
    let nc = tracer.num_c_vars();
    let nt = pres.relators.len() * n;
    let mut ech = IncrementalEchelon::new(f, nc + nt);
    for a in 0..g.order() as u32 {
        for (ri, r) in pres.relators.iter().enumerate() {
            let forms = tracer.trace(a, r);
            for (k, form) in forms.into_iter().enumerate() {
                let mut row = form;
                row.push(((nc + ri * n + k) as u32, f.neg(1)));
                ech.insert_sparse(&row);
            }
        }
    }
    let t_rows = ech.rows_from(nc);
    let valid = if t_rows.is_empty() {
        Subspace::full(f, nt)
    } else {
        Subspace::span(f, nt, &Matrix::from_rows(f, nt, &t_rows).right_kernel())
    };
    let fox = m.fox_matrix(pres)?;
    let coboundaries = Subspace::span(f, nt, &fox.row_vecs());
    if !valid.contains_space(&coboundaries) {
        return Err(Error::InvariantViolation(
            "coboundary tails are not valid tails".into(),
        ));
    }
    let mut span = coboundaries.clone();
    let mut basis = Vec::new();
    for b in &valid.basis {
        let reduced = span.reduce(b);
        if span.insert(b) {
            basis.push(coboundaries.reduce(&reduced));
        }
    }
    Ok(H2Data {
        p: f.p(),
        dim: basis.len(),
        basis,
        valid_dim: valid.dim(),
        coboundary_dim: coboundaries.dim(),
    })
}

/// Build the extension of `M`'s group by `M` with relator tails `tail`.
///
/// When the lifted generators `x̂_i` generate the extension, the total group
/// is generated by them alone and carries a presentation on them; otherwise
/// its generators are the `x̂_i` followed by the basis vectors of `M`.
pub fn build_extension(pres: &Presentation, m: &GModule, tail: &[u8]) -> Result<FrattiniLevel> {
    let g = m.group().clone();
    check_presentation(pres, &g)?;
    let n = m.dim;
    let f = m.field;
    let p = f.p();
    let s = pres.relators.len();
    if tail.len() != s * n {
        return Err(Error::DimensionMismatch(format!(
            "tail of length {} for {s} relators of dim {n}",
            tail.len()
        )));
    }
    let tracer = Tracer::new(m);
    let nc = tracer.num_c_vars();
    let mut ech = IncrementalEchelon::new(f, nc + 1);
    for a in 0..g.order() as u32 {
        for (ri, r) in pres.relators.iter().enumerate() {
            for (k, form) in tracer.trace(a, r).into_iter().enumerate() {
                let mut row = form;
                row.push((nc as u32, tail[ri * n + k]));
                ech.insert_sparse(&row);
            }
        }
    }
    let expected = g.order() * (p as usize).pow(n as u32);
    let c = ech
        .solve_augmented()
        .ok_or(Error::Collapse { got: 0, expected })?;
    let msize = (p as usize).pow(n as u32);
    let d = g.num_gens();
    let c_at = |a: u32, i: usize| -> Vec<u8> {
        let e = tracer.unknowns.edge_var[a as usize * d + i];
        if e == u32::MAX {
            vec![0u8; n]
        } else {
            c[e as usize * n..(e as usize + 1) * n].to_vec()
        }
    };
    let point = |a: u32, v: &[u8]| a as usize * msize + vec_to_index(v, p);
    let ngen = d + n;
    let mut action = vec![0u32; expected * ngen];
    for a in 0..g.order() as u32 {
        let cs: Vec<Vec<u8>> = (0..d).map(|i| c_at(a, i)).collect();
        for code in 0..msize {
            let v = index_to_vec(code, p, n);
            let pt = a as usize * msize + code;
            for i in 0..d {
                let moved = m.generator_matrices()[i].apply(&v);
                let w: Vec<u8> = moved
                    .iter()
                    .zip(&cs[i])
                    .map(|(&x, &y)| f.add(x, y))
                    .collect();
                action[pt * ngen + i] = point(g.mul_gen(a, i), &w) as u32;
            }
            for j in 0..n {
                let mut w = v.clone();
                w[j] = f.add(w[j], 1);
                action[pt * ngen + d + j] = point(a, &w) as u32;
            }
        }
    }
    let (full, full_index) = FiniteGroup::from_right_action_with_map(expected, ngen, &action)
        .map_err(|e| match e {
            Error::InvariantViolation(_) => Error::Collapse { got: 0, expected },
            other => other,
        })?;
    let lifted: Vec<u32> = full.generators()[..d].to_vec();
    let generated = full.closure(&lifted).len() == expected;
    let full_pres = extension_presentation(pres, m, tail);
    let (total, index, presentation) = if generated {
        let reduced: Vec<u32> = (0..expected)
            .flat_map(|pt| action[pt * ngen..pt * ngen + d].to_vec())
            .collect();
        let (t, idx) = FiniteGroup::from_right_action_with_map(expected, d, &reduced)?;
        let words: Vec<Word> = (0..n)
            .map(|j| {
                let mut e = vec![0u8; n];
                e[j] = 1;
                t.word(idx[point(0, &e)])
                    .iter()
                    .map(|&x| x as i32 + 1)
                    .collect()
            })
            .collect();
        let pres_x = substitute(&full_pres, d, &words);
        (t, idx, pres_x)
    } else {
        (full, full_index, full_pres)
    };
    let total = Arc::new(total);
    let mut projection = vec![0u32; expected];
    for pt in 0..expected {
        projection[index[pt] as usize] = (pt / msize) as u32;
    }
    let kernel_elements = (0..msize).map(|code| index[code]).collect();
    let section = (0..g.order()).map(|a| index[a * msize]).collect();
    let level = FrattiniLevel::new(
        p,
        total,
        g,
        projection,
        kernel_elements,
        m.clone(),
        section,
        Some(presentation),
    );
    level.check()?;
    Ok(level)
}

fn module_word(v: &[u8], d: usize) -> Word {
    let mut w = Vec::new();
    for (j, &c) in v.iter().enumerate() {
        for _ in 0..c {
            w.push((d + j + 1) as i32);
        }
    }
    w
}

/// Presentation of the extension on `x̂_1..x̂_d, ê_1..ê_n`.
fn extension_presentation(pres: &Presentation, m: &GModule, tail: &[u8]) -> Presentation {
    let d = pres.num_gens();
    let n = m.dim;
    let p = m.p() as i64;
    let mut rels = Vec::new();
    for (ri, r) in pres.relators.iter().enumerate() {
        rels.push(concat(&[
            r,
            &invert_word(&module_word(&tail[ri * n..(ri + 1) * n], d)),
        ]));
    }
    for j in 0..n {
        let e = vec![(d + j + 1) as i32];
        rels.push(word_pow(&e, p));
        for k in (j + 1)..n {
            rels.push(commutator_word(&e, &[(d + k + 1) as i32]));
        }
    }
    for (i, a) in m.generator_matrices().iter().enumerate() {
        let x = (i + 1) as i32;
        for j in 0..n {
            let e = (d + j + 1) as i32;
            rels.push(concat(&[
                &[-x, e, x],
                &invert_word(&module_word(a.row(j), d)),
            ]));
        }
    }
    let mut names = pres.names.clone();
    names.extend((0..n).map(|j| format!("e{}", j + 1)));
    Presentation::with_names(names, rels)
}

/// Replace generators `d+1..` by words in the first `d` generators.
fn substitute(pres: &Presentation, d: usize, words: &[Word]) -> Presentation {
    let rels = pres
        .relators
        .iter()
        .map(|r| {
            let mut out = Vec::new();
            for &l in r {
                let i = l.unsigned_abs() as usize;
                if i <= d {
                    out.push(l);
                } else if l > 0 {
                    out.extend_from_slice(&words[i - d - 1]);
                } else {
                    out.extend(invert_word(&words[i - d - 1]));
                }
            }
            concat(&[&out])
        })
        .collect();
    Presentation::with_names(pres.names[..d].to_vec(), rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn schur_multiplier_of_a4_and_a5_mod_2() {
        for (named, expect_dim, order) in [(builtin::a4(), 1, 24), (builtin::a5(), 1, 120)] {
            let g = Arc::new(named.group().unwrap());
            let pres = named.presentation.unwrap();
            let triv = GModule::trivial(g, Fp::new(2), 1);
            let h2 = h2_classes(&pres, &triv).unwrap();
            assert_eq!(h2.dim, expect_dim);
            let reps = h2.class_representatives();
            let split = build_extension(&pres, &triv, &reps[0]).unwrap();
            assert_eq!(split.total.order(), order);
            assert_eq!(split.total.num_gens(), 3);
            let cover = build_extension(&pres, &triv, &reps[1]).unwrap();
            assert_eq!(cover.total.num_gens(), 2);
            // The nonsplit double covers SL_2(3) and SL_2(5) have a unique involution.
            let involutions = (0..order as u32)
                .filter(|&x| cover.total.element_order(x) == 2)
                .count();
            assert_eq!(involutions, 1);
            let pres_total = cover.presentation.as_ref().unwrap();
            assert_eq!(pres_total.to_group(10_000).unwrap().order(), order);
        }
    }

    #[test]
    fn cyclic_group_cohomology() {
        // H^2(Z/4, F_2) = F_2.
        let named = builtin::cyclic(4);
        let g = Arc::new(named.group().unwrap());
        let triv = GModule::trivial(g, Fp::new(2), 1);
        let h2 = h2_classes(named.presentation.as_ref().unwrap(), &triv).unwrap();
        assert_eq!(h2.dim, 1);
    }
}
