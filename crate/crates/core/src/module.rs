//! Finite-dimensional `F_p[G]`-modules given by one matrix per group
//! generator, acting on row vectors from the right.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{index_to_vec, Fp, Matrix, Subspace};
use crate::perm::Perm;
use crate::presentation::{fox_matrix_from_action, Presentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GModule {
    pub field: Fp,
    pub dim: usize,
    group: Arc<FiniteGroup>,
    gens: Vec<Matrix>,
    elements: Vec<Matrix>,
}

/// A module homomorphism `v -> v * matrix`.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub matrix: Matrix,
}

impl GModule {
    /// Build a module from generator matrices, checking that they are
    /// invertible and satisfy every relation of the group.
    pub fn new(group: Arc<FiniteGroup>, field: Fp, gens: Vec<Matrix>) -> Result<GModule> {
        if gens.len() != group.num_gens() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} generators",
                gens.len(),
                group.num_gens()
            )));
        }
        let dim = gens.first().map(|m| m.rows).unwrap_or(0);
        for m in &gens {
            if m.rows != dim || m.cols != dim || m.field != field {
                return Err(Error::DimensionMismatch(
                    "generator matrices differ in size or field".into(),
                ));
            }
        }
        let n = group.order();
        let mut elements = Vec::with_capacity(n);
        elements.push(Matrix::identity(field, dim));
        for a in 1..n as u32 {
            let (p, g) = group.parent(a);
            let m = elements[p as usize].mul(&gens[g as usize]);
            elements.push(m);
        }
        for a in 0..n as u32 {
            for (i, gm) in gens.iter().enumerate() {
                if elements[group.mul_gen(a, i) as usize] != elements[a as usize].mul(gm) {
                    return Err(Error::InvalidInput(
                        "action matrices do not satisfy the group relations".into(),
                    ));
                }
            }
        }
        Ok(GModule {
            field,
            dim,
            group,
            gens,
            elements,
        })
    }

    pub fn trivial(group: Arc<FiniteGroup>, field: Fp, dim: usize) -> GModule {
        let gens = vec![Matrix::identity(field, dim); group.num_gens()];
        GModule::new(group, field, gens).expect("trivial action is valid")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn generator_matrices(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn matrix(&self, a: u32) -> &Matrix {
        &self.elements[a as usize]
    }

    pub fn act(&self, v: &[u8], a: u32) -> Vec<u8> {
        self.elements[a as usize].apply(v)
    }

    pub fn is_trivial_action(&self) -> bool {
        self.gens.iter().all(|m| m.is_identity())
    }

    /// Number of vectors, `p^dim`.
    pub fn size(&self) -> usize {
        (self.p() as usize).pow(self.dim as u32)
    }

    pub fn dual(&self) -> GModule {
        let gens = self
            .gens
            .iter()
            .map(|m| m.inverse().expect("invertible").transpose())
            .collect();
        GModule::new(self.group.clone(), self.field, gens).expect("dual of a module is a module")
    }

    pub fn direct_sum(&self, other: &GModule) -> GModule {
        let n = self.dim + other.dim;
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(self.field, n, n);
                for i in 0..a.rows {
                    for j in 0..a.cols {
                        m.set(i, j, a.get(i, j));
                    }
                }
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        m.set(self.dim + i, self.dim + j, b.get(i, j));
                    }
                }
                m
            })
            .collect();
        GModule::new(self.group.clone(), self.field, gens).expect("direct sum is a module")
    }

    /// Tensor product with the diagonal action `g -> g (x) g`.
    pub fn hopf_tensor(&self, other: &GModule) -> GModule {
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| a.kron(b))
            .collect();
        GModule::new(self.group.clone(), self.field, gens).expect("tensor product is a module")
    }

    /// Smallest submodule containing `vectors`.
    pub fn spin(&self, vectors: &[Vec<u8>]) -> Subspace {
        let mut space = Subspace::zero(self.field, self.dim);
        let mut queue: Vec<Vec<u8>> = vectors.to_vec();
        while let Some(v) = queue.pop() {
            if space.insert(&v) {
                for g in &self.gens {
                    queue.push(g.apply(&v));
                }
            }
        }
        space
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        s.basis
            .iter()
            .all(|b| self.gens.iter().all(|g| s.contains(&g.apply(b))))
    }

    /// The action on a submodule, in the coordinates of its echelon basis.
    pub fn submodule(&self, s: &Subspace) -> Result<GModule> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidInput("subspace is not invariant".into()));
        }
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let rows: Vec<Vec<u8>> =
                    s.basis.iter().map(|b| s.coordinates(&g.apply(b))).collect();
                Matrix::from_rows(self.field, s.dim(), &rows)
            })
            .collect();
        GModule::new(self.group.clone(), self.field, gens)
    }

    /// Coordinates used for the quotient by `s`: the non-pivot positions.
    pub fn quotient_positions(&self, s: &Subspace) -> Vec<usize> {
        (0..self.dim).filter(|c| !s.pivots.contains(c)).collect()
    }

    /// The action on `M / s`; a vector's class is read off the non-pivot
    /// coordinates of its reduction modulo `s`.
    pub fn quotient(&self, s: &Subspace) -> Result<GModule> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidInput("subspace is not invariant".into()));
        }
        let free = self.quotient_positions(s);
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let rows: Vec<Vec<u8>> = free
                    .iter()
                    .map(|&c| {
                        let mut e = vec![0u8; self.dim];
                        e[c] = 1;
                        let img = s.reduce(&g.apply(&e));
                        free.iter().map(|&k| img[k]).collect()
                    })
                    .collect();
                Matrix::from_rows(self.field, free.len(), &rows)
            })
            .collect();
        GModule::new(self.group.clone(), self.field, gens)
    }

    /// Restriction along a homomorphism `sub -> self.group` given as an
    /// element map (for example a subgroup embedding).
    pub fn restrict(&self, sub: Arc<FiniteGroup>, map: &[u32]) -> Result<GModule> {
        if map.len() != sub.order() {
            return Err(Error::DimensionMismatch(
                "element map has the wrong length".into(),
            ));
        }
        let gens = sub
            .generators()
            .iter()
            .map(|&g| self.elements[map[g as usize] as usize].clone())
            .collect();
        GModule::new(sub, self.field, gens)
    }

    /// Common fixed vectors of the given group elements.
    pub fn invariant_vectors(&self, elements: &[u32]) -> Subspace {
        if elements.is_empty() || self.dim == 0 {
            return Subspace::full(self.field, self.dim);
        }
        let id = Matrix::identity(self.field, self.dim);
        let mut stacked = Matrix::zeros(self.field, self.dim, self.dim * elements.len());
        for (k, &h) in elements.iter().enumerate() {
            let d = self.elements[h as usize].sub(&id);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    stacked.set(i, k * self.dim + j, d.get(i, j));
                }
            }
        }
        Subspace::span(self.field, self.dim, &stacked.left_kernel())
    }

    /// Basis of `Hom_G(self, other)` as matrices `X` with `A_g X = X B_g`.
    pub fn hom_space(&self, other: &GModule) -> Vec<Matrix> {
        let (m, n) = (self.dim, other.dim);
        let f = self.field;
        let k = self.gens.len();
        let mut sys = Matrix::zeros(f, m * n, k * m * n);
        for (g, (a, b)) in self.gens.iter().zip(&other.gens).enumerate() {
            let base = g * m * n;
            for r in 0..m {
                for c in 0..n {
                    let col = base + r * n + c;
                    // (A X)_{rc} = sum_i A[r][i] X[i][c]
                    for i in 0..m {
                        let v = a.get(r, i);
                        if v != 0 {
                            let row = i * n + c;
                            sys.set(row, col, f.add(sys.get(row, col), v));
                        }
                    }
                    // -(X B)_{rc} = -sum_j X[r][j] B[j][c]
                    for j in 0..n {
                        let v = b.get(j, c);
                        if v != 0 {
                            let row = r * n + j;
                            sys.set(row, col, f.sub(sys.get(row, col), v));
                        }
                    }
                }
            }
        }
        sys.left_kernel()
            .into_iter()
            .map(|v| Matrix {
                field: f,
                rows: m,
                cols: n,
                data: v,
            })
            .collect()
    }

    pub fn endomorphisms(&self) -> Vec<Matrix> {
        self.hom_space(self)
    }

    /// Search for an isomorphism `self -> other`: exhaustively when the
    /// homomorphism space is small, otherwise over seeded random combinations.
    pub fn is_isomorphic(&self, other: &GModule) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if self.dim == 0 {
            return true;
        }
        let basis = self.hom_space(other);
        let p = self.p() as usize;
        let exhaustive = (basis.len() as u32) * (usize::BITS - p.leading_zeros()) <= 16;
        let combine = |coeffs: &[u8]| -> Matrix {
            let mut acc = Matrix::zeros(self.field, self.dim, self.dim);
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    acc = acc.add(&b.scale(*c));
                }
            }
            acc
        };
        if exhaustive {
            let total = p.pow(basis.len() as u32);
            return (1..total)
                .any(|idx| combine(&index_to_vec(idx, self.p(), basis.len())).rank() == self.dim);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x150);
        (0..256).any(|_| {
            let coeffs: Vec<u8> = (0..basis.len())
                .map(|_| rng.gen_range(0..self.p()) as u8)
                .collect();
            combine(&coeffs).rank() == self.dim
        })
    }

    /// Induce from a subgroup: `sub_embedding` maps elements of this module's
    /// group into `big`. The basis is `m (x) g_i` over right cosets `H g_i`,
    /// ordered by the smallest element index in each coset (identity first).
    pub fn induce(&self, sub_embedding: &[u32], big: Arc<FiniteGroup>) -> Result<GModule> {
        let h = &self.group;
        if sub_embedding.len() != h.order() || sub_embedding[0] != 0 {
            return Err(Error::NotASubgroup);
        }
        let mut back = vec![u32::MAX; big.order()];
        for (a, &x) in sub_embedding.iter().enumerate() {
            if x as usize >= big.order() || back[x as usize] != u32::MAX {
                return Err(Error::NotASubgroup);
            }
            back[x as usize] = a as u32;
        }
        for a in 0..h.order() as u32 {
            for (i, &g) in h.generators().iter().enumerate() {
                if sub_embedding[h.mul_gen(a, i) as usize]
                    != big.mul(sub_embedding[a as usize], sub_embedding[g as usize])
                {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        if !big.order().is_multiple_of(h.order()) {
            return Err(Error::NotASubgroup);
        }
        // Right cosets H x, labelled by their smallest element.
        let mut coset_of = vec![u32::MAX; big.order()];
        let mut reps = Vec::new();
        for x in 0..big.order() as u32 {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &hx in sub_embedding {
                coset_of[big.mul(hx, x) as usize] = id;
            }
        }
        let index = reps.len();
        let d = self.dim;
        let gens = big
            .generators()
            .iter()
            .map(|&g| {
                let mut m = Matrix::zeros(self.field, d * index, d * index);
                for (i, &gi) in reps.iter().enumerate() {
                    let y = big.mul(gi, g);
                    let j = coset_of[y as usize] as usize;
                    let hval = big.mul(y, big.inv(reps[j]));
                    let block = &self.elements[back[hval as usize] as usize];
                    for r in 0..d {
                        for c in 0..d {
                            m.set(i * d + r, j * d + c, block.get(r, c));
                        }
                    }
                }
                m
            })
            .collect();
        GModule::new(big, self.field, gens)
    }

    /// Fox Jacobian of `pres` evaluated in this module. The presentation's
    /// generators must correspond to the group's generators.
    pub fn fox_matrix(&self, pres: &Presentation) -> Result<Matrix> {
        fox_matrix_from_action(pres, self.field, &self.gens)
    }

    /// Parse the text format: `p: <prime>`, `dim: <n>`, then one `n x n`
    /// matrix per group generator with rows as digit strings (digits may be
    /// separated by spaces).
    pub fn parse(group: Arc<FiniteGroup>, text: &str) -> Result<GModule> {
        let mut p = None;
        let mut dim = None;
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for line in text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
        {
            if let Some(v) = line.strip_prefix("p:") {
                p = Some(
                    v.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse("bad prime".into()))?,
                );
            } else if let Some(v) = line.strip_prefix("dim:") {
                dim = Some(
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse("bad dimension".into()))?,
                );
            } else {
                let row: Vec<u8> = if line.contains(char::is_whitespace) {
                    line.split_whitespace()
                        .map(|t| {
                            t.parse::<u8>()
                                .map_err(|_| Error::Parse(format!("bad entry {t:?}")))
                        })
                        .collect::<Result<_>>()?
                } else {
                    line.chars()
                        .map(|c| {
                            c.to_digit(10)
                                .map(|d| d as u8)
                                .ok_or_else(|| Error::Parse(format!("bad digit {c:?}")))
                        })
                        .collect::<Result<_>>()?
                };
                rows.push(row);
            }
        }
        let p = p.ok_or_else(|| Error::Parse("missing 'p:' header".into()))?;
        let dim = dim.ok_or_else(|| Error::Parse("missing 'dim:' header".into()))?;
        if !crate::linalg::is_prime(p as u64) || p >= 256 {
            return Err(Error::Parse(format!("{p} is not a supported prime")));
        }
        let field = Fp::new(p);
        if rows.len() != dim * group.num_gens() || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} rows of length {dim}",
                dim * group.num_gens()
            )));
        }
        let gens = rows
            .chunks(dim.max(1))
            .take(group.num_gens())
            .map(|c| Matrix::from_rows(field, dim, c))
            .collect();
        GModule::new(group, field, gens)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p: {}\ndim: {}\n", self.p(), self.dim);
        for m in &self.gens {
            s.push('\n');
            for r in 0..m.rows {
                let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
                if self.p() < 10 {
                    s.push_str(&row.concat());
                } else {
                    s.push_str(&row.join(" "));
                }
                s.push('\n');
            }
        }
        s
    }
}

/// `sum_i x_i y_{(i)h}` for a basis permutation `h` of order at most 2.
pub fn involution_pairing(field: Fp, v1: &[u8], v2: &[u8], h: &Perm) -> Result<u8> {
    if v1.len() != v2.len() || v1.len() != h.degree() {
        return Err(Error::DimensionMismatch(
            "pairing inputs have different lengths".into(),
        ));
    }
    if !h.then(h).is_identity() {
        return Err(Error::NotInvolution);
    }
    Ok(v1.iter().enumerate().fold(0, |acc, (i, &x)| {
        field.add(acc, field.mul(x, v2[h.image(i as u32) as usize]))
    }))
}

/// Product in the group algebra `F_p[G]`, elements as coefficient vectors.
pub fn group_algebra_mul(g: &FiniteGroup, field: Fp, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; g.order()];
    for (x, &ax) in a.iter().enumerate() {
        if ax == 0 {
            continue;
        }
        for (y, &by) in b.iter().enumerate() {
            if by != 0 {
                let z = g.mul(x as u32, y as u32) as usize;
                out[z] = field.add(out[z], field.mul(ax, by));
            }
        }
    }
    out
}

/// Check that `F_p[G]` with the pairing `<a, b>` = coefficient of 1 in `ab`
/// (the involution pairing for `h` = inversion) is a Frobenius form:
/// nondegenerate and `<ab, c> = <a, bc>` on `samples` seeded random triples.
pub fn frobenius_check(g: &FiniteGroup, p: u32, samples: usize) -> bool {
    let field = Fp::new(p);
    let n = g.order();
    let inversion = Perm((0..n as u32).map(|x| g.inv(x)).collect());
    // The Gram matrix of the pairing on group elements is a permutation matrix.
    let nondegenerate =
        (0..n as u32).all(|x| (0..n as u32).filter(|&y| g.mul(x, y) == 0).count() == 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0xf20b);
    let pair = |a: &[u8], b: &[u8]| {
        involution_pairing(field, a, b, &inversion).expect("inversion is an involution")
    };
    let associative = (0..samples).all(|_| {
        let mut draw = || {
            (0..n)
                .map(|_| rng.gen_range(0..p) as u8)
                .collect::<Vec<u8>>()
        };
        let (a, b, c) = (draw(), draw(), draw());
        let ab = group_algebra_mul(g, field, &a, &b);
        let bc = group_algebra_mul(g, field, &b, &c);
        let one_of = |x: &[u8], y: &[u8]| group_algebra_mul(g, field, x, y)[0];
        // <x, y> read through the pairing must agree with the coefficient of 1.
        pair(&ab, &c) == one_of(&ab, &c) && pair(&ab, &c) == pair(&a, &bc)
    });
    nondegenerate && associative
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn a4() -> Arc<FiniteGroup> {
        Arc::new(builtin::a4().group().unwrap())
    }

    #[test]
    fn relations_are_checked() {
        let g = a4();
        let f = Fp::new(2);
        // An order-3 matrix cannot represent the involution generator.
        let rot = Matrix::from_rows(f, 2, &[vec![0, 1], vec![1, 1]]);
        assert!(GModule::new(g.clone(), f, vec![rot.clone(), rot.clone()]).is_err());
        assert!(GModule::new(g, f, vec![Matrix::identity(f, 2), rot]).is_ok());
    }

    #[test]
    fn induced_permutation_module() {
        let a5 = Arc::new(builtin::a5().group().unwrap());
        let g = a5.clone();
        let a4_elems: Vec<u32> = (0..g.order() as u32)
            .filter(|&x| g.element_perm(x).unwrap().image(4) == 4)
            .collect();
        let (sub, emb) = g.subgroup(&g.small_generating_set(&a4_elems)).unwrap();
        let triv = GModule::trivial(Arc::new(sub), Fp::new(2), 1);
        let ind = triv.induce(&emb, a5).unwrap();
        assert_eq!(ind.dim, 5);
        assert_eq!(ind.invariant_vectors(g.generators()).dim(), 1);
    }

    #[test]
    fn pairing_and_frobenius() {
        let f = Fp::new(5);
        let id = Perm::identity(3);
        assert_eq!(
            involution_pairing(f, &[1, 2, 3], &[4, 0, 1], &id).unwrap(),
            2
        );
        let cyc = Perm::parse_cycles("(1,2,3)", 3).unwrap();
        assert_eq!(
            involution_pairing(f, &[1, 2, 3], &[4, 0, 1], &cyc).unwrap_err(),
            Error::NotInvolution
        );
        assert!(frobenius_check(&a4(), 2, 20));
    }

    #[test]
    fn tensor_with_trivial_is_isomorphic() {
        let g = a4();
        let f = Fp::new(2);
        let perm4 = GModule::new(
            g.clone(),
            f,
            g.generator_perms()
                .unwrap()
                .iter()
                .map(|p| {
                    let mut m = Matrix::zeros(f, 4, 4);
                    for i in 0..4 {
                        m.set(i, p.image(i as u32) as usize, 1);
                    }
                    m
                })
                .collect(),
        )
        .unwrap();
        let one = GModule::trivial(g, f, 1);
        assert!(one.hopf_tensor(&perm4).is_isomorphic(&perm4));
        assert!(!perm4.is_isomorphic(&one.direct_sum(&one).direct_sum(&one).direct_sum(&one)));
    }
}
