//! Dense linear algebra over prime fields `F_p` with `p < 256`.
//!
//! Vectors are row vectors and matrices act on the right, matching the right
//! group actions used throughout the crate.

use serde::{Deserialize, Serialize};

/// Arithmetic in `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Self {
        assert!(
            (2..256).contains(&p),
            "field characteristic must be a prime below 256"
        );
        Fp { p }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.p - b as u32) % self.p) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        ((self.p - a as u32) % self.p) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        let mut result = 1u32;
        let mut base = a as u32 % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result as u8
    }

    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.p as i64) as u8
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    pub field: Fp,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: Fp, cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().map(|&x| (x as u32 % field.p()) as u8));
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u8))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = self.field;
        let p = f.p();
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u32;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b as u32) % p;
                }
            }
        }
        Matrix {
            field: f,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u8).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: u8) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut result = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn trace(&self) -> u8 {
        let f = self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// `v * self` for a row vector `v`.
    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.rows);
        let p = self.field.p();
        let mut out = vec![0u32; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (d, &b) in out.iter_mut().zip(self.row(k)) {
                *d = (*d + a as u32 * b as u32) % p;
            }
        }
        out.into_iter().map(|x| x as u8).collect()
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        let mut m = Matrix::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            f.mul(a, other.get(k, l)),
                        );
                    }
                }
            }
        }
        m
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Basis of `{ v : v * self = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vec<u8>> {
        self.transpose().right_kernel()
    }

    /// Basis of `{ x : self * x^T = 0 }`.
    pub fn right_kernel(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `v * self = b`, returning one solution if any.
    pub fn solve_left(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.cols);
        // Columns of the transposed system: self^T v^T = b^T.
        let t = self.transpose();
        let n = t.cols;
        let mut aug = Matrix::zeros(self.field, t.rows, n + 1);
        for i in 0..t.rows {
            for j in 0..n {
                aug.set(i, j, t.get(i, j));
            }
            aug.set(i, n, b[i]);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut v = vec![0u8; n];
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = aug.get(r, n);
        }
        Some(v)
    }
}

/// A subspace of `F_p^n` stored by its reduced echelon basis, which is
/// canonical: equal subspaces have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    pub field: Fp,
    pub ambient: usize,
    pub basis: Vec<Vec<u8>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        Subspace::span(field, ambient, &Matrix::identity(field, ambient).row_vecs())
    }

    pub fn span(field: Fp, ambient: usize, vectors: &[Vec<u8>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let mut m = Matrix::from_rows(field, ambient, vectors);
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        Subspace {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Add `v` to the span, keeping the basis reduced. Returns true if the
    /// dimension grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for b in self.basis.iter_mut() {
            let c = b[pc];
            if c != 0 {
                for (x, &y) in b.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(pos, pc);
        self.basis.insert(pos, w);
        true
    }

    /// Reduce `v` modulo the subspace (clears pivot coordinates).
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let f = self.field;
        let mut w = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for (x, &y) in w.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Annihilator of the sum of annihilators.
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// `{ w : <w, v> = 0 for all v }` under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.field, self.ambient);
        }
        let m = Matrix::from_rows(self.field, self.ambient, &self.basis);
        Subspace::span(self.field, self.ambient, &m.right_kernel())
    }

    /// Coordinates of `v` (assumed inside) with respect to the echelon basis.
    pub fn coordinates(&self, v: &[u8]) -> Vec<u8> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    /// Every vector of the subspace in lexicographic order of coordinates.
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let p = f.p() as usize;
        let d = self.dim();
        let total = p.pow(d as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut v = vec![0u8; self.ambient];
            let mut rest = idx;
            for k in (0..d).rev() {
                let c = (rest % p) as u8;
                rest /= p;
                if c != 0 {
                    for (x, &y) in v.iter_mut().zip(&self.basis[k]) {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
            }
            out.push(v);
        }
        out
    }
}

/// Encode a vector of `F_p^n` as an integer in base `p` (first coordinate most
/// significant).
pub fn vec_to_index(v: &[u8], p: u32) -> usize {
    v.iter()
        .fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub fn index_to_vec(mut idx: usize, p: u32, n: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    for k in (0..n).rev() {
        v[k] = (idx % p as usize) as u8;
        idx /= p as usize;
    }
    v
}

/// Incremental row echelon form for large sparse systems.
///
/// Rows are inserted one at a time and reduced against the pivots seen so
/// far; over `F_2` rows are bit-packed.
pub struct IncrementalEchelon {
    field: Fp,
    cols: usize,
    words: usize,
    bit_rows: Vec<Option<Vec<u64>>>,
    dense_rows: Vec<Option<Vec<u8>>>,
    rank: usize,
}

impl IncrementalEchelon {
    pub fn new(field: Fp, cols: usize) -> Self {
        let binary = field.p() == 2;
        IncrementalEchelon {
            field,
            cols,
            words: cols.div_ceil(64),
            bit_rows: if binary { vec![None; cols] } else { Vec::new() },
            dense_rows: if binary { Vec::new() } else { vec![None; cols] },
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Insert a sparse row given as `(column, coefficient)` pairs. Returns true
    /// if the rank increased.
    pub fn insert_sparse(&mut self, entries: &[(u32, u8)]) -> bool {
        if self.field.p() == 2 {
            let mut row = vec![0u64; self.words];
            for &(c, v) in entries {
                if v & 1 == 1 {
                    row[c as usize / 64] ^= 1 << (c % 64);
                }
            }
            self.insert_bits(row)
        } else {
            let f = self.field;
            let mut row = vec![0u8; self.cols];
            for &(c, v) in entries {
                row[c as usize] = f.add(row[c as usize], v);
            }
            self.insert_dense(row)
        }
    }

    fn insert_bits(&mut self, mut row: Vec<u64>) -> bool {
        let mut w = 0;
        while w < self.words {
            if row[w] == 0 {
                w += 1;
                continue;
            }
            let c = w * 64 + row[w].trailing_zeros() as usize;
            match &self.bit_rows[c] {
                Some(piv) => {
                    for k in w..self.words {
                        row[k] ^= piv[k];
                    }
                }
                None => {
                    self.bit_rows[c] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    fn insert_dense(&mut self, mut row: Vec<u8>) -> bool {
        let f = self.field;
        for c in 0..self.cols {
            let a = row[c];
            if a == 0 {
                continue;
            }
            match &self.dense_rows[c] {
                Some(piv) => {
                    for k in c..self.cols {
                        row[k] = f.sub(row[k], f.mul(a, piv[k]));
                    }
                }
                None => {
                    let inv = f.inv(a);
                    for x in row.iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                    self.dense_rows[c] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    /// Rows whose leading column is at least `start`, restricted to columns
    /// `start..cols`.
    pub fn rows_from(&self, start: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for c in start..self.cols {
            if self.field.p() == 2 {
                if let Some(r) = &self.bit_rows[c] {
                    out.push(
                        (start..self.cols)
                            .map(|j| ((r[j / 64] >> (j % 64)) & 1) as u8)
                            .collect(),
                    );
                }
            } else if let Some(r) = &self.dense_rows[c] {
                out.push(r[start..].to_vec());
            }
        }
        out
    }

    /// Fully back-substituted solution of the system whose last column holds
    /// the right-hand side. Returns `None` when inconsistent. Free variables
    /// are set to zero.
    pub fn solve_augmented(&self) -> Option<Vec<u8>> {
        let n = self.cols - 1;
        let f = self.field;
        let get = |c: usize, j: usize| -> u8 {
            if f.p() == 2 {
                let r = self.bit_rows[c].as_ref().unwrap();
                ((r[j / 64] >> (j % 64)) & 1) as u8
            } else {
                self.dense_rows[c].as_ref().unwrap()[j]
            }
        };
        let has = |c: usize| -> bool {
            if f.p() == 2 {
                self.bit_rows[c].is_some()
            } else {
                self.dense_rows[c].is_some()
            }
        };
        if has(n) {
            return None;
        }
        let mut x = vec![0u8; n];
        for c in (0..n).rev() {
            if !has(c) {
                continue;
            }
            // Pivot coefficient is 1 in both representations.
            let mut val = get(c, n);
            for j in (c + 1)..n {
                let a = get(c, j);
                if a != 0 && x[j] != 0 {
                    val = f.sub(val, f.mul(a, x[j]));
                }
            }
            x[c] = val;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let f = Fp::new(5);
        let m = Matrix::from_rows(f, 2, &[vec![1, 2], vec![3, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let singular = Matrix::from_rows(f, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn kernels_and_solve() {
        let f = Fp::new(2);
        let m = Matrix::from_rows(f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let lk = m.left_kernel();
        assert!(lk.is_empty());
        let rk = m.right_kernel();
        assert_eq!(rk, vec![vec![1, 1, 1]]);
        let v = m.solve_left(&[1, 0, 1]).unwrap();
        assert_eq!(m.apply(&v), vec![1, 0, 1]);
        assert!(m.solve_left(&[1, 0, 0]).is_none());
    }

    #[test]
    fn subspace_intersection() {
        let f = Fp::new(3);
        let a = Subspace::span(f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[0, 2, 0]));
        assert_eq!(a.elements().len(), 9);
    }

    #[test]
    fn incremental_matches_dense() {
        for p in [2u32, 3] {
            let f = Fp::new(p);
            let rows = vec![vec![1u8, 1, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 1, 1]];
            let mut inc = IncrementalEchelon::new(f, 4);
            for r in &rows {
                let sparse: Vec<(u32, u8)> =
                    r.iter().enumerate().map(|(i, &v)| (i as u32, v)).collect();
                inc.insert_sparse(&sparse);
            }
            assert_eq!(inc.rank(), Matrix::from_rows(f, 4, &rows).rank());
        }
    }
}
