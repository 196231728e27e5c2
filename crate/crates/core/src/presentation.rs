//! Finitely presented groups: words, Todd–Coxeter coset enumeration,
//! Schreier generators, and Fox derivatives evaluated in a module.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{Fp, Matrix};
use serde::{Deserialize, Serialize};

/// A free word; letter `i + 1` is generator `i`, `-(i + 1)` its inverse.
pub type Word = Vec<i32>;

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(w: &[i32]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn word_pow(w: &[i32], e: i64) -> Word {
    let base = if e < 0 { invert_word(w) } else { w.to_vec() };
    let mut out = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
    for _ in 0..e.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    free_reduce(&out)
}

pub fn commutator_word(a: &[i32], b: &[i32]) -> Word {
    let mut w = invert_word(a);
    w.extend(invert_word(b));
    w.extend_from_slice(a);
    w.extend_from_slice(b);
    free_reduce(&w)
}

pub fn concat(words: &[&[i32]]) -> Word {
    free_reduce(&words.concat())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub names: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(num_gens: usize, relators: Vec<Word>) -> Self {
        let names = (0..num_gens).map(default_name).collect();
        Presentation::with_names(names, relators)
    }

    pub fn with_names(names: Vec<String>, relators: Vec<Word>) -> Self {
        let relators = relators
            .iter()
            .map(|r| free_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        Presentation { names, relators }
    }

    pub fn num_gens(&self) -> usize {
        self.names.len()
    }

    /// Parse `gens: a b` followed by one relator per line, e.g. `a^2`,
    /// `(a*b)^5`, `[a,b]` or `a*b = b*a`.
    pub fn parse(text: &str) -> Result<Presentation> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty presentation".into()))?;
        let gens = header
            .strip_prefix("gens:")
            .ok_or_else(|| Error::Parse("presentation must start with 'gens:'".into()))?;
        let names: Vec<String> = gens
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        if names.is_empty() {
            return Err(Error::Parse("no generators declared".into()));
        }
        let mut relators = Vec::new();
        for line in lines {
            let mut parser = WordParser {
                chars: line.chars().collect(),
                pos: 0,
                names: &names,
            };
            let w = parser.relation()?;
            relators.push(w);
        }
        Ok(Presentation::with_names(names, relators))
    }

    pub fn format_word(&self, w: &[i32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = w
            .iter()
            .map(|&l| {
                let n = &self.names[(l.unsigned_abs() - 1) as usize];
                if l > 0 {
                    n.clone()
                } else {
                    format!("{n}^-1")
                }
            })
            .collect();
        parts.join("*")
    }

    /// Enumerate the cosets of the subgroup generated by `subgroup` and build
    /// the group when the subgroup is trivial.
    pub fn to_group(&self, max_cosets: usize) -> Result<FiniteGroup> {
        let table = todd_coxeter(self, &[], max_cosets)?;
        table.regular_group()
    }
}

fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl WordParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at column {} in {:?}",
            self.pos + 1,
            self.chars.iter().collect::<String>()
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn relation(&mut self) -> Result<Word> {
        let lhs = self.expr()?;
        let w = if self.peek() == Some('=') {
            self.pos += 1;
            let rhs = self.expr()?;
            concat(&[&lhs, &invert_word(&rhs)])
        } else {
            lhs
        };
        if self.peek().is_some() {
            return Err(self.err("unexpected character"));
        }
        Ok(w)
    }

    fn expr(&mut self) -> Result<Word> {
        let mut w = self.term()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    w.extend(self.term()?);
                }
                Some(c) if c.is_alphanumeric() || c == '(' || c == '[' => w.extend(self.term()?),
                _ => break,
            }
        }
        Ok(free_reduce(&w))
    }

    fn term(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if self.chars.get(self.pos) == Some(&'-') {
                self.pos += 1;
            }
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            let e: i64 = s.parse().map_err(|_| self.err("bad exponent"))?;
            return Ok(word_pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                if self.peek() != Some(',') {
                    return Err(self.err("expected ','"));
                }
                self.pos += 1;
                let b = self.expr()?;
                if self.peek() != Some(']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                Ok(commutator_word(&a, &b))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Vec::new())
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let i = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| self.err(&format!("unknown generator {name:?}")))?;
                Ok(vec![i as i32 + 1])
            }
            _ => Err(self.err("expected a generator")),
        }
    }
}

/// A closed coset table. Column `2i` is generator `i`, column `2i + 1` its
/// inverse. Coset 0 is the subgroup itself; cosets are standardized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    pub num_gens: usize,
    pub rows: Vec<Vec<u32>>,
}

const NONE: u32 = u32::MAX;

#[inline]
fn col(letter: i32) -> usize {
    let g = (letter.unsigned_abs() - 1) as usize;
    2 * g + (letter < 0) as usize
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn act(&self, coset: u32, letter: i32) -> u32 {
        self.rows[coset as usize][col(letter)]
    }

    pub fn act_word(&self, coset: u32, w: &[i32]) -> u32 {
        w.iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// The group acting regularly on the cosets of a trivial subgroup.
    pub fn regular_group(&self) -> Result<FiniteGroup> {
        let n = self.index();
        let mut action = vec![0u32; n * self.num_gens];
        for c in 0..n {
            for g in 0..self.num_gens {
                action[c * self.num_gens + g] = self.rows[c][2 * g];
            }
        }
        FiniteGroup::from_right_action(n, self.num_gens, &action)
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    max_cosets: usize,
}

impl Enumerator {
    fn new(ncols: usize, max_cosets: usize) -> Self {
        Enumerator {
            ncols,
            table: vec![NONE; ncols],
            parent: vec![0],
            queue: Vec::new(),
            max_cosets,
        }
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.ncols + x] = v;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<()> {
        let d = self.parent.len();
        if d >= self.max_cosets {
            return Err(Error::Overflow(self.max_cosets));
        }
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.set(c, x, d as u32);
        self.set(d as u32, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                self.set(d, x ^ 1, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.get(mu, x) != NONE {
                    let t = self.get(mu, x);
                    self.merge(nu, t);
                } else if self.get(nu, x ^ 1) != NONE {
                    let t = self.get(nu, x ^ 1);
                    self.merge(mu, t);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, x ^ 1, mu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i as isize > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != NONE {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if i as isize == j {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }
}

/// A presentation of a finite group on its own generators: one relator
/// `w(a) x_i w(a x_i)^{-1}` per Cayley graph edge outside the BFS tree.
pub fn cayley_presentation(g: &FiniteGroup) -> Presentation {
    let word = |a: u32| -> Word { g.word(a).iter().map(|&i| i as i32 + 1).collect() };
    let mut relators = Vec::new();
    for a in 0..g.order() as u32 {
        for i in 0..g.num_gens() {
            let b = g.mul_gen(a, i);
            if b != 0 && g.parent(b) == (a, i as u32) {
                continue;
            }
            let r = free_reduce(&concat(&[
                &word(a),
                &[i as i32 + 1],
                &invert_word(&word(b)),
            ]));
            if !r.is_empty() {
                relators.push(r);
            }
        }
    }
    relators.sort();
    relators.dedup();
    Presentation::new(g.num_gens(), relators)
}

/// HLT coset enumeration of the subgroup generated by `subgroup` in the group
/// presented by `pres`. Cosets are introduced in a fixed order and the final
/// table is standardized, so the output is deterministic.
pub fn todd_coxeter(
    pres: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
) -> Result<CosetTable> {
    let ng = pres.num_gens();
    let ncols = 2 * ng;
    let rels: Vec<Vec<usize>> = pres
        .relators
        .iter()
        .map(|r| r.iter().map(|&l| col(l)).collect())
        .collect();
    let subs: Vec<Vec<usize>> = subgroup
        .iter()
        .map(|r| free_reduce(r).iter().map(|&l| col(l)).collect())
        .collect();
    let mut e = Enumerator::new(ncols, max_cosets.max(1));
    for s in &subs {
        e.scan_and_fill(0, s)?;
    }
    let mut c = 0u32;
    while (c as usize) < e.parent.len() {
        for r in &rels {
            if !e.alive(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        if e.alive(c) {
            for x in 0..ncols {
                if e.get(c, x) == NONE {
                    e.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    // Standardize: renumber live cosets in BFS order from coset 0.
    let n_total = e.parent.len();
    let mut new_index = vec![NONE; n_total];
    let mut order = vec![0u32];
    new_index[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        for x in 0..ncols {
            let d = e.get(c, x);
            debug_assert!(d != NONE && e.alive(d));
            if new_index[d as usize] == NONE {
                new_index[d as usize] = order.len() as u32;
                order.push(d);
            }
        }
        head += 1;
    }
    let rows = order
        .iter()
        .map(|&c| {
            (0..ncols)
                .map(|x| new_index[e.get(c, x) as usize])
                .collect()
        })
        .collect();
    Ok(CosetTable { num_gens: ng, rows })
}

/// Schreier generators for the subgroup whose coset table is `table`.
///
/// Coset representatives come from a BFS spanning tree over all columns;
/// every non-tree edge `(c, x)` for a positive generator `x` gives the
/// generator `rep(c) x rep(cx)^-1`, freely reduced. For a subgroup of index
/// `n` in a free group of rank `d` there are `1 + n(d - 1)` of them.
pub fn schreier_generators(table: &CosetTable) -> Vec<Word> {
    let n = table.index();
    let ng = table.num_gens;
    let mut reps: Vec<Option<Word>> = vec![None; n];
    reps[0] = Some(Vec::new());
    let mut tree = vec![false; n * ng];
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        for x in 0..2 * ng {
            let d = table.rows[c][x] as usize;
            if reps[d].is_none() {
                let letter = (x / 2) as i32 + 1;
                let letter = if x % 2 == 0 { letter } else { -letter };
                let mut w = reps[c].clone().unwrap();
                w.push(letter);
                reps[d] = Some(w);
                if x % 2 == 0 {
                    tree[c * ng + x / 2] = true;
                } else {
                    tree[d * ng + x / 2] = true;
                }
                queue.push(d);
            }
        }
    }
    let mut gens = Vec::new();
    for c in 0..n {
        for g in 0..ng {
            if tree[c * ng + g] {
                continue;
            }
            let d = table.rows[c][2 * g] as usize;
            let w = concat(&[
                reps[c].as_ref().unwrap(),
                &[g as i32 + 1],
                &invert_word(reps[d].as_ref().unwrap()),
            ]);
            gens.push(w);
        }
    }
    gens
}

/// Fox Jacobian of the relators evaluated through per-generator action
/// matrices, as the linear map `M^d -> M^s` on row vectors.
///
/// A derivation `delta` with `delta(uv) = delta(u) v + delta(v)` is sent to the
/// values `delta(r)` on the relators.
pub fn fox_matrix_from_action(pres: &Presentation, field: Fp, gens: &[Matrix]) -> Result<Matrix> {
    let d = pres.num_gens();
    if gens.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} action matrices for {} generators",
            gens.len(),
            d
        )));
    }
    let n = gens.first().map(|m| m.rows).unwrap_or(0);
    let mut invs = Vec::with_capacity(d);
    for m in gens {
        if m.rows != n || m.cols != n {
            return Err(Error::DimensionMismatch(
                "action matrices have different sizes".into(),
            ));
        }
        invs.push(
            m.inverse()
                .ok_or_else(|| Error::InvalidInput("action matrix is singular".into()))?,
        );
    }
    let s = pres.relators.len();
    let mut out = Matrix::zeros(field, d * n, s * n);
    for (ri, r) in pres.relators.iter().enumerate() {
        // suffix[k] = A(y_k .. y_L).
        let mut suffix = vec![Matrix::identity(field, n); r.len() + 1];
        for k in (0..r.len()).rev() {
            let l = r[k];
            let g = (l.unsigned_abs() - 1) as usize;
            let a = if l > 0 { &gens[g] } else { &invs[g] };
            suffix[k] = a.mul(&suffix[k + 1]);
        }
        for (k, &l) in r.iter().enumerate() {
            let g = (l.unsigned_abs() - 1) as usize;
            let (block, sign) = if l > 0 {
                (&suffix[k + 1], 1u8)
            } else {
                (&suffix[k], field.neg(1))
            };
            for i in 0..n {
                for j in 0..n {
                    let v = field.mul(block.get(i, j), sign);
                    if v != 0 {
                        let (row, c) = (g * n + i, ri * n + j);
                        out.set(row, c, field.add(out.get(row, c), v));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_presentation() {
        let p = Presentation::parse("gens: a b\na^2\nb^3\n(a*b)^5\n").unwrap();
        assert_eq!(
            p.relators,
            vec![vec![1, 1], vec![2, 2, 2], [1, 2].repeat(5)]
        );
        let q = Presentation::parse("gens: x y\n[x,y]\nx y = y x\n").unwrap();
        assert_eq!(q.relators[0], vec![-1, -2, 1, 2]);
        assert!(Presentation::parse("gens: a\nb^2").is_err());
    }

    #[test]
    fn enumerate_a5_and_cyclic() {
        let p = Presentation::parse("gens: a b\na^2\nb^3\n(a*b)^5").unwrap();
        assert_eq!(todd_coxeter(&p, &[], 1000).unwrap().index(), 60);
        let c = Presentation::new(1, vec![vec![1; 7]]);
        assert_eq!(todd_coxeter(&c, &[], 100).unwrap().index(), 7);
        assert_eq!(todd_coxeter(&p, &[], 10).unwrap_err(), Error::Overflow(10));
        let g = p.to_group(1000).unwrap();
        assert_eq!(g.order(), 60);
    }

    #[test]
    fn subgroup_index() {
        let p = Presentation::parse("gens: a b\na^2\nb^3\n(a*b)^5").unwrap();
        // <b, a b a b^-1 a> style subgroups: <b> has index 20.
        assert_eq!(todd_coxeter(&p, &[vec![2]], 1000).unwrap().index(), 20);
    }

    #[test]
    fn schreier_count_for_frattini_subgroup() {
        // Cosets of the trivial subgroup of F/Phi(F) are the cosets of Phi(F)
        // in the free group of rank 2; for p = 2 the index is 4.
        let p = Presentation::parse("gens: x y\nx^2\ny^2\n[x,y]").unwrap();
        let t = todd_coxeter(&p, &[], 100).unwrap();
        assert_eq!(t.index(), 4);
        assert_eq!(schreier_generators(&t).len(), 5);
    }

    #[test]
    fn fox_trivial_identities() {
        let f = Fp::new(2);
        let p = Presentation::new(1, vec![vec![1, 1]]);
        let m = fox_matrix_from_action(&p, f, &[Matrix::identity(f, 1)]).unwrap();
        assert!(m.is_zero());
        let q = Presentation::new(2, vec![vec![-1, -2, 1, 2]]);
        let f3 = Fp::new(3);
        let m = fox_matrix_from_action(&q, f3, &[Matrix::identity(f3, 2), Matrix::identity(f3, 2)])
            .unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn cayley_presentation_recovers_the_group() {
        let a4 = crate::builtin::a4();
        let g = FiniteGroup::from_perms(&a4.perms, 100).unwrap();
        let p = cayley_presentation(&g);
        assert_eq!(p.to_group(1000).unwrap().order(), 12);
    }
}
