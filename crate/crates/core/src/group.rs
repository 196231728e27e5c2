//! Concrete finite groups with indexed elements.
//!
//! Elements are numbered in breadth-first order from the identity (index 0),
//! trying generators in input order. Products are read from a materialized
//! table for small groups, or computed through a permutation representation
//! for larger permutation groups.

use crate::error::{Error, Result};
use crate::perm::Perm;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Largest order for which the multiplication table is materialized.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Serialize, Deserialize)]
enum Products {
    Table(Vec<u16>),
    Perms {
        elements: Vec<Perm>,
        sorted: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjClass {
    pub representative: u32,
    pub members: Vec<u32>,
    pub element_order: u32,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    num_gens: usize,
    /// `right[x * num_gens + i]` is the index of `x * gen_i`.
    right: Vec<u32>,
    /// BFS tree: `(parent, generator)` with `parent * gen = element`.
    parent: Vec<(u32, u32)>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    gen_elements: Vec<u32>,
    gen_perms: Option<Vec<Perm>>,
    products: Products,
    #[serde(skip)]
    classes: OnceLock<(Vec<ConjClass>, Vec<u32>)>,
}

impl FiniteGroup {
    /// Close a set of permutations under multiplication.
    pub fn from_perms(gens: &[Perm], max_order: usize) -> Result<FiniteGroup> {
        if gens.is_empty() {
            return Err(Error::InvalidInput(
                "at least one generator is required".into(),
            ));
        }
        let degree = gens[0].degree();
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidInput(
                "generators have different degrees".into(),
            ));
        }
        let ng = gens.len();
        let mut elements = vec![Perm::identity(degree)];
        let mut index = std::collections::HashMap::new();
        index.insert(elements[0].clone(), 0u32);
        let mut right = Vec::new();
        let mut parent = vec![(0u32, u32::MAX)];
        let mut head = 0;
        while head < elements.len() {
            for (i, g) in gens.iter().enumerate() {
                let prod = elements[head].then(g);
                let idx = match index.get(&prod) {
                    Some(&j) => j,
                    None => {
                        let j = elements.len() as u32;
                        if elements.len() >= max_order {
                            return Err(Error::OrderExceeded(max_order));
                        }
                        index.insert(prod.clone(), j);
                        elements.push(prod);
                        parent.push((head as u32, i as u32));
                        j
                    }
                };
                right.push(idx);
            }
            head += 1;
        }
        drop(index);
        let n = elements.len();
        let gen_elements = (0..ng).map(|i| right[i]).collect();
        let products = if n <= TABLE_LIMIT {
            Products::Table(build_table(n, ng, &right, &parent))
        } else {
            let mut sorted: Vec<u32> = (0..n as u32).collect();
            sorted.sort_by(|&a, &b| elements[a as usize].cmp(&elements[b as usize]));
            Products::Perms { elements, sorted }
        };
        let mut g = FiniteGroup {
            order: n,
            num_gens: ng,
            right,
            parent,
            inverse: Vec::new(),
            orders: Vec::new(),
            gen_elements,
            gen_perms: Some(gens.to_vec()),
            products,
            classes: OnceLock::new(),
        };
        g.finish();
        Ok(g)
    }

    /// Build a group from the right-regular action of its generators on
    /// `n` points, where point 0 is the identity. Points are renumbered in
    /// BFS order. Fails if the action is not regular.
    pub fn from_right_action(n: usize, num_gens: usize, action: &[u32]) -> Result<FiniteGroup> {
        Ok(FiniteGroup::from_right_action_with_map(n, num_gens, action)?.0)
    }

    /// As [`from_right_action`](Self::from_right_action), also returning the
    /// element index assigned to each original point.
    pub fn from_right_action_with_map(
        n: usize,
        num_gens: usize,
        action: &[u32],
    ) -> Result<(FiniteGroup, Vec<u32>)> {
        if n > TABLE_LIMIT {
            return Err(Error::Budget(format!(
                "abstract group of order {n} exceeds table limit {TABLE_LIMIT}"
            )));
        }
        assert_eq!(action.len(), n * num_gens);
        let mut new_index = vec![u32::MAX; n];
        let mut order_pts = vec![0u32];
        new_index[0] = 0;
        let mut parent = vec![(0u32, u32::MAX)];
        let mut head = 0;
        while head < order_pts.len() {
            let x = order_pts[head] as usize;
            for i in 0..num_gens {
                let y = action[x * num_gens + i] as usize;
                if new_index[y] == u32::MAX {
                    new_index[y] = order_pts.len() as u32;
                    order_pts.push(y as u32);
                    parent.push((head as u32, i as u32));
                }
            }
            head += 1;
        }
        if order_pts.len() != n {
            return Err(Error::InvariantViolation(
                "generator action is not transitive".into(),
            ));
        }
        let mut right = vec![0u32; n * num_gens];
        for (new, &old) in order_pts.iter().enumerate() {
            for i in 0..num_gens {
                right[new * num_gens + i] = new_index[action[old as usize * num_gens + i] as usize];
            }
        }
        let table = build_table(n, num_gens, &right, &parent);
        // Left multiplications must commute with the right action.
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            for b in 0..n {
                for i in 0..num_gens {
                    let lhs = row[right[b * num_gens + i] as usize] as u32;
                    let rhs = right[row[b] as usize * num_gens + i];
                    if lhs != rhs {
                        return Err(Error::InvariantViolation(
                            "generator action is not regular".into(),
                        ));
                    }
                }
            }
        }
        let gen_elements = (0..num_gens).map(|i| right[i]).collect();
        let mut g = FiniteGroup {
            order: n,
            num_gens,
            right,
            parent,
            inverse: Vec::new(),
            orders: Vec::new(),
            gen_elements,
            gen_perms: None,
            products: Products::Table(table),
            classes: OnceLock::new(),
        };
        g.finish();
        Ok((g, new_index))
    }

    fn finish(&mut self) {
        let n = self.order;
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n as u32 {
            if inverse[a as usize] != u32::MAX {
                continue;
            }
            // Walk powers until the identity; the last non-identity power is a^{-1}.
            let mut x = a;
            let mut prev = 0;
            while x != 0 {
                prev = x;
                x = self.mul(x, a);
            }
            inverse[a as usize] = prev;
            inverse[prev as usize] = a;
        }
        inverse[0] = 0;
        self.inverse = inverse;
        let mut orders = vec![0u32; n];
        for a in 0..n as u32 {
            if orders[a as usize] != 0 {
                continue;
            }
            let mut k = 1;
            let mut x = a;
            while x != 0 {
                x = self.mul(x, a);
                k += 1;
            }
            orders[a as usize] = if a == 0 { 1 } else { k };
        }
        self.orders = orders;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_gens(&self) -> usize {
        self.num_gens
    }

    pub fn generators(&self) -> &[u32] {
        &self.gen_elements
    }

    pub fn generator_perms(&self) -> Option<&[Perm]> {
        self.gen_perms.as_deref()
    }

    pub fn has_table(&self) -> bool {
        matches!(self.products, Products::Table(_))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.products {
            Products::Table(t) => t[a as usize * self.order + b as usize] as u32,
            Products::Perms { elements, sorted } => {
                let prod = elements[a as usize].then(&elements[b as usize]);
                let pos = sorted
                    .binary_search_by(|&i| elements[i as usize].cmp(&prod))
                    .expect("product lies in the group");
                sorted[pos]
            }
        }
    }

    #[inline]
    pub fn mul_gen(&self, a: u32, gen: usize) -> u32 {
        self.right[a as usize * self.num_gens + gen]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    #[inline]
    pub fn element_order(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        let ord = self.orders[a as usize] as i64;
        let mut e = e.rem_euclid(ord);
        let mut result = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// `x^-1 a x`.
    #[inline]
    pub fn conj(&self, a: u32, x: u32) -> u32 {
        self.mul(self.mul(self.inv(x), a), x)
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn product(&self, elems: &[u32]) -> u32 {
        elems.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    /// Generator indices along the BFS tree path from the identity.
    pub fn word(&self, a: u32) -> Vec<u32> {
        let mut w = Vec::new();
        let mut x = a;
        while x != 0 {
            let (p, g) = self.parent[x as usize];
            w.push(g);
            x = p;
        }
        w.reverse();
        w
    }

    pub fn parent(&self, a: u32) -> (u32, u32) {
        self.parent[a as usize]
    }

    /// Evaluate a word with letters `±(i+1)` for generator `i`.
    pub fn eval_word(&self, word: &[i32]) -> u32 {
        word.iter().fold(0, |acc, &l| {
            let g = self.gen_elements[(l.unsigned_abs() - 1) as usize];
            self.mul(acc, if l > 0 { g } else { self.inv(g) })
        })
    }

    /// Permutation of an element, for groups given by permutations.
    pub fn element_perm(&self, a: u32) -> Option<Perm> {
        if let Products::Perms { elements, .. } = &self.products {
            return Some(elements[a as usize].clone());
        }
        let gens = self.gen_perms.as_ref()?;
        let mut p = Perm::identity(gens[0].degree());
        for g in self.word(a) {
            p = p.then(&gens[g as usize]);
        }
        Some(p)
    }

    /// Index of the element with the given permutation.
    pub fn element_of_perm(&self, perm: &Perm) -> Option<u32> {
        let gens = self.gen_perms.as_ref()?;
        if perm.degree() != gens[0].degree() {
            return None;
        }
        if let Products::Perms { elements, sorted } = &self.products {
            return sorted
                .binary_search_by(|&i| elements[i as usize].cmp(perm))
                .ok()
                .map(|p| sorted[p]);
        }
        (0..self.order as u32).find(|&a| self.element_perm(a).as_ref() == Some(perm))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        self.closure_bounded(gens, self.order).unwrap_or_default()
    }

    /// Like [`closure`](Self::closure) but gives up (returns `None`) once the
    /// subgroup exceeds `limit` elements.
    pub fn closure_bounded(&self, gens: &[u32], limit: usize) -> Option<Vec<u32>> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut elems = vec![0u32];
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    elems.push(y);
                    if elems.len() > limit {
                        return None;
                    }
                }
            }
            head += 1;
        }
        elems.sort_unstable();
        Some(elems)
    }

    pub fn generates(&self, elems: &[u32]) -> bool {
        self.closure(elems).len() == self.order
    }

    /// Subgroup generated by `gens`, as a group in its own right, with the
    /// embedding of its element indices into `self`.
    pub fn subgroup(&self, gens: &[u32]) -> Result<(FiniteGroup, Vec<u32>)> {
        let elems = self.closure(gens);
        let n = elems.len();
        let pos = |x: u32| elems.binary_search(&x).expect("closed") as u32;
        let mut action = vec![0u32; n * gens.len()];
        for (i, &x) in elems.iter().enumerate() {
            for (j, &g) in gens.iter().enumerate() {
                action[i * gens.len() + j] = pos(self.mul(x, g));
            }
        }
        let sub = FiniteGroup::from_right_action(n, gens.len(), &action)?;
        let embedding = (0..n as u32)
            .map(|a| {
                self.product(
                    &sub.word(a)
                        .iter()
                        .map(|&g| gens[g as usize])
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Ok((sub, embedding))
    }

    /// Homomorphism to `target` sending generator `i` to `images[i]`, as an
    /// element-index map. Fails if the assignment does not respect the
    /// relations of `self`.
    pub fn hom_from_gen_images(&self, target: &FiniteGroup, images: &[u32]) -> Result<Vec<u32>> {
        if images.len() != self.num_gens {
            return Err(Error::InvalidInput(
                "wrong number of generator images".into(),
            ));
        }
        let mut map = vec![0u32; self.order];
        for a in 1..self.order {
            let (p, g) = self.parent[a];
            map[a] = target.mul(map[p as usize], images[g as usize]);
        }
        for a in 0..self.order as u32 {
            for (i, &img) in images.iter().enumerate() {
                if map[self.mul_gen(a, i) as usize] != target.mul(map[a as usize], img) {
                    return Err(Error::InvalidInput(
                        "generator images do not define a homomorphism".into(),
                    ));
                }
            }
        }
        Ok(map)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.gen_elements;
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest normal subgroup containing `elems`, as a sorted element list.
    pub fn normal_closure(&self, elems: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = elems.iter().copied().filter(|&x| x != 0).collect();
        loop {
            let sub = self.closure(&gens);
            let mut added = false;
            for i in 0..gens.len() {
                for &x in &self.gen_elements {
                    let c = self.conj(gens[i], x);
                    if sub.binary_search(&c).is_err() && !gens.contains(&c) {
                        gens.push(c);
                        added = true;
                    }
                }
            }
            if !added {
                return sub;
            }
        }
    }

    pub fn derived_subgroup(&self) -> Vec<u32> {
        let gens = &self.gen_elements;
        let mut comms = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                comms.push(self.commutator(a, b));
            }
        }
        self.normal_closure(&comms)
    }

    /// True when `G/[G,G]` has order prime to `p`.
    pub fn is_p_perfect(&self, p: u32) -> bool {
        let quotient = self.order / self.derived_subgroup().len();
        !quotient.is_multiple_of(p as usize)
    }

    pub fn centralizer_of(&self, a: u32) -> Vec<u32> {
        (0..self.order as u32)
            .filter(|&x| self.mul(a, x) == self.mul(x, a))
            .collect()
    }

    pub fn center(&self) -> Vec<u32> {
        (0..self.order as u32)
            .filter(|&x| {
                self.gen_elements
                    .iter()
                    .all(|&g| self.mul(g, x) == self.mul(x, g))
            })
            .collect()
    }

    pub fn is_center_free(&self) -> bool {
        self.center().len() == 1
    }

    /// Normalizer of a subgroup given as a sorted element list.
    pub fn normalizer(&self, sub: &[u32]) -> Vec<u32> {
        let gens = self.small_generating_set(sub);
        (0..self.order as u32)
            .filter(|&x| {
                gens.iter()
                    .all(|&s| sub.binary_search(&self.conj(s, x)).is_ok())
            })
            .collect()
    }

    /// Greedy generating set of a subgroup given by its sorted elements.
    pub fn small_generating_set(&self, sub: &[u32]) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = vec![0u32];
        for &x in sub {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
                if span.len() == sub.len() {
                    break;
                }
            }
        }
        gens
    }

    /// A Sylow `p`-subgroup, grown one element of order `p` modulo the
    /// current subgroup at a time.
    pub fn sylow(&self, p: u32) -> Vec<u32> {
        let target = p_part(self.order, p);
        let mut sub = vec![0u32];
        let mut gens: Vec<u32> = Vec::new();
        while sub.len() < target {
            let norm = self.normalizer(&sub);
            let next = norm
                .iter()
                .copied()
                .find(|&g| {
                    sub.binary_search(&g).is_err()
                        && sub.binary_search(&self.pow(g, p as i64)).is_ok()
                })
                .expect("a normalizer of a non-Sylow p-subgroup has p-elements outside it");
            gens.push(next);
            sub = self.closure(&gens);
        }
        sub
    }

    /// Conjugacy classes sorted by (element order, size, smallest member).
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.class_data().0
    }

    /// Index into [`conjugacy_classes`](Self::conjugacy_classes) for each element.
    pub fn class_of(&self, a: u32) -> usize {
        self.class_data().1[a as usize] as usize
    }

    fn class_data(&self) -> &(Vec<ConjClass>, Vec<u32>) {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut seen = vec![false; n];
            let mut classes = Vec::new();
            for a in 0..n as u32 {
                if seen[a as usize] {
                    continue;
                }
                seen[a as usize] = true;
                let mut members = vec![a];
                let mut head = 0;
                while head < members.len() {
                    let x = members[head];
                    for &g in &self.gen_elements {
                        let y = self.conj(x, g);
                        if !seen[y as usize] {
                            seen[y as usize] = true;
                            members.push(y);
                        }
                    }
                    head += 1;
                }
                members.sort_unstable();
                classes.push(ConjClass {
                    representative: members[0],
                    element_order: self.orders[a as usize],
                    members,
                });
            }
            classes.sort_by_key(|c| (c.element_order, c.members.len(), c.representative));
            let mut map = vec![0u32; n];
            for (i, c) in classes.iter().enumerate() {
                for &m in &c.members {
                    map[m as usize] = i as u32;
                }
            }
            (classes, map)
        })
    }

    /// Labels such as `1A`, `2A`, `3A`, `5A`, `5B`, following class order.
    pub fn class_labels(&self) -> Vec<String> {
        let classes = self.conjugacy_classes();
        let mut labels = Vec::with_capacity(classes.len());
        for (i, c) in classes.iter().enumerate() {
            let k = classes[..i]
                .iter()
                .filter(|d| d.element_order == c.element_order)
                .count();
            labels.push(format!("{}{}", c.element_order, letter_code(k)));
        }
        labels
    }

    pub fn class_by_label(&self, label: &str) -> Option<usize> {
        self.class_labels().iter().position(|l| l == label)
    }
}

fn letter_code(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push((b'A' + (k % 26) as u8) as char);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.iter().rev().collect()
}

fn build_table(n: usize, ng: usize, right: &[u32], parent: &[(u32, u32)]) -> Vec<u16> {
    let mut table = vec![0u16; n * n];
    for a in 0..n {
        let row = &mut table[a * n..(a + 1) * n];
        row[0] = a as u16;
        for b in 1..n {
            let (p, g) = parent[b];
            let prev = row[p as usize] as usize;
            row[b] = right[prev * ng + g as usize] as u16;
        }
    }
    table
}

pub fn p_part(mut n: usize, p: u32) -> usize {
    let mut part = 1;
    while n.is_multiple_of(p as usize) {
        n /= p as usize;
        part *= p as usize;
    }
    part
}

/// Permutations from a group file: one per line, blank lines and `#`
/// comments ignored. The degree is the largest point mentioned.
pub fn parse_perm_lines(text: &str) -> Result<Vec<Perm>> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    let degree = lines
        .iter()
        .map(|l| Perm::max_point(l))
        .max()
        .unwrap_or(0)
        .max(1);
    lines
        .iter()
        .map(|l| Perm::parse_cycles(l, degree))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a5() -> FiniteGroup {
        FiniteGroup::from_perms(
            &[
                Perm::parse_cycles("(1,2,3,4,5)", 5).unwrap(),
                Perm::parse_cycles("(1,2,3)", 5).unwrap(),
            ],
            1000,
        )
        .unwrap()
    }

    #[test]
    fn a5_basics() {
        let g = a5();
        assert_eq!(g.order(), 60);
        let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        assert_eq!(g.class_labels(), vec!["1A", "2A", "3A", "5A", "5B"]);
        assert!(g.is_p_perfect(2));
        assert!(g.is_center_free());
        assert_eq!(g.sylow(2).len(), 4);
        assert_eq!(g.sylow(5).len(), 5);
    }

    #[test]
    fn order_bound_is_enforced() {
        let gens = [
            Perm::parse_cycles("(1,2,3,4,5)", 5).unwrap(),
            Perm::parse_cycles("(1,2,3)", 5).unwrap(),
        ];
        assert_eq!(
            FiniteGroup::from_perms(&gens, 59).unwrap_err(),
            Error::OrderExceeded(59)
        );
    }

    #[test]
    fn subgroup_and_words() {
        let g = a5();
        let s = g.sylow(2);
        let (sub, emb) = g.subgroup(&g.small_generating_set(&s)).unwrap();
        assert_eq!(sub.order(), 4);
        let mut e = emb.clone();
        e.sort();
        assert_eq!(e, s);
        for a in 0..g.order() as u32 {
            let w: Vec<i32> = g.word(a).iter().map(|&i| i as i32 + 1).collect();
            assert_eq!(g.eval_word(&w), a);
        }
    }

    #[test]
    fn large_perm_groups_use_permutation_products() {
        // S_7 has order 5040, above the table limit.
        let gens = [
            Perm::parse_cycles("(1,2,3,4,5,6,7)", 7).unwrap(),
            Perm::parse_cycles("(1,2)", 7).unwrap(),
        ];
        let g = FiniteGroup::from_perms(&gens, 10_000).unwrap();
        assert!(!g.has_table());
        assert_eq!(g.order(), 5040);
        assert_eq!(g.conjugacy_classes().len(), 15);
        let x = g.mul(17, 4000);
        assert_eq!(g.mul(g.inv(17), x), 4000);
    }
}
