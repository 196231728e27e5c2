//! Completeness of conjugacy class sets: whether every subgroup meeting
//! each class of a set is the whole group.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

/// A proper subgroup meeting every required class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub generators: Vec<u32>,
    pub order: usize,
    #[serde(skip)]
    pub elements: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessVerdict {
    pub complete: bool,
    pub witness: Option<Witness>,
}

fn meets_all(g: &FiniteGroup, sub: &[u32], classes: &[usize]) -> bool {
    classes
        .iter()
        .all(|&c| sub.iter().any(|&x| g.class_of(x) == c))
}

/// Proper subgroups generated by one element from each required class, the
/// first element fixed to a class representative.
fn seed_subgroups(g: &FiniteGroup, classes: &[usize], budget: usize) -> Result<Vec<Vec<u32>>> {
    let cls = g.conjugacy_classes();
    let first = cls[classes[0]].representative;
    let rest: Vec<usize> = classes[1..].to_vec();
    let explore = |b: u32| -> Option<Vec<Vec<u32>>> {
        let mut found = Vec::new();
        let mut stack = vec![(vec![first, b], 1usize)];
        let mut visited = 0usize;
        while let Some((gens, depth)) = stack.pop() {
            visited += 1;
            if visited > budget {
                return None;
            }
            let Some(sub) = g.closure_bounded(&gens, g.order() / 2) else {
                continue;
            };
            let next =
                (depth..rest.len()).find(|&i| !sub.iter().any(|&x| g.class_of(x) == rest[i]));
            match next {
                None => found.push(sub),
                Some(i) => {
                    for &y in &cls[rest[i]].members {
                        let mut more = gens.clone();
                        more.push(y);
                        stack.push((more, i + 1));
                    }
                }
            }
        }
        Some(found)
    };
    if rest.is_empty() {
        return Ok(g
            .closure_bounded(&[first], g.order() / 2)
            .into_iter()
            .collect());
    }
    let seeds: Vec<Vec<Vec<u32>>> = cls[rest[0]]
        .members
        .par_iter()
        .map(|&b| explore(b))
        .collect::<Option<_>>()
        .ok_or_else(|| {
            Error::Budget(format!(
                "more than {budget} generator tuples in the completeness search"
            ))
        })?;
    let mut out: BTreeSet<Vec<u32>> = BTreeSet::new();
    for s in seeds.into_iter().flatten() {
        out.insert(s);
    }
    Ok(out.into_iter().collect())
}

/// Whether `classes` (indices into the group's class list) is gcomplete. On
/// failure the witness is a proper subgroup of largest order meeting every
/// class, ties broken by the sorted element list.
pub fn is_gcomplete(
    g: &FiniteGroup,
    classes: &[usize],
    budget: usize,
) -> Result<CompletenessVerdict> {
    let mut classes: Vec<usize> = classes
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    classes.retain(|&c| g.conjugacy_classes()[c].element_order != 1);
    if classes.is_empty() {
        let witness = (g.order() > 1).then(|| Witness {
            generators: vec![],
            order: 1,
            elements: vec![0],
        });
        return Ok(CompletenessVerdict {
            complete: witness.is_none(),
            witness,
        });
    }
    // Smaller classes first keeps the branching low.
    classes.sort_by_key(|&c| (g.conjugacy_classes()[c].size(), c));
    let seeds = seed_subgroups(g, &classes, budget)?;
    if seeds.is_empty() {
        return Ok(CompletenessVerdict {
            complete: true,
            witness: None,
        });
    }
    let mut seen: HashSet<Vec<u32>> = seeds.iter().cloned().collect();
    let mut frontier = seeds;
    while !frontier.is_empty() {
        if seen.len() > budget {
            return Err(Error::Budget(format!(
                "more than {budget} subgroups in the completeness search"
            )));
        }
        let grown: Vec<Vec<u32>> = frontier
            .par_iter()
            .flat_map_iter(|h| {
                let mut inside = vec![false; g.order()];
                for &x in h {
                    inside[x as usize] = true;
                }
                let mut out = Vec::new();
                for y in 0..g.order() as u32 {
                    if inside[y as usize] {
                        continue;
                    }
                    let mut gens = g.small_generating_set(h);
                    gens.push(y);
                    if let Some(k) = g.closure_bounded(&gens, g.order() / 2) {
                        for &x in &k {
                            inside[x as usize] = true;
                        }
                        out.push(k);
                    }
                }
                out
            })
            .collect();
        frontier = grown
            .into_iter()
            .filter(|k| seen.insert(k.clone()))
            .collect();
    }
    let best = seen
        .into_iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
        .expect("nonempty");
    debug_assert!(meets_all(g, &best, &classes));
    let generators = g.small_generating_set(&best);
    Ok(CompletenessVerdict {
        complete: false,
        witness: Some(Witness {
            generators,
            order: best.len(),
            elements: best,
        }),
    })
}

/// Indices of the nonidentity classes of elements of order prime to `p`.
pub fn p_prime_classes(g: &FiniteGroup, p: u32) -> Vec<usize> {
    g.conjugacy_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.element_order != 1 && c.element_order % p != 0)
        .map(|(i, _)| i)
        .collect()
}

pub fn is_p_gcomplete(g: &FiniteGroup, p: u32, budget: usize) -> Result<CompletenessVerdict> {
    is_gcomplete(g, &p_prime_classes(g, p), budget)
}

/// Verdict after removing one pair of mutually inverse entries of `classes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRemoval {
    pub removed: (usize, usize),
    pub verdict: CompletenessVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HmVerdict {
    pub complete: bool,
    pub removals: Vec<PairRemoval>,
}

/// H-M-gcompleteness of a class tuple (with repetition): for every pair of
/// positions `i < j` with `C_j = C_i^{-1}`, the remaining entries must be
/// gcomplete. With `p` given, every entry must be a `p'` class.
pub fn is_hm_p_gcomplete(
    g: &FiniteGroup,
    classes: &[usize],
    p: Option<u32>,
    budget: usize,
) -> Result<HmVerdict> {
    let cls = g.conjugacy_classes();
    if let Some(p) = p {
        if classes
            .iter()
            .any(|&c| cls[c].element_order.is_multiple_of(p))
        {
            return Err(Error::NotPPrime(p));
        }
    }
    let inverse_class = |c: usize| g.class_of(g.inv(cls[c].representative));
    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| ((i + 1)..classes.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| inverse_class(classes[i]) == classes[j])
        .collect();
    if pairs.is_empty() {
        return Err(Error::NoInversePairs);
    }
    let mut removals = Vec::new();
    for (i, j) in pairs {
        let rest: Vec<usize> = classes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, &c)| c)
            .collect();
        let verdict = if rest.is_empty() {
            CompletenessVerdict {
                complete: false,
                witness: Some(Witness {
                    generators: vec![],
                    order: 1,
                    elements: vec![0],
                }),
            }
        } else {
            is_gcomplete(g, &rest, budget)?
        };
        removals.push(PairRemoval {
            removed: (i, j),
            verdict,
        });
    }
    Ok(HmVerdict {
        complete: removals.iter().all(|r| r.verdict.complete),
        removals,
    })
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Least `d` with `Q(ζ_d) = Q(ζ_n)`.
pub fn cyclotomic_order_q(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// `2 Σ [Q(ζ_{d_i}) : Q]` over element orders `n_i`.
pub fn branch_count_bound(orders: &[u64]) -> u64 {
    2 * orders
        .iter()
        .map(|&n| euler_phi(cyclotomic_order_q(n)))
        .sum::<u64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn a5() -> FiniteGroup {
        FiniteGroup::from_perms(&builtin::a5().perms, 100).unwrap()
    }

    #[test]
    fn a5_completeness_by_prime() {
        let g = a5();
        assert!(is_p_gcomplete(&g, 2, 100_000).unwrap().complete);
        let v3 = is_p_gcomplete(&g, 3, 100_000).unwrap();
        assert!(!v3.complete);
        let w3 = v3.witness.unwrap();
        assert_eq!(w3.order, 10);
        assert!(meets_all(&g, &w3.elements, &p_prime_classes(&g, 3)));
        assert!(w3.elements.iter().any(|&x| g.element_order(x) == 5));
        let v5 = is_p_gcomplete(&g, 5, 100_000).unwrap();
        let w5 = v5.witness.unwrap();
        assert_eq!(w5.order, 12);
        assert_eq!(g.closure(&w5.generators), w5.elements);
    }

    #[test]
    fn hm_removal_on_four_three_cycles() {
        let g = a5();
        let c = g.class_by_label("3A").unwrap();
        let v = is_hm_p_gcomplete(&g, &[c; 4], Some(2), 100_000).unwrap();
        assert_eq!(v.removals.len(), 6);
        assert!(!v.complete);
        assert_eq!(v.removals[0].verdict.witness.as_ref().unwrap().order, 12);
        let two = is_hm_p_gcomplete(&g, &[c; 2], None, 100_000).unwrap();
        assert!(!two.complete);
        assert!(matches!(
            is_hm_p_gcomplete(&g, &[c; 4], Some(3), 100_000),
            Err(Error::NotPPrime(3))
        ));
        let a4 = FiniteGroup::from_perms(&builtin::a4().perms, 100).unwrap();
        let c3 = a4.class_by_label("3A").unwrap();
        assert!(matches!(
            is_hm_p_gcomplete(&a4, &[c3; 4], None, 100_000),
            Err(Error::NoInversePairs)
        ));
    }

    #[test]
    fn cyclotomic_arithmetic() {
        assert_eq!(cyclotomic_order_q(5), 5);
        assert_eq!(cyclotomic_order_q(6), 3);
        assert_eq!(cyclotomic_order_q(4), 4);
        assert_eq!(branch_count_bound(&[5]), 8);
        assert_eq!(branch_count_bound(&[3, 5]), 12);
    }
}
