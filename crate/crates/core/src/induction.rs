//! First Frattini level of a group whose Sylow `p`-subgroup is elementary
//! abelian: build the split level for the Sylow normalizer `N = P ⋊ H`,
//! induce its kernel module to `G`, split the induced module with Fitting's
//! lemma, and keep a summand that carries a nonsplit Frattini extension.

use crate::error::{Error, Result};
use crate::extension::{build_extension, h2_classes, H2Data};
use crate::frattini::{
    split_level, verify_frattini, verify_order_lifting, FrattiniLevel, SplitLevel,
};
use crate::group::FiniteGroup;
use crate::linalg::{index_to_vec, Fp, Matrix, Subspace};
use crate::loewy::decompose;
use crate::module::GModule;
use crate::presentation::Presentation;
use std::sync::Arc;

/// The split level of the Sylow normalizer and the induced module.
#[derive(Debug, Clone)]
pub struct NormalizerInduction {
    pub sylow: Vec<u32>,
    pub normalizer: Vec<u32>,
    pub split: SplitLevel,
    /// Embedding of the split level's base `P_0 ⋊ H` into `G`.
    pub embedding: Vec<u32>,
    pub induced: GModule,
}

/// A complement to the normal Sylow subgroup `p_sub` of `n_elems`, found
/// among subgroups generated by at most two `p'` elements.
fn hall_complement(g: &FiniteGroup, n_elems: &[u32], p_sub: &[u32], p: u32) -> Option<Vec<u32>> {
    let target = n_elems.len() / p_sub.len();
    let pprime: Vec<u32> = n_elems
        .iter()
        .copied()
        .filter(|&x| !g.element_order(x).is_multiple_of(p))
        .collect();
    if target == 1 {
        return Some(vec![0]);
    }
    for (i, &a) in pprime.iter().enumerate() {
        if g.closure(&[a]).len() == target {
            return Some(g.closure(&[a]));
        }
        for &b in &pprime[i + 1..] {
            if let Some(c) = g.closure_bounded(&[a, b], target) {
                if c.len() == target {
                    return Some(c);
                }
            }
        }
    }
    None
}

pub fn normalizer_induction(
    g: Arc<FiniteGroup>,
    p: u32,
    max_order: usize,
) -> Result<NormalizerInduction> {
    let sylow = g.sylow(p);
    let is_elementary = sylow
        .iter()
        .all(|&x| g.pow(x, p as i64) == 0 && sylow.iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
    if !is_elementary {
        return Err(Error::HypothesisUnmet(
            "the Sylow subgroup is not elementary abelian".into(),
        ));
    }
    let normalizer = g.normalizer(&sylow);
    let h_elems = hall_complement(&g, &normalizer, &sylow, p).ok_or_else(|| {
        Error::HypothesisUnmet("no complement to the Sylow subgroup in its normalizer".into())
    })?;
    let p_basis = g.small_generating_set(&sylow);
    let d = p_basis.len();
    let h_gens = {
        let gens = g.small_generating_set(&h_elems);
        if gens.is_empty() {
            vec![0]
        } else {
            gens
        }
    };
    let (h_group, h_emb) = g.subgroup(&h_gens)?;
    let h_group = Arc::new(h_group);
    // Coordinates of Sylow elements in the chosen basis.
    let mut coords = std::collections::HashMap::new();
    for idx in 0..(p as usize).pow(d as u32) {
        let v = index_to_vec(idx, p, d);
        let x = v
            .iter()
            .zip(&p_basis)
            .fold(0, |acc, (&c, &b)| g.mul(acc, g.pow(b, c as i64)));
        coords.insert(x, v);
    }
    let field = Fp::new(p);
    let mats = h_group
        .generators()
        .iter()
        .map(|&hg| {
            let h = h_emb[hg as usize];
            let rows: Vec<Vec<u8>> = p_basis
                .iter()
                .map(|&b| coords[&g.conj(b, h)].clone())
                .collect();
            Matrix::from_rows(field, d, &rows)
        })
        .collect();
    let action = GModule::new(h_group.clone(), field, mats)?;
    let split = split_level(&action, max_order)?;
    let base = &split.level.base;
    let images: Vec<u32> = p_basis
        .iter()
        .copied()
        .chain(h_group.generators().iter().map(|&x| h_emb[x as usize]))
        .collect();
    let embedding = base.hom_from_gen_images(&g, &images)?;
    let mut sorted = embedding.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted != normalizer {
        return Err(Error::InvariantViolation(
            "split base does not map onto the normalizer".into(),
        ));
    }
    let induced = split.level.kernel_module.induce(&embedding, g)?;
    Ok(NormalizerInduction {
        sylow,
        normalizer,
        split,
        embedding,
        induced,
    })
}

/// Outcome of [`level_one`].
#[derive(Debug, Clone)]
pub struct LevelOne {
    pub induction: NormalizerInduction,
    /// Indecomposable summands of the induced module, as subspaces.
    pub summands: Vec<Subspace>,
    /// Index into `summands` of the kernel module of the level.
    pub chosen: usize,
    /// Summands whose extensions were too large to build.
    pub skipped: Vec<usize>,
    pub h2: H2Data,
    pub tail: Vec<u8>,
    pub level: FrattiniLevel,
}

/// Search the summands of the induced module, largest first, for one with a
/// nonsplit extension class whose extension is a Frattini cover with order
/// lifting; the first class in lexicographic order that passes is used.
pub fn level_one(
    g: Arc<FiniteGroup>,
    pres: &Presentation,
    p: u32,
    max_order: usize,
) -> Result<LevelOne> {
    let induction = normalizer_induction(g.clone(), p, max_order)?;
    let summands = decompose(&induction.induced)?;
    let mut order: Vec<usize> = (0..summands.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(summands[i].dim()));
    let mut skipped = Vec::new();
    for i in order {
        let s = &summands[i];
        let size = (p as f64).powi(s.dim() as i32) * g.order() as f64;
        if size > crate::group::TABLE_LIMIT as f64 || size > max_order as f64 {
            skipped.push(i);
            continue;
        }
        let module = induction.induced.submodule(s)?;
        let h2 = h2_classes(pres, &module)?;
        for tail in h2.class_representatives().into_iter().skip(1) {
            let level = build_extension(pres, &module, &tail)?;
            if level.total.num_gens() == g.num_gens()
                && verify_frattini(&level)
                && verify_order_lifting(&level).passed()
            {
                return Ok(LevelOne {
                    induction,
                    summands,
                    chosen: i,
                    skipped,
                    h2,
                    tail,
                    level,
                });
            }
        }
    }
    Err(Error::HypothesisUnmet(
        "no summand of the induced module carries a Frattini extension".into(),
    ))
}

/// `G_1 -> G` at `p`: the split level when the Sylow `p`-subgroup is normal,
/// otherwise the level found by [`level_one`].
pub fn first_level(
    g: Arc<FiniteGroup>,
    pres: &Presentation,
    p: u32,
    max_order: usize,
) -> Result<FrattiniLevel> {
    if g.normalizer(&g.sylow(p)).len() == g.order() {
        return Ok(normalizer_induction(g, p, max_order)?.split.level);
    }
    Ok(level_one(g, pres, p, max_order)?.level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::frattini::splits_over;
    use crate::loewy::{is_indecomposable, loewy_layers};
    use crate::perm::Perm;

    #[test]
    fn a4_normal_sylow_gives_the_split_level() {
        let a4 = builtin::a4();
        let g = Arc::new(FiniteGroup::from_perms(&a4.perms, 100).unwrap());
        let ind = normalizer_induction(g, 2, 1 << 16).unwrap();
        assert_eq!(ind.induced.dim, 5);
        assert_eq!(ind.split.level.total.order(), 384);
        let l = loewy_layers(&ind.induced).unwrap();
        assert_eq!(l.display(), "2a → 2a ⊕ 1");
    }

    #[test]
    fn a5_at_five_induces_an_indecomposable_six() {
        let a5 = builtin::a5();
        let g = Arc::new(FiniteGroup::from_perms(&a5.perms, 100).unwrap());
        let ind = normalizer_induction(g, 5, 1 << 16).unwrap();
        assert_eq!(ind.normalizer.len(), 10);
        assert_eq!(ind.induced.dim, 6);
        assert!(is_indecomposable(&ind.induced));
        let l = loewy_layers(&ind.induced).unwrap();
        assert_eq!(l.layer_dims(), vec![3, 3]);
    }

    #[test]
    fn a5_level_one_at_two() {
        let a5 = builtin::a5();
        let g = Arc::new(FiniteGroup::from_perms(&a5.perms, 100).unwrap());
        let one = level_one(g.clone(), a5.presentation.as_ref().unwrap(), 2, 1 << 16).unwrap();
        assert_eq!(one.induction.induced.dim, 25);
        assert_eq!(one.level.kernel_dim(), 5);
        assert_eq!(one.h2.dim, 1);
        assert_eq!(one.level.total.order(), 1920);
        let a4 = builtin::a4();
        let base = &one.level.base;
        let sub: Vec<u32> = ["(1,2)(3,4)", "(1,2,3)"]
            .iter()
            .map(|c| {
                base.element_of_perm(&Perm::parse_cycles(c, 5).unwrap())
                    .unwrap()
            })
            .collect();
        let a4_pres = a4.presentation.unwrap();
        assert!(!splits_over(&one.level, &sub, &a4_pres).unwrap());
    }
}
