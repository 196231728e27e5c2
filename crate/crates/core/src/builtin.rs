//! Small named groups given both by permutations and by a presentation on
//! the same generators.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::presentation::Presentation;

#[derive(Debug, Clone)]
pub struct NamedGroup {
    pub name: String,
    pub perms: Vec<Perm>,
    pub presentation: Option<Presentation>,
}

impl NamedGroup {
    pub fn group(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_perms(&self.perms, 1 << 22)
    }
}

fn cycles(s: &str, n: usize) -> Perm {
    Perm::parse_cycles(s, n).expect("builtin permutation")
}

/// `A_4 = <a, b | a^2, b^3, (ab)^3>` with `a = (1,2)(3,4)`, `b = (1,2,3)`.
pub fn a4() -> NamedGroup {
    NamedGroup {
        name: "A4".into(),
        perms: vec![cycles("(1,2)(3,4)", 4), cycles("(1,2,3)", 4)],
        presentation: Some(Presentation::parse("gens: a b\na^2\nb^3\n(a*b)^3").unwrap()),
    }
}

/// `A_5 = <a, b | a^2, b^3, (ab)^5>` with `a = (1,2)(3,4)`, `b = (1,3,5)`.
pub fn a5() -> NamedGroup {
    NamedGroup {
        name: "A5".into(),
        perms: vec![cycles("(1,2)(3,4)", 5), cycles("(1,3,5)", 5)],
        presentation: Some(Presentation::parse("gens: a b\na^2\nb^3\n(a*b)^5").unwrap()),
    }
}

/// Dihedral group of order `2n` acting on `Z/n`: `r: x -> x+1`, `s: x -> -x`.
pub fn dihedral(n: usize) -> NamedGroup {
    let r = Perm((0..n as u32).map(|x| (x + 1) % n as u32).collect());
    let s = Perm((0..n as u32).map(|x| (n as u32 - x) % n as u32).collect());
    NamedGroup {
        name: format!("D{n}"),
        perms: vec![r, s],
        presentation: Some(Presentation::new(
            2,
            vec![vec![1; n], vec![2, 2], vec![1, 2, 1, 2]],
        )),
    }
}

pub fn cyclic(n: usize) -> NamedGroup {
    NamedGroup {
        name: format!("Z{n}"),
        perms: vec![Perm((0..n as u32).map(|x| (x + 1) % n as u32).collect())],
        presentation: Some(Presentation::new(1, vec![vec![1; n]])),
    }
}

pub fn klein4() -> NamedGroup {
    NamedGroup {
        name: "K4".into(),
        perms: vec![cycles("(1,2)(3,4)", 4), cycles("(1,3)(2,4)", 4)],
        presentation: Some(Presentation::parse("gens: a b\na^2\nb^2\n[a,b]").unwrap()),
    }
}

/// Look up `A4`, `A5`, `K4`, `D<n>` or `Z<n>`.
pub fn by_name(name: &str) -> Result<NamedGroup> {
    let parse_n = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    match name {
        "A4" => Ok(a4()),
        "A5" => Ok(a5()),
        "K4" => Ok(klein4()),
        _ => {
            if let Some(n) = name.strip_prefix('D').and_then(parse_n).filter(|&n| n >= 3) {
                Ok(dihedral(n))
            } else if let Some(n) = name.strip_prefix('Z').and_then(parse_n) {
                Ok(cyclic(n))
            } else {
                Err(Error::InvalidInput(format!(
                    "unknown builtin group {name:?}"
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentations_match_permutations() {
        for g in [a4(), a5(), dihedral(5), dihedral(25), cyclic(7), klein4()] {
            let perm_group = g.group().unwrap();
            let pres = g.presentation.as_ref().unwrap();
            let abstract_group = pres.to_group(10_000).unwrap();
            assert_eq!(perm_group.order(), abstract_group.order(), "{}", g.name);
            for r in &pres.relators {
                assert_eq!(perm_group.eval_word(r), 0, "{}", g.name);
            }
        }
    }
}
