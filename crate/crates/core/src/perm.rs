//! Permutations acting on the right of `{0, .., n-1}`.
//!
//! `g.then(h)` applies `g` first, so `i^(gh) = (i^g)^h`. Cycle notation in
//! text form is 1-based.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn then(&self, h: &Perm) -> Perm {
        assert_eq!(self.degree(), h.degree());
        Perm(self.0.iter().map(|&x| h.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n || seen[x as usize] {
                return Err(Error::Parse("image list is not a permutation".into()));
            }
            seen[x as usize] = true;
        }
        Ok(Perm(images))
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles(true).iter().map(|c| c.len()).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles(true).len()
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self, include_fixed: bool) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cyc.push(x);
                x = self.0[x as usize];
            }
            if cyc.len() > 1 || include_fixed {
                out.push(cyc);
            }
        }
        out
    }

    /// Parse 1-based cycle notation such as `(1,2,3)(4,5)` or `(1 2)`. The
    /// identity may be written `()`.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let pts: Vec<u32> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad point {t:?}")))
                })
                .collect::<Result<_>>()?;
            for &p in &pts {
                if p == 0 || p as usize > degree {
                    return Err(Error::Parse(format!("point {p} outside 1..={degree}")));
                }
            }
            // Compose this cycle after what has been read so far.
            let mut cyc = Perm::identity(degree);
            for k in 0..pts.len() {
                cyc.0[pts[k] as usize - 1] = pts[(k + 1) % pts.len()] - 1;
            }
            Perm::from_images(cyc.0.clone())?;
            images = images.iter().map(|&x| cyc.0[x as usize]).collect();
            rest = open[close + 1..].trim_start();
        }
        Perm::from_images(images)
    }

    /// Largest point moved by a cycle string, used to infer the degree.
    pub fn max_point(s: &str) -> usize {
        s.split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles(false);
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_action_composition() {
        let a = Perm::parse_cycles("(1,2)", 3).unwrap();
        let b = Perm::parse_cycles("(2,3)", 3).unwrap();
        // 1 -> 2 under a, then 2 -> 3 under b.
        assert_eq!(a.then(&b).image(0), 2);
        assert_eq!(a.then(&b).to_string(), "(1,3,2)");
    }

    #[test]
    fn parse_display_round_trip() {
        let g = Perm::parse_cycles("(1 2 3)(4,5)", 5).unwrap();
        assert_eq!(g.to_string(), "(1,2,3)(4,5)");
        assert_eq!(g.cycle_type(), vec![3, 2]);
        assert!(g.then(&g.inverse()).is_identity());
        assert!(Perm::parse_cycles("(1,6)", 5).is_err());
    }
}
