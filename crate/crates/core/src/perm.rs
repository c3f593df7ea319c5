//! Permutations on `{1..degree}` and cycle notation.
//!
//! Products act on the right: `x^(a*b) = (x^a)^b`, so `(1 2)*(1 3)` maps
//! `1 -> 2 -> 2` and `3 -> 3 -> 1`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} appears more than once; not a bijection")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation {text:?}: {reason}")]
    Syntax { text: String, reason: String },
    #[error("image list is not a bijection on 1..={0}")]
    NotBijective(usize),
}

/// A permutation stored as its image list on 0-based points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds from 0-based images, rejecting anything that is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijective(n));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds from disjoint cycles of 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if used[p - 1] {
                    return Err(PermError::RepeatedPoint(p));
                }
                used[p - 1] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(1 2)(3 4)`, `(1,2,3)` or `()`.
    pub fn parse(degree: usize, text: &str) -> Result<Self, PermError> {
        let cycles = parse_cycles(text)?;
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Places `self` on points `offset..offset+degree` of a larger permutation.
    pub fn shifted(&self, offset: usize, degree: usize) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[i + offset] = x + offset as u32;
        }
        Permutation { images }
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let syntax = |reason: &str| PermError::Syntax {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(syntax("empty"));
    }
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| syntax("expected '('"))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| syntax("unclosed '('"))?;
        let body = &body_start[..close];
        if body.contains('(') {
            return Err(syntax("nested '('"));
        }
        let points = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| syntax("non-numeric point")))
            .collect::<Result<Vec<_>, _>>()?;
        if points.len() > 1 {
            cycles.push(points);
        }
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = Permutation::parse(4, "(1 2)(3 4)").unwrap();
        assert_eq!(p.to_string(), "(1 2)(3 4)");
        assert_eq!(Permutation::parse(3, "(2,3,1)").unwrap().to_string(), "(1 2 3)");
        assert!(Permutation::parse(3, "()").unwrap().is_identity());
    }

    #[test]
    fn right_action_product() {
        let a = Permutation::parse(3, "(1 2)").unwrap();
        let b = Permutation::parse(3, "(1 3)").unwrap();
        assert_eq!(a.then(&b).to_string(), "(1 2 3)");
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Permutation::parse(3, "(1 4)"),
            Err(PermError::PointOutOfRange { point: 4, .. })
        ));
        assert!(matches!(
            Permutation::parse(3, "(1 2)(2 3)"),
            Err(PermError::RepeatedPoint(2))
        ));
        assert!(Permutation::parse(3, "(1 2").is_err());
        assert!(Permutation::parse(3, "1 2").is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }
}
