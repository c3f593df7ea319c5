//! Standard group families, all realized as permutation groups.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?} (expected cyclic, dihedral, symmetric, alternating, quaternion8, or A*B)")]
    Unknown(String),
    #[error("family {family} needs a positive integer parameter, got {found:?}")]
    BadParameter { family: String, found: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    Cyclic(usize),
    /// Symmetries of an n-gon, order 2n.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    Product(Box<Family>, Box<Family>),
}

impl Family {
    pub fn product(a: Family, b: Family) -> Family {
        Family::Product(Box::new(a), Box::new(b))
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup, FamilyError> {
        let (degree, gens): (usize, Vec<&str>) = match *self {
            Family::Product(ref a, ref b) => {
                let a = a.build(cap)?;
                let b = b.build(cap)?;
                return Ok(direct_product(&a, &b, cap)?);
            }
            Family::Quaternion8 => (8, vec!["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]),
            Family::Cyclic(n) | Family::Dihedral(n) | Family::Symmetric(n) | Family::Alternating(n)
                if n == 0 =>
            {
                return Err(FamilyError::BadParameter {
                    family: self.kind().into(),
                    found: "0".into(),
                })
            }
            Family::Dihedral(1) => (2, vec!["(1 2)"]),
            Family::Dihedral(2) => (4, vec!["(1 2)(3 4)", "(1 3)(2 4)"]),
            _ => return self.build_generic(cap),
        };
        let gens = gens
            .iter()
            .map(|g| Permutation::parse(degree, g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(GroupError::from)?;
        Ok(FiniteGroup::from_permutation_generators(degree, &gens, cap)?)
    }

    fn build_generic(&self, cap: usize) -> Result<FiniteGroup, FamilyError> {
        let n = match *self {
            Family::Cyclic(n) | Family::Dihedral(n) | Family::Symmetric(n) | Family::Alternating(n) => n,
            _ => unreachable!("handled in build"),
        };
        let long_cycle: Vec<usize> = (1..=n).collect();
        let cycles: Vec<Vec<Vec<usize>>> = match *self {
            Family::Cyclic(_) => vec![vec![long_cycle]],
            Family::Symmetric(_) if n < 2 => Vec::new(),
            Family::Symmetric(_) => vec![vec![vec![1, 2]], vec![long_cycle]],
            Family::Dihedral(_) => {
                let reflection = (1..=n / 2).map(|i| vec![i, n + 1 - i]).collect();
                vec![vec![long_cycle], reflection]
            }
            Family::Alternating(_) => (3..=n).map(|i| vec![vec![1, 2, i]]).collect(),
            _ => unreachable!(),
        };
        let gens = cycles
            .iter()
            .map(|c| Permutation::from_cycles(n, c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(GroupError::from)?;
        Ok(FiniteGroup::from_permutation_generators(n, &gens, cap)?)
    }

    fn kind(&self) -> &'static str {
        match self {
            Family::Cyclic(_) => "cyclic",
            Family::Dihedral(_) => "dihedral",
            Family::Symmetric(_) => "symmetric",
            Family::Alternating(_) => "alternating",
            Family::Quaternion8 => "quaternion8",
            Family::Product(..) => "product",
        }
    }

    /// Order of the group this family member builds.
    pub fn order(&self) -> usize {
        match *self {
            Family::Cyclic(n) => n,
            Family::Dihedral(n) => 2 * n,
            Family::Symmetric(n) => (1..=n).product(),
            Family::Alternating(n) => ((1..=n).product::<usize>() / 2).max(1),
            Family::Quaternion8 => 8,
            Family::Product(ref a, ref b) => a.order() * b.order(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Product(a, b) => write!(f, "{a}*{b}"),
            Family::Quaternion8 => f.write_str("quaternion8"),
            Family::Cyclic(n) | Family::Dihedral(n) | Family::Symmetric(n) | Family::Alternating(n) => {
                write!(f, "{}:{n}", self.kind())
            }
        }
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    /// `symmetric:4`, `quaternion8`, `cyclic:2*dihedral:3` (products nest left).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut factors = s.split('*').map(parse_single);
        let first = factors.next().expect("split yields at least one piece")?;
        factors.try_fold(first, |acc, next| Ok(Family::product(acc, next?)))
    }
}

fn parse_single(s: &str) -> Result<Family, FamilyError> {
    let s = s.trim();
    if s == "quaternion8" || s == "quaternion:8" {
        return Ok(Family::Quaternion8);
    }
    let (kind, param) = s.split_once(':').ok_or_else(|| FamilyError::Unknown(s.into()))?;
    let ctor: fn(usize) -> Family = match kind {
        "cyclic" => Family::Cyclic,
        "dihedral" => Family::Dihedral,
        "symmetric" => Family::Symmetric,
        "alternating" => Family::Alternating,
        _ => return Err(FamilyError::Unknown(kind.into())),
    };
    match param.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(ctor(n)),
        _ => Err(FamilyError::BadParameter {
            family: kind.into(),
            found: param.into(),
        }),
    }
}

/// `A × B` acting on the disjoint union of the factors' point sets.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<FiniteGroup, GroupError> {
    if a.order().saturating_mul(b.order()) > cap {
        return Err(GroupError::TooLarge { cap });
    }
    let (da, pa) = a.permutation_images();
    let (db, pb) = b.permutation_images();
    let degree = da + db;
    let gens: Vec<Permutation> = a
        .generators()
        .iter()
        .map(|&x| pa[x].shifted(0, degree))
        .chain(b.generators().iter().map(|&x| pb[x].shifted(da, degree)))
        .collect();
    FiniteGroup::from_permutation_generators(degree, &gens, cap)
}
