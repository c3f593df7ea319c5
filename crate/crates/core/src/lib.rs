//! Finite-group normal hulls, commutator subgroups, Schur-type width bounds,
//! and exhaustive audits of the identities that relate them.

pub mod calculus;
pub mod cli;
pub mod corpus;
pub mod families;
pub mod format;
pub mod group;
pub mod perm;
pub mod report;
pub mod schur;
pub mod subgroups;
pub mod theorem;
pub mod verdict;

pub use group::{Element, FiniteGroup, GroupError, QuotientMap, Subgroup, DEFAULT_ORDER_CAP};
pub use perm::Permutation;
pub use verdict::{Status, Verdict};
