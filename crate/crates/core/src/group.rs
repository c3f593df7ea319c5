//! Finite groups as dense multiplication tables, and their subgroups.
//!
//! Elements are ids `0..order`; id 0 is always the identity. Products are
//! O(1) table lookups, which is what the exhaustive audits need.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::perm::{PermError, Permutation};

/// Dense element id in `0..order`.
pub type Element = usize;

/// Default cap on group order (|S7|); table memory grows with order².
pub const DEFAULT_ORDER_CAP: usize = 5040;

/// Above this order the full associativity scan gives way to Light's test
/// over a generating set.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table has {found} entries in row {row}, expected {order}")]
    RowLength { row: usize, found: usize, order: usize },
    #[error("entry {value} at row {row}, column {col} is not an element id")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("identity axiom fails: 0*{0} or {0}*0 is not {0}")]
    Identity(Element),
    #[error("inverse axiom fails: {0} has no two-sided inverse")]
    Inverse(Element),
    #[error("associativity fails for triple ({a}, {b}, {c}): ({a}*{b})*{c} != {a}*({b}*{c})")]
    Associativity { a: Element, b: Element, c: Element },
    #[error("empty table")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group too large: order exceeds the cap of {cap}")]
    TooLarge { cap: usize },
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("not a group: {0}")]
    Table(#[from] TableError),
    #[error("not normal: conjugating {n} by {g} leaves the subgroup")]
    NotNormal { g: Element, n: Element },
    #[error("element {0} is not in the group")]
    NoSuchElement(Element),
    #[error("permutation {0} is not in the group")]
    NoSuchPermutation(String),
    #[error("group has no permutation representation; use element ids")]
    NoPermutations,
}

#[derive(Debug, Clone)]
struct PermRep {
    degree: usize,
    perms: Vec<Permutation>,
    index: HashMap<Permutation, Element>,
}

/// A finite group with its complete multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    generators: Vec<Element>,
    labels: Option<Vec<String>>,
    perms: Option<PermRep>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// The group generated by `gens` acting on `{1..degree}`.
    ///
    /// Elements are numbered in breadth-first order from the identity, so id
    /// 0 is the identity; labels are cycle notation.
    pub fn from_permutation_generators(
        degree: usize,
        gens: &[Permutation],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (index, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    index,
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let gens: Vec<&Permutation> = gens.iter().filter(|g| !g.is_identity()).collect();

        let mut perms = vec![Permutation::identity(degree)];
        let mut index = HashMap::new();
        index.insert(perms[0].clone(), 0usize);
        // BFS tree: element = parent * gens[via]
        let mut parent = vec![(0usize, usize::MAX)];
        let mut right_mul: Vec<Vec<u32>> = Vec::new();
        let mut head = 0;
        while head < perms.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (gi, g) in gens.iter().enumerate() {
                let p = perms[head].then(g);
                let id = match index.get(&p) {
                    Some(&id) => id,
                    None => {
                        let id = perms.len();
                        if id >= cap {
                            return Err(GroupError::TooLarge { cap });
                        }
                        index.insert(p.clone(), id);
                        perms.push(p);
                        parent.push((head, gi));
                        id
                    }
                };
                row.push(id as u32);
            }
            right_mul.push(row);
            head += 1;
        }

        let order = perms.len();
        let mut table = vec![0u32; order * order];
        for x in 0..order {
            table[x * order] = x as u32;
            for y in 1..order {
                let (py, gi) = parent[y];
                let xpy = table[x * order + py] as usize;
                table[x * order + y] = right_mul[xpy][gi];
            }
        }
        let inverses = (0..order)
            .map(|x| index[&perms[x].inverse()] as u32)
            .collect();
        let mut generators: Vec<Element> = gens.iter().map(|g| index[*g]).collect();
        generators.sort_unstable();
        generators.dedup();
        let labels = perms.iter().map(|p| p.to_string()).collect();

        Ok(FiniteGroup {
            order,
            table,
            inverses,
            generators,
            labels: Some(labels),
            perms: Some(PermRep {
                degree,
                perms,
                index,
            }),
        })
    }

    /// Validates a Cayley table (row `g`, column `h` holds `g*h`; id 0 must
    /// be the identity).
    pub fn from_table(rows: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(TableError::Empty.into());
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != order {
                return Err(TableError::RowLength {
                    row,
                    found: entries.len(),
                    order,
                }
                .into());
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(TableError::OutOfRange { row, col, value }.into());
                }
                table.push(value as u32);
            }
        }
        let mut group = FiniteGroup {
            order,
            table,
            inverses: vec![0; order],
            generators: Vec::new(),
            labels,
            perms: None,
        };
        for x in 0..order {
            if group.mul(0, x) != x || group.mul(x, 0) != x {
                return Err(TableError::Identity(x).into());
            }
        }
        for x in 0..order {
            let inv = (0..order)
                .find(|&y| group.mul(x, y) == 0 && group.mul(y, x) == 0)
                .ok_or(TableError::Inverse(x))?;
            group.inverses[x] = inv as u32;
        }
        group.generators = group.greedy_generators(0..order);
        if order <= EXHAUSTIVE_AXIOM_LIMIT {
            group.check_associativity()?;
        } else {
            group.check_associativity_light()?;
        }
        Ok(group)
    }

    /// Internal constructor for tables that are groups by construction.
    pub(crate) fn from_trusted_table(
        order: usize,
        table: Vec<u32>,
        generators: Vec<Element>,
        labels: Option<Vec<String>>,
    ) -> Self {
        let mut inverses = vec![0u32; order];
        for x in 0..order {
            let row = &table[x * order..(x + 1) * order];
            let inv = row.iter().position(|&v| v == 0).expect("row contains identity");
            inverses[x] = inv as u32;
        }
        FiniteGroup {
            order,
            table,
            inverses,
            generators,
            labels,
            perms: None,
        }
    }

    pub fn trivial() -> Self {
        Self::from_trusted_table(1, vec![0], Vec::new(), Some(vec!["()".into()]))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inverses[a] as usize
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: Element, x: Element) -> Element {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a,b] = a b a⁻¹ b⁻¹`, the single convention used throughout.
    #[inline]
    pub fn commutator(&self, a: Element, b: Element) -> Element {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, mut base: Element, mut exp: u64) -> Element {
        let mut acc = 0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: Element) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Left-to-right product of a sequence; the empty product is the identity.
    pub fn product<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    /// A generating set of the whole group.
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn row(&self, a: Element) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, x: Element) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => format!("#{x}"),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|p| p.degree)
    }

    pub fn permutation(&self, x: Element) -> Option<&Permutation> {
        self.perms.as_ref().map(|p| &p.perms[x])
    }

    pub fn find_permutation(&self, p: &Permutation) -> Result<Element, GroupError> {
        let rep = self.perms.as_ref().ok_or(GroupError::NoPermutations)?;
        rep.index
            .get(p)
            .copied()
            .ok_or_else(|| GroupError::NoSuchPermutation(p.to_string()))
    }

    /// Permutations of every element: the stored representation if there is
    /// one, else the right regular representation (degree = order).
    pub fn permutation_images(&self) -> (usize, Vec<Permutation>) {
        match &self.perms {
            Some(rep) => (rep.degree, rep.perms.clone()),
            None => {
                let perms = (0..self.order)
                    .map(|g| {
                        let images = (0..self.order).map(|x| self.mul(x, g) as u32).collect();
                        Permutation::from_images(images).expect("group table rows are bijections")
                    })
                    .collect();
                (self.order, perms)
            }
        }
    }

    /// Checks identity, inverse and (exhaustive) associativity axioms.
    pub fn check_axioms(&self) -> Result<(), TableError> {
        for x in self.elements() {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(TableError::Identity(x));
            }
            let y = self.inv(x);
            if self.mul(x, y) != 0 || self.mul(y, x) != 0 {
                return Err(TableError::Inverse(x));
            }
        }
        self.check_associativity()
    }

    fn check_associativity(&self) -> Result<(), TableError> {
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(TableError::Associativity { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    // Light's test: elements g with (xg)y = x(gy) for all x,y form a
    // submagma, so checking a generating set suffices.
    fn check_associativity_light(&self) -> Result<(), TableError> {
        for &b in &self.generators {
            for a in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(TableError::Associativity { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Picks elements in order, keeping those not already generated.
    pub(crate) fn greedy_generators<I: IntoIterator<Item = Element>>(&self, pool: I) -> Vec<Element> {
        let mut gens = Vec::new();
        let mut span = FixedBitSet::with_capacity(self.order);
        span.insert(0);
        for x in pool {
            if !span.contains(x) {
                gens.push(x);
                span = self.closure_bits(&gens);
            }
        }
        gens
    }

    fn closure_bits(&self, gens: &[Element]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.order);
        bits.insert(0);
        let mut queue = vec![0];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !bits.put(y) {
                    queue.push(y);
                }
            }
        }
        bits
    }

    /// The smallest subgroup containing `gens`.
    pub fn generate_closure(&self, gens: &[Element]) -> Subgroup<'_> {
        let mut generators: Vec<Element> = gens.to_vec();
        generators.sort_unstable();
        generators.dedup();
        let members = self.closure_bits(&generators);
        Subgroup::from_bits(self, members, generators)
    }

    pub fn trivial_subgroup(&self) -> Subgroup<'_> {
        self.generate_closure(&[])
    }

    pub fn whole(&self) -> Subgroup<'_> {
        let mut members = FixedBitSet::with_capacity(self.order);
        members.insert_range(..);
        Subgroup::from_bits(self, members, self.generators.clone())
    }

    /// Wraps an element set, returning `None` unless it is a subgroup.
    pub fn subgroup_from_elements(&self, elements: &[Element]) -> Option<Subgroup<'_>> {
        let mut members = FixedBitSet::with_capacity(self.order);
        for &x in elements {
            members.insert(x);
        }
        if !members.contains(0) {
            return None;
        }
        let list: Vec<Element> = members.ones().collect();
        for &a in &list {
            if !members.contains(self.inv(a)) {
                return None;
            }
            for &b in &list {
                if !members.contains(self.mul(a, b)) {
                    return None;
                }
            }
        }
        let gens = self.greedy_generators(list.iter().copied().filter(|&x| x != 0));
        Some(Subgroup::from_bits(self, members, gens))
    }

    /// `{g : gh = hg for all h ∈ H}`.
    pub fn centralizer(&self, h: &Subgroup<'_>) -> Subgroup<'_> {
        let members: FixedBitSet = self
            .elements()
            .filter(|&g| h.generators().iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect_bits(self.order);
        let gens = self.greedy_generators(members.ones().filter(|&x| x != 0));
        Subgroup::from_bits(self, members, gens)
    }

    pub fn center(&self) -> Subgroup<'_> {
        self.centralizer(&self.whole())
    }

    /// Largest normal subgroup inside `s`: the intersection of all `gSg⁻¹`.
    pub fn normal_core(&self, s: &Subgroup<'_>) -> Subgroup<'_> {
        let members: FixedBitSet = s
            .elements()
            .iter()
            .copied()
            .filter(|&x| {
                self.elements()
                    .all(|g| s.contains(self.conj(self.inv(g), x)))
            })
            .collect_bits(self.order);
        let gens = self.greedy_generators(members.ones().filter(|&x| x != 0));
        Subgroup::from_bits(self, members, gens)
    }

    /// `{g h g⁻¹ : h ∈ H}`.
    pub fn conjugate_subgroup<'g>(&'g self, h: &Subgroup<'g>, g: Element) -> Subgroup<'g> {
        let members: FixedBitSet = h
            .elements()
            .iter()
            .map(|&x| self.conj(g, x))
            .collect_bits(self.order);
        let gens = h.generators().iter().map(|&x| self.conj(g, x)).collect();
        Subgroup::from_bits(self, members, gens)
    }

    /// A pair `(g, n)` with `g n g⁻¹ ∉ N`, or `None` if `N` is normal.
    pub fn normality_witness(&self, n: &Subgroup<'_>) -> Option<(Element, Element)> {
        for g in self.elements() {
            for &x in n.elements() {
                if !n.contains(self.conj(g, x)) {
                    return Some((g, x));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, n: &Subgroup<'_>) -> bool {
        self.normality_witness(n).is_none()
    }

    /// Whether every element of `by` normalizes `s`.
    pub fn normalizes(&self, by: &Subgroup<'_>, s: &Subgroup<'_>) -> bool {
        by.generators()
            .iter()
            .all(|&g| s.generators().iter().all(|&x| s.contains(self.conj(g, x))))
    }

    /// Sorted, distinct `{a b : a ∈ A, b ∈ B}`.
    pub fn product_set(&self, a: &Subgroup<'_>, b: &Subgroup<'_>) -> Vec<Element> {
        let mut bits = FixedBitSet::with_capacity(self.order);
        for &x in a.elements() {
            for &y in b.elements() {
                bits.insert(self.mul(x, y));
            }
        }
        bits.ones().collect()
    }

    /// The coset group `G/N` with its projection.
    pub fn quotient<'g>(&'g self, n: &Subgroup<'g>) -> Result<QuotientMap<'g>, GroupError> {
        let whole = self.whole();
        if !self.normalizes(&whole, n) {
            let (g, x) = self.normality_witness(n).expect("generator check found a failure");
            return Err(GroupError::NotNormal { g, n: x });
        }
        let mut map = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in self.elements() {
            if map[x] != usize::MAX {
                continue;
            }
            let coset = reps.len();
            reps.push(x);
            for &k in n.elements() {
                map[self.mul(x, k)] = coset;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * m + j] = map[self.mul(a, b)] as u32;
            }
        }
        let mut generators: Vec<Element> = self
            .generators
            .iter()
            .map(|&g| map[g])
            .filter(|&c| c != 0)
            .collect();
        generators.sort_unstable();
        generators.dedup();
        let target = FiniteGroup::from_trusted_table(m, table, generators, None);
        Ok(QuotientMap {
            source: self,
            target,
            kernel: n.clone(),
            map,
            reps,
        })
    }
}

trait CollectBits {
    fn collect_bits(self, len: usize) -> FixedBitSet;
}

impl<I: Iterator<Item = Element>> CollectBits for I {
    fn collect_bits(self, len: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(len);
        for x in self {
            bits.insert(x);
        }
        bits
    }
}

/// A subgroup of a fixed parent group, compared by element set.
#[derive(Clone)]
pub struct Subgroup<'g> {
    group: &'g FiniteGroup,
    elements: Vec<Element>,
    members: FixedBitSet,
    generators: Vec<Element>,
}

impl<'g> Subgroup<'g> {
    fn from_bits(group: &'g FiniteGroup, members: FixedBitSet, generators: Vec<Element>) -> Self {
        Subgroup {
            group,
            elements: members.ones().collect(),
            members,
            generators,
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted element ids.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.group.order()
    }

    pub fn is_subset(&self, other: &Subgroup<'_>) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Index in the parent group.
    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }

    pub fn intersection(&self, other: &Subgroup<'g>) -> Subgroup<'g> {
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        let gens = self
            .group
            .greedy_generators(members.ones().filter(|&x| x != 0));
        Subgroup::from_bits(self.group, members, gens)
    }

    /// First element of the symmetric difference, if any.
    pub fn difference_witness(&self, other: &Subgroup<'_>) -> Option<Element> {
        self.members
            .symmetric_difference(&other.members)
            .next()
    }

    /// Element-set equality with a plain element list.
    pub fn equals_set(&self, elements: &[Element]) -> bool {
        self.elements == elements
    }

    /// Compact description: order plus generator labels.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|&g| self.group.label(g)).collect();
        format!("<{}> (order {})", gens.join(", "), self.order())
    }
}

impl PartialEq for Subgroup<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup<'_> {}

impl fmt::Debug for Subgroup<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.order())
            .field("generators", &self.generators)
            .field("elements", &self.elements)
            .finish()
    }
}

/// Projection `G -> G/N`.
#[derive(Debug)]
pub struct QuotientMap<'g> {
    pub source: &'g FiniteGroup,
    pub target: FiniteGroup,
    pub kernel: Subgroup<'g>,
    pub map: Vec<Element>,
    /// Least element of each coset; `reps[0]` is the identity.
    pub reps: Vec<Element>,
}

impl<'g> QuotientMap<'g> {
    pub fn image(&self, x: Element) -> Element {
        self.map[x]
    }

    pub fn representative(&self, coset: Element) -> Element {
        self.reps[coset]
    }

    pub fn image_subgroup(&self, s: &Subgroup<'g>) -> Subgroup<'_> {
        let gens: Vec<Element> = s.generators().iter().map(|&x| self.map[x]).collect();
        self.target.generate_closure(&gens)
    }

    /// Elements of the source mapping into `t`.
    pub fn preimage(&self, t: &Subgroup<'_>) -> Subgroup<'g> {
        let members: FixedBitSet = self
            .source
            .elements()
            .filter(|&x| t.contains(self.map[x]))
            .collect_bits(self.source.order());
        let gens = self
            .source
            .greedy_generators(members.ones().filter(|&x| x != 0));
        Subgroup::from_bits(self.source, members, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_group(degree: usize, gens: &[&str]) -> FiniteGroup {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|g| Permutation::parse(degree, g).unwrap())
            .collect();
        FiniteGroup::from_permutation_generators(degree, &gens, DEFAULT_ORDER_CAP).unwrap()
    }

    fn elem(g: &FiniteGroup, cycles: &str) -> Element {
        g.find_permutation(&Permutation::parse(g.degree().unwrap(), cycles).unwrap())
            .unwrap()
    }

    // Independent oracle: naive closure on permutations, no tables.
    fn naive_order(degree: usize, gens: &[&str]) -> usize {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|g| Permutation::parse(degree, g).unwrap())
            .collect();
        let mut set = vec![Permutation::identity(degree)];
        loop {
            let mut grew = false;
            for a in set.clone() {
                for g in &gens {
                    let p = a.then(g);
                    if !set.contains(&p) {
                        set.push(p);
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.len();
            }
        }
    }

    #[test]
    fn permutation_construction_orders() {
        assert_eq!(naive_order(3, &["(1 2)", "(1 2 3)"]), 6);
        assert_eq!(naive_order(4, &["(1 2)(3 4)", "(1 3)(2 4)"]), 4);

        let s3 = perm_group(3, &["(1 2)", "(1 2 3)"]);
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.label(0), "()");
        s3.check_axioms().unwrap();

        let trivial = FiniteGroup::from_permutation_generators(1, &[], 10).unwrap();
        assert_eq!(trivial.order(), 1);

        let v4 = perm_group(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
    }

    #[test]
    fn table_matches_permutation_products() {
        let s4 = perm_group(4, &["(1 2)", "(1 2 3 4)"]);
        for a in s4.elements() {
            for b in s4.elements() {
                let p = s4.permutation(a).unwrap().then(s4.permutation(b).unwrap());
                assert_eq!(s4.find_permutation(&p).unwrap(), s4.mul(a, b));
            }
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let gens = vec![
            Permutation::parse(5, "(1 2)").unwrap(),
            Permutation::parse(5, "(1 2 3 4 5)").unwrap(),
        ];
        let err = FiniteGroup::from_permutation_generators(5, &gens, 100).unwrap_err();
        assert_eq!(err, GroupError::TooLarge { cap: 100 });
        assert!(err.to_string().contains("100"));
    }

    #[test]
    fn commutator_convention() {
        let s3 = perm_group(3, &["(1 2)", "(1 2 3)"]);
        let c = s3.commutator(elem(&s3, "(1 2)"), elem(&s3, "(1 3)"));
        assert_eq!(s3.label(c), "(1 3 2)");
        assert_eq!(s3.commutator(c, 0), 0);
    }

    #[test]
    fn closure_examples() {
        let s3 = perm_group(3, &["(1 2)", "(1 2 3)"]);
        assert_eq!(s3.generate_closure(&[elem(&s3, "(1 2 3)")]).order(), 3);
        assert!(s3.generate_closure(&[]).is_trivial());
        let s4 = perm_group(4, &["(1 2 3 4)", "(1 2)"]);
        let h = s4.generate_closure(&[elem(&s4, "(1 2)"), elem(&s4, "(1 2 3 4)")]);
        assert_eq!(h.order(), 24);
    }

    #[test]
    fn centralizer_examples() {
        let s3 = perm_group(3, &["(1 2)", "(1 2 3)"]);
        assert!(s3.centralizer(&s3.whole()).is_trivial());
        assert_eq!(s3.centralizer(&s3.trivial_subgroup()).order(), 6);

        let d4 = perm_group(4, &["(1 2 3 4)", "(1 3)"]);
        let z = d4.center();
        assert_eq!(z.order(), 2);
        assert!(d4.centralizer(&z).is_whole());
    }

    #[test]
    fn normal_core_examples() {
        let s3 = perm_group(3, &["(1 2)", "(1 2 3)"]);
        let t = s3.generate_closure(&[elem(&s3, "(1 2)")]);
        assert!(s3.normal_core(&t).is_trivial());
        let a3 = s3.generate_closure(&[elem(&s3, "(1 2 3)")]);
        assert_eq!(s3.normal_core(&a3), a3);

        let s4 = perm_group(4, &["(1 2)", "(1 2 3 4)"]);
        let a4 = s4.generate_closure(&[elem(&s4, "(1 2 3)"), elem(&s4, "(2 3 4)")]);
        assert_eq!(a4.order(), 12);
        assert_eq!(s4.normal_core(&a4), a4);
    }

    #[test]
    fn conjugate_subgroup_examples() {
        let s3 = perm_group(3, &["(1 2)", "(1 2 3)"]);
        let h = s3.generate_closure(&[elem(&s3, "(1 2)")]);
        let k = s3.conjugate_subgroup(&h, elem(&s3, "(1 3)"));
        assert_eq!(k, s3.generate_closure(&[elem(&s3, "(2 3)")]));
        assert_eq!(s3.conjugate_subgroup(&h, 0), h);
    }

    #[test]
    fn quotient_examples() {
        let s4 = perm_group(4, &["(1 2)", "(1 2 3 4)"]);
        let v4 = s4.generate_closure(&[elem(&s4, "(1 2)(3 4)"), elem(&s4, "(1 3)(2 4)")]);
        let q = s4.quotient(&v4).unwrap();
        assert_eq!(q.target.order(), 6);
        assert_eq!(q.target.order() * v4.order(), s4.order());
        q.target.check_axioms().unwrap();
        for x in s4.elements() {
            assert_eq!(q.image(x) == 0, v4.contains(x));
            for y in s4.elements() {
                assert_eq!(q.image(s4.mul(x, y)), q.target.mul(q.image(x), q.image(y)));
            }
        }

        let by_trivial = s4.quotient(&s4.trivial_subgroup()).unwrap();
        assert_eq!(by_trivial.target.order(), 24);
        let by_whole = s4.quotient(&s4.whole()).unwrap();
        assert_eq!(by_whole.target.order(), 1);

        let t = s4.generate_closure(&[elem(&s4, "(1 2)")]);
        match s4.quotient(&t) {
            Err(GroupError::NotNormal { g, n }) => assert!(!t.contains(s4.conj(g, n))),
            other => panic!("expected NotNormal, got {other:?}"),
        }
    }

    #[test]
    fn table_validation_names_witnesses() {
        let ok = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(ok.order(), 2);
        let bad_identity = FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]], None);
        assert!(matches!(
            bad_identity,
            Err(GroupError::Table(TableError::Identity(0)))
        ));
        // Identity and inverses fine, associativity broken.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(&loop5, None) {
            Err(GroupError::Table(TableError::Associativity { a, b, c })) => {
                let t = &loop5;
                assert_ne!(t[t[a][b]][c], t[a][t[b][c]]);
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }
}
