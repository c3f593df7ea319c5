//! Subgroup enumeration.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::calculus::{normal_hull, HullConstruction};
use crate::group::{Element, FiniteGroup, Subgroup};

/// All subgroups generated by at most `max_generators` elements, sorted by
/// order and then by element list.
///
/// Subgroups needing more generators (e.g. `C2³`) are absent unless
/// `max_generators` reaches their rank.
pub fn enumerate_subgroups(g: &FiniteGroup, max_generators: usize) -> Vec<Subgroup<'_>> {
    let mut found: BTreeMap<Vec<Element>, Subgroup<'_>> = BTreeMap::new();
    let mut layer: Vec<Subgroup<'_>> = Vec::new();
    for x in g.elements() {
        let s = g.generate_closure(&[x]);
        if !found.contains_key(s.elements()) {
            found.insert(s.elements().to_vec(), s.clone());
            layer.push(s);
        }
    }
    for _ in 1..max_generators {
        let mut next = Vec::new();
        for s in &layer {
            let mut done = FixedBitSet::with_capacity(g.order());
            for x in g.elements() {
                if s.contains(x) || done.contains(x) {
                    continue;
                }
                // <S, x> = <S, xs> for s in S.
                for &y in s.elements() {
                    done.insert(g.mul(x, y));
                }
                let mut gens = s.generators().to_vec();
                gens.push(x);
                let t = g.generate_closure(&gens);
                if !found.contains_key(t.elements()) {
                    found.insert(t.elements().to_vec(), t.clone());
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    let mut out: Vec<Subgroup<'_>> = found.into_values().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
    out
}

/// Every normal subgroup, as joins of normal closures of single elements.
pub fn normal_subgroups(g: &FiniteGroup) -> Vec<Subgroup<'_>> {
    let mut found: BTreeMap<Vec<Element>, Subgroup<'_>> = BTreeMap::new();
    for x in g.elements() {
        let c = g.generate_closure(&[x]);
        let hull = normal_hull(g, &c, HullConstruction::MinimalNormalClosure).hull;
        found.entry(hull.elements().to_vec()).or_insert(hull);
    }
    loop {
        let current: Vec<Subgroup<'_>> = found.values().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                if a.is_subset(b) || b.is_subset(a) {
                    continue;
                }
                let mut gens = a.generators().to_vec();
                gens.extend_from_slice(b.generators());
                let join = g.generate_closure(&gens);
                if !found.contains_key(join.elements()) {
                    found.insert(join.elements().to_vec(), join);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Subgroup<'_>> = found.into_values().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
    out
}
