//! Commutator subgroups and normal hulls.
//!
//! The hull of `H` in `G` is built two independent ways (smallest normal
//! subgroup containing `H`, and the subgroup generated by all conjugates of
//! `H`) so the audits can compare them. The remaining audits check the
//! commutator identities behind `H^G = H·(G,H)`.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::group::{Element, FiniteGroup, Subgroup};
use crate::verdict::{check, Verdict};

/// Groups above this order skip the exhaustive triple scan by default.
pub const DEFAULT_TRIPLE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HullConstruction {
    /// Close `H` under products, inverses and conjugation until stable.
    MinimalNormalClosure,
    /// Close the union of all conjugates `gHg⁻¹`.
    ConjugateGeneration,
}

#[derive(Debug, Clone)]
pub struct HullResult<'g> {
    pub hull: Subgroup<'g>,
    pub construction: HullConstruction,
    pub iterations: usize,
}

/// The distinct values `[h,k]`, `h ∈ H`, `k ∈ K`, sorted.
pub fn commutator_values(g: &FiniteGroup, h: &Subgroup<'_>, k: &Subgroup<'_>) -> Vec<Element> {
    let mut bits = FixedBitSet::with_capacity(g.order());
    for &x in h.elements() {
        for &y in k.elements() {
            bits.insert(g.commutator(x, y));
        }
    }
    bits.ones().collect()
}

/// `(H,K)`: the subgroup generated by all `[h,k]`.
///
/// The recorded generators are a subset of the commutators themselves.
pub fn commutator_subgroup<'g>(
    g: &'g FiniteGroup,
    h: &Subgroup<'g>,
    k: &Subgroup<'g>,
) -> Subgroup<'g> {
    let values = commutator_values(g, h, k);
    let gens = g.greedy_generators(values.into_iter().filter(|&x| x != 0));
    g.generate_closure(&gens)
}

pub fn normal_hull<'g>(
    g: &'g FiniteGroup,
    h: &Subgroup<'g>,
    construction: HullConstruction,
) -> HullResult<'g> {
    match construction {
        HullConstruction::MinimalNormalClosure => minimal_normal_closure(g, h),
        HullConstruction::ConjugateGeneration => conjugate_generation(g, h),
    }
}

// Worklist: only elements added in the previous pass are conjugated, and
// only by the generators of G.
fn minimal_normal_closure<'g>(g: &'g FiniteGroup, h: &Subgroup<'g>) -> HullResult<'g> {
    let mut current = h.clone();
    let mut frontier: Vec<Element> = current.elements().to_vec();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut fresh = Vec::new();
        for &x in &frontier {
            for &s in g.generators() {
                let y = g.conj(s, x);
                if !current.contains(y) {
                    fresh.push(y);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        let gens = g.greedy_generators(current.generators().iter().copied().chain(fresh));
        let next = g.generate_closure(&gens);
        frontier = next
            .elements()
            .iter()
            .copied()
            .filter(|&x| !current.contains(x))
            .collect();
        current = next;
    }
    HullResult {
        hull: current,
        construction: HullConstruction::MinimalNormalClosure,
        iterations,
    }
}

fn conjugate_generation<'g>(g: &'g FiniteGroup, h: &Subgroup<'g>) -> HullResult<'g> {
    let mut bits = FixedBitSet::with_capacity(g.order());
    for c in g.elements() {
        for &x in h.elements() {
            bits.insert(g.conj(c, x));
        }
    }
    let gens = g.greedy_generators(bits.ones().filter(|&x| x != 0));
    HullResult {
        hull: g.generate_closure(&gens),
        construction: HullConstruction::ConjugateGeneration,
        iterations: 1,
    }
}

/// Result of checking `H^G = H·(G,H)`.
#[derive(Debug, Clone)]
pub struct HullDecomposition<'g> {
    pub commutator: Subgroup<'g>,
    pub product: Vec<Element>,
    pub minimal: HullResult<'g>,
    pub conjugate: HullResult<'g>,
    pub verdict: Verdict,
}

pub fn hull_decomposition_audit<'g>(g: &'g FiniteGroup, h: &Subgroup<'g>) -> HullDecomposition<'g> {
    let commutator = commutator_subgroup(g, &g.whole(), h);
    let product = g.product_set(h, &commutator);
    let minimal = normal_hull(g, h, HullConstruction::MinimalNormalClosure);
    let conjugate = normal_hull(g, h, HullConstruction::ConjugateGeneration);

    let verdict = match g.normality_witness(&commutator) {
        Some((c, x)) => Verdict::fail("(G,H) is not normal in G", vec![c, x]),
        None => Verdict::pass(),
    }
    .and_then(|| {
        check(g.subgroup_from_elements(&product).is_some(), || {
            ("H·(G,H) is not closed under products".into(), Vec::new())
        })
    })
    .and_then(|| hull_is_normal(g, &minimal.hull))
    .and_then(|| hull_is_normal(g, &conjugate.hull))
    .and_then(|| {
        let w = minimal.hull.difference_witness(&conjugate.hull);
        check(w.is_none(), || {
            ("hull constructions disagree".into(), w.into_iter().collect())
        })
    })
    .and_then(|| {
        let w = first_difference(minimal.hull.elements(), &product);
        check(w.is_none(), || {
            ("H·(G,H) differs from the normal hull".into(), w.into_iter().collect())
        })
    });

    HullDecomposition {
        commutator,
        product,
        minimal,
        conjugate,
        verdict,
    }
}

fn hull_is_normal(g: &FiniteGroup, hull: &Subgroup<'_>) -> Verdict {
    match g.normality_witness(hull) {
        Some((c, x)) => Verdict::fail("hull is not normal", vec![c, x]),
        None => Verdict::pass(),
    }
}

/// First element of the symmetric difference of two sorted lists.
pub(crate) fn first_difference(a: &[Element], b: &[Element]) -> Option<Element> {
    let sa: HashSet<Element> = a.iter().copied().collect();
    let sb: HashSet<Element> = b.iter().copied().collect();
    let mut diff: Vec<Element> = sa.symmetric_difference(&sb).copied().collect();
    diff.sort_unstable();
    diff.first().copied()
}

#[derive(Debug, Clone)]
pub struct IdentityAudit {
    pub triples: u64,
    pub verdict: Verdict,
}

/// Exhaustively checks, over all `(c,g,h) ∈ G³`:
///
/// 1. `c[g,h]c⁻¹ = [cg,h][h,c]`
/// 2. `[g,chc⁻¹] = c[c⁻¹gc,h]c⁻¹`
/// 3. `ghg⁻¹ = [g,h]h`
///
/// Identity 3 is the form consistent with `[g,h] = ghg⁻¹h⁻¹`; the variant
/// `[g,h]h⁻¹` does not hold in general.
pub fn conjugation_identity_audits(g: &FiniteGroup, cap: usize) -> IdentityAudit {
    if g.order() > cap {
        return IdentityAudit {
            triples: 0,
            verdict: Verdict::skipped(format!("order {} above triple cap {cap}", g.order())),
        };
    }
    let mut triples = 0u64;
    for c in g.elements() {
        let ci = g.inv(c);
        for x in g.elements() {
            for y in g.elements() {
                triples += 1;
                let lhs1 = g.conj(c, g.commutator(x, y));
                let rhs1 = g.mul(g.commutator(g.mul(c, x), y), g.commutator(y, c));
                if lhs1 != rhs1 {
                    return failed(triples, "c[g,h]c⁻¹ = [cg,h][h,c]", c, x, y);
                }
                let lhs2 = g.commutator(x, g.conj(c, y));
                let rhs2 = g.conj(c, g.commutator(g.conj(ci, x), y));
                if lhs2 != rhs2 {
                    return failed(triples, "[g,chc⁻¹] = c[c⁻¹gc,h]c⁻¹", c, x, y);
                }
                if c == 0 && g.conj(x, y) != g.mul(g.commutator(x, y), y) {
                    return failed(triples, "ghg⁻¹ = [g,h]h", c, x, y);
                }
            }
        }
    }
    IdentityAudit {
        triples,
        verdict: Verdict::pass(),
    }
}

fn failed(triples: u64, identity: &str, c: Element, x: Element, y: Element) -> IdentityAudit {
    IdentityAudit {
        triples,
        verdict: Verdict::fail(format!("identity {identity} fails"), vec![c, x, y]),
    }
}

/// `(G,H)` normal in `G`.
pub fn commutator_normality_audit(g: &FiniteGroup, h: &Subgroup<'_>) -> Verdict {
    let c = commutator_subgroup(g, &g.whole(), &g.generate_closure(h.generators()));
    match g.normality_witness(&c) {
        Some((x, y)) => Verdict::fail("(G,H) is not normal", vec![x, y]),
        None => Verdict::pass(),
    }
}

/// `(G, cHc⁻¹) = (G,H)` for every `c ∈ G`. Witness: `[c, element]`.
pub fn lemma_invariance_audit<'g>(g: &'g FiniteGroup, h: &Subgroup<'g>) -> Verdict {
    let whole = g.whole();
    let base = commutator_subgroup(g, &whole, h);
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    for c in g.elements() {
        let conj = g.conjugate_subgroup(h, c);
        if !seen.insert(conj.elements().to_vec()) {
            continue;
        }
        let other = commutator_subgroup(g, &whole, &conj);
        if let Some(w) = base.difference_witness(&other) {
            return Verdict::fail("(G,cHc⁻¹) differs from (G,H)", vec![c, w]);
        }
    }
    Verdict::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;
    use crate::perm::Permutation;

    fn elem(g: &FiniteGroup, cycles: &str) -> Element {
        g.find_permutation(&Permutation::parse(g.degree().unwrap(), cycles).unwrap())
            .unwrap()
    }

    fn s(n: usize) -> FiniteGroup {
        Family::Symmetric(n).build(5040).unwrap()
    }

    #[test]
    fn commutator_subgroup_examples() {
        let s4 = s(4);
        let w = s4.whole();
        assert_eq!(commutator_subgroup(&s4, &w, &w).order(), 12);
        let h = s4.generate_closure(&[elem(&s4, "(1 2)")]);
        assert!(commutator_subgroup(&s4, &h, &s4.trivial_subgroup()).is_trivial());

        let s3 = s(3);
        let r = s3.generate_closure(&[elem(&s3, "(1 2 3)")]);
        assert_eq!(commutator_subgroup(&s3, &r, &s3.whole()), r);
    }

    #[test]
    fn hull_examples() {
        let s4 = s(4);
        for construction in [
            HullConstruction::MinimalNormalClosure,
            HullConstruction::ConjugateGeneration,
        ] {
            let t = s4.generate_closure(&[elem(&s4, "(1 2)")]);
            assert_eq!(normal_hull(&s4, &t, construction).hull.order(), 24);
            let dt = s4.generate_closure(&[elem(&s4, "(1 2)(3 4)")]);
            assert_eq!(normal_hull(&s4, &dt, construction).hull.order(), 4);
            let a4 = commutator_subgroup(&s4, &s4.whole(), &s4.whole());
            assert_eq!(normal_hull(&s4, &a4, construction).hull, a4);
        }
    }

    #[test]
    fn decomposition_examples() {
        let s4 = s(4);
        let t = s4.generate_closure(&[elem(&s4, "(1 2)")]);
        let d = hull_decomposition_audit(&s4, &t);
        assert!(d.verdict.is_pass(), "{:?}", d.verdict);
        assert_eq!(d.minimal.hull.order(), 24);

        let w = s4.whole();
        let d = hull_decomposition_audit(&s4, &w);
        assert!(d.verdict.is_pass());
        assert!(d.minimal.hull.is_whole());

        let v4 = s4.generate_closure(&[elem(&s4, "(1 2)(3 4)"), elem(&s4, "(1 3)(2 4)")]);
        let d = hull_decomposition_audit(&s4, &v4);
        assert!(d.verdict.is_pass());
        assert_eq!(d.minimal.hull, v4);
    }

    #[test]
    fn identity_audits() {
        let s3 = s(3);
        let a = conjugation_identity_audits(&s3, DEFAULT_TRIPLE_CAP);
        assert!(a.verdict.is_pass());
        assert_eq!(a.triples, 216);
        let d4 = Family::Dihedral(4).build(5040).unwrap();
        let a = conjugation_identity_audits(&d4, DEFAULT_TRIPLE_CAP);
        assert!(a.verdict.is_pass());
        assert_eq!(a.triples, 512);
        let c5 = Family::Cyclic(5).build(5040).unwrap();
        assert!(conjugation_identity_audits(&c5, DEFAULT_TRIPLE_CAP).verdict.is_pass());
        let s5 = s(5);
        assert_eq!(
            conjugation_identity_audits(&s5, DEFAULT_TRIPLE_CAP).verdict.status,
            crate::verdict::Status::Skipped
        );
    }

    #[test]
    fn printed_hull_identity_variant_fails_in_s3() {
        // ghg⁻¹ = [g,h]h⁻¹ would force h² = 1 for all h.
        let s3 = s(3);
        let x = elem(&s3, "(1 2)");
        let y = elem(&s3, "(1 2 3)");
        assert_ne!(s3.conj(x, y), s3.mul(s3.commutator(x, y), s3.inv(y)));
        assert_eq!(s3.conj(x, y), s3.mul(s3.commutator(x, y), y));
    }

    #[test]
    fn invariance_examples() {
        let s4 = s(4);
        let t = s4.generate_closure(&[elem(&s4, "(1 2)")]);
        assert!(lemma_invariance_audit(&s4, &t).is_pass());
        let s3 = s(3);
        let t = s3.generate_closure(&[elem(&s3, "(1 2)")]);
        assert!(lemma_invariance_audit(&s3, &t).is_pass());
        assert_eq!(
            commutator_subgroup(&s3, &s3.whole(), &t),
            s3.generate_closure(&[elem(&s3, "(1 2 3)")])
        );
        let d4 = Family::Dihedral(4).build(5040).unwrap();
        let z = d4.center();
        assert!(commutator_subgroup(&d4, &d4.whole(), &z).is_trivial());
        assert!(lemma_invariance_audit(&d4, &z).is_pass());
    }
}
