//! Schur-type bounds for `(G,H)` when `C_G(H)` has finite index.
//!
//! Let `K` be the normal core of `C_G(H)` and `n = |G:K|`. Then `gⁿ ∈ K` for
//! every `g`, and `K` centralizes every conjugate of `H`. This module builds
//! that context, measures the commutator sets, computes exact widths by BFS,
//! and rewrites long products of commutators `[g, chc⁻¹]` into short ones.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::group::{Element, FiniteGroup, Subgroup};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchurError {
    #[error("internal consistency: {invariant} violated (witness {witness:?})")]
    Invariant {
        invariant: &'static str,
        witness: Vec<Element>,
    },
    #[error("generators do not span target (element {missing} unreached)")]
    GeneratorsDoNotSpan { missing: Element },
    #[error("generator {0} lies outside the target subgroup")]
    GeneratorOutsideTarget(Element),
    #[error("decorated commutator at position {position} has h = {h} outside H")]
    NotInSubgroup { position: usize, h: Element },
    #[error("element id {0} is out of range")]
    OutOfRange(Element),
}

/// Centralizer, its normal core and the core's index for a pair `H ≤ G`.
#[derive(Debug, Clone)]
pub struct SchurContext<'g> {
    pub group: &'g FiniteGroup,
    pub subgroup: Subgroup<'g>,
    pub centralizer: Subgroup<'g>,
    pub core: Subgroup<'g>,
    pub index: usize,
    /// Every conjugate `chc⁻¹` of every `h ∈ H`, sorted.
    pub conjugates: Vec<Element>,
    /// `|{[g, chc⁻¹]}|`, which sets the pigeonhole threshold.
    pub sigma_count: usize,
}

fn invariant(invariant: &'static str, witness: Vec<Element>) -> SchurError {
    SchurError::Invariant { invariant, witness }
}

/// Builds the context and checks its invariants exhaustively.
pub fn schur_context<'g>(g: &'g FiniteGroup, h: &Subgroup<'g>) -> Result<SchurContext<'g>, SchurError> {
    let centralizer = g.centralizer(h);
    let core = g.normal_core(&centralizer);
    let index = g.order() / core.order();

    if let Some((x, k)) = g.normality_witness(&core) {
        return Err(invariant("core is normal in G", vec![x, k]));
    }
    if let Some(&k) = core.elements().iter().find(|&&k| !centralizer.contains(k)) {
        return Err(invariant("core lies inside the centralizer", vec![k]));
    }
    if index * core.order() != g.order() {
        return Err(invariant("n = |G| / |core|", Vec::new()));
    }
    for x in g.elements() {
        if !core.contains(g.pow(x, index as u64)) {
            return Err(invariant("gⁿ lies in the core", vec![x]));
        }
    }

    let mut bits = FixedBitSet::with_capacity(g.order());
    for c in g.elements() {
        for &y in h.elements() {
            bits.insert(g.conj(c, y));
        }
    }
    let conjugates: Vec<Element> = bits.ones().collect();
    for &k in core.elements() {
        for &y in &conjugates {
            if g.mul(k, y) != g.mul(y, k) {
                return Err(invariant("core centralizes every conjugate of H", vec![k, y]));
            }
        }
    }

    let mut sigma = FixedBitSet::with_capacity(g.order());
    for x in g.elements() {
        for &y in &conjugates {
            sigma.insert(g.commutator(x, y));
        }
    }

    Ok(SchurContext {
        group: g,
        subgroup: h.clone(),
        centralizer,
        core,
        index,
        conjugates,
        sigma_count: sigma.count_ones(..),
    })
}

impl SchurContext<'_> {
    pub fn n(&self) -> u64 {
        self.index as u64
    }

    /// `n⁴`, saturating.
    pub fn n4(&self) -> u64 {
        self.n().saturating_pow(4)
    }
}

/// The plain and conjugated commutator sets with the cardinality claims.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorSets {
    /// `{[g,h] : g ∈ G, h ∈ H}`
    pub plain: Vec<Element>,
    /// `{[g, chc⁻¹] : g, c ∈ G, h ∈ H}`
    pub sigma: Vec<Element>,
    pub plain_bound: u64,
    pub sigma_bound: u64,
    pub plain_claim: Verdict,
    pub sigma_claim: Verdict,
}

pub fn commutator_sets(ctx: &SchurContext<'_>) -> CommutatorSets {
    let g = ctx.group;
    let mut plain = FixedBitSet::with_capacity(g.order());
    for x in g.elements() {
        for &y in ctx.subgroup.elements() {
            plain.insert(g.commutator(x, y));
        }
    }
    let mut sigma = FixedBitSet::with_capacity(g.order());
    for x in g.elements() {
        for &y in &ctx.conjugates {
            sigma.insert(g.commutator(x, y));
        }
    }
    let plain: Vec<Element> = plain.ones().collect();
    let sigma: Vec<Element> = sigma.ones().collect();
    let n = ctx.n();
    let plain_bound = n.saturating_pow(2);
    let sigma_bound = n.saturating_pow(3);
    let plain_claim = Verdict::claim(
        plain.len() as u64 <= plain_bound,
        format!("|plain commutators| = {} vs n² = {plain_bound}", plain.len()),
        Vec::new(),
    );
    let sigma_claim = Verdict::claim(
        sigma.len() as u64 <= sigma_bound,
        format!("|conjugated commutators| = {} vs n³ = {sigma_bound}", sigma.len()),
        Vec::new(),
    );
    CommutatorSets {
        plain,
        sigma,
        plain_bound,
        sigma_bound,
        plain_claim,
        sigma_claim,
    }
}

/// Exact width of `target` over `generators`: the largest, over all target
/// elements, of the fewest generators whose product gives it.
pub fn width(g: &FiniteGroup, target: &Subgroup<'_>, generators: &[Element]) -> Result<usize, SchurError> {
    if let Some(&x) = generators.iter().find(|&&x| !target.contains(x)) {
        return Err(SchurError::GeneratorOutsideTarget(x));
    }
    let mut dist = vec![usize::MAX; g.order()];
    dist[0] = 0;
    let mut queue = VecDeque::from([0]);
    let mut reached = 1;
    let mut widest = 0;
    while let Some(x) = queue.pop_front() {
        widest = dist[x];
        for &s in generators {
            let y = g.mul(x, s);
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    if reached != target.order() {
        let missing = target
            .elements()
            .iter()
            .copied()
            .find(|&x| dist[x] == usize::MAX)
            .expect("fewer reached than target order");
        return Err(SchurError::GeneratorsDoNotSpan { missing });
    }
    Ok(widest)
}

/// `[g, chc⁻¹]` with `h ∈ H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecoratedCommutator {
    pub g: Element,
    pub c: Element,
    pub h: Element,
}

impl DecoratedCommutator {
    pub fn value(&self, grp: &FiniteGroup) -> Element {
        grp.commutator(self.g, grp.conj(self.c, self.h))
    }

    /// Decoration of `x·value·x⁻¹`: `[xgx⁻¹, (xc)h(xc)⁻¹]`.
    pub fn conjugated_by(&self, grp: &FiniteGroup, x: Element) -> DecoratedCommutator {
        DecoratedCommutator {
            g: grp.conj(x, self.g),
            c: grp.mul(x, self.c),
            h: self.h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorWord {
    pub factors: Vec<DecoratedCommutator>,
    pub product: Element,
}

impl CommutatorWord {
    pub fn new(grp: &FiniteGroup, factors: Vec<DecoratedCommutator>) -> Self {
        let product = evaluate(grp, &factors);
        CommutatorWord { factors, product }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

fn evaluate(grp: &FiniteGroup, factors: &[DecoratedCommutator]) -> Element {
    grp.product(factors.iter().map(|d| d.value(grp)))
}

/// A uniformly random word of `len` decorated commutators.
pub fn random_word<R: Rng + ?Sized>(ctx: &SchurContext<'_>, len: usize, rng: &mut R) -> CommutatorWord {
    let g = ctx.group;
    let hs = ctx.subgroup.elements();
    let factors = (0..len)
        .map(|_| DecoratedCommutator {
            g: rng.gen_range(0..g.order()),
            c: rng.gen_range(0..g.order()),
            h: hs[rng.gen_range(0..hs.len())],
        })
        .collect();
    CommutatorWord::new(g, factors)
}

#[derive(Debug, Clone, Serialize)]
pub struct Reduction {
    pub word: CommutatorWord,
    /// Length the word was reduced to at most.
    pub threshold: u64,
    pub n4: u64,
    /// Whether `n⁴` alone was a valid trigger (`|sigma| ≤ n³`).
    pub n4_sufficed: bool,
    pub rewrites: usize,
    pub shuffles: usize,
    /// Product checks performed after individual rewriting steps.
    pub checks: usize,
}

/// Shortens `w` to at most `max(n⁴, |sigma|·n)` factors without changing its
/// product.
pub fn reduce_word(ctx: &SchurContext<'_>, w: &CommutatorWord) -> Result<Reduction, SchurError> {
    let sigma = ctx.sigma_count as u64;
    let n = ctx.n();
    let threshold = ctx.n4().max(sigma.saturating_mul(n));
    reduce_word_to(ctx, w, threshold)
}

/// Like [`reduce_word`] with an explicit target length, which must be at
/// least `|sigma|·n` for the pigeonhole step to apply.
pub fn reduce_word_to(
    ctx: &SchurContext<'_>,
    w: &CommutatorWord,
    threshold: u64,
) -> Result<Reduction, SchurError> {
    let grp = ctx.group;
    let n = ctx.index;
    for (position, d) in w.factors.iter().enumerate() {
        for x in [d.g, d.c, d.h] {
            if x >= grp.order() {
                return Err(SchurError::OutOfRange(x));
            }
        }
        if !ctx.subgroup.contains(d.h) {
            return Err(SchurError::NotInSubgroup { position, h: d.h });
        }
    }
    let sigma = ctx.sigma_count as u64;
    let target = evaluate(grp, &w.factors);
    if target != w.product {
        return Err(invariant("cached word product matches its factors", vec![w.product, target]));
    }

    let mut factors = w.factors.clone();
    let mut rewrites = 0;
    let mut shuffles = 0;
    let mut checks = 0;
    let mut counts = vec![0usize; grp.order()];
    let mut verify = |factors: &[DecoratedCommutator], step: &'static str| {
        checks += 1;
        let now = evaluate(grp, factors);
        if now == target {
            Ok(())
        } else {
            Err(invariant(step, vec![target, now]))
        }
    };

    while factors.len() as u64 > threshold {
        counts.iter_mut().for_each(|c| *c = 0);
        let values: Vec<Element> = factors.iter().map(|d| d.value(grp)).collect();
        for &v in &values {
            counts[v] += 1;
        }
        let v = *values
            .iter()
            .find(|&&v| counts[v] > n)
            .ok_or_else(|| invariant("pigeonhole finds a value repeated n+1 times", Vec::new()))?;
        let back = grp.inv(v);

        // Gather n+1 copies of v at the front, conjugating what they pass.
        for placed in 0..=n {
            let i = (placed..factors.len())
                .find(|&i| factors[i].value(grp) == v)
                .expect("count of v is preserved by conjugation by v");
            for d in &mut factors[placed..i] {
                *d = d.conjugated_by(grp, back);
            }
            factors[placed..=i].rotate_right(1);
            if i > placed {
                shuffles += 1;
                verify(&factors, "shuffling preserves the product")?;
            }
        }

        // [g,s]^(n+1) = [g,s²]·[sgs⁻¹, s]^(n-1), s = chc⁻¹.
        let lead = factors[0];
        let s = grp.conj(lead.c, lead.h);
        let a_n = grp.pow(v, n as u64);
        if grp.mul(a_n, s) != grp.mul(s, a_n) {
            return Err(invariant("[g,σ(h)]ⁿ commutes with σ(h)", vec![lead.g, lead.c, lead.h]));
        }
        let first = DecoratedCommutator {
            g: lead.g,
            c: lead.c,
            h: grp.mul(lead.h, lead.h),
        };
        let rest = DecoratedCommutator {
            g: grp.conj(s, lead.g),
            c: lead.c,
            h: lead.h,
        };
        let replacement = std::iter::once(first).chain(std::iter::repeat_n(rest, n - 1));
        factors.splice(0..=n, replacement);
        rewrites += 1;
        verify(&factors, "rewriting the (n+1)-th power preserves the product")?;
    }

    if (factors.len() as u64) > threshold {
        return Err(invariant("reduced length within bound", Vec::new()));
    }
    Ok(Reduction {
        word: CommutatorWord {
            factors,
            product: target,
        },
        threshold,
        n4: ctx.n4(),
        n4_sufficed: sigma <= ctx.n().saturating_pow(3),
        rewrites,
        shuffles,
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Eq1Report {
    /// Distinct `(g, chc⁻¹)` pairs evaluated.
    pub pairs: u64,
    /// `(g, c, h)` triples those pairs cover: `|G|²·|H|`.
    pub triples_covered: u64,
    /// `[g,σ(h)]ⁿ` commutes with `σ(h)`.
    pub commuting: Verdict,
    /// `[g,σ(h)]ⁿ⁺¹ = [g,σ(h)²]·[σ(h)gσ(h)⁻¹,σ(h)]ⁿ⁻¹`.
    pub corrected: Verdict,
    /// The two-factor variant with exponent 1 on the second factor.
    pub printed: Verdict,
}

/// Checks the power identity over every `(g, c, h)`.
///
/// Both sides depend on `c` and `h` only through `s = chc⁻¹`, so iterating
/// over `G × {conjugates of H}` covers all triples exactly.
pub fn eq1_identity_check(ctx: &SchurContext<'_>) -> Eq1Report {
    let grp = ctx.group;
    let n = ctx.n();
    let mut commuting = Verdict::pass();
    let mut corrected = Verdict::pass();
    let mut printed_witness: Option<Vec<Element>> = None;
    let mut pairs = 0u64;
    for x in grp.elements() {
        for &s in &ctx.conjugates {
            pairs += 1;
            let a = grp.commutator(x, s);
            let a_n = grp.pow(a, n);
            if commuting.is_pass() && grp.mul(a_n, s) != grp.mul(s, a_n) {
                commuting = Verdict::fail("[g,σ(h)]ⁿ does not commute with σ(h)", vec![x, s]);
            }
            let lhs = grp.mul(a_n, a);
            let head = grp.commutator(x, grp.mul(s, s));
            let tail = grp.commutator(grp.conj(s, x), s);
            let rhs = grp.mul(head, grp.pow(tail, n.saturating_sub(1)));
            if corrected.is_pass() && n >= 1 && lhs != rhs {
                corrected = Verdict::fail("corrected power identity fails", vec![x, s]);
            }
            if printed_witness.is_none() && lhs != grp.mul(head, tail) {
                printed_witness = Some(vec![x, s]);
            }
        }
    }
    let printed = match printed_witness {
        None => Verdict::claim(true, "two-factor form holds for every pair", Vec::new()),
        Some(w) => Verdict::claim(false, "two-factor form fails at (g, σ(h))", w),
    };
    Eq1Report {
        pairs,
        triples_covered: (grp.order() as u64).pow(2) * ctx.subgroup.order() as u64,
        commuting,
        corrected,
        printed,
    }
}
