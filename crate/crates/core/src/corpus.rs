//! The audit corpus and the `audit-all` runner.
//!
//! The corpus is every family group up to `max_order`, plus direct products
//! of two nontrivial family groups up to `max_product_order` (skipping
//! products of coprime cyclic groups, which are cyclic again). Each group is
//! paired with its subgroups generated by at most `max_generators` elements,
//! and traces additionally range over all normal subgroups.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{
    commutator_subgroup, commutator_values, conjugation_identity_audits, hull_decomposition_audit,
    lemma_invariance_audit, normal_hull, HullConstruction,
};
use crate::families::Family;
use crate::group::{FiniteGroup, Subgroup, DEFAULT_ORDER_CAP, EXHAUSTIVE_AXIOM_LIMIT};
use crate::report::{AuditRecord, AuditReport, Tally};
use crate::schur::{commutator_sets, eq1_identity_check, random_word, reduce_word, schur_context, width};
use crate::subgroups::{enumerate_subgroups, normal_subgroups};
use crate::theorem::{corollary_audit, run_proof_trace, width_bound_audit, ComponentedGroup};
use crate::verdict::{check, Verdict};

/// Above this order the normal-core maximality check is skipped.
pub const CORE_MAXIMALITY_LIMIT: usize = 48;

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub max_order: usize,
    pub max_product_order: usize,
    pub max_generators: usize,
    pub words_per_context: usize,
    pub max_word_len: usize,
    pub triple_cap: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_order: 48,
            max_product_order: 48,
            max_generators: 2,
            words_per_context: 1000,
            max_word_len: 64,
            triple_cap: crate::calculus::DEFAULT_TRIPLE_CAP,
            seed: 0,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Corpus groups in a fixed order.
pub fn corpus_families(cfg: &CorpusConfig) -> Vec<Family> {
    let max = cfg.max_order;
    let mut base = Vec::new();
    base.extend((1..=max).map(Family::Cyclic));
    base.extend((2..=max / 2).map(Family::Dihedral));
    base.extend((3..).map(Family::Symmetric).take_while(|f| f.order() <= max));
    base.extend((4..).map(Family::Alternating).take_while(|f| f.order() <= max));
    if max >= 8 {
        base.push(Family::Quaternion8);
    }

    let factors: Vec<&Family> = base.iter().filter(|f| f.order() > 1).collect();
    let mut products = Vec::new();
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i..] {
            if a.order() * b.order() > cfg.max_product_order {
                continue;
            }
            if let (Family::Cyclic(p), Family::Cyclic(q)) = (a, b) {
                if gcd(*p, *q) == 1 {
                    continue;
                }
            }
            products.push(Family::product((*a).clone(), (*b).clone()));
        }
    }
    base.extend(products);
    base
}

/// Per-audit tallies for one group.
#[derive(Default)]
struct GroupTallies {
    hull_equivalence: Tally,
    hull_properties: Tally,
    lemma_normal: Tally,
    lemma_invariance: Tally,
    lemma_decomposition: Tally,
    normal_core: Tally,
    schur_context: Tally,
    plain_claim: Tally,
    sigma_claim: Tally,
    eq1_commuting: Tally,
    eq1_corrected: Tally,
    eq1_printed: Tally,
    reduce_word: Tally,
    n4_trigger: Tally,
    width_vs_reduction: Tally,
    trace: Tally,
    trace_hull: Tally,
    width_bound: Tally,
    corollary: Tally,
}

impl GroupTallies {
    fn into_records(self, scope: &str, timings: bool) -> Vec<AuditRecord> {
        [
            ("hull-equivalence", self.hull_equivalence),
            ("hull-properties", self.hull_properties),
            ("lemma-commutator-normal", self.lemma_normal),
            ("lemma-conjugation-invariance", self.lemma_invariance),
            ("lemma-hull-decomposition", self.lemma_decomposition),
            ("normal-core", self.normal_core),
            ("schur-context", self.schur_context),
            ("claim-plain-commutators-le-n2", self.plain_claim),
            ("claim-sigma-commutators-le-n3", self.sigma_claim),
            ("eq1-commuting-precondition", self.eq1_commuting),
            ("eq1-corrected-identity", self.eq1_corrected),
            ("claim-eq1-printed-form", self.eq1_printed),
            ("reduce-word", self.reduce_word),
            ("claim-n4-trigger-suffices", self.n4_trigger),
            ("width-within-reduction-bound", self.width_vs_reduction),
            ("proof-trace", self.trace),
            ("trace-hull-agreement", self.trace_hull),
            ("trace-width-bound", self.width_bound),
            ("corollary", self.corollary),
        ]
        .into_iter()
        .map(|(name, t)| {
            let ms = t.elapsed().as_secs_f64() * 1e3;
            let mut r = t.into_record(name, scope);
            if timings {
                r.wall_clock_ms = Some(ms);
            }
            r
        })
        .collect()
    }
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (a << 40) ^ b.wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

/// Runs every audit over the corpus.
pub fn run_corpus(cfg: &CorpusConfig, timings: bool) -> AuditReport {
    let mut report = AuditReport::new("audit-all", cfg.seed, timings);
    let mut corpus_claims: Vec<(&'static str, Tally)> = vec![
        ("claim-plain-commutators-le-n2", Tally::default()),
        ("claim-sigma-commutators-le-n3", Tally::default()),
        ("claim-eq1-printed-form", Tally::default()),
        ("claim-n4-trigger-suffices", Tally::default()),
    ];
    for (gi, family) in corpus_families(cfg).iter().enumerate() {
        let scope = family.to_string();
        let g = match family.build(DEFAULT_ORDER_CAP) {
            Ok(g) => g,
            Err(e) => {
                let v = Verdict::fail(format!("could not build: {e}"), Vec::new());
                report.push(AuditRecord::from_verdict("group-build", &v, &FiniteGroup::trivial()).scope(scope));
                continue;
            }
        };
        let records = audit_group(&g, &scope, gi as u64, cfg, &mut report);
        for r in records {
            if let Some((_, t)) = corpus_claims.iter_mut().find(|(n, _)| *n == r.name) {
                let v = Verdict {
                    status: r.verdict,
                    message: None,
                    witness: Vec::new(),
                };
                t.add(&v, &g, || scope.clone());
            }
            report.push(r);
        }
    }
    for (name, t) in corpus_claims {
        report.push(t.into_record(name, "corpus"));
    }
    report
}

/// Audits one group; group-level records go straight into `report`, the
/// per-subgroup tallies are returned.
fn audit_group(
    g: &FiniteGroup,
    scope: &str,
    gi: u64,
    cfg: &CorpusConfig,
    report: &mut AuditReport,
) -> Vec<AuditRecord> {
    let subgroups = enumerate_subgroups(g, cfg.max_generators);
    let normals = normal_subgroups(g);

    report.timed(|| {
        let v = if g.order() <= EXHAUSTIVE_AXIOM_LIMIT {
            match g.check_axioms() {
                Ok(()) => Verdict::pass(),
                Err(e) => Verdict::fail(e.to_string(), Vec::new()),
            }
        } else {
            Verdict::skipped("order above exhaustive axiom limit")
        };
        let r = AuditRecord::from_verdict("group-axioms", &v, g)
            .scope(scope)
            .with("order", g.order())
            .with("subgroups", subgroups.len())
            .with("normal_subgroups", normals.len());
        ((), r)
    });
    report.timed(|| {
        let a = conjugation_identity_audits(g, cfg.triple_cap);
        let r = AuditRecord::from_verdict("conjugation-identities", &a.verdict, g)
            .scope(scope)
            .with("triples", a.triples);
        ((), r)
    });

    let components: Vec<ComponentedGroup<'_>> = normals
        .iter()
        .map(|n| ComponentedGroup::new(g, n.clone()).expect("normal_subgroups yields normal subgroups"))
        .collect();
    let mut t = GroupTallies::default();
    let whole = g.whole();
    let derived = commutator_subgroup(g, &whole, &whole);
    for (hi, h) in subgroups.iter().enumerate() {
        let case = || h.describe();
        let dec = t.lemma_decomposition.time(|| hull_decomposition_audit(g, h));
        let hull = &dec.minimal.hull;

        let w = dec.minimal.hull.difference_witness(&dec.conjugate.hull);
        t.hull_equivalence.add(
            &check(w.is_none(), || ("constructions disagree".into(), w.into_iter().collect())),
            g,
            case,
        );
        let v = t.hull_properties.time(|| hull_properties(g, h, hull, &dec.commutator, &derived));
        t.hull_properties.add(&v, g, case);
        t.lemma_normal.add(
            &match g.normality_witness(&dec.commutator) {
                Some((x, y)) => Verdict::fail("(G,H) not normal", vec![x, y]),
                None => Verdict::pass(),
            },
            g,
            case,
        );
        let v = t.lemma_invariance.time(|| lemma_invariance_audit(g, h));
        t.lemma_invariance.add(&v, g, case);
        t.lemma_decomposition.add(&dec.verdict, g, case);
        if g.order() <= CORE_MAXIMALITY_LIMIT {
            let v = t.normal_core.time(|| normal_core_check(g, h, &normals));
            t.normal_core.add(&v, g, case);
        }

        audit_schur(g, h, &dec.commutator, mix(cfg.seed, gi, hi as u64), cfg, &mut t);

        for (ni, cg) in components.iter().enumerate() {
            let ncase = || format!("{} with N order {}", h.describe(), cg.component.order());
            let trace_seed = mix(cfg.seed, gi, ((hi as u64) << 20) | ni as u64);
            let trace = t.trace.time(|| run_proof_trace(cg, h, trace_seed));
            let tv = match trace.first_failure() {
                Some(step) => {
                    let mut v = step.verdict.clone();
                    v.message = Some(format!("{}: {}", step.id, v.message.unwrap_or_default()));
                    v
                }
                None => Verdict::pass(),
            };
            t.trace.add(&tv, g, ncase);
            let agree = match &trace.final_hull {
                Some(fh) => check(hull.equals_set(fh), || ("(G,H1)·H1 differs from H^G".into(), Vec::new())),
                None => Verdict::skipped("trace incomplete"),
            };
            t.trace_hull.add(&agree, g, ncase);
            match width_bound_audit(&trace) {
                Ok(wb) => {
                    t.width_bound.min("slack", wb.slack);
                    t.width_bound.max("width", wb.width);
                    t.width_bound.add(&wb.verdict, g, ncase);
                }
                Err(e) => t.width_bound.add(&Verdict::skipped(e.to_string()), g, ncase),
            }
            let v = t.corollary.time(|| corollary_audit(cg, h));
            t.corollary.add(&v, g, ncase);
        }
    }
    t.into_records(scope, report.timings())
}

fn hull_properties(
    g: &FiniteGroup,
    h: &Subgroup<'_>,
    hull: &Subgroup<'_>,
    comm: &Subgroup<'_>,
    derived: &Subgroup<'_>,
) -> Verdict {
    check(h.is_subset(hull), || ("H ⊄ H^G".into(), Vec::new()))
        .and_then(|| {
            let again = normal_hull(g, hull, HullConstruction::MinimalNormalClosure).hull;
            check(&again == hull, || ("hull is not idempotent".into(), Vec::new()))
        })
        .and_then(|| {
            check(comm.is_subset(hull) && comm.is_subset(derived), || {
                ("(G,H) ⊄ H^G ∩ (G,G)".into(), Vec::new())
            })
        })
}

/// The core of `S` lies in `S`, is normal, and contains every normal
/// subgroup inside `S`.
fn normal_core_check(g: &FiniteGroup, s: &Subgroup<'_>, normals: &[Subgroup<'_>]) -> Verdict {
    let core = g.normal_core(s);
    check(core.is_subset(s), || ("core ⊄ S".into(), Vec::new()))
        .and_then(|| check(g.is_normal(&core), || ("core not normal".into(), Vec::new())))
        .and_then(|| {
            let missed = normals.iter().find(|n| n.is_subset(s) && !n.is_subset(&core));
            check(missed.is_none(), || {
                ("a normal subgroup inside S escapes the core".into(), missed.unwrap().generators().to_vec())
            })
        })
}

fn audit_schur(
    g: &FiniteGroup,
    h: &Subgroup<'_>,
    comm: &Subgroup<'_>,
    seed: u64,
    cfg: &CorpusConfig,
    t: &mut GroupTallies,
) {
    let case = || h.describe();
    let ctx = match t.schur_context.time(|| schur_context(g, h)) {
        Ok(ctx) => ctx,
        Err(e) => {
            t.schur_context.add(&Verdict::fail(e.to_string(), Vec::new()), g, case);
            return;
        }
    };
    t.schur_context.add(&Verdict::pass(), g, case);
    t.schur_context.max("n", ctx.n());

    let sets = t.plain_claim.time(|| commutator_sets(&ctx));
    t.plain_claim.add(&sets.plain_claim, g, case);
    t.sigma_claim.add(&sets.sigma_claim, g, case);

    let eq1 = t.eq1_corrected.time(|| eq1_identity_check(&ctx));
    t.eq1_commuting.add(&eq1.commuting, g, case);
    t.eq1_corrected.add(&eq1.corrected, g, case);
    t.eq1_printed.add(&eq1.printed, g, case);
    t.eq1_corrected.sum("triples_covered", eq1.triples_covered);

    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdict = Verdict::pass();
    for _ in 0..cfg.words_per_context {
        let len = rng.gen_range(0..=cfg.max_word_len);
        let w = random_word(&ctx, len, &mut rng);
        match reduce_word(&ctx, &w) {
            Ok(r) => {
                t.reduce_word.sum("rewrites", r.rewrites as u64);
                t.reduce_word.sum("words", 1);
                if r.word.product != w.product || r.word.len() as u64 > r.threshold {
                    verdict = Verdict::fail("reduced word breaks product or bound", Vec::new());
                    break;
                }
            }
            Err(e) => {
                verdict = Verdict::fail(e.to_string(), Vec::new());
                break;
            }
        }
    }
    t.reduce_word.charge(start.elapsed());
    t.reduce_word.add(&verdict, g, case);
    let sufficed = ctx.sigma_count as u64 <= ctx.n().saturating_pow(3);
    t.n4_trigger.add(
        &Verdict::claim(sufficed, "n⁴ trigger", Vec::new()),
        g,
        case,
    );

    let reduction_bound = ctx.n4().max((ctx.sigma_count as u64).saturating_mul(ctx.n()));
    let measured = t.width_vs_reduction.time(|| width(g, comm, &commutator_values(g, &g.whole(), h)));
    let wv = match measured {
        Ok(w) => {
            t.width_vs_reduction.max("width", w as u64);
            check(w as u64 <= reduction_bound, || {
                (format!("width {w} exceeds {reduction_bound}"), Vec::new())
            })
        }
        Err(e) => Verdict::fail(e.to_string(), Vec::new()),
    };
    t.width_vs_reduction.add(&wv, g, case);
}
