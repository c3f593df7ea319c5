//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hullkit::calculus::conjugation_identity_audits;
use hullkit::cli::run_cli;
use hullkit::corpus::{corpus_families, run_corpus, CorpusConfig};
use hullkit::families::Family;
use hullkit::report::{AuditRecord, AuditReport};
use hullkit::schur::{eq1_identity_check, random_word, reduce_word, schur_context};
use hullkit::subgroups::enumerate_subgroups;
use hullkit::theorem::{run_proof_trace, ComponentedGroup};
use hullkit::{FiniteGroup, Permutation, Status, DEFAULT_ORDER_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;
const CORPUS_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn records<'a>(rep: &'a AuditReport, name: &'a str) -> impl Iterator<Item = &'a AuditRecord> + 'a {
    rep.audits
        .iter()
        .filter(move |a| a.name == name && a.scope.as_deref() != Some("corpus"))
}

fn count(r: &AuditRecord, key: &str) -> u64 {
    r.data.get(key).and_then(|v| v.as_u64()).unwrap_or(0)
}

/// Every record with `name` passed; returns the number of cases covered.
fn all_pass(rep: &AuditReport, name: &str, out: &mut Outcome) -> u64 {
    let mut cases = 0;
    let mut groups = 0;
    for r in records(rep, name) {
        groups += 1;
        cases += count(r, "cases").max(1);
        out.require(
            r.verdict == Status::Pass,
            format!("{name} {} on {}: {:?}", r.verdict.as_str(), r.scope.as_deref().unwrap_or("?"), r.witnesses),
        );
    }
    out.require(groups > 0, format!("no {name} records"));
    cases
}

// Oracles below use only the multiplication table.

fn closure(g: &FiniteGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn naive_hull(g: &FiniteGroup, h: &[usize]) -> BTreeSet<usize> {
    let conjugates: Vec<usize> = g
        .elements()
        .flat_map(|x| h.iter().map(move |&y| (x, y)))
        .map(|(x, y)| g.mul(g.mul(x, y), g.inv(x)))
        .collect();
    closure(g, &conjugates)
}

fn perm(g: &FiniteGroup, cycles: &str) -> usize {
    g.find_permutation(&Permutation::parse(g.degree().unwrap(), cycles).unwrap()).unwrap()
}

fn report(name: &str, out: Outcome) -> bool {
    let ok = out.failures.is_empty();
    println!("{} {name}: {}", if ok { "PASS" } else { "FAIL" }, out.notes.join("; "));
    for f in out.failures.iter().take(10) {
        println!("    {f}");
    }
    ok
}

fn hull_equivalence(rep: &AuditReport, elapsed: Duration, cfg: &CorpusConfig) -> Outcome {
    let mut out = Outcome::new();
    let pairs = all_pass(rep, "hull-equivalence", &mut out);
    out.require(elapsed < CORPUS_BUDGET, format!("corpus took {elapsed:?}"));

    // Independent oracle: closure of all conjugates, on every corpus pair.
    let mut checked = 0;
    for f in corpus_families(cfg) {
        let g = f.build(DEFAULT_ORDER_CAP).unwrap();
        for h in enumerate_subgroups(&g, cfg.max_generators) {
            let hull = hullkit::calculus::normal_hull(&g, &h, hullkit::calculus::HullConstruction::MinimalNormalClosure);
            let oracle: Vec<usize> = naive_hull(&g, h.elements()).into_iter().collect();
            out.require(hull.hull.elements() == oracle.as_slice(), format!("{f}: hull of {}", h.describe()));
            checked += 1;
        }
    }
    out.require(checked as u64 == pairs, format!("oracle saw {checked} pairs, report {pairs}"));
    out.note(format!("{pairs} pairs agree with each other and with the closure oracle"));
    out.note(format!("corpus run {:.1} s (budget {} s)", elapsed.as_secs_f64(), CORPUS_BUDGET.as_secs()));
    out
}

fn commutator_lemmas(rep: &AuditReport) -> Outcome {
    let mut out = Outcome::new();
    let mut pairs = 0;
    for name in ["lemma-commutator-normal", "lemma-conjugation-invariance", "lemma-hull-decomposition"] {
        pairs = all_pass(rep, name, &mut out);
    }
    let cfg = CorpusConfig {
        max_order: 64,
        max_product_order: 64,
        ..CorpusConfig::default()
    };
    let mut groups = 0;
    let mut triples = 0;
    for f in corpus_families(&cfg) {
        let g = f.build(DEFAULT_ORDER_CAP).unwrap();
        let a = conjugation_identity_audits(&g, 64);
        out.require(a.verdict.status == Status::Pass, format!("identities on {f}: {:?}", a.verdict));
        out.require(a.triples == (g.order() as u64).pow(3), format!("{f}: {} triples", a.triples));
        groups += 1;
        triples += a.triples;
    }
    out.note(format!("normality, invariance and decomposition exact on {pairs} pairs"));
    out.note(format!("identities exhaustive on {groups} groups of order <= 64 ({triples} triples)"));
    out
}

fn schur_bounds(rep: &AuditReport, cfg: &CorpusConfig) -> Outcome {
    let mut out = Outcome::new();
    let pairs = all_pass(rep, "schur-context", &mut out);
    all_pass(rep, "eq1-commuting-precondition", &mut out);
    all_pass(rep, "eq1-corrected-identity", &mut out);
    all_pass(rep, "width-within-reduction-bound", &mut out);
    all_pass(rep, "reduce-word", &mut out);
    let words: u64 = records(rep, "reduce-word").map(|r| count(r, "words")).sum();
    out.require(words == pairs * 1000, format!("{words} words for {pairs} contexts"));
    let triples: u64 = records(rep, "eq1-corrected-identity").map(|r| count(r, "triples_covered")).sum();

    // Oracle for the core: elements whose every conjugate centralizes H.
    let small = CorpusConfig {
        max_order: 24,
        max_product_order: 24,
        ..cfg.clone()
    };
    for f in corpus_families(&small) {
        let g = f.build(DEFAULT_ORDER_CAP).unwrap();
        for h in enumerate_subgroups(&g, 2) {
            let commutes = |x: usize| h.elements().iter().all(|&y| g.mul(x, y) == g.mul(y, x));
            let core: Vec<usize> = g
                .elements()
                .filter(|&x| g.elements().all(|c| commutes(g.mul(g.mul(c, x), g.inv(c)))))
                .collect();
            let n = g.order() / core.len();
            let ctx = schur_context(&g, &h).unwrap();
            out.require(ctx.core.elements() == core.as_slice(), format!("{f}: core for {}", h.describe()));
            out.require(ctx.index == n, format!("{f}: index"));
            for x in g.elements() {
                out.require(core.binary_search(&g.pow(x, n as u64)).is_ok(), format!("{f}: g^n outside core"));
            }
        }
    }

    // Worked case: S3 with H = S3 has n = 6; 2000 factors shrink to 6^4.
    let s3 = Family::Symmetric(3).build(DEFAULT_ORDER_CAP).unwrap();
    let whole = s3.whole();
    let ctx = schur_context(&s3, &whole).unwrap();
    out.require(ctx.index == 6, "S3 index");
    let eq1 = eq1_identity_check(&ctx);
    out.require(eq1.triples_covered == 216 && eq1.corrected.is_pass(), "S3 has 216 passing triples");
    let w = random_word(&ctx, 2000, &mut ChaCha8Rng::seed_from_u64(SEED));
    let r = reduce_word(&ctx, &w).unwrap();
    out.require(r.word.len() <= 1296 && r.word.product == w.product, "S3 word reduction");

    for name in ["claim-plain-commutators-le-n2", "claim-sigma-commutators-le-n3", "claim-eq1-printed-form", "claim-n4-trigger-suffices"] {
        let c = rep
            .audits
            .iter()
            .find(|a| a.name == name && a.scope.as_deref() == Some("corpus"));
        match c {
            Some(c) => {
                out.require(c.verdict.is_claim(), format!("{name} is not a claim verdict"));
                out.note(format!(
                    "{name} {} ({} of {} groups violated)",
                    c.verdict.as_str(),
                    count(c, "claim-violated"),
                    count(c, "cases")
                ));
            }
            None => out.require(false, format!("{name} missing from report")),
        }
    }
    out.note(format!("{pairs} contexts, {words} words, {triples} triples"));
    out
}

fn hull_trace(rep: &AuditReport) -> Outcome {
    let mut out = Outcome::new();
    let triples = all_pass(rep, "proof-trace", &mut out);
    all_pass(rep, "trace-hull-agreement", &mut out);
    all_pass(rep, "trace-width-bound", &mut out);
    let min_slack = records(rep, "trace-width-bound")
        .filter_map(|r| r.data.get("min_slack").and_then(|v| v.as_i64()))
        .min()
        .unwrap_or(i64::MAX);
    out.require(min_slack >= 0, format!("negative slack {min_slack}"));

    let s4 = Family::Symmetric(4).build(DEFAULT_ORDER_CAP).unwrap();
    let a4 = s4.generate_closure(&[perm(&s4, "(1 2 3)"), perm(&s4, "(2 3 4)")]);
    let v4 = s4.generate_closure(&[perm(&s4, "(1 2)(3 4)"), perm(&s4, "(1 3)(2 4)")]);
    let whole = s4.whole();
    let cases = [
        (a4, vec![perm(&s4, "(1 2)")], 24, "(S4, A4, <(1 2)>)"),
        (v4, vec![perm(&s4, "(1 2)(3 4)")], 4, "(S4, V4, <(1 2)(3 4)>)"),
    ];
    for (n, gens, expected, label) in cases {
        let h = s4.generate_closure(&gens);
        let oracle = naive_hull(&s4, h.elements());
        let cg = ComponentedGroup::new(&s4, n).unwrap();
        let t = run_proof_trace(&cg, &h, SEED);
        let got = t.final_hull.clone().unwrap_or_default();
        out.require(t.passed(), format!("{label} trace"));
        out.require(got.len() == expected && oracle.len() == expected, format!("{label}: hull order {}", got.len()));
        out.require(got == oracle.into_iter().collect::<Vec<_>>(), format!("{label}: oracle"));
    }
    let cg = ComponentedGroup::new(&s4, whole.clone()).unwrap();
    let t = run_proof_trace(&cg, &whole, SEED);
    let comm = t.step("s5").and_then(|s| s.subgroups.get("(G,H1)")).map(|s| s.order);
    let oracle = closure(&s4, &s4.elements().flat_map(|x| s4.elements().map(move |y| (x, y))).map(|(x, y)| s4.commutator(x, y)).collect::<Vec<_>>());
    out.require(t.passed() && comm == Some(12) && oracle.len() == 12, format!("(S4, S4, S4): commutator order {comm:?}"));
    out.note(format!("{triples} (G, N, H) triples pass all seven steps"));
    out.note(format!("minimum slack {min_slack}"));
    out.note("spot targets 24, 4, 12".to_string());
    out
}

fn corollary(rep: &AuditReport) -> Outcome {
    let mut out = Outcome::new();
    let triples = all_pass(rep, "corollary", &mut out);
    out.note(format!("(H,G) = (H·(N,H),G) on {triples} triples"));
    out
}

fn deterministic_reports(first: &AuditReport) -> Outcome {
    let mut out = Outcome::new();
    let cli = run_cli(["hullkit", "audit-all", "--seed", "42"]);
    out.require(cli.status == 0, format!("audit-all exit {}: {}", cli.status, cli.stderr));
    let a = first.to_json();
    out.require(a == cli.stdout, "reports differ");
    out.note(format!("two audit-all --seed 42 runs give identical {} byte reports", a.len()));
    out
}

fn main() {
    let cfg = CorpusConfig {
        seed: SEED,
        ..CorpusConfig::default()
    };
    let start = Instant::now();
    let rep = run_corpus(&cfg, false);
    let elapsed = start.elapsed();
    println!(
        "corpus: {} audits, {} fail, {} claim-holds, {} claim-violated",
        rep.summary.audits, rep.summary.fail, rep.summary.claim_holds, rep.summary.claim_violated
    );

    let results = [
        report("hull-equivalence", hull_equivalence(&rep, elapsed, &cfg)),
        report("commutator-lemmas", commutator_lemmas(&rep)),
        report("schur-bounds", schur_bounds(&rep, &cfg)),
        report("hull-trace", hull_trace(&rep)),
        report("corollary", corollary(&rep)),
        report("deterministic-reports", deterministic_reports(&rep)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
