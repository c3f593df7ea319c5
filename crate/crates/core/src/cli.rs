//! The `hullkit` command line.
//!
//! Exit status: 0 when every hard audit passes, 1 when any hard audit fails
//! (the report is still written), 2 on usage or input errors. Claim audits
//! never affect the exit status.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calculus::{
    commutator_subgroup, commutator_values, conjugation_identity_audits, hull_decomposition_audit,
    lemma_invariance_audit, normal_hull, HullConstruction, DEFAULT_TRIPLE_CAP,
};
use crate::corpus::{run_corpus, CorpusConfig};
use crate::families::{Family, FamilyError};
use crate::format::{parse_group_file, ParseError};
use crate::group::{Element, FiniteGroup, GroupError, Subgroup, DEFAULT_ORDER_CAP};
use crate::perm::Permutation;
use crate::report::{label_all, AuditRecord, AuditReport, GroupDescriptor, SubgroupDescriptor};
use crate::schur::{commutator_sets, eq1_identity_check, random_word, reduce_word, schur_context, width};
use crate::theorem::{corollary_audit, run_proof_trace, width_bound_audit, ComponentedGroup};
use crate::verdict::{check, Status, Verdict};

#[derive(Debug, Parser)]
#[command(
    name = "hullkit",
    version,
    about = "Normal hulls, commutator subgroups and Schur-type width audits for finite groups",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal hull of H by both constructions, with the decomposition audits.
    Hull(GroupArgs),
    /// The commutator subgroup (H,K); K defaults to G.
    Commutator(CommutatorArgs),
    /// Exact width of (G,H) over the commutators [g,h].
    Width(GroupArgs),
    /// Centralizer/core context, commutator-set claims, power identity and
    /// word rewriting.
    Schur(SchurArgs),
    /// Replay the hull argument with N = --component as identity component.
    Trace(GroupArgs),
    /// Run every audit over the built-in corpus.
    AuditAll(AuditAllArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, env = "HULLKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock time per audit (makes reports nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// A group file, or `family:<name>:<param>` (e.g. `family:symmetric:4`).
    #[arg(long)]
    group: String,
    /// Generators of H: cycle notation or element ids, comma separated.
    #[arg(long, default_value = "")]
    subgroup: String,
    /// Generators of the distinguished normal subgroup N (default: all of G).
    #[arg(long)]
    component: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    max_order: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CommutatorArgs {
    #[command(flatten)]
    base: GroupArgs,
    /// Generators of K (default: all of G).
    #[arg(long = "with")]
    with: Option<String>,
}

#[derive(Debug, Args)]
struct SchurArgs {
    #[command(flatten)]
    base: GroupArgs,
    /// Random words to rewrite.
    #[arg(long, default_value_t = 1000)]
    words: usize,
    /// Maximum random word length.
    #[arg(long, default_value_t = 64)]
    word_length: usize,
}

#[derive(Debug, Args)]
struct AuditAllArgs {
    /// Largest family group in the corpus.
    #[arg(long, default_value_t = 48)]
    max_order: usize,
    /// Largest direct product in the corpus (default: --max-order).
    #[arg(long)]
    max_product_order: Option<usize>,
    #[arg(long, default_value_t = 2)]
    max_generators: usize,
    #[arg(long, default_value_t = 1000)]
    words: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Family(#[from] FamilyError),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Group(#[from] GroupError),
    #[error("bad element {token:?}: {reason}")]
    Element { token: String, reason: String },
    #[error("--component must generate a normal subgroup: {0}")]
    ComponentNotNormal(GroupError),
}

/// Captured result of one invocation.
#[derive(Debug)]
pub struct CliOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<AuditReport>,
}

pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if status == 0 { (text, String::new()) } else { (String::new(), text) };
            return CliOutput {
                status,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    let (output, result) = match cli.command {
        Command::Hull(a) => (seed_of(&a), run_group_command(&a, "hull", hull_command)),
        Command::Width(a) => (seed_of(&a), run_group_command(&a, "width", width_command)),
        Command::Trace(a) => (seed_of(&a), run_group_command(&a, "trace", trace_command)),
        Command::Commutator(a) => (
            seed_of(&a.base),
            run_group_command(&a.base, "commutator", |g, h, base, rep| {
                commutator_command(g, h, base, a.with.as_deref(), rep)
            }),
        ),
        Command::Schur(a) => (
            seed_of(&a.base),
            run_group_command(&a.base, "schur", |g, h, base, rep| {
                schur_command(g, h, base, a.words, a.word_length, rep)
            }),
        ),
        Command::AuditAll(a) => {
            let cfg = CorpusConfig {
                max_order: a.max_order,
                max_product_order: a.max_product_order.unwrap_or(a.max_order),
                max_generators: a.max_generators.max(1),
                words_per_context: a.words,
                seed: a.output.seed,
                ..CorpusConfig::default()
            };
            let out = (a.output.format, a.output.out.clone());
            (out, Ok(run_corpus(&cfg, a.output.timings)))
        }
    };
    finish(output, result)
}

fn seed_of(a: &GroupArgs) -> (Format, Option<PathBuf>) {
    (a.output.format, a.output.out.clone())
}

fn finish((format, out): (Format, Option<PathBuf>), result: Result<AuditReport, CliError>) -> CliOutput {
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            return CliOutput {
                status: 2,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                report: None,
            }
        }
    };
    let rendered = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let status = if report.hard_failures() > 0 { 1 } else { 0 };
    let mut stdout = String::new();
    let mut stderr = String::new();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &rendered) {
                return CliOutput {
                    status: 2,
                    stdout,
                    stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    report: Some(report),
                };
            }
            let s = &report.summary;
            stdout = format!(
                "wrote {}: {} audits, {} fail, {} claim-violated\n",
                path.display(),
                s.audits,
                s.fail,
                s.claim_violated
            );
        }
        None => stdout = rendered,
    }
    if status != 0 {
        stderr.push_str(&format!("{} hard audit(s) failed\n", report.hard_failures()));
    }
    CliOutput {
        status,
        stdout,
        stderr,
        report: Some(report),
    }
}

pub fn load_group(spec: &str, cap: usize) -> Result<(String, FiniteGroup), CliError> {
    if let Some(family) = spec.strip_prefix("family:") {
        let f: Family = family.parse()?;
        let g = f.build(cap)?;
        return Ok((f.to_string(), g));
    }
    let text = std::fs::read_to_string(spec).map_err(|source| CliError::Io {
        path: spec.to_string(),
        source,
    })?;
    let g = parse_group_file(&text, cap).map_err(|source| CliError::Parse {
        path: spec.to_string(),
        source,
    })?;
    Ok((spec.to_string(), g))
}

/// Splits on commas outside parentheses and resolves each token: cycle
/// notation for permutation groups, or a plain / `#`-prefixed element id.
pub fn parse_elements(g: &FiniteGroup, text: &str) -> Result<Vec<Element>, CliError> {
    let mut tokens = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                tokens.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    tokens.push(&text[start..]);
    tokens
        .into_iter()
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| resolve_element(g, t))
        .collect()
}

fn resolve_element(g: &FiniteGroup, token: &str) -> Result<Element, CliError> {
    let err = |reason: String| CliError::Element {
        token: token.to_string(),
        reason,
    };
    if token.starts_with('(') {
        let degree = g
            .degree()
            .ok_or_else(|| err("group has no permutation representation".into()))?;
        let p = Permutation::parse(degree, token).map_err(|e| err(e.to_string()))?;
        return g.find_permutation(&p).map_err(|e| err(e.to_string()));
    }
    let id = token
        .trim_start_matches('#')
        .parse::<usize>()
        .map_err(|_| err("expected cycle notation or an element id".into()))?;
    if id >= g.order() {
        return Err(err(format!("id outside 0..{}", g.order())));
    }
    Ok(id)
}

fn run_group_command(
    a: &GroupArgs,
    name: &str,
    body: impl FnOnce(&FiniteGroup, &Subgroup<'_>, &GroupArgs, &mut AuditReport) -> Result<(), CliError>,
) -> Result<AuditReport, CliError> {
    let (gname, g) = load_group(&a.group, a.max_order)?;
    let h = g.generate_closure(&parse_elements(&g, &a.subgroup)?);
    let mut report = AuditReport::new(name, a.output.seed, a.output.timings);
    report.group = Some(GroupDescriptor::new(gname, &g));
    report.subgroups.push(SubgroupDescriptor::new("H", &h));
    body(&g, &h, a, &mut report)?;
    Ok(report)
}

fn hull_command(g: &FiniteGroup, h: &Subgroup<'_>, _: &GroupArgs, rep: &mut AuditReport) -> Result<(), CliError> {
    let dec = rep.timed(|| {
        let dec = hull_decomposition_audit(g, h);
        let r = AuditRecord::from_verdict("lemma-hull-decomposition", &dec.verdict, g)
            .with("commutator_order", dec.commutator.order())
            .with("product_set_size", dec.product.len());
        (dec, r)
    });
    for hr in [&dec.minimal, &dec.conjugate] {
        let v = match g.normality_witness(&hr.hull) {
            Some((x, y)) => Verdict::fail("hull is not normal", vec![x, y]),
            None => check(h.is_subset(&hr.hull), || ("hull misses H".into(), Vec::new())),
        };
        rep.push(
            AuditRecord::from_verdict("normal-hull", &v, g)
                .scope(serde_json::to_value(hr.construction).unwrap().as_str().unwrap_or_default())
                .with("order", hr.hull.order())
                .with("iterations", hr.iterations),
        );
    }
    let w = dec.minimal.hull.difference_witness(&dec.conjugate.hull);
    let agree = check(w.is_none(), || ("constructions disagree".into(), w.into_iter().collect()));
    rep.push(AuditRecord::from_verdict("hull-equivalence", &agree, g).with("hull_order", dec.minimal.hull.order()));
    rep.timed(|| {
        let v = commutator_normality(g, &dec.commutator);
        ((), AuditRecord::from_verdict("lemma-commutator-normal", &v, g))
    });
    rep.timed(|| {
        let v = lemma_invariance_audit(g, h);
        ((), AuditRecord::from_verdict("lemma-conjugation-invariance", &v, g))
    });
    rep.timed(|| {
        let a = conjugation_identity_audits(g, DEFAULT_TRIPLE_CAP);
        let r = AuditRecord::from_verdict("conjugation-identities", &a.verdict, g).with("triples", a.triples);
        ((), r)
    });
    rep.subgroups.push(SubgroupDescriptor::new("H^G", &dec.minimal.hull));
    rep.subgroups.push(SubgroupDescriptor::new("(G,H)", &dec.commutator));
    Ok(())
}

fn commutator_normality(g: &FiniteGroup, c: &Subgroup<'_>) -> Verdict {
    match g.normality_witness(c) {
        Some((x, y)) => Verdict::fail("(G,H) is not normal", vec![x, y]),
        None => Verdict::pass(),
    }
}

fn commutator_command(
    g: &FiniteGroup,
    h: &Subgroup<'_>,
    _: &GroupArgs,
    with: Option<&str>,
    rep: &mut AuditReport,
) -> Result<(), CliError> {
    let k = match with {
        Some(text) => g.generate_closure(&parse_elements(g, text)?),
        None => g.whole(),
    };
    let c = rep.timed(|| {
        let c = commutator_subgroup(g, h, &k);
        let mut r = AuditRecord::new("commutator-subgroup", Status::Pass)
            .with("order", c.order())
            .with("generators", label_all(g, c.generators()));
        if c.order() <= 64 {
            r = r.with("elements", label_all(g, c.elements()));
        }
        (c, r)
    });
    if k.is_whole() {
        rep.push(AuditRecord::from_verdict("lemma-commutator-normal", &commutator_normality(g, &c), g));
    }
    rep.subgroups.push(SubgroupDescriptor::new("K", &k));
    rep.subgroups.push(SubgroupDescriptor::new("(H,K)", &c));
    Ok(())
}

fn width_command(g: &FiniteGroup, h: &Subgroup<'_>, _: &GroupArgs, rep: &mut AuditReport) -> Result<(), CliError> {
    let whole = g.whole();
    let c = commutator_subgroup(g, &whole, h);
    let gens = commutator_values(g, &whole, h);
    rep.timed(|| {
        let r = match width(g, &c, &gens) {
            Ok(w) => AuditRecord::new("width", Status::Pass).with("width", w),
            Err(e) => AuditRecord::from_verdict("width", &Verdict::fail(e.to_string(), Vec::new()), g),
        };
        ((), r.with("commutator_order", c.order()).with("commutators", gens.len()))
    });
    rep.subgroups.push(SubgroupDescriptor::new("(G,H)", &c));
    Ok(())
}

fn schur_command(
    g: &FiniteGroup,
    h: &Subgroup<'_>,
    a: &GroupArgs,
    words: usize,
    max_len: usize,
    rep: &mut AuditReport,
) -> Result<(), CliError> {
    let ctx = match rep.timed(|| match schur_context(g, h) {
        Ok(ctx) => {
            let r = AuditRecord::new("schur-context", Status::Pass)
                .with("n", ctx.index)
                .with("centralizer_order", ctx.centralizer.order())
                .with("core_order", ctx.core.order());
            (Some(ctx), r)
        }
        Err(e) => (None, AuditRecord::from_verdict("schur-context", &Verdict::fail(e.to_string(), Vec::new()), g)),
    }) {
        Some(ctx) => ctx,
        None => return Ok(()),
    };
    rep.subgroups.push(SubgroupDescriptor::new("C_G(H)", &ctx.centralizer));
    rep.subgroups.push(SubgroupDescriptor::new("core", &ctx.core));

    let sets = commutator_sets(&ctx);
    rep.push(
        AuditRecord::from_verdict("claim-plain-commutators-le-n2", &sets.plain_claim, g)
            .with("size", sets.plain.len())
            .with("bound", sets.plain_bound),
    );
    rep.push(
        AuditRecord::from_verdict("claim-sigma-commutators-le-n3", &sets.sigma_claim, g)
            .with("size", sets.sigma.len())
            .with("bound", sets.sigma_bound),
    );

    let eq1 = rep.timed(|| {
        let eq1 = eq1_identity_check(&ctx);
        let r = AuditRecord::from_verdict("eq1-commuting-precondition", &eq1.commuting, g)
            .with("pairs", eq1.pairs)
            .with("triples_covered", eq1.triples_covered);
        (eq1, r)
    });
    rep.push(AuditRecord::from_verdict("eq1-corrected-identity", &eq1.corrected, g));
    rep.push(AuditRecord::from_verdict("claim-eq1-printed-form", &eq1.printed, g));

    rep.timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(a.output.seed);
        let mut verdict = Verdict::pass();
        let mut rewrites = 0;
        let mut threshold = 0;
        for _ in 0..words {
            let len = rng.gen_range(0..=max_len);
            let w = random_word(&ctx, len, &mut rng);
            match reduce_word(&ctx, &w) {
                Ok(r) => {
                    rewrites += r.rewrites;
                    threshold = r.threshold;
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
        let r = AuditRecord::from_verdict("reduce-word", &verdict, g)
            .with("words", words)
            .with("rewrites", rewrites)
            .with("threshold", threshold)
            .with("n4", ctx.n4());
        ((), r)
    });
    let sufficed = ctx.sigma_count as u64 <= ctx.n().saturating_pow(3);
    rep.push(AuditRecord::from_verdict(
        "claim-n4-trigger-suffices",
        &Verdict::claim(sufficed, format!("|sigma| = {}", ctx.sigma_count), Vec::new()),
        g,
    ));
    Ok(())
}

fn trace_command(g: &FiniteGroup, h: &Subgroup<'_>, a: &GroupArgs, rep: &mut AuditReport) -> Result<(), CliError> {
    let n = match &a.component {
        Some(text) => g.generate_closure(&parse_elements(g, text)?),
        None => g.whole(),
    };
    rep.subgroups.push(SubgroupDescriptor::new("N", &n));
    let cg = ComponentedGroup::new(g, n).map_err(CliError::ComponentNotNormal)?;
    let trace = rep.timed(|| {
        let trace = run_proof_trace(&cg, h, a.output.seed);
        let status = if trace.passed() { Status::Pass } else { Status::Fail };
        let r = AuditRecord::new("proof-trace", status).with("component_count", cg.component_count);
        (trace, r)
    });
    for step in &trace.steps {
        let mut r = AuditRecord::from_verdict(format!("trace-{}", step.id), &step.verdict, g).scope(step.name);
        for (k, v) in &step.numbers {
            r = r.with(k, v);
        }
        for (k, s) in &step.subgroups {
            r = r.with(&format!("order_{k}"), s.order);
        }
        rep.push(r);
    }
    let hull = normal_hull(g, h, HullConstruction::MinimalNormalClosure).hull;
    let agree = match &trace.final_hull {
        Some(fh) => check(hull.equals_set(fh), || ("(G,H1)·H1 differs from H^G".into(), Vec::new())),
        None => Verdict::skipped("trace incomplete"),
    };
    rep.push(AuditRecord::from_verdict("trace-hull-agreement", &agree, g).with("hull_order", hull.order()));
    match width_bound_audit(&trace) {
        Ok(wb) => rep.push(
            AuditRecord::from_verdict("trace-width-bound", &wb.verdict, g)
                .with("width", wb.width)
                .with("bound", wb.bound)
                .with("slack", wb.slack),
        ),
        Err(e) => rep.push(AuditRecord::from_verdict("trace-width-bound", &Verdict::skipped(e.to_string()), g)),
    }
    rep.timed(|| ((), AuditRecord::from_verdict("corollary", &corollary_audit(&cg, h), g)));
    Ok(())
}
