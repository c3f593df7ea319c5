//! Step-by-step replay of the normal-hull argument on a finite group with a
//! distinguished normal subgroup `N` standing in for the identity component.
//!
//! Steps, in order:
//!
//! - `s1` absorb `(H,N)`: `H₁ = H·(H,N)` is a subgroup between `H` and `H^G`.
//! - `s2` `N` normalizes `H₁`, via `g₀h[g₁,l]g₀⁻¹ = (g₀hg₀⁻¹)[g₀g₁,l][l,g₀]`.
//! - `s3` `D = (N,H₁)` has hull `D^G = D·(G,D)`; widths `n₁`, `n₂`.
//! - `s4` in `G/D^G` the image of `N` centralizes the image of `H₁`.
//! - `s5` `(Ḡ,H̄)` is the image of `(G,H₁)`; `d = |(G,H₁) : D^G ∩ (G,H₁)|`.
//! - `s6` `(G,H₁)` is normal and `(G,H₁)·H₁ = H^G = H₁^G`.
//! - `s7` the width of `(G,H₁)` over `[g,h]` is at most `n₁ + n₂ + d`.
//!
//! A failed step marks every later step skipped.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{commutator_subgroup, commutator_values, first_difference, normal_hull, HullConstruction};
use crate::group::{Element, FiniteGroup, GroupError, QuotientMap, Subgroup};
use crate::schur::{schur_context, width};
use crate::verdict::{check, Status, Verdict};

/// Quadruple scans in `s2` are exhaustive up to this many quadruples.
pub const QUADRUPLE_EXHAUSTIVE_LIMIT: u64 = 1 << 20;
/// Seeded samples drawn in `s2` above the exhaustive limit.
pub const QUADRUPLE_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("dependent step skipped: {0} did not complete")]
    DependentStepSkipped(&'static str),
}

/// `G` with a normal subgroup `N` modelling its identity component.
#[derive(Debug, Clone)]
pub struct ComponentedGroup<'g> {
    pub group: &'g FiniteGroup,
    pub component: Subgroup<'g>,
    pub component_count: usize,
    /// s2 depends only on `N` and `H1`, so its record is shared between
    /// traces with the same `H1`.
    s2_cache: RefCell<HashMap<Vec<Element>, StepRecord>>,
}

impl<'g> ComponentedGroup<'g> {
    pub fn new(group: &'g FiniteGroup, component: Subgroup<'g>) -> Result<Self, GroupError> {
        if let Some((g, n)) = group.normality_witness(&component) {
            return Err(GroupError::NotNormal { g, n });
        }
        let component_count = component.index();
        Ok(ComponentedGroup {
            group,
            component,
            component_count,
            s2_cache: RefCell::default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupSummary {
    pub order: usize,
    pub elements: Vec<Element>,
}

impl From<&Subgroup<'_>> for SubgroupSummary {
    fn from(s: &Subgroup<'_>) -> Self {
        SubgroupSummary {
            order: s.order(),
            elements: s.elements().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub id: &'static str,
    pub name: &'static str,
    pub subgroups: BTreeMap<&'static str, SubgroupSummary>,
    pub numbers: BTreeMap<&'static str, u64>,
    pub verdict: Verdict,
}

impl StepRecord {
    fn new(id: &'static str) -> Self {
        StepRecord {
            id,
            name: step_name(id),
            subgroups: BTreeMap::new(),
            numbers: BTreeMap::new(),
            verdict: Verdict::pass(),
        }
    }

    fn subgroup(&mut self, key: &'static str, s: &Subgroup<'_>) {
        self.subgroups.insert(key, s.into());
    }

    fn number(&mut self, key: &'static str, value: impl TryInto<u64>) {
        self.numbers
            .insert(key, value.try_into().ok().unwrap_or(u64::MAX));
    }
}

const STEPS: [(&str, &str); 7] = [
    ("s1", "absorb (H,N) into H"),
    ("s2", "N normalizes H1"),
    ("s3", "hull of D = (N,H1) decomposes"),
    ("s4", "image of N centralizes image of H1"),
    ("s5", "(G,H1) is a finite extension of the hull of D"),
    ("s6", "H^G = (G,H1)·H1"),
    ("s7", "width of (G,H1) within n1 + n2 + d"),
];

fn step_name(id: &str) -> &'static str {
    STEPS
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .expect("known step id")
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofTrace {
    pub steps: Vec<StepRecord>,
    /// `(G,H₁)·H₁` when `s6` completed.
    pub final_hull: Option<Vec<Element>>,
}

impl ProofTrace {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.verdict.is_pass())
    }

    pub fn step(&self, id: &str) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn first_failure(&self) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.verdict.is_fail())
    }
}

struct TraceState<'g> {
    cg: &'g ComponentedGroup<'g>,
    h: Subgroup<'g>,
    seed: u64,
    hull: Subgroup<'g>,
    h1: Option<Subgroup<'g>>,
    dg: Option<Subgroup<'g>>,
    quotient: Option<QuotientMap<'g>>,
    gh1: Option<Subgroup<'g>>,
    n1: usize,
    n2: usize,
    d: usize,
}

pub fn run_proof_trace<'g>(cg: &'g ComponentedGroup<'g>, h: &Subgroup<'g>, seed: u64) -> ProofTrace {
    let hull = normal_hull(cg.group, h, HullConstruction::ConjugateGeneration).hull;
    let mut st = TraceState {
        cg,
        h: h.clone(),
        seed,
        hull,
        h1: None,
        dg: None,
        quotient: None,
        gh1: None,
        n1: 0,
        n2: 0,
        d: 0,
    };
    let runners: [fn(&mut TraceState<'g>) -> StepRecord; 7] = [
        TraceState::absorb,
        TraceState::normalized_by_component,
        TraceState::hull_of_d,
        TraceState::quotient_centralizes,
        TraceState::finite_index,
        TraceState::final_hull,
        TraceState::width_bound,
    ];
    let mut steps = Vec::with_capacity(STEPS.len());
    let mut halted: Option<&'static str> = None;
    for (run, (id, _)) in runners.iter().zip(STEPS) {
        let record = match halted {
            Some(prior) => {
                let mut r = StepRecord::new(id);
                r.verdict = Verdict::skipped(format!("{prior} failed"));
                r
            }
            None => run(&mut st),
        };
        if halted.is_none() && !record.verdict.is_pass() {
            halted = Some(record.id);
        }
        steps.push(record);
    }
    let final_hull = match (&st.gh1, &st.h1, halted) {
        (Some(gh1), Some(h1), None) => Some(cg.group.product_set(gh1, h1)),
        _ => None,
    };
    ProofTrace { steps, final_hull }
}

impl<'g> TraceState<'g> {
    fn absorb(&mut self) -> StepRecord {
        let g = self.cg.group;
        let n = &self.cg.component;
        let mut r = StepRecord::new("s1");
        let c1 = commutator_subgroup(g, &self.h, n);
        r.subgroup("C1", &c1);
        if !g.normalizes(&self.h, &c1) {
            r.verdict = Verdict::fail("H does not normalize (H,N)", Vec::new());
            return r;
        }
        let product = g.product_set(&self.h, &c1);
        let Some(h1) = g.subgroup_from_elements(&product) else {
            r.verdict = Verdict::fail("H·(H,N) is not a subgroup", Vec::new());
            return r;
        };
        r.subgroup("H1", &h1);
        r.number("hull_order", self.hull.order());
        r.verdict = check(self.h.is_subset(&h1), || ("H ⊄ H1".into(), Vec::new())).and_then(|| {
            check(h1.is_subset(&self.hull), || ("H1 ⊄ H^G".into(), Vec::new()))
        });
        self.h1 = Some(h1);
        r
    }

    fn normalized_by_component(&mut self) -> StepRecord {
        let key = self.h1.as_ref().expect("s1 passed").elements().to_vec();
        if let Some(r) = self.cg.s2_cache.borrow().get(&key) {
            return r.clone();
        }
        let r = self.check_normalized_by_component();
        self.cg.s2_cache.borrow_mut().insert(key, r.clone());
        r
    }

    fn check_normalized_by_component(&self) -> StepRecord {
        let g = self.cg.group;
        let n = self.cg.component.elements();
        let h1 = self.h1.as_ref().expect("s1 passed");
        let hs = h1.elements();
        let mut r = StepRecord::new("s2");

        let identity = |g0: Element, g1: Element, h: Element, l: Element| {
            let lhs = g.conj(g0, g.mul(h, g.commutator(g1, l)));
            let rhs = g.mul(
                g.conj(g0, h),
                g.mul(g.commutator(g.mul(g0, g1), l), g.commutator(l, g0)),
            );
            lhs == rhs
        };

        let total = (n.len() as u64).pow(2) * (hs.len() as u64).pow(2);
        let mut failure = None;
        let checked = if total <= QUADRUPLE_EXHAUSTIVE_LIMIT {
            // lhs = (g0·h)·(c·g0⁻¹) and rhs = (g0·h)·(g0⁻¹·tail); only the
            // left factor depends on h, so the right factors are hoisted.
            'outer: for &g0 in n {
                let g0i = g.inv(g0);
                let g0_row = g.row(g0);
                for &g1 in n {
                    let g01 = g.mul(g0, g1);
                    for &l in hs {
                        let right_l = g.mul(g.commutator(g1, l), g0i);
                        let tail = g.mul(g.commutator(g01, l), g.commutator(l, g0));
                        let right_r = g.mul(g0i, tail);
                        for &h in hs {
                            let row = g.row(g0_row[h] as Element);
                            if row[right_l] != row[right_r] {
                                debug_assert!(!identity(g0, g1, h, l));
                                failure = Some(vec![g0, g1, h, l]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            total
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            for _ in 0..QUADRUPLE_SAMPLES {
                let q = [
                    n[rng.gen_range(0..n.len())],
                    n[rng.gen_range(0..n.len())],
                    hs[rng.gen_range(0..hs.len())],
                    hs[rng.gen_range(0..hs.len())],
                ];
                if !identity(q[0], q[1], q[2], q[3]) {
                    failure = Some(q.to_vec());
                    break;
                }
            }
            QUADRUPLE_SAMPLES
        };
        r.number("quadruples", checked);
        r.number("exhaustive", u64::from(total <= QUADRUPLE_EXHAUSTIVE_LIMIT));
        r.verdict = match failure {
            Some(w) => Verdict::fail("conjugation identity fails at (g0, g1, h, l)", w),
            None => {
                let witness = n.iter().find_map(|&x| {
                    hs.iter()
                        .find(|&&y| !h1.contains(g.conj(x, y)))
                        .map(|&y| vec![x, y])
                });
                match witness {
                    Some(w) => Verdict::fail("N does not normalize H1", w),
                    None => Verdict::pass(),
                }
            }
        };
        r
    }

    fn hull_of_d(&mut self) -> StepRecord {
        let g = self.cg.group;
        let h1 = self.h1.as_ref().expect("s1 passed");
        let mut r = StepRecord::new("s3");
        let d = commutator_subgroup(g, &self.cg.component, h1);
        let dg = normal_hull(g, &d, HullConstruction::MinimalNormalClosure).hull;
        let gd = commutator_subgroup(g, &g.whole(), &d);
        r.subgroup("D", &d);
        r.subgroup("D^G", &dg);
        r.subgroup("(G,D)", &gd);
        let product = g.product_set(&d, &gd);
        if let Some(w) = first_difference(dg.elements(), &product) {
            r.verdict = Verdict::fail("D^G differs from D·(G,D)", vec![w]);
            return r;
        }
        let n1 = width(g, &d, &commutator_values(g, &self.cg.component, h1));
        let n2 = width(g, &gd, &commutator_values(g, &g.whole(), &d));
        match (n1, n2) {
            (Ok(n1), Ok(n2)) => {
                self.n1 = n1;
                self.n2 = n2;
                r.number("n1", n1);
                r.number("n2", n2);
            }
            (Err(e), _) | (_, Err(e)) => {
                r.verdict = Verdict::fail(format!("width computation: {e}"), Vec::new());
                return r;
            }
        }
        self.dg = Some(dg);
        r
    }

    fn quotient_centralizes(&mut self) -> StepRecord {
        let g = self.cg.group;
        let h1 = self.h1.as_ref().expect("s1 passed");
        let dg = self.dg.as_ref().expect("s3 passed");
        let mut r = StepRecord::new("s4");
        let q = match g.quotient(dg) {
            Ok(q) => q,
            Err(e) => {
                r.verdict = Verdict::fail(format!("quotient by D^G: {e}"), Vec::new());
                return r;
            }
        };
        {
            let bar = &q.target;
            let h_bar = q.image_subgroup(h1);
            let n_bar = q.image_subgroup(&self.cg.component);
            r.number("quotient_order", bar.order());
            r.number("image_h1_order", h_bar.order());
            r.number("image_n_order", n_bar.order());
            let witness = n_bar.elements().iter().find_map(|&x| {
                h_bar
                    .elements()
                    .iter()
                    .find(|&&y| bar.mul(x, y) != bar.mul(y, x))
                    .map(|&y| vec![q.representative(x), q.representative(y)])
            });
            if let Some(w) = witness {
                r.verdict = Verdict::fail("image of N does not centralize image of H1", w);
                return r;
            }
            match schur_context(bar, &h_bar) {
                Ok(ctx) => r.number("quotient_schur_n", ctx.index),
                Err(e) => {
                    r.verdict = Verdict::fail(format!("quotient Schur context: {e}"), Vec::new());
                    return r;
                }
            }
        }
        self.quotient = Some(q);
        r
    }

    fn finite_index(&mut self) -> StepRecord {
        let g = self.cg.group;
        let h1 = self.h1.as_ref().expect("s1 passed");
        let dg = self.dg.as_ref().expect("s3 passed");
        let q = self.quotient.as_ref().expect("s4 passed");
        let mut r = StepRecord::new("s5");
        let gh1 = commutator_subgroup(g, &g.whole(), h1);
        r.subgroup("(G,H1)", &gh1);
        let h_bar = q.image_subgroup(h1);
        let bar_comm = commutator_subgroup(&q.target, &q.target.whole(), &h_bar);
        let image = q.image_subgroup(&gh1);
        if let Some(w) = bar_comm.difference_witness(&image) {
            r.verdict = Verdict::fail("(Ḡ,H̄) differs from the image of (G,H1)", vec![q.representative(w)]);
            return r;
        }
        if let Some(&w) = dg.elements().iter().find(|&&x| !gh1.contains(x)) {
            r.verdict = Verdict::fail("D^G ⊄ (G,H1)", vec![w]);
            return r;
        }
        let inner = dg.intersection(&gh1);
        self.d = gh1.order() / inner.order();
        r.number("d", self.d);
        r.number("image_order", image.order());
        self.gh1 = Some(gh1);
        r
    }

    fn final_hull(&mut self) -> StepRecord {
        let g = self.cg.group;
        let h1 = self.h1.as_ref().expect("s1 passed");
        let gh1 = self.gh1.as_ref().expect("s5 passed");
        let mut r = StepRecord::new("s6");
        if let Some((x, y)) = g.normality_witness(gh1) {
            r.verdict = Verdict::fail("(G,H1) is not normal", vec![x, y]);
            return r;
        }
        let product = g.product_set(gh1, h1);
        let hull_h1 = normal_hull(g, h1, HullConstruction::MinimalNormalClosure).hull;
        r.subgroup("H^G", &self.hull);
        r.verdict = check(first_difference(&product, self.hull.elements()).is_none(), || {
            ("(G,H1)·H1 differs from H^G".into(), Vec::new())
        })
        .and_then(|| {
            let w = self.hull.difference_witness(&hull_h1);
            check(w.is_none(), || ("H^G differs from H1^G".into(), w.into_iter().collect()))
        });
        r
    }

    fn width_bound(&mut self) -> StepRecord {
        let g = self.cg.group;
        let h1 = self.h1.as_ref().expect("s1 passed");
        let gh1 = self.gh1.as_ref().expect("s5 passed");
        let mut r = StepRecord::new("s7");
        let exact = match width(g, gh1, &commutator_values(g, &g.whole(), h1)) {
            Ok(w) => w,
            Err(e) => {
                r.verdict = Verdict::fail(format!("width computation: {e}"), Vec::new());
                return r;
            }
        };
        let bound = self.n1 + self.n2 + self.d;
        r.number("width", exact);
        r.number("n1", self.n1);
        r.number("n2", self.n2);
        r.number("d", self.d);
        r.number("bound", bound);
        r.number("slack", bound.saturating_sub(exact));
        r.verdict = check(exact <= bound, || {
            (format!("width {exact} exceeds n1 + n2 + d = {bound}"), Vec::new())
        });
        r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WidthBound {
    pub width: u64,
    pub bound: u64,
    pub slack: i64,
    pub verdict: Verdict,
}

/// Re-checks the `s7` width against `n₁ + n₂ + d` from the earlier steps.
pub fn width_bound_audit(trace: &ProofTrace) -> Result<WidthBound, TraceError> {
    let s7 = trace
        .step("s7")
        .filter(|s| s.verdict.status != Status::Skipped)
        .ok_or(TraceError::DependentStepSkipped("s7"))?;
    let s3 = trace.step("s3").ok_or(TraceError::DependentStepSkipped("s3"))?;
    let s5 = trace.step("s5").ok_or(TraceError::DependentStepSkipped("s5"))?;
    let width = *s7
        .numbers
        .get("width")
        .ok_or(TraceError::DependentStepSkipped("s7"))?;
    let n1 = s3.numbers.get("n1").copied().unwrap_or(0);
    let n2 = s3.numbers.get("n2").copied().unwrap_or(0);
    let d = s5.numbers.get("d").copied().unwrap_or(0);
    let bound = n1 + n2 + d;
    Ok(WidthBound {
        width,
        bound,
        slack: bound as i64 - width as i64,
        verdict: check(width <= bound, || {
            (format!("width {width} exceeds bound {bound}"), Vec::new())
        }),
    })
}

/// `(H,G) = (H·(N,H), G)` as element sets.
pub fn corollary_audit<'g>(cg: &ComponentedGroup<'g>, h: &Subgroup<'g>) -> Verdict {
    let g = cg.group;
    let whole = g.whole();
    let lhs = commutator_subgroup(g, h, &whole);
    let nh = commutator_subgroup(g, &cg.component, h);
    let product = g.product_set(h, &nh);
    let Some(enlarged) = g.subgroup_from_elements(&product) else {
        return Verdict::fail("H·(N,H) is not a subgroup", Vec::new());
    };
    let rhs = commutator_subgroup(g, &enlarged, &whole);
    match lhs.difference_witness(&rhs) {
        Some(w) => Verdict::fail("(H,G) differs from (H·(N,H),G)", vec![w]),
        None => Verdict::pass(),
    }
}
