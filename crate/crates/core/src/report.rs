//! JSON audit reports (`report: hullkit v1`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;

use crate::group::{Element, FiniteGroup, Subgroup};
use crate::verdict::{Status, Verdict};

pub const REPORT_SCHEMA: &str = "hullkit v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct GroupDescriptor {
    pub name: String,
    pub order: usize,
    pub generators: Vec<String>,
}

impl GroupDescriptor {
    pub fn new(name: impl Into<String>, g: &FiniteGroup) -> Self {
        GroupDescriptor {
            name: name.into(),
            order: g.order(),
            generators: g.generators().iter().map(|&x| g.label(x)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupDescriptor {
    pub role: String,
    pub order: usize,
    pub generators: Vec<String>,
}

impl SubgroupDescriptor {
    pub fn new(role: impl Into<String>, s: &Subgroup<'_>) -> Self {
        let g = s.group();
        SubgroupDescriptor {
            role: role.into(),
            order: s.order(),
            generators: s.generators().iter().map(|&x| g.label(x)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditRecord {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    pub verdict: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl AuditRecord {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        AuditRecord {
            name: name.into(),
            scope: None,
            verdict: status,
            message: None,
            data: BTreeMap::new(),
            witnesses: Vec::new(),
            wall_clock_ms: None,
        }
    }

    /// Record for a single verdict; witness ids become element labels.
    pub fn from_verdict(name: impl Into<String>, v: &Verdict, g: &FiniteGroup) -> Self {
        let mut r = AuditRecord::new(name, v.status);
        r.message = v.message.clone();
        r.witnesses = label_all(g, &v.witness);
        r
    }

    pub fn scope(mut self, scope: impl Into<String>) -> Self {
        self.scope = Some(scope.into());
        self
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.data.insert(
            key.to_string(),
            serde_json::to_value(value).expect("report data serializes"),
        );
        self
    }

    pub fn is_hard_failure(&self) -> bool {
        self.verdict == Status::Fail
    }
}

pub fn label_all(g: &FiniteGroup, xs: &[Element]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x)).collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub audits: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub claim_holds: usize,
    pub claim_violated: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub report: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDescriptor>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subgroups: Vec<SubgroupDescriptor>,
    pub audits: Vec<AuditRecord>,
    pub summary: Summary,
    #[serde(skip)]
    timings: bool,
}

impl AuditReport {
    pub fn new(command: impl Into<String>, seed: u64, timings: bool) -> Self {
        AuditReport {
            report: REPORT_SCHEMA,
            tool_version: TOOL_VERSION,
            command: command.into(),
            seed,
            group: None,
            subgroups: Vec::new(),
            audits: Vec::new(),
            summary: Summary::default(),
            timings,
        }
    }

    pub fn push(&mut self, record: AuditRecord) {
        let s = &mut self.summary;
        s.audits += 1;
        match record.verdict {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skipped => s.skipped += 1,
            Status::ClaimHolds => s.claim_holds += 1,
            Status::ClaimViolated => s.claim_violated += 1,
        }
        self.audits.push(record);
    }

    /// Runs `f` and pushes its record, stamping wall-clock time when
    /// timings are enabled.
    pub fn timed<T>(&mut self, f: impl FnOnce() -> (T, AuditRecord)) -> T {
        let start = Instant::now();
        let (value, mut record) = f();
        if self.timings {
            record.wall_clock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        self.push(record);
        value
    }

    pub fn timings(&self) -> bool {
        self.timings
    }

    pub fn hard_failures(&self) -> usize {
        self.summary.fail
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({}) {}", self.report, self.tool_version, self.command);
        if let Some(g) = &self.group {
            let _ = writeln!(out, "group {} order {}", g.name, g.order);
        }
        for s in &self.subgroups {
            let _ = writeln!(out, "{} order {} <{}>", s.role, s.order, s.generators.join(", "));
        }
        for a in &self.audits {
            let _ = write!(out, "{:<15} {}", a.verdict.as_str(), a.name);
            if let Some(scope) = &a.scope {
                let _ = write!(out, " [{scope}]");
            }
            if let Some(m) = &a.message {
                let _ = write!(out, ": {m}");
            }
            if !a.data.is_empty() {
                let data: Vec<String> = a.data.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = write!(out, " {{{}}}", data.join(", "));
            }
            if !a.witnesses.is_empty() {
                let _ = write!(out, " witness {}", a.witnesses.join(" "));
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} audits, {} pass, {} fail, {} skipped, {} claim-holds, {} claim-violated",
            s.audits, s.pass, s.fail, s.skipped, s.claim_holds, s.claim_violated
        );
        out
    }
}

/// Aggregates many per-case verdicts into one record.
#[derive(Debug, Clone, Default)]
pub struct Tally {
    counts: BTreeMap<Status, u64>,
    failures: Vec<String>,
    maxima: BTreeMap<String, u64>,
    minima: BTreeMap<String, i64>,
    sums: BTreeMap<String, u64>,
    messages: Vec<String>,
    elapsed: Duration,
}

const MAX_LISTED_FAILURES: usize = 5;

impl Tally {
    pub fn add(&mut self, v: &Verdict, g: &FiniteGroup, case: impl FnOnce() -> String) {
        *self.counts.entry(v.status).or_default() += 1;
        let listed = matches!(v.status, Status::Fail | Status::ClaimViolated);
        if listed && self.failures.len() < MAX_LISTED_FAILURES {
            let mut line = case();
            if let Some(m) = &v.message {
                line.push_str(": ");
                line.push_str(m);
            }
            if !v.witness.is_empty() {
                line.push_str(&format!(" witness {}", label_all(g, &v.witness).join(" ")));
            }
            self.failures.push(line);
        }
    }

    /// Runs `f`, charging its wall-clock time to this tally.
    pub fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let value = f();
        self.elapsed += start.elapsed();
        value
    }

    pub fn charge(&mut self, d: Duration) {
        self.elapsed += d;
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn max(&mut self, key: &str, value: u64) {
        let e = self.maxima.entry(key.to_string()).or_insert(value);
        *e = (*e).max(value);
    }

    pub fn min(&mut self, key: &str, value: i64) {
        let e = self.minima.entry(key.to_string()).or_insert(value);
        *e = (*e).min(value);
    }

    pub fn sum(&mut self, key: &str, value: u64) {
        *self.sums.entry(key.to_string()).or_default() += value;
    }

    pub fn note(&mut self, message: impl Into<String>) {
        let m = message.into();
        if !self.messages.contains(&m) {
            self.messages.push(m);
        }
    }

    pub fn status(&self) -> Status {
        let has = |s| self.counts.get(&s).copied().unwrap_or(0) > 0;
        [
            Status::Fail,
            Status::ClaimViolated,
            Status::ClaimHolds,
            Status::Pass,
        ]
        .into_iter()
        .find(|&s| has(s))
        .unwrap_or(Status::Skipped)
    }

    pub fn into_record(self, name: &str, scope: &str) -> AuditRecord {
        let mut r = AuditRecord::new(name, self.status()).scope(scope);
        let cases: u64 = self.counts.values().sum();
        r = r.with("cases", cases);
        for (status, count) in &self.counts {
            r = r.with(status.as_str(), count);
        }
        for (k, v) in self.maxima {
            r = r.with(&format!("max_{k}"), v);
        }
        for (k, v) in self.minima {
            r = r.with(&format!("min_{k}"), v);
        }
        for (k, v) in self.sums {
            r = r.with(&k, v);
        }
        if !self.messages.is_empty() {
            r.message = Some(self.messages.join("; "));
        }
        r.witnesses = self.failures;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_status_precedence() {
        let g = FiniteGroup::trivial();
        let mut t = Tally::default();
        assert_eq!(t.status(), Status::Skipped);
        t.add(&Verdict::pass(), &g, String::new);
        assert_eq!(t.status(), Status::Pass);
        t.add(&Verdict::claim(true, "x", vec![]), &g, String::new);
        assert_eq!(t.status(), Status::ClaimHolds);
        t.add(&Verdict::claim(false, "x", vec![0]), &g, || "case".into());
        assert_eq!(t.status(), Status::ClaimViolated);
        t.add(&Verdict::fail("bad", vec![0]), &g, || "case".into());
        assert_eq!(t.status(), Status::Fail);
        let r = t.into_record("demo", "trivial");
        assert_eq!(r.data["cases"], 4);
        assert_eq!(r.witnesses.len(), 2);
    }

    #[test]
    fn report_json_shape() {
        let g = FiniteGroup::trivial();
        let mut rep = AuditReport::new("hull", 0, false);
        rep.group = Some(GroupDescriptor::new("cyclic:1", &g));
        rep.push(AuditRecord::from_verdict("x", &Verdict::fail("boom", vec![0]), &g));
        let v: Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["report"], "hullkit v1");
        assert_eq!(v["audits"][0]["verdict"], "fail");
        assert_eq!(v["audits"][0]["witnesses"][0], "()");
        assert_eq!(v["summary"]["fail"], 1);
        assert!(v["audits"][0].get("wall_clock_ms").is_none());
        assert_eq!(rep.hard_failures(), 1);
    }
}
