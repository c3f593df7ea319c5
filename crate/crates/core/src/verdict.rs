use serde::Serialize;

use crate::group::Element;

/// Outcome of one audit. Hard checks use `Pass`/`Fail`; checks of quoted
/// bounds that are not asserted as theorems use the two `Claim*` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    ClaimHolds,
    ClaimViolated,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::ClaimHolds => "claim-holds",
            Status::ClaimViolated => "claim-violated",
        }
    }

    pub fn is_claim(self) -> bool {
        matches!(self, Status::ClaimHolds | Status::ClaimViolated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<Element>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            status: Status::Pass,
            message: None,
            witness: Vec::new(),
        }
    }

    pub fn fail(message: impl Into<String>, witness: Vec<Element>) -> Self {
        Verdict {
            status: Status::Fail,
            message: Some(message.into()),
            witness,
        }
    }

    pub fn skipped(message: impl Into<String>) -> Self {
        Verdict {
            status: Status::Skipped,
            message: Some(message.into()),
            witness: Vec::new(),
        }
    }

    pub fn claim(holds: bool, message: impl Into<String>, witness: Vec<Element>) -> Self {
        Verdict {
            status: if holds {
                Status::ClaimHolds
            } else {
                Status::ClaimViolated
            },
            message: Some(message.into()),
            witness,
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    /// Sequences checks: the first failure wins.
    pub fn and_then(self, next: impl FnOnce() -> Verdict) -> Verdict {
        if self.is_pass() {
            next()
        } else {
            self
        }
    }
}

/// Pass when `cond` holds, else fail with the message and witness.
pub fn check(cond: bool, message: impl FnOnce() -> (String, Vec<Element>)) -> Verdict {
    if cond {
        Verdict::pass()
    } else {
        let (m, w) = message();
        Verdict::fail(m, w)
    }
}
