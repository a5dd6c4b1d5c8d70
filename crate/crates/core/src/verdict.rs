use std::fmt::Display;

use serde::Serialize;

/// Outcome of a verification suite: pass, or the first counterexample found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub suite: String,
    pub passed: bool,
    /// Number of individual equalities checked.
    pub cases: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Human-readable description of the failing input.
    pub case: String,
    /// Basis degree of the failing input, when the check runs over a basis.
    pub degree: Option<usize>,
    pub lhs: String,
    pub rhs: String,
}

/// Accumulates checks and keeps the first failure.
#[derive(Debug)]
pub(crate) struct Checker {
    suite: String,
    cases: usize,
    counterexample: Option<Counterexample>,
}

impl Checker {
    pub(crate) fn new(suite: impl Into<String>) -> Self {
        Checker { suite: suite.into(), cases: 0, counterexample: None }
    }

    pub(crate) fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    /// Records `lhs == rhs`; returns whether it held. Checks after the first failure are skipped.
    pub(crate) fn check<T: PartialEq + Display>(
        &mut self,
        case: impl FnOnce() -> String,
        degree: Option<usize>,
        lhs: &T,
        rhs: &T,
    ) -> bool {
        if self.failed() {
            return false;
        }
        self.cases += 1;
        if lhs == rhs {
            return true;
        }
        self.counterexample = Some(Counterexample {
            case: case(),
            degree,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
        false
    }

    /// Records a condition that must be true, e.g. an expected inequality.
    pub(crate) fn require(&mut self, case: impl FnOnce() -> String, ok: bool, lhs: String, rhs: String) {
        if self.failed() {
            return;
        }
        self.cases += 1;
        if !ok {
            self.counterexample = Some(Counterexample { case: case(), degree: None, lhs, rhs });
        }
    }

    pub(crate) fn finish(self) -> Verdict {
        Verdict {
            suite: self.suite,
            passed: self.counterexample.is_none(),
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}
