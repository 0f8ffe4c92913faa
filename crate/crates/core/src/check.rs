//! Outcome records shared by every verification routine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{Comparison, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub params: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckOutcome {
    pub fn pass(id: &str, params: impl Into<String>) -> Self {
        CheckOutcome {
            id: id.to_string(),
            params: params.into(),
            status: Status::Pass,
            witness: None,
            note: None,
        }
    }

    pub fn fail(id: &str, params: impl Into<String>, witness: Option<Witness>) -> Self {
        CheckOutcome {
            status: Status::Fail,
            witness,
            ..Self::pass(id, params)
        }
    }

    pub fn skipped(id: &str, params: impl Into<String>, reason: &Error) -> Self {
        CheckOutcome {
            status: Status::Skipped,
            note: Some(reason.to_string()),
            ..Self::pass(id, params)
        }
    }

    pub fn from_comparison(id: &str, params: impl Into<String>, cmp: Result<Comparison>) -> Self {
        match cmp {
            Ok(Comparison::Equal { .. }) => Self::pass(id, params),
            Ok(Comparison::Differs(w)) => Self::fail(id, params, Some(w)),
            Err(e) => Self::skipped(id, params, &e),
        }
    }

    /// Turns the result of a fallible check body into an outcome.
    pub fn from_result(id: &str, params: impl Into<String>, r: Result<CheckOutcome>) -> Self {
        match r {
            Ok(o) => o,
            Err(e) => Self::skipped(id, params, &e),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Renders `name=value` pairs as a stable parameter string.
pub fn params(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn list(xs: &[i64]) -> String {
    let inner: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(" "))
}

/// A scalar mismatch reported as a witness with the given indices.
pub fn scalar_witness(mode: Vec<i64>, expected: crate::Scalar, got: crate::Scalar) -> Witness {
    Witness {
        mode,
        target: Vec::new(),
        expected,
        got,
    }
}

/// Folds labelled comparisons into one outcome; the first failure is kept as witness.
pub fn merge(id: &str, params: impl Into<String>, parts: Vec<(String, Result<Comparison>)>) -> CheckOutcome {
    let params = params.into();
    let mut checked = 0;
    for (label, part) in parts {
        match part {
            Ok(Comparison::Equal { checked: c }) => checked += c,
            Ok(Comparison::Differs(w)) => {
                return CheckOutcome::fail(id, params, Some(w)).with_note(label);
            }
            Err(e) => return CheckOutcome::skipped(id, params, &e).with_note(label),
        }
    }
    if checked == 0 {
        return CheckOutcome::skipped(id, params, &Error::WindowExhausted);
    }
    CheckOutcome::pass(id, params)
}
