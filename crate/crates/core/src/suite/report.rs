//! Report assembly and its JSON and markdown renderings.

use serde::{Deserialize, Serialize};

use super::grid::Timed;
use super::{RunConfig, SuiteKind, ToyPoint};
use crate::check::Status;
use crate::error::{Error, Result};
use crate::operator::Witness;
use crate::scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::ConfigInvalid(format!("format: expected json|markdown, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub family: String,
    pub p: String,
    pub q: String,
    pub window: i64,
    pub modes: [i64; 2],
    pub max_rank: i64,
    pub max_arity: usize,
    pub t_order: usize,
    pub toy: Vec<ToyPoint>,
    pub suite: super::SuiteSelector,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub ms: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: ConfigEcho,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub conventions: Vec<String>,
}

const CONVENTIONS: &[&str] = &[
    "K(P,Q) acts diagonally: 1 on built-in families, (p-q)[n]/(p^n-q^n) on custom ones, taken at the total degree of the target monomial",
    "the lambda index of the n-algebra is cyclic: i_{n+1} = i_1",
    "the mode-sum prefactor (1/2 [-2M]/[-M]) is read as its limit 1 at M = 0 on built-in families",
    "t-derivative indices below 0 are dropped and counted in the record note; sums over k are cut at K = W = t_order",
    "G(P,Q) of the theta product is evaluated at the scalar substitution P = Q = 1",
    "the scaled derivative D_{R(p^a,q^a)} keeps the unscaled K-eigenvalue as outer factor",
    "conformance failures are reported, not corrected: several displays deviate from the general formulas",
];

impl VerificationReport {
    pub(super) fn new(config: &RunConfig, checks: Vec<Timed>) -> Self {
        let checks: Vec<CheckRecord> = checks
            .into_iter()
            .map(|t| CheckRecord {
                id: t.outcome.id,
                params: t.outcome.params,
                status: t.outcome.status,
                witness: t.outcome.witness,
                note: t.outcome.note,
                ms: t.ms,
            })
            .collect();
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        VerificationReport {
            config: ConfigEcho {
                family: config.family.tag(),
                p: scalar::format(&config.p),
                q: scalar::format(&config.q),
                window: config.window,
                modes: [config.modes.0, config.modes.1],
                max_rank: config.max_rank,
                max_arity: config.max_arity,
                t_order: config.t_order,
                toy: config.toy.clone(),
                suite: config.suite,
                seed: config.seed,
            },
            checks,
            summary,
            conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn failed(&self, kind: SuiteKind) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail && SuiteKind::of(&c.id) == kind)
            .count()
    }

    /// 0 when the forced suite is clean and nothing failed, 1 on forced failures, 2 on conformance failures only.
    pub fn exit_code(&self) -> i32 {
        if self.failed(SuiteKind::Forced) > 0 {
            1
        } else if self.failed(SuiteKind::Conformance) > 0 {
            2
        } else {
            0
        }
    }
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}

fn markdown(report: &VerificationReport) -> String {
    let c = &report.config;
    let mut out = String::from("# Verification report\n\n## Configuration\n\n| field | value |\n|---|---|\n");
    let toy = c.toy.iter().map(|t| format!("(a={}, gamma={})", t.a, t.gamma)).collect::<Vec<_>>().join(" ");
    for (k, v) in [
        ("family", c.family.clone()),
        ("p", c.p.clone()),
        ("q", c.q.clone()),
        ("window", c.window.to_string()),
        ("modes", format!("{}..{}", c.modes[0], c.modes[1])),
        ("max rank", c.max_rank.to_string()),
        ("max arity", c.max_arity.to_string()),
        ("t order", c.t_order.to_string()),
        ("toy points", toy),
        ("suite", format!("{:?}", c.suite).to_lowercase()),
        ("seed", c.seed.to_string()),
    ] {
        out.push_str(&format!("| {k} | {} |\n", cell(&v)));
    }
    let s = &report.summary;
    out.push_str(&format!(
        "\n## Summary\n\n| pass | fail | skipped |\n|---|---|---|\n| {} | {} | {} |\n",
        s.pass, s.fail, s.skipped
    ));
    out.push_str("\n## Checks\n\n| id | params | status | note | witness | ms |\n|---|---|---|---|---|---|\n");
    for r in &report.checks {
        let witness = r
            .witness
            .as_ref()
            .map(|w| {
                format!(
                    "mode {:?} target {:?}: expected {}, got {}",
                    w.mode,
                    w.target,
                    scalar::format(&w.expected),
                    scalar::format(&w.got)
                )
            })
            .unwrap_or_default();
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            cell(&r.id),
            cell(&r.params),
            format!("{:?}", r.status).to_lowercase(),
            cell(r.note.as_deref().unwrap_or("")),
            cell(&witness),
            r.ms
        ));
    }
    out.push_str("\n## Conventions\n\n");
    for conv in &report.conventions {
        out.push_str(&format!("- {conv}\n"));
    }
    out
}

pub fn emit(report: &VerificationReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text.into_bytes()
        }
        Format::Markdown => markdown(report).into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::CheckOutcome;
    use crate::check::scalar_witness;
    use crate::scalar::{int, ratio};

    fn report(outcomes: Vec<CheckOutcome>) -> VerificationReport {
        let timed = outcomes.into_iter().map(|outcome| Timed { outcome, ms: 0 }).collect();
        VerificationReport::new(&RunConfig::default(), timed)
    }

    #[test]
    fn empty_report_has_zero_summary() {
        let r = report(Vec::new());
        assert_eq!(r.summary, Summary::default());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn json_round_trips_with_witness_scalars_as_text() {
        let w = scalar_witness(vec![3], ratio(13, 60), int(1));
        let r = report(vec![
            CheckOutcome::fail("conf.x", "m=3", Some(w)),
            CheckOutcome::pass("forced.y", ""),
        ]);
        let bytes = emit(&r, Format::Json);
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains("\"expected\": \"13/60\""));
        assert!(text.contains("\"mode\": [\n"));
        let back: VerificationReport = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn forced_failure_dominates_exit_code() {
        let r = report(vec![CheckOutcome::fail("forced.y", "", None), CheckOutcome::fail("conf.x", "", None)]);
        assert_eq!(r.exit_code(), 1);
        let md = String::from_utf8(emit(&r, Format::Markdown)).unwrap();
        assert!(md.contains("| forced.y |  | fail |"));
    }
}
