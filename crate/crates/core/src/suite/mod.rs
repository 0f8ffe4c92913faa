//! Run configuration, the check grid and the assembled report.

mod catalog;
mod grid;
mod report;

pub use catalog::{list_checks, lookup, CatalogEntry, ANCHORS};
pub use report::{emit, Format, Summary, VerificationReport};

use serde::{Deserialize, Serialize};

use crate::deform::{CoefficientTable, Deformation, Family};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Forced,
    Conformance,
}

impl SuiteKind {
    pub fn of(id: &str) -> Self {
        if id.starts_with("forced.") {
            SuiteKind::Forced
        } else {
            SuiteKind::Conformance
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteSelector {
    Forced,
    Conformance,
    All,
}

impl SuiteSelector {
    pub fn includes(self, kind: SuiteKind) -> bool {
        match self {
            SuiteSelector::All => true,
            SuiteSelector::Forced => kind == SuiteKind::Forced,
            SuiteSelector::Conformance => kind == SuiteKind::Conformance,
        }
    }
}

impl std::str::FromStr for SuiteSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forced" => Ok(SuiteSelector::Forced),
            "conformance" => Ok(SuiteSelector::Conformance),
            "all" => Ok(SuiteSelector::All),
            other => Err(Error::ConfigInvalid(format!("suite: expected forced|conformance|all, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyChoice {
    TwoParameter,
    OneParameterQ,
    Custom { source: String, table: CoefficientTable },
}

impl FamilyChoice {
    pub fn tag(&self) -> String {
        match self {
            FamilyChoice::TwoParameter => "pq".into(),
            FamilyChoice::OneParameterQ => "q".into(),
            FamilyChoice::Custom { source, .. } => format!("custom:{source}"),
        }
    }
}

/// One `(a, gamma)` point of the toy model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyPoint {
    pub a: u32,
    pub gamma: usize,
}

pub const MAX_WINDOW: i64 = 24;
pub const MAX_RANK: i64 = 5;
pub const MAX_ARITY: usize = 6;
pub const MAX_T_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub family: FamilyChoice,
    pub p: Scalar,
    pub q: Scalar,
    pub window: i64,
    pub modes: (i64, i64),
    pub max_rank: i64,
    pub max_arity: usize,
    /// Both the number of times `K` and the weight cap `W`.
    pub t_order: usize,
    pub toy: Vec<ToyPoint>,
    pub suite: SuiteSelector,
    pub seed: u64,
    /// Record wall-clock milliseconds per check; off keeps reports byte-stable.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: FamilyChoice::TwoParameter,
            p: scalar::ratio(2, 3),
            q: scalar::ratio(1, 5),
            window: 12,
            modes: (-4, 4),
            max_rank: 4,
            max_arity: 6,
            t_order: 6,
            toy: vec![
                ToyPoint { a: 1, gamma: 0 },
                ToyPoint { a: 1, gamma: 1 },
                ToyPoint { a: 2, gamma: 0 },
                ToyPoint { a: 2, gamma: 1 },
            ],
            suite: SuiteSelector::All,
            seed: 42,
            timings: false,
        }
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::ConfigInvalid(format!("{field}: {msg}"))
}

/// Parses `lo..hi` (inclusive).
pub fn parse_mode_range(text: &str) -> Result<(i64, i64)> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| invalid("modes", format!("expected lo..hi, got {text:?}")))?;
    let parse = |s: &str| {
        s.trim()
            .trim_start_matches('=')
            .parse::<i64>()
            .map_err(|e| invalid("modes", format!("{s:?}: {e}")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_WINDOW).contains(&self.window) {
            return Err(invalid("window", format!("must lie in 2..={MAX_WINDOW}, got {}", self.window)));
        }
        let (lo, hi) = self.modes;
        if lo > hi {
            return Err(invalid("modes", format!("empty range {lo}..{hi}")));
        }
        if lo.abs().max(hi.abs()) > self.window {
            return Err(invalid("modes", format!("{lo}..{hi} exceeds the window {}", self.window)));
        }
        if !(1..=MAX_RANK).contains(&self.max_rank) {
            return Err(invalid("max-rank", format!("must lie in 1..={MAX_RANK}, got {}", self.max_rank)));
        }
        if !(2..=MAX_ARITY).contains(&self.max_arity) {
            return Err(invalid("max-arity", format!("must lie in 2..={MAX_ARITY}, got {}", self.max_arity)));
        }
        if !(1..=MAX_T_ORDER).contains(&self.t_order) {
            return Err(invalid("t-order", format!("must lie in 1..={MAX_T_ORDER}, got {}", self.t_order)));
        }
        if let Some(bad) = self.toy.iter().find(|t| t.a == 0 || t.a > 3 || t.gamma > 3) {
            return Err(invalid("toy", format!("a in 1..=3 and gamma in 0..=3, got a={} gamma={}", bad.a, bad.gamma)));
        }
        self.deformation().map(|_| ())
    }

    pub fn deformation(&self) -> Result<Deformation> {
        let built = match &self.family {
            FamilyChoice::TwoParameter => Deformation::two_parameter(self.p.clone(), self.q.clone()),
            FamilyChoice::OneParameterQ => Deformation::one_parameter(self.q.clone()),
            FamilyChoice::Custom { table, .. } => Deformation::new(Family::Custom(table.clone()), self.p.clone(), self.q.clone()),
        };
        built.map_err(|e| match e {
            Error::ConfigInvalid(_) => e,
            other => invalid("p/q", other),
        })
    }
}

/// Runs the selected suites over the configured grid.
pub fn run(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let d = config.deformation()?;
    let mut checks = grid::execute(&d, config);
    checks.sort_by(|a, b| (&a.outcome.id, &a.outcome.params).cmp(&(&b.outcome.id, &b.outcome.params)));
    Ok(VerificationReport::new(config, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_ranges_parse() {
        assert_eq!(parse_mode_range("-4..4").unwrap(), (-4, 4));
        assert_eq!(parse_mode_range("0..=2").unwrap(), (0, 2));
        assert!(parse_mode_range("3").is_err());
    }

    #[test]
    fn misordered_parameters_rejected() {
        let cfg = RunConfig {
            p: scalar::ratio(1, 5),
            q: scalar::ratio(2, 3),
            ..RunConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid(_))));
        assert!(matches!(run(&cfg), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn defaults_validate() {
        assert!(RunConfig::default().validate().is_ok());
        let narrow = RunConfig {
            modes: (-20, 4),
            ..RunConfig::default()
        };
        assert!(narrow.validate().is_err());
    }
}
