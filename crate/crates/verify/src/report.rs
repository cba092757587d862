//! Suite reports: JSON and a flat CSV with one row per predicate.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inputs::Domain;
use crate::registry::{Kind, Param, PredicateDef};
use crate::runner::RunConfig;

/// Aggregated outcomes of one predicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredicateSummary {
    pub id: String,
    pub statement: String,
    pub kind: Kind,
    pub domain: Domain,
    pub params: Vec<Param>,
    pub trials: usize,
    pub passes: usize,
    pub fails: usize,
    pub inconclusives: usize,
    pub min_slack: Option<f64>,
    pub worst_digest: Option<String>,
    /// Sides of the bound attaining `min_slack`.
    pub worst_lhs: Option<f64>,
    pub worst_rhs: Option<f64>,
    /// Failures that were re-evaluated with doubled solver and quadrature effort.
    pub escalations: usize,
    /// Largest `sector_angle - alpha_target` over sectorial inputs.
    pub max_alpha_excess: Option<f64>,
    /// Counters of informational variants; never part of pass/fail.
    pub informational: BTreeMap<String, usize>,
    /// Distinct evaluation errors (inconclusive trials).
    pub errors: Vec<String>,
}

impl PredicateSummary {
    pub fn new(def: &PredicateDef) -> Self {
        PredicateSummary {
            id: def.id.to_string(),
            statement: def.statement.to_string(),
            kind: def.kind,
            domain: def.domain,
            params: def.params.to_vec(),
            trials: 0,
            passes: 0,
            fails: 0,
            inconclusives: 0,
            min_slack: None,
            worst_digest: None,
            worst_lhs: None,
            worst_rhs: None,
            escalations: 0,
            max_alpha_excess: None,
            informational: BTreeMap::new(),
            errors: vec![],
        }
    }

    /// A failure that counts against the suite.
    pub fn is_failing(&self) -> bool {
        self.kind != Kind::ExpectedFail && self.fails > 0
    }

    /// The expected-failure demo passes only when the violation was observed.
    pub fn demo_missed(&self) -> bool {
        self.kind == Kind::ExpectedFail && self.passes != self.trials
    }
}

/// Interpretation notes carried in every report.
pub const NOTES: [&str; 5] = [
    "q ranges over 0 < |q| <= 1; q = 0 is excluded from every predicate",
    "the Heinz bound compares with the scalar Heinz mean at the same t",
    "the harmonic bound is checked in the form w(A !_t B) <= w(A) !_t w(B); the variant with inverses on the left is counted under literal_harmonic_violations",
    "sec^2 variants of the dominated-mean and midpoint bounds are counted informationally",
    "sector angles are the generator targets; max_alpha_excess reports how far certified angles exceed them",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: RunConfig,
    pub notes: Vec<String>,
    pub predicates: Vec<PredicateSummary>,
}

impl SuiteReport {
    pub fn new(suite: &str, config: RunConfig, predicates: Vec<PredicateSummary>) -> Self {
        SuiteReport { suite: suite.to_string(), config, notes: NOTES.iter().map(|s| s.to_string()).collect(), predicates }
    }

    /// True when any predicate other than the expected-failure demo failed.
    pub fn has_failures(&self) -> bool {
        self.predicates.iter().any(|p| p.is_failing() || p.demo_missed())
    }

    pub fn total(&self) -> (usize, usize, usize, usize) {
        self.predicates.iter().fold((0, 0, 0, 0), |acc, p| {
            (acc.0 + p.trials, acc.1 + p.passes, acc.2 + p.fails, acc.3 + p.inconclusives)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    /// One row per predicate.
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let err = |e: csv::Error| Error::Serialize(e.to_string());
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["id", "kind", "trials", "passes", "fails", "inconclusives", "min_slack", "worst_digest"])
            .map_err(err)?;
        for p in &self.predicates {
            let kind = serde_json::to_value(p.kind).map_err(|e| Error::Serialize(e.to_string()))?;
            wr.write_record([
                p.id.clone(),
                kind.as_str().unwrap_or_default().to_string(),
                p.trials.to_string(),
                p.passes.to_string(),
                p.fails.to_string(),
                p.inconclusives.to_string(),
                p.min_slack.map(|s| format!("{s:?}")).unwrap_or_default(),
                p.worst_digest.clone().unwrap_or_default(),
            ])
            .map_err(err)?;
        }
        wr.flush().map_err(|e| Error::Serialize(e.to_string()))
    }
}
