//! Trial scheduling, judging and aggregation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sha2::Digest;

use qradius_core::means::QuadCfg;
use qradius_core::qnr::SolverCfg;
use qradius_core::random::{derive_seed, label_seed};

use crate::error::{Error, Result};
use crate::eval::{Case, Eval, Numerics, Tolerance};
use crate::inputs::{hex, Inputs, MetricKind, TrialSetup};
use crate::registry::{self, Family, Kind, PredicateDef, Sweep};
use crate::report::{PredicateSummary, SuiteReport};

/// A violation whose right-hand side radius is this close to the sampling
/// oracle is trusted; otherwise it is reported as inconclusive.
pub const GAP_TRUST: f64 = 1e-6;

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub q_set: Vec<f64>,
    pub t_set: Vec<f64>,
    pub alphas: Vec<f64>,
    pub f_powers: Vec<f64>,
    pub seed: u64,
    pub tol: Tolerance,
    pub solver: SolverCfg,
    pub quad: QuadCfg,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            trials: 200,
            dims: vec![2, 3, 4],
            q_set: vec![0.25, 0.5, 0.9, 1.0],
            t_set: vec![0.25, 0.5, 0.75],
            alphas: vec![0.0, PI / 8.0, PI / 4.0, PI / 3.0],
            f_powers: vec![0.5, 0.25],
            seed: 0,
            tol: Tolerance::default(),
            solver: SolverCfg::default(),
            quad: QuadCfg::default(),
        }
    }
}

fn bad(msg: String) -> Error {
    Error::InvalidConfig(msg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(bad("trials must be positive".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&n| !(2..=16).contains(&n)) {
            return Err(bad(format!("dims must be non-empty and within 2..=16, got {:?}", self.dims)));
        }
        if self.q_set.is_empty() || self.q_set.iter().any(|&q| !(q > 0.0 && q <= 1.0)) {
            return Err(bad(format!("q values must lie in (0, 1], got {:?}", self.q_set)));
        }
        if self.t_set.is_empty() || self.t_set.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
            return Err(bad(format!("t values must lie in (0, 1), got {:?}", self.t_set)));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|&a| !(0.0..PI / 2.0).contains(&a)) {
            return Err(bad(format!("alpha values must lie in [0, pi/2), got {:?}", self.alphas)));
        }
        if self.f_powers.is_empty() || self.f_powers.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(bad(format!("f exponents must lie in (0, 1], got {:?}", self.f_powers)));
        }
        if self.solver.starts == 0 {
            return Err(bad("solver needs at least one start".into()));
        }
        self.quad.validate()?;
        Ok(())
    }

    /// Doubled solver starts, oracle samples and quadrature nodes.
    pub fn escalated(&self) -> (SolverCfg, QuadCfg) {
        let mut s = self.solver;
        s.starts *= 2;
        s.oracle_samples *= 2;
        let mut q = self.quad;
        q.nodes *= 2;
        q.outer_nodes *= 2;
        (s, q)
    }

    /// Deterministic schedule for trial `index` of predicate `def`.
    pub fn setup(&self, def: &PredicateDef, index: usize) -> TrialSetup {
        let nd = self.dims.len();
        let n = self.dims[index % nd];
        let block = index / nd;
        let seed = derive_seed(self.seed, &[label_seed(def.id), index as u64]);
        let na = self.alphas.len();
        let nf = self.f_powers.len();
        let nt = self.t_set.len();
        let (alpha, f_power, gamma, metric) = match def.family {
            Family::Weighted => {
                let metric = match block % 3 {
                    0 => MetricKind::Identity,
                    1 => MetricKind::Definite,
                    // A rank-one metric is too small for the q-geometry.
                    _ if n == 2 => MetricKind::Definite,
                    _ => MetricKind::Deficient,
                };
                (0.0, self.f_powers[0], self.t_set[0], metric)
            }
            Family::Sector => (
                self.alphas[block % na],
                self.f_powers[(block / na) % nf],
                self.t_set[(block / (na * nf)) % nt],
                MetricKind::Identity,
            ),
            Family::Positive | Family::Axiom => {
                (0.0, self.f_powers[block % nf], self.t_set[(block / nf) % nt], MetricKind::Identity)
            }
        };
        TrialSetup { index, seed, n, alpha, f_power, gamma, metric }
    }

    /// Parameter cases of one trial.
    pub fn cases(&self, def: &PredicateDef, setup: &TrialSetup) -> Vec<Case> {
        let base = Case { q: None, t: None, gamma: Some(setup.gamma), f_power: Some(setup.f_power) };
        match def.sweep {
            Sweep::None => vec![base],
            Sweep::Q => self.q_set.iter().map(|&q| Case { q: Some(q), ..base }).collect(),
            Sweep::QT => self
                .q_set
                .iter()
                .flat_map(|&q| self.t_set.iter().map(move |&t| Case { q: Some(q), t: Some(t), ..base }))
                .collect(),
            Sweep::QGamma => self
                .q_set
                .iter()
                .flat_map(|&q| self.t_set.iter().map(move |&g| Case { q: Some(q), gamma: Some(g), ..base }))
                .collect(),
        }
    }

    fn trials_for(&self, def: &PredicateDef) -> usize {
        // The fixed demonstration has nothing random to repeat.
        if def.kind == Kind::ExpectedFail {
            1
        } else {
            self.trials
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// One judged `(trial, q, t)` combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub id: String,
    pub trial: usize,
    pub status: Status,
    /// Smallest scaled slack over the checked inequalities; `None` if evaluation failed.
    pub slack: Option<f64>,
    /// Label of the inequality with the smallest slack.
    pub worst: Option<String>,
    /// Sides of that inequality.
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub seed: u64,
    pub inputs_digest: String,
    pub n: usize,
    pub q: Option<f64>,
    pub t: Option<f64>,
    pub gamma: Option<f64>,
    pub f_power: Option<f64>,
    pub alpha_target: f64,
    pub alpha_true: Option<f64>,
    /// Informational flags raised by the evaluator.
    pub info: Vec<(String, bool)>,
    pub reason: Option<String>,
    /// Whether a failure was re-evaluated with doubled effort.
    pub escalated: bool,
}

/// Status and slack of one evaluation.
pub fn judge(eval: &Eval, tol: Tolerance) -> (Status, f64, &'static str) {
    let mut slack = f64::INFINITY;
    let mut worst = "";
    let mut trusted = false;
    let mut violated = false;
    for i in &eval.ineqs {
        let s = i.slack();
        if !(s >= slack) {
            slack = s;
            worst = i.label;
        }
        if i.violates(tol) {
            violated = true;
            trusted |= i.gap < GAP_TRUST;
        }
    }
    let status = if !violated {
        Status::Pass
    } else if trusted {
        Status::Fail
    } else {
        Status::Inconclusive
    };
    (status, slack, worst)
}

fn case_digest(inputs: &Inputs, id: &str, seed: u64, c: &Case) -> String {
    let mut h = inputs.digest(id, seed);
    for v in [c.q, c.t, c.gamma, c.f_power] {
        h.update(v.map_or(u64::MAX, f64::to_bits).to_le_bytes());
    }
    hex(&h.finalize())
}

fn evaluate(
    def: &PredicateDef,
    inputs: &Inputs,
    cases: &[Case],
    solver: SolverCfg,
    quad: QuadCfg,
) -> Vec<qradius_core::Result<Eval>> {
    let mut nx = match Numerics::new(inputs, solver, quad) {
        Ok(nx) => nx,
        Err(e) => return cases.iter().map(|_| Err(e.clone())).collect(),
    };
    cases.iter().map(|c| (def.eval)(inputs, c, &mut nx)).collect()
}

/// Runs every trial of one predicate and returns the outcomes in trial order.
pub fn run_trials(def: &PredicateDef, cfg: &RunConfig) -> Vec<TrialOutcome> {
    let mut out = Vec::new();
    for index in 0..cfg.trials_for(def) {
        let setup = cfg.setup(def, index);
        let cases = cfg.cases(def, &setup);
        let blank = |c: &Case| TrialOutcome {
            id: def.id.to_string(),
            trial: index,
            status: Status::Inconclusive,
            slack: None,
            worst: None,
            lhs: None,
            rhs: None,
            seed: setup.seed,
            inputs_digest: String::new(),
            n: setup.n,
            q: c.q,
            t: c.t,
            gamma: c.gamma,
            f_power: c.f_power,
            alpha_target: setup.alpha,
            alpha_true: None,
            info: vec![],
            reason: None,
            escalated: false,
        };
        let inputs = match (def.draw)(&setup) {
            Ok(inp) => inp,
            Err(e) => {
                out.extend(cases.iter().map(|c| TrialOutcome { reason: Some(e.to_string()), ..blank(c) }));
                continue;
            }
        };
        let mut evals = evaluate(def, &inputs, &cases, cfg.solver, cfg.quad);
        let mut escalated = vec![false; cases.len()];
        let fails = |evals: &[qradius_core::Result<Eval>]| -> Vec<usize> {
            (0..evals.len())
                .filter(|&k| matches!(&evals[k], Ok(e) if judge(e, cfg.tol).0 == Status::Fail))
                .collect()
        };
        let failing = fails(&evals);
        if !failing.is_empty() {
            // Only persistent violations are recorded as failures.
            let (solver, quad) = cfg.escalated();
            let again = evaluate(def, &inputs, &cases, solver, quad);
            for k in failing {
                evals[k] = again[k].clone();
                escalated[k] = true;
            }
        }
        for (k, (c, ev)) in cases.iter().zip(evals).enumerate() {
            let digest = case_digest(&inputs, def.id, setup.seed, c);
            let base = TrialOutcome {
                inputs_digest: digest,
                alpha_true: inputs.alpha_true,
                escalated: escalated[k],
                ..blank(c)
            };
            out.push(match ev {
                Ok(e) => {
                    let (status, slack, worst) = judge(&e, cfg.tol);
                    let w = e.ineqs.iter().find(|i| i.label == worst);
                    TrialOutcome {
                        status,
                        slack: slack.is_finite().then_some(slack),
                        worst: Some(worst.to_string()),
                        lhs: w.map(|i| i.lhs),
                        rhs: w.map(|i| i.rhs),
                        info: e.info.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                        ..base
                    }
                }
                Err(err) => TrialOutcome { reason: Some(err.to_string()), ..base },
            });
        }
    }
    out
}

/// Result of [`run_predicate`]: the summary and the raw outcomes.
#[derive(Debug, Clone)]
pub struct PredicateRun {
    pub summary: PredicateSummary,
    pub outcomes: Vec<TrialOutcome>,
}

pub fn run_predicate(id: &str, cfg: &RunConfig) -> Result<PredicateRun> {
    cfg.validate()?;
    let def = registry::lookup(id).ok_or_else(|| Error::UnknownPredicate(id.to_string()))?;
    let outcomes = run_trials(def, cfg);
    Ok(PredicateRun { summary: summarize(def, &outcomes), outcomes })
}

/// Aggregates outcomes into a report entry.
pub fn summarize(def: &PredicateDef, outcomes: &[TrialOutcome]) -> PredicateSummary {
    let mut s = PredicateSummary::new(def);
    let mut info: BTreeMap<String, usize> = BTreeMap::new();
    for o in outcomes {
        s.trials += 1;
        match o.status {
            Status::Pass => s.passes += 1,
            Status::Fail => s.fails += 1,
            Status::Inconclusive => s.inconclusives += 1,
        }
        if o.escalated {
            s.escalations += 1;
        }
        if let Some(sl) = o.slack {
            if s.min_slack.is_none_or(|m| sl < m) {
                s.min_slack = Some(sl);
                s.worst_digest = Some(o.inputs_digest.clone());
                s.worst_lhs = o.lhs;
                s.worst_rhs = o.rhs;
            }
        }
        if let Some(at) = o.alpha_true {
            let excess = at - o.alpha_target;
            s.max_alpha_excess = Some(s.max_alpha_excess.map_or(excess, |m: f64| m.max(excess)));
        }
        for (k, v) in &o.info {
            *info.entry(k.clone()).or_insert(0) += *v as usize;
        }
        if let Some(r) = &o.reason {
            if s.errors.len() < 8 && !s.errors.contains(r) {
                s.errors.push(r.clone());
            }
        }
    }
    s.informational = info;
    s
}

/// Runs a named suite in registry order.
pub fn run_suite(suite: &str, cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let defs = registry::suite(suite).ok_or_else(|| Error::UnknownSuite(suite.to_string()))?;
    let predicates = defs.iter().map(|d| summarize(d, &run_trials(d, cfg))).collect();
    Ok(SuiteReport::new(suite, cfg.clone(), predicates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Ineq;

    #[test]
    fn judge_levels() {
        let tol = Tolerance::default();
        let ok = Eval { ineqs: vec![Ineq::le("a", 1.0, 2.0), Ineq::le("b", 0.5, 0.6)], info: vec![] };
        let (st, sl, w) = judge(&ok, tol);
        assert_eq!(st, Status::Pass);
        assert!((sl - 0.1).abs() < 1e-12);
        assert_eq!(w, "b");
        let bad = Eval { ineqs: vec![Ineq::le("a", 1.1, 1.0)], info: vec![] };
        assert_eq!(judge(&bad, tol).0, Status::Fail);
        let shaky = Eval { ineqs: vec![Ineq::le("a", 1.1, 1.0).gap(1e-3)], info: vec![] };
        assert_eq!(judge(&shaky, tol).0, Status::Inconclusive);
    }

    #[test]
    fn schedule_is_cyclic() {
        let cfg = RunConfig::default();
        let p10 = registry::lookup("P10").unwrap();
        let dims: Vec<usize> = (0..6).map(|i| cfg.setup(p10, i).n).collect();
        assert_eq!(dims, vec![2, 3, 4, 2, 3, 4]);
        let alphas: Vec<f64> = (0..12).step_by(3).map(|i| cfg.setup(p10, i).alpha).collect();
        assert_eq!(alphas, cfg.alphas);
        let p02 = registry::lookup("P02").unwrap();
        // The rank-deficient metric is replaced at n = 2.
        assert_eq!(cfg.setup(p02, 6).metric, MetricKind::Definite);
        assert_eq!(cfg.setup(p02, 7).metric, MetricKind::Deficient);
    }

    #[test]
    fn case_counts() {
        let cfg = RunConfig::default();
        for (id, k) in [("P02", 4), ("P10", 1), ("P16", 12), ("P23", 12), ("P08", 1)] {
            let d = registry::lookup(id).unwrap();
            assert_eq!(cfg.cases(d, &cfg.setup(d, 0)).len(), k, "{id}");
        }
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = RunConfig { q_set: vec![0.0], ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        cfg = RunConfig { dims: vec![1], ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        assert!(matches!(run_predicate("P99", &RunConfig::default()), Err(Error::UnknownPredicate(_))));
        assert!(matches!(run_suite("bogus", &RunConfig::default()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn single_trial_suite_shape() {
        let cfg = RunConfig { trials: 1, dims: vec![2], ..RunConfig::default() };
        let rep = run_suite("all", &cfg).unwrap();
        assert_eq!(rep.predicates.len(), 25);
        for p in &rep.predicates {
            assert_eq!(p.trials, p.passes + p.fails + p.inconclusives);
            assert_eq!(p.fails, 0, "{} {:?}", p.id, p.errors);
        }
    }
}
