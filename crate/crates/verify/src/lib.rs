//! Randomized verification of numerical radius and matrix mean inequalities.
//!
//! Every inequality is a predicate with an input family ([`inputs`]) and an
//! evaluator ([`eval`]) that reduces a trial to scalar bounds `lhs <= rhs`.
//! [`runner`] schedules seeded trials, judges them against the tolerances and
//! aggregates a [`SuiteReport`]; [`stress`] searches for small slack.
//!
//! Judging: with `d = rhs - lhs`, a bound fails when `d < -abs - rel * |rhs|`.
//! The slack is `d / max(1, |rhs|)`. A violation whose right-hand side holds a
//! q-numerical radius (a lower estimate from optimization) is only called a
//! failure if that radius agrees with its sampling oracle to `1e-6`; otherwise
//! it is inconclusive. Failures are re-run with doubled effort first.

pub mod error;
pub mod eval;
pub mod inputs;
pub mod registry;
pub mod report;
pub mod runner;
pub mod stress;

pub use error::{Error, Result};
pub use registry::{lookup, predicates, PredicateDef};
pub use report::{PredicateSummary, SuiteReport};
pub use runner::{run_predicate, run_suite, RunConfig, Status, TrialOutcome};
pub use stress::{stress, stress_with, StressOpts, StressResult};
