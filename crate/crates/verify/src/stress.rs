//! Adversarial slack minimization by a (1+1) hill-climb over inputs and parameters.

use std::f64::consts::PI;

use serde::Serialize;

use qradius_core::kernel::{self, lambda_min};
use qradius_core::means::QuadCfg;
use qradius_core::qnr::SolverCfg;
use qradius_core::random::{self, derive_seed, label_seed, rng_from, SeededRng};
use qradius_core::sectorial::is_in_sector;
use qradius_core::CMatrix;

use crate::error::{Error, Result};
use crate::eval::{Case, Numerics, Tolerance};
use crate::inputs::{make_bounded, Domain, Inputs, MetricKind};
use crate::registry::{self, Family, Kind, PredicateDef, Sweep};
use crate::runner::{judge, Status, TrialOutcome};

/// Largest sector angle the climb may move to.
const ALPHA_CAP: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressOpts {
    pub iterations: usize,
    pub seed: u64,
    pub n: usize,
    /// Fixed sector target; `None` lets the climb move it.
    pub alpha: Option<f64>,
    /// Climb only the inequality with this label (all of them when `None`).
    pub target: Option<String>,
    pub solver: SolverCfg,
    pub quad: QuadCfg,
    pub tol: Tolerance,
}

impl StressOpts {
    pub fn new(iterations: usize, seed: u64) -> Self {
        StressOpts {
            iterations,
            seed,
            n: 3,
            alpha: None,
            target: None,
            solver: SolverCfg::default(),
            quad: QuadCfg::default(),
            tol: Tolerance::default(),
        }
    }
}

/// Worst case found by [`stress`].
#[derive(Debug, Clone, Serialize)]
pub struct StressResult {
    pub worst: TrialOutcome,
    pub alpha: f64,
    pub inputs: Vec<CMatrix>,
    pub metric: Option<CMatrix>,
    pub evaluations: usize,
    pub accepted: usize,
}

#[derive(Clone)]
struct State {
    inputs: Inputs,
    case: Case,
}

struct Scored {
    slack: f64,
    lhs: f64,
    rhs: f64,
    status: Status,
    label: &'static str,
    info: Vec<(&'static str, bool)>,
}

fn score(def: &PredicateDef, st: &State, opts: &StressOpts) -> Option<Scored> {
    let mut nx = Numerics::new(&st.inputs, opts.solver, opts.quad).ok()?;
    let mut ev = (def.eval)(&st.inputs, &st.case, &mut nx).ok()?;
    if let Some(t) = &opts.target {
        ev.ineqs.retain(|i| i.label == t);
    }
    let (status, slack, label) = judge(&ev, opts.tol);
    let worst = ev.ineqs.iter().find(|i| i.label == label)?;
    slack.is_finite().then_some(Scored { slack, lhs: worst.lhs, rhs: worst.rhs, status, label, info: ev.info })
}

/// `m + sigma * G` rescaled to the Frobenius norm of `m`.
fn jitter(rng: &mut SeededRng, m: &CMatrix, sigma: f64) -> CMatrix {
    let nrm = m.frobenius();
    let g = random::ginibre(rng, m.rows(), m.cols());
    let step = g.scale_re(sigma * nrm / g.frobenius().max(f64::MIN_POSITIVE));
    let moved = m + &step;
    moved.scale_re(nrm / moved.frobenius().max(f64::MIN_POSITIVE))
}

fn positive(m: &CMatrix) -> Option<CMatrix> {
    let h = kernel::re_part(m).ok()?;
    (lambda_min(&h).ok()? > 1e-8).then_some(h)
}

/// Moves the inputs and repairs or rejects them so they stay in the domain.
fn perturb(def: &PredicateDef, st: &State, rng: &mut SeededRng, sigma: f64, free_alpha: bool) -> Option<State> {
    let mut next = st.clone();
    let u = |rng: &mut SeededRng| random::uniform(rng, 0.0, 1.0);
    if let Some(q) = st.case.q {
        if u(rng) < 0.3 {
            next.case.q = Some((q + 0.1 * sigma.sqrt() * random::complex_normal(rng).re).clamp(0.01, 1.0));
        }
    }
    if let Some(t) = st.case.t {
        if u(rng) < 0.3 {
            next.case.t = Some((t + 0.1 * random::complex_normal(rng).re).clamp(0.01, 0.99));
        }
    }
    if matches!(def.sweep, Sweep::QGamma) || def.params.contains(&registry::Param::Gamma) {
        if let Some(g) = st.case.gamma {
            if u(rng) < 0.3 {
                next.case.gamma = Some((g + 0.1 * random::complex_normal(rng).re).clamp(0.0, 1.0));
            }
        }
    }
    let sector = matches!(def.domain, Domain::Sectorial | Domain::DominatedQuadruple) && def.family == Family::Sector;
    if sector && free_alpha && u(rng) < 0.2 {
        next.inputs.alpha = (st.inputs.alpha + 0.05 * random::complex_normal(rng).re).clamp(0.0, ALPHA_CAP);
    }
    next.inputs.mats = st.inputs.mats.iter().map(|m| jitter(rng, m, sigma)).collect();
    let space = next.inputs.space().ok()?;
    match def.domain {
        Domain::General => {
            if let Some(s) = &space {
                next.inputs.mats = next.inputs.mats.iter().map(|m| make_bounded(s, m)).collect();
            }
        }
        Domain::ASelfadjoint => {
            let t = &next.inputs.mats[0];
            next.inputs.mats[0] = match &space {
                Some(s) => s.cartesian(&make_bounded(s, t)).ok()?.0,
                None => kernel::re_part(t).ok()?,
            };
        }
        Domain::Sectorial => {
            if !next.inputs.mats.iter().all(|m| is_in_sector(m, next.inputs.alpha)) {
                return None;
            }
            next.inputs.certify();
        }
        Domain::DominatedQuadruple => {
            let alpha = next.inputs.alpha;
            let m = &next.inputs.mats;
            if !m.iter().all(|x| is_in_sector(x, alpha)) {
                return None;
            }
            for (lo, hi) in [(0, 2), (1, 3)] {
                let d = kernel::re_part(&(&m[hi] - &m[lo])).ok()?;
                if lambda_min(&d).ok()? < 0.0 {
                    return None;
                }
            }
            next.inputs.certify();
        }
        Domain::Psd => {
            // The congruence factor of the axiom family is unconstrained.
            let keep = if def.id == "MA2" { 2 } else { next.inputs.mats.len() };
            for k in 0..keep.min(next.inputs.mats.len()) {
                next.inputs.mats[k] = positive(&next.inputs.mats[k])?;
            }
        }
        Domain::FixedDemo => return None,
    }
    Some(next)
}

/// Hill-climbs inputs and parameters of `id` to minimize the slack.
pub fn stress(id: &str, iterations: usize, seed: u64) -> Result<StressResult> {
    stress_with(id, &StressOpts::new(iterations, seed))
}

pub fn stress_with(id: &str, opts: &StressOpts) -> Result<StressResult> {
    let def = registry::lookup(id).ok_or_else(|| Error::UnknownPredicate(id.to_string()))?;
    if def.kind == Kind::ExpectedFail {
        return Err(Error::InvalidConfig(format!("{} is a fixed demonstration and cannot be stressed", def.id)));
    }
    if !(2..=16).contains(&opts.n) {
        return Err(Error::InvalidConfig(format!("n must lie in 2..=16, got {}", opts.n)));
    }
    if let Some(a) = opts.alpha {
        if !(0.0..PI / 2.0).contains(&a) {
            return Err(Error::InvalidConfig(format!("alpha must lie in [0, pi/2), got {a}")));
        }
    }
    let seed = derive_seed(opts.seed, &[label_seed("stress"), label_seed(def.id)]);
    let alpha = match def.family {
        Family::Sector => opts.alpha.unwrap_or(PI / 4.0),
        _ => 0.0,
    };
    let setup = crate::inputs::TrialSetup {
        index: 0,
        seed,
        n: opts.n,
        alpha,
        f_power: 0.5,
        gamma: 0.5,
        metric: if def.family == Family::Weighted { MetricKind::Definite } else { MetricKind::Identity },
    };
    let inputs = (def.draw)(&setup)?;
    let has = |p| def.params.contains(&p);
    let case = Case {
        q: has(registry::Param::Q).then_some(0.5),
        t: has(registry::Param::T).then_some(0.5),
        gamma: Some(0.5),
        f_power: Some(0.5),
    };
    let mut cur = State { inputs, case };
    let mut best = score(def, &cur, opts)
        .ok_or_else(|| match &opts.target {
            Some(t) => Error::InvalidConfig(format!("{} has no bound labeled '{t}' or cannot be evaluated", def.id)),
            None => Error::InvalidConfig(format!("{} cannot be evaluated on its initial input", def.id)),
        })?;
    let mut rng = rng_from(seed, &[0x5354_5245]);
    let mut sigma = 0.2;
    let mut accepted = 0;
    let free_alpha = opts.alpha.is_none();
    for _ in 0..opts.iterations {
        let Some(cand) = perturb(def, &cur, &mut rng, sigma, free_alpha) else {
            sigma = (sigma * 0.9).max(1e-6);
            continue;
        };
        match score(def, &cand, opts) {
            Some(s) if s.slack < best.slack => {
                cur = cand;
                best = s;
                accepted += 1;
                sigma = (sigma * 1.5).min(1.0);
            }
            _ => sigma = (sigma * 0.95).max(1e-6),
        }
    }
    let mut digest = cur.inputs.digest(def.id, seed);
    for v in [cur.case.q, cur.case.t, cur.case.gamma, cur.case.f_power] {
        sha2::Digest::update(&mut digest, v.map_or(u64::MAX, f64::to_bits).to_le_bytes());
    }
    let worst = TrialOutcome {
        id: def.id.to_string(),
        trial: 0,
        status: best.status,
        slack: Some(best.slack),
        worst: Some(best.label.to_string()),
        lhs: Some(best.lhs),
        rhs: Some(best.rhs),
        seed,
        inputs_digest: crate::inputs::hex(&sha2::Digest::finalize(digest)),
        n: cur.inputs.n,
        q: cur.case.q,
        t: cur.case.t,
        gamma: cur.case.gamma,
        f_power: cur.case.f_power,
        alpha_target: cur.inputs.alpha,
        alpha_true: cur.inputs.alpha_true,
        info: best.info.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        reason: None,
        escalated: false,
    };
    Ok(StressResult {
        worst,
        alpha: cur.inputs.alpha,
        inputs: cur.inputs.mats,
        metric: cur.inputs.metric,
        evaluations: opts.iterations,
        accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_and_demo_rejected() {
        assert!(matches!(stress("P77", 10, 0), Err(Error::UnknownPredicate(_))));
        assert!(matches!(stress("P08", 10, 0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn slack_never_increases() {
        let r0 = stress("P10", 0, 4).unwrap();
        let r1 = stress("P10", 300, 4).unwrap();
        assert!(r1.worst.slack.unwrap() <= r0.worst.slack.unwrap());
        assert!(r1.worst.slack.unwrap() >= 0.0);
        assert!(r1.inputs.iter().all(|m| is_in_sector(m, r1.alpha)));
    }

    #[test]
    fn targeted_climb() {
        let mut o = StressOpts::new(200, 1);
        o.alpha = Some(1.0);
        o.target = Some("lower".into());
        let r = stress_with("P10", &o).unwrap();
        assert_eq!(r.worst.worst.as_deref(), Some("lower"));
        o.target = Some("missing".into());
        assert!(stress_with("P10", &o).is_err());
    }

    #[test]
    fn deterministic() {
        let a = stress("P02", 40, 9).unwrap();
        let b = stress("P02", 40, 9).unwrap();
        assert_eq!(a.worst, b.worst);
    }
}
