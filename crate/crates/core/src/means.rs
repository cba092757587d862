//! Matrix means of accretive matrices and operator monotone functional calculus.
//!
//! Every mean here is an integral of weighted harmonic means
//! `A !_s B = ((1-s) A^{-1} + s B^{-1})^{-1}` against a probability measure on
//! `[0, 1]`, except the geometric mean `A # B`, which is computed from its own
//! integral over `(0, inf)`.

use std::f64::consts::{FRAC_2_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, accretive_inv, ensure_accretive, inverse};
use crate::matrix::{CMatrix, C64};
use crate::quad::{self, gauss_jacobi01, gauss_legendre01, Rule};

/// Relative change tolerated when the node count doubles.
pub const CONVERGENCE_TOL: f64 = 1e-8;
/// Largest node multiplier tried before giving up.
const MAX_REFINE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadCfg {
    pub nodes: usize,
    pub outer_nodes: usize,
    pub trunc: f64,
}

impl Default for QuadCfg {
    fn default() -> Self {
        QuadCfg { nodes: 64, outer_nodes: 32, trunc: 40.0 }
    }
}

impl QuadCfg {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 4 || self.outer_nodes < 4 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs at least 4 nodes, got {} and {}",
                self.nodes, self.outer_nodes
            )));
        }
        if !(self.trunc > 0.0 && self.trunc.is_finite()) {
            return Err(Error::InvalidParameter(format!("truncation must be positive, got {}", self.trunc)));
        }
        Ok(())
    }
}

/// Absolutely continuous part `coefficient * s^p * (1-s)^q ds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub s_exponent: f64,
    pub one_minus_s_exponent: f64,
    pub coefficient: f64,
}

impl Density {
    pub fn mass(&self) -> f64 {
        self.coefficient * quad::weight_mass(self.s_exponent, self.one_minus_s_exponent)
    }
}

/// Probability measure on `[0, 1]`: finitely many atoms plus an optional density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pub density: Option<Density>,
}

impl MeasureSpec {
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<Density>) -> Result<Self> {
        let m = MeasureSpec { atoms, density };
        m.validate()?;
        Ok(m)
    }

    pub fn dirac(s: f64) -> Result<Self> {
        Self::new(vec![(s, 1.0)], None)
    }

    /// The measure of `x^t`: density `sin(t pi)/pi * s^{t-1} (1-s)^{-t}` for `0 < t < 1`.
    pub fn power(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidMeasure(format!("x^t is operator monotone only for t in [0, 1], got {t}")));
        }
        if t == 0.0 || t == 1.0 {
            return Self::dirac(t);
        }
        Self::new(vec![], Some(power_density(t)))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let m: MeasureSpec = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>() + self.density.map_or(0.0, |d| d.mass())
    }

    fn validate(&self) -> Result<()> {
        for &(s, w) in &self.atoms {
            if !(0.0..=1.0).contains(&s) || !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidMeasure(format!("atom ({s}, {w}) must have s in [0,1] and weight > 0")));
            }
        }
        if let Some(d) = self.density {
            if !(d.s_exponent > -1.0 && d.one_minus_s_exponent > -1.0) {
                return Err(Error::InvalidMeasure(format!(
                    "density exponents ({}, {}) must exceed -1",
                    d.s_exponent, d.one_minus_s_exponent
                )));
            }
            if !(d.coefficient > 0.0 && d.coefficient.is_finite()) {
                return Err(Error::InvalidMeasure(format!("density coefficient must be positive, got {}", d.coefficient)));
            }
            // The quadrature mass must agree with the beta-function mass.
            let rule = density_rule(&d, 64)?;
            let quad_mass = d.coefficient * rule.integrate(|_, _| 1.0);
            if (quad_mass - d.mass()).abs() > 1e-10 {
                return Err(Error::InvalidMeasure(format!("density mass {} vs quadrature {quad_mass}", d.mass())));
            }
        }
        if self.atoms.is_empty() && self.density.is_none() {
            return Err(Error::InvalidMeasure("measure is empty".into()));
        }
        let mass = self.mass();
        if (mass - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidMeasure(format!("total mass is {mass}, expected 1")));
        }
        Ok(())
    }

    /// `int ((1-s) + s/z)^{-1} dnu(s)` with `n` density nodes.
    fn scalar_integral(&self, z: C64, n: usize) -> Result<C64> {
        let one = C64::new(1.0, 0.0);
        let kern = |s: f64, sc: f64| one / (sc + s / z);
        let mut acc: C64 = self.atoms.iter().map(|&(s, w)| kern(s, 1.0 - s) * w).sum();
        if let Some(d) = self.density {
            let rule = density_rule(&d, n)?;
            let mut part = C64::new(0.0, 0.0);
            for i in 0..rule.len() {
                part += kern(rule.nodes[i], rule.comps[i]) * rule.weights[i];
            }
            acc += part * d.coefficient;
        }
        Ok(acc)
    }
}

fn power_density(t: f64) -> Density {
    Density { s_exponent: t - 1.0, one_minus_s_exponent: -t, coefficient: (t * PI).sin() / PI }
}

/// Gauss-Jacobi rule for a density, with the tanh rule as fallback.
fn density_rule(d: &Density, n: usize) -> Result<Rule> {
    match gauss_jacobi01(n, d.s_exponent, d.one_minus_s_exponent) {
        Ok(rule) => Ok((*rule).clone()),
        Err(_) => quad::tanh_rule(2 * n, d.s_exponent, d.one_minus_s_exponent),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum Form {
    Power(f64),
    Harmonic(f64),
    Arithmetic,
    Measure,
}

/// Operator monotone `f` on `(0, inf)` with `f(1) = 1`, with its representing measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneFn {
    pub id: String,
    pub measure: MeasureSpec,
    pub param: Option<f64>,
    form: Form,
}

impl MonotoneFn {
    /// `x^t` for `t` in `[0, 1]`.
    pub fn power(t: f64) -> Result<Self> {
        Self::build(format!("power:{t}"), MeasureSpec::power(t)?, Some(t), Form::Power(t))
    }

    /// `f(x) = x`, measure `delta_1`.
    pub fn identity() -> Self {
        Self::build("identity".into(), MeasureSpec::dirac(1.0).expect("valid"), None, Form::Power(1.0)).expect("valid")
    }

    /// `f(x) = 1`, measure `delta_0`.
    pub fn one() -> Self {
        Self::build("one".into(), MeasureSpec::dirac(0.0).expect("valid"), None, Form::Power(0.0)).expect("valid")
    }

    /// `f(x) = (1 + x)/2`, measure `(delta_0 + delta_1)/2`.
    pub fn arithmetic() -> Self {
        let m = MeasureSpec::new(vec![(0.0, 0.5), (1.0, 0.5)], None).expect("valid");
        Self::build("arithmetic".into(), m, None, Form::Arithmetic).expect("valid")
    }

    /// `f(x) = ((1-s) + s/x)^{-1}`, measure `delta_s`.
    pub fn harmonic(s: f64) -> Result<Self> {
        Self::build(format!("harmonic:{s}"), MeasureSpec::dirac(s)?, Some(s), Form::Harmonic(s))
    }

    /// A function given only through its measure.
    pub fn from_measure(id: &str, measure: MeasureSpec) -> Result<Self> {
        Self::build(id.to_string(), measure, None, Form::Measure)
    }

    /// Registry lookup: `power:t`, `identity`, `one`, `arithmetic`, `harmonic:s`, or a JSON measure.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            return Self::from_measure("measure", MeasureSpec::from_json_str(spec)?);
        }
        let num = |v: &str| v.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{v}' in '{spec}'")));
        match spec.split_once(':') {
            Some(("power", v)) => Self::power(num(v)?),
            Some(("harmonic", v)) => Self::harmonic(num(v)?),
            None if spec == "identity" => Ok(Self::identity()),
            None if spec == "one" => Ok(Self::one()),
            None if spec == "arithmetic" => Ok(Self::arithmetic()),
            None if spec == "sqrt" => Self::power(0.5),
            _ => Err(Error::InvalidMeasure(format!("unknown function '{spec}'"))),
        }
    }

    fn build(id: String, measure: MeasureSpec, param: Option<f64>, form: Form) -> Result<Self> {
        let f = MonotoneFn { id, measure, param, form };
        let f1 = f.eval(1.0);
        if (f1 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("f(1) = {f1}, expected 1")));
        }
        for x in [0.5, 1.0, 2.0, 10.0] {
            let direct = f.eval(x);
            let via = f.measure.scalar_integral(C64::new(x, 0.0), 64)?.re;
            if (direct - via).abs() > 1e-8 {
                return Err(Error::InvalidMeasure(format!(
                    "{}: measure gives {via} at x = {x}, function gives {direct}",
                    f.id
                )));
            }
        }
        Ok(f)
    }

    /// `f(x)` for real `x > 0`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_complex(C64::new(x, 0.0)).re
    }

    /// `f(z)` on the open right half-plane, principal branch.
    pub fn eval_complex(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        match self.form {
            Form::Power(t) if t == 0.0 => one,
            Form::Power(t) if t == 1.0 => z,
            Form::Power(t) => (z.ln() * t).exp(),
            Form::Harmonic(s) => one / ((1.0 - s) + s / z),
            Form::Arithmetic => (one + z) * 0.5,
            Form::Measure => self.measure.scalar_integral(z, 64).unwrap_or(C64::new(f64::NAN, f64::NAN)),
        }
    }
}

fn rel_change(a: &CMatrix, b: &CMatrix) -> f64 {
    a.dist(b) / b.frobenius().max(f64::MIN_POSITIVE)
}

/// Evaluates `f(k)` for `k = 1, 2, 4, ...` until two successive results agree.
fn refine<F: FnMut(usize) -> Result<CMatrix>>(mut f: F) -> Result<CMatrix> {
    let mut prev = f(1)?;
    let mut change = f64::INFINITY;
    let mut k = 2;
    while k <= MAX_REFINE {
        let next = f(k)?;
        change = rel_change(&prev, &next);
        if !next.is_finite() {
            break;
        }
        if change <= CONVERGENCE_TOL {
            return Ok(next);
        }
        prev = next;
        k *= 2;
    }
    Err(Error::QuadratureNotConverged { change })
}

fn check_s(s: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {s}")));
    }
    Ok(())
}

fn check_pair(a: &CMatrix, b: &CMatrix) -> Result<()> {
    let n = a.ensure_square()?;
    let m = b.ensure_square()?;
    if n != m {
        return Err(Error::DimensionMismatch { expected: format!("{n}x{n}"), got: format!("{m}x{m}") });
    }
    ensure_accretive(a)?;
    ensure_accretive(b)?;
    Ok(())
}

/// Weighted harmonic mean `A !_s B`, with `A !_0 B = A` and `A !_1 B = B`.
pub fn harmonic(a: &CMatrix, b: &CMatrix, s: f64) -> Result<CMatrix> {
    check_s(s, "s")?;
    check_pair(a, b)?;
    if s == 0.0 {
        return Ok(a.clone());
    }
    if s == 1.0 {
        return Ok(b.clone());
    }
    inverse(&(accretive_inv(a)?.scale_re(1.0 - s) + accretive_inv(b)?.scale_re(s)))
}

/// `A !_s B` from precomputed inverses.
struct HarmonicPath<'a> {
    a: &'a CMatrix,
    b: &'a CMatrix,
    ainv: CMatrix,
    binv: CMatrix,
}

impl<'a> HarmonicPath<'a> {
    fn new(a: &'a CMatrix, b: &'a CMatrix) -> Result<Self> {
        Ok(HarmonicPath { a, b, ainv: accretive_inv(a)?, binv: accretive_inv(b)? })
    }

    fn at(&self, s: f64, sc: f64) -> Result<CMatrix> {
        if s == 0.0 {
            return Ok(self.a.clone());
        }
        if sc == 0.0 {
            return Ok(self.b.clone());
        }
        inverse(&(self.ainv.scale_re(sc) + self.binv.scale_re(s)))
    }

    /// `int A !_s B dnu(s)` with `mult * nodes` density nodes.
    fn integrate(&self, m: &MeasureSpec, n: usize) -> Result<CMatrix> {
        let dim = self.a.rows();
        let mut acc = CMatrix::zeros(dim, dim);
        for &(s, w) in &m.atoms {
            acc = acc + self.at(s, 1.0 - s)?.scale_re(w);
        }
        if let Some(d) = m.density {
            let rule = density_rule(&d, n)?;
            let mut part = CMatrix::zeros(dim, dim);
            for i in 0..rule.len() {
                part = part + self.at(rule.nodes[i], rule.comps[i])?.scale_re(rule.weights[i]);
            }
            acc = acc + part.scale_re(d.coefficient);
        }
        Ok(acc)
    }
}

fn sigma_measure(a: &CMatrix, b: &CMatrix, m: &MeasureSpec, cfg: &QuadCfg) -> Result<CMatrix> {
    cfg.validate()?;
    check_pair(a, b)?;
    let path = HarmonicPath::new(a, b)?;
    if m.density.is_none() {
        return path.integrate(m, cfg.nodes);
    }
    refine(|k| path.integrate(m, k * cfg.nodes))
}

/// `A sigma_f B = int A !_s B dnu_f(s)`.
pub fn sigma_f(a: &CMatrix, b: &CMatrix, f: &MonotoneFn, cfg: &QuadCfg) -> Result<CMatrix> {
    sigma_measure(a, b, &f.measure, cfg)
}

/// Weighted geometric mean `A #_t B` through the measure of `x^t`.
pub fn weighted_geomean(a: &CMatrix, b: &CMatrix, t: f64, cfg: &QuadCfg) -> Result<CMatrix> {
    check_s(t, "t")?;
    sigma_measure(a, b, &MeasureSpec::power(t)?, cfg)
}

/// `f(A) = int ((1-s) I + s A^{-1})^{-1} dnu_f(s)`.
pub fn monotone_apply(f: &MonotoneFn, a: &CMatrix, cfg: &QuadCfg) -> Result<CMatrix> {
    let n = a.ensure_square()?;
    sigma_f(&CMatrix::identity(n), a, f, cfg)
}

/// Geometric mean `A # B = ((2/pi) int_0^inf (tA + t^{-1}B)^{-1} dt/t)^{-1}`.
///
/// With `t = e^u` the integrand is `(e^u A + e^{-u} B)^{-1}` on `[-trunc, trunc]`,
/// integrated by Gauss-Legendre panels of unit width.
pub fn drury_geomean(a: &CMatrix, b: &CMatrix, cfg: &QuadCfg) -> Result<CMatrix> {
    cfg.validate()?;
    check_pair(a, b)?;
    let dim = a.rows();
    let panels = (2.0 * cfg.trunc).ceil() as usize;
    let width = 2.0 * cfg.trunc / panels as f64;
    let integral = refine(|k| {
        let order = (cfg.nodes / 4).max(4) * k;
        let rule = gauss_legendre01(order)?;
        let mut acc = CMatrix::zeros(dim, dim);
        for p in 0..panels {
            let left = -cfg.trunc + p as f64 * width;
            for i in 0..rule.len() {
                let u = left + width * rule.nodes[i];
                let m = a.scale_re(u.exp()) + b.scale_re((-u).exp());
                acc = acc + inverse(&m)?.scale_re(width * rule.weights[i]);
            }
        }
        Ok(acc)
    })?;
    inverse(&integral.scale_re(FRAC_2_PI))
}

/// Logarithmic mean `int_0^1 A #_t B dt`.
pub fn log_mean(a: &CMatrix, b: &CMatrix, cfg: &QuadCfg) -> Result<CMatrix> {
    cfg.validate()?;
    check_pair(a, b)?;
    let path = HarmonicPath::new(a, b)?;
    let dim = a.rows();
    refine(|k| {
        let outer = gauss_legendre01(cfg.outer_nodes * k)?;
        let mut acc = CMatrix::zeros(dim, dim);
        for i in 0..outer.len() {
            let m = MeasureSpec { atoms: vec![], density: Some(power_density(outer.nodes[i])) };
            acc = acc + path.integrate(&m, cfg.nodes * k)?.scale_re(outer.weights[i]);
        }
        Ok(acc)
    })
}

/// Heinz mean `(A #_t B + A #_{1-t} B) / 2`.
pub fn heinz(a: &CMatrix, b: &CMatrix, t: f64, cfg: &QuadCfg) -> Result<CMatrix> {
    check_s(t, "t")?;
    let x = weighted_geomean(a, b, t, cfg)?;
    if t == 0.5 {
        return Ok(x);
    }
    let y = weighted_geomean(a, b, 1.0 - t, cfg)?;
    Ok((x + y).scale_re(0.5))
}

/// Arithmetic mean `(A + B) / 2`.
pub fn arithmetic(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_pair(a, b)?;
    Ok((a + b).scale_re(0.5))
}

/// `A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}` for positive definite `A, B`.
pub fn psd_weighted_geomean(a: &CMatrix, b: &CMatrix, t: f64) -> Result<CMatrix> {
    let ah = kernel::psd_power(a, 0.5)?;
    let aih = kernel::psd_power(a, -0.5)?;
    let inner = aih.sandwich(b);
    let inner = (&inner + inner.adjoint()).scale_re(0.5);
    Ok(ah.sandwich(&kernel::psd_power(&inner, t)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    Harmonic,
    Geometric,
    WeightedGeometric,
    Arithmetic,
    Log,
    Heinz,
}

impl MeanKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "harmonic" => MeanKind::Harmonic,
            "geometric" | "geomean" => MeanKind::Geometric,
            "weighted_geometric" | "wgeomean" => MeanKind::WeightedGeometric,
            "arithmetic" => MeanKind::Arithmetic,
            "log" => MeanKind::Log,
            "heinz" => MeanKind::Heinz,
            other => return Err(Error::InvalidParameter(format!("unknown mean '{other}'"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            MeanKind::Harmonic => "harmonic",
            MeanKind::Geometric => "geometric",
            MeanKind::WeightedGeometric => "weighted_geometric",
            MeanKind::Arithmetic => "arithmetic",
            MeanKind::Log => "log",
            MeanKind::Heinz => "heinz",
        }
    }
}

/// Matrix mean of the given kind; `t` defaults to 1/2 where a weight applies.
pub fn matrix_mean(kind: MeanKind, a: &CMatrix, b: &CMatrix, t: Option<f64>, cfg: &QuadCfg) -> Result<CMatrix> {
    let t = t.unwrap_or(0.5);
    match kind {
        MeanKind::Harmonic => harmonic(a, b, t),
        MeanKind::Geometric => drury_geomean(a, b, cfg),
        MeanKind::WeightedGeometric => weighted_geomean(a, b, t, cfg),
        MeanKind::Arithmetic => arithmetic(a, b),
        MeanKind::Log => log_mean(a, b, cfg),
        MeanKind::Heinz => heinz(a, b, t, cfg),
    }
}

/// Closed-form scalar counterpart of [`matrix_mean`] for `a, b > 0`.
pub fn scalar_mean(kind: MeanKind, a: f64, b: f64, t: Option<f64>) -> f64 {
    let t = t.unwrap_or(0.5);
    let wg = |t: f64| a.powf(1.0 - t) * b.powf(t);
    match kind {
        MeanKind::Harmonic => 1.0 / ((1.0 - t) / a + t / b),
        MeanKind::Geometric => (a * b).sqrt(),
        MeanKind::WeightedGeometric => wg(t),
        MeanKind::Arithmetic => 0.5 * (a + b),
        MeanKind::Log => {
            if (a - b).abs() <= 1e-14 * a.max(b) {
                a
            } else {
                (a - b) / (a.ln() - b.ln())
            }
        }
        MeanKind::Heinz => 0.5 * (wg(t) + wg(1.0 - t)),
    }
}

/// Scalar `a sigma_f b = a f(b/a)`.
pub fn scalar_sigma(f: &MonotoneFn, a: f64, b: f64) -> f64 {
    a * f.eval(b / a)
}
