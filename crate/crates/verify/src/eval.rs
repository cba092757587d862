//! Evaluators: each turns one trial's inputs and one parameter case into a list
//! of scalar inequalities `lhs <= rhs`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::hash::{DefaultHasher, Hash, Hasher};

use qradius_core::kernel::{self, lambda_min, spectral_norm};
use qradius_core::means::{self, MeanKind, MonotoneFn, QuadCfg};
use qradius_core::qnr::{classical_radius, q_radius, QParam, SolverCfg};
use qradius_core::semi::SemiSpace;
use qradius_core::{CMatrix, Result, C64};

use crate::inputs::Inputs;

/// Parameters of one outcome inside a trial.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Case {
    pub q: Option<f64>,
    pub t: Option<f64>,
    pub gamma: Option<f64>,
    pub f_power: Option<f64>,
}

impl Case {
    fn q(&self) -> f64 {
        self.q.expect("predicate sweeps q")
    }

    fn t(&self) -> f64 {
        self.t.expect("predicate sweeps t")
    }

    fn gamma(&self) -> f64 {
        self.gamma.expect("predicate uses a convex weight")
    }

    fn f(&self) -> f64 {
        self.f_power.expect("predicate uses f")
    }
}

/// `lhs <= rhs`, judged with the harness tolerances unless `strict`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ineq {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// Magnitude used for the relative tolerance and the slack normalization.
    pub scale: f64,
    /// Largest oracle gap among radii on the right-hand side.
    pub gap: f64,
    /// No tolerance: the right-hand side already is one.
    pub strict: bool,
}

impl Ineq {
    pub fn le(label: &'static str, lhs: f64, rhs: f64) -> Self {
        Ineq { label, lhs, rhs, scale: rhs.abs(), gap: 0.0, strict: false }
    }

    /// `value <= bound` with no extra tolerance.
    pub fn within(label: &'static str, value: f64, bound: f64) -> Self {
        Ineq { label, lhs: value, rhs: bound, scale: 0.0, gap: 0.0, strict: true }
    }

    pub fn gap(mut self, gap: f64) -> Self {
        self.gap = gap;
        self
    }

    pub fn scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

/// Result of one evaluation: checked inequalities and informational flags.
#[derive(Debug, Clone, Default)]
pub struct Eval {
    pub ineqs: Vec<Ineq>,
    pub info: Vec<(&'static str, bool)>,
}

impl Eval {
    fn of(ineqs: Vec<Ineq>) -> Self {
        Eval { ineqs, info: vec![] }
    }
}

/// A radius estimate with its distance to the sampling oracle.
#[derive(Debug, Clone, Copy)]
pub struct Radius {
    pub value: f64,
    pub gap: f64,
}

fn matrix_key(m: &CMatrix) -> u64 {
    let mut h = DefaultHasher::new();
    m.rows().hash(&mut h);
    for z in m.to_row_major() {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    h.finish()
}

/// Per-trial numerical context with memoized radii and matrix functions.
pub struct Numerics {
    pub solver: SolverCfg,
    pub quad: QuadCfg,
    space: Option<SemiSpace>,
    radii: HashMap<(u64, u64), Radius>,
    mats: HashMap<(&'static str, u64, u64), CMatrix>,
}

impl Numerics {
    pub fn new(inputs: &Inputs, solver: SolverCfg, quad: QuadCfg) -> Result<Self> {
        Ok(Numerics { solver, quad, space: inputs.space()?, radii: HashMap::new(), mats: HashMap::new() })
    }

    /// `w_{q,A}(m)` in the trial geometry.
    pub fn wq(&mut self, m: &CMatrix, q: f64) -> Result<Radius> {
        let key = (matrix_key(m), q.to_bits());
        if let Some(r) = self.radii.get(&key) {
            return Ok(*r);
        }
        let res = q_radius(self.space.as_ref(), m, QParam::real(q)?, &self.solver)?;
        let r = Radius { value: res.value, gap: res.oracle_gap().max(0.0) };
        self.radii.insert(key, r);
        Ok(r)
    }

    /// `w_A(m)`, the classical radius of the compression.
    pub fn w(&self, m: &CMatrix) -> Result<f64> {
        match &self.space {
            Some(s) => classical_radius(&s.compress(m)?.mat),
            None => classical_radius(m),
        }
    }

    /// `||m||_A`.
    pub fn norm(&self, m: &CMatrix) -> Result<f64> {
        match &self.space {
            Some(s) => s.a_op_norm(m),
            None => Ok(spectral_norm(m)),
        }
    }

    pub fn sharp(&self, m: &CMatrix) -> Result<CMatrix> {
        match &self.space {
            Some(s) => s.sharp(m),
            None => Ok(m.adjoint()),
        }
    }

    pub fn cartesian(&self, m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
        match &self.space {
            Some(s) => s.cartesian(m),
            None => Ok((kernel::re_part(m)?, kernel::im_part(m)?)),
        }
    }

    /// Memoizes a matrix computed from the trial inputs under `(tag, a, b)`.
    fn cached<F: FnOnce(&QuadCfg) -> Result<CMatrix>>(&mut self, tag: &'static str, a: f64, b: f64, f: F) -> Result<CMatrix> {
        let key = (tag, a.to_bits(), b.to_bits());
        if let Some(m) = self.mats.get(&key) {
            return Ok(m.clone());
        }
        let m = f(&self.quad)?;
        self.mats.insert(key, m.clone());
        Ok(m)
    }
}

pub type Evaluator = fn(&Inputs, &Case, &mut Numerics) -> Result<Eval>;

fn sec(alpha: f64) -> f64 {
    1.0 / alpha.cos()
}

fn complement(q: f64) -> f64 {
    (1.0 - q * q).max(0.0).sqrt()
}

fn power(p: f64) -> Result<MonotoneFn> {
    MonotoneFn::power(p)
}

fn fpow(m: &CMatrix, p: f64, quad: &QuadCfg) -> Result<CMatrix> {
    means::monotone_apply(&power(p)?, m, quad)
}

pub fn p01(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, q) = (&inp.mats[0], c.q());
    let wa = nx.w(t)?;
    let w = nx.wq(t, q)?;
    Ok(Eval::of(vec![Ineq::le("lower", q * wa, w.value).gap(w.gap), Ineq::le("upper", w.value, wa)]))
}

pub fn p02(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, q) = (&inp.mats[0], c.q());
    let nt = nx.norm(t)?;
    let w = nx.wq(t, q)?;
    Ok(Eval::of(vec![Ineq::le("lower", 0.5 * q * nt, w.value).gap(w.gap), Ineq::le("upper", w.value, nt)]))
}

fn sharp_sum_norm(t: &CMatrix, nx: &Numerics) -> Result<f64> {
    let ts = nx.sharp(t)?;
    nx.norm(&(&ts * t + t * &ts))
}

pub fn p03(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, q) = (&inp.mats[0], c.q());
    let m = sharp_sum_norm(t, nx)?;
    let w = nx.wq(t, q)?;
    let w2 = w.value * w.value;
    let upper = 0.5 * (2.0 - q * q + 4.0 * q * complement(q));
    Ok(Eval::of(vec![
        Ineq::le("lower", 0.25 * q * q * m, w2).gap(2.0 * w.value * w.gap),
        Ineq::le("upper", w2, upper * m),
    ]))
}

/// Hypothesis trigger and equality tolerance for the equality case.
pub const EQUALITY_TRIGGER: f64 = 1e-6;
pub const EQUALITY_TOL: f64 = 1e-4;
const EQUALITY_ANGLES: usize = 32;

pub fn p04(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, q) = (&inp.mats[0], c.q());
    let m = sharp_sum_norm(t, nx)?;
    let w = nx.wq(t, q)?;
    let target = 0.25 * q * q * m;
    let w2 = w.value * w.value;
    if (w2 - target).abs() >= EQUALITY_TRIGGER {
        // Hypothesis not met; the outcome records how far it is from holding.
        return Ok(Eval {
            ineqs: vec![Ineq::le("hypothesis", target, w2).gap(2.0 * w.value * w.gap)],
            info: vec![("triggered", false)],
        });
    }
    let mut dev: f64 = 0.0;
    for k in 0..EQUALITY_ANGLES {
        let th = 2.0 * PI * k as f64 / EQUALITY_ANGLES as f64;
        let (re, im) = nx.cartesian(&t.scale(C64::from_polar(1.0, th)))?;
        let nr = nx.norm(&re)?;
        let ni = nx.norm(&im)?;
        dev = dev.max((q * q * nr * nr - target).abs()).max((q * q * ni * ni - target).abs());
    }
    Ok(Eval { ineqs: vec![Ineq::within("equalities", dev, EQUALITY_TOL)], info: vec![("triggered", true)] })
}

pub fn p05(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, q) = (&inp.mats[0], c.q());
    let s = complement(q);
    let wa = nx.w(t)?;
    let nt = nx.norm(t)?;
    let w = nx.wq(t, q)?;
    let rhs = (q * q * wa * wa + s * s * nt * nt + 2.0 * q * s * wa * nt).sqrt();
    Ok(Eval::of(vec![Ineq::le("upper", w.value, rhs)]))
}

pub fn p07(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, s, q) = (&inp.mats[0], &inp.mats[1], c.q());
    let wts = nx.wq(&(t * s), q)?;
    let wt = nx.wq(t, q)?;
    let ws = nx.wq(s, q)?;
    Ok(Eval::of(vec![
        Ineq::le("product", q * q * wts.value, 4.0 * wt.value * ws.value).gap(wt.gap.max(ws.gap))
    ]))
}

/// Fixed `q` of the counterexample.
pub const DEMO_Q: f64 = 0.1;

/// Passes when the unscaled product bound `w(TS) <= 4 w(T) w(S)` is seen to fail.
pub fn p08(inp: &Inputs, _c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, s) = (&inp.mats[0], &inp.mats[1]);
    let wts = nx.wq(&(t * s), DEMO_Q)?;
    let wt = nx.wq(t, DEMO_Q)?;
    let ws = nx.wq(s, DEMO_Q)?;
    Ok(Eval::of(vec![Ineq::le("violation observed", 4.0 * wt.value * ws.value, wts.value).gap(wts.gap)]))
}

pub fn p09(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (t, q) = (&inp.mats[0], c.q());
    let mut ineqs = Vec::with_capacity(4);
    for (part, lo, hi) in [(kernel::re_part(t)?, "re lower", "re upper"), (kernel::im_part(t)?, "im lower", "im upper")] {
        let np = spectral_norm(&part);
        let w = nx.wq(&part, q)?;
        ineqs.push(Ineq::le(lo, q * np, w.value).gap(w.gap));
        ineqs.push(Ineq::le(hi, w.value, np));
    }
    Ok(Eval::of(ineqs))
}

pub fn p10(inp: &Inputs, _c: &Case, _nx: &mut Numerics) -> Result<Eval> {
    let a = &inp.mats[0];
    let na = spectral_norm(a);
    let nr = spectral_norm(&kernel::re_part(a)?);
    Ok(Eval::of(vec![Ineq::le("lower", inp.alpha.cos() * na, nr), Ineq::le("upper", nr, na)]))
}

pub fn p11(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, p) = (&inp.mats[0], c.f());
    let fa = nx.cached("f(A)", p, 0.0, |qc| fpow(a, p, qc))?;
    let nr = spectral_norm(&kernel::re_part(a)?);
    let nrf = spectral_norm(&kernel::re_part(&fa)?);
    let s2 = sec(inp.alpha).powi(2);
    Ok(Eval::of(vec![Ineq::le("lower", nr.powf(p), nrf), Ineq::le("upper", nrf, s2 * nr.powf(p))]))
}

pub fn p12(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, p) = (&inp.mats[0], c.f());
    let fa = nx.cached("f(A)", p, 0.0, |qc| fpow(a, p, qc))?;
    let re_fa = kernel::re_part(&fa)?;
    let f_re = kernel::psd_power(&kernel::re_part(a)?, p)?;
    let scale = spectral_norm(&re_fa);
    let s2 = sec(inp.alpha).powi(2);
    // Differences may be tiny, so symmetrize away rounding before the eigensolve.
    let lo = lambda_min(&kernel::re_part(&(&re_fa - &f_re))?)?;
    let hi = lambda_min(&kernel::re_part(&(f_re.scale_re(s2) - &re_fa))?)?;
    Ok(Eval::of(vec![Ineq::le("lower", 0.0, lo).scale(scale), Ineq::le("upper", 0.0, hi).scale(s2 * scale)]))
}

pub fn p13(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, b, p) = (&inp.mats[0], &inp.mats[1], c.f());
    let quad = nx.quad;
    let lhs = spectral_norm(&fpow(&(a + b), p, &quad)?);
    let rhs = spectral_norm(&(fpow(a, p, &quad)? + fpow(b, p, &quad)?));
    Ok(Eval::of(vec![Ineq::le("subadditive", lhs, rhs)]))
}

pub fn p14(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, q) = (&inp.mats[0], c.q());
    let ca = inp.alpha.cos();
    let re = kernel::re_part(a)?;
    let w = nx.wq(a, q)?;
    let wr = nx.wq(&re, q)?;
    Ok(Eval::of(vec![
        Ineq::le("norm", ca * w.value, spectral_norm(&re)),
        Ineq::le("radius", q * ca * w.value, wr.value).gap(wr.gap),
    ]))
}

pub fn p15(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, q, p) = (&inp.mats[0], c.q(), c.f());
    let fa = nx.cached("f(A)", p, 0.0, |qc| fpow(a, p, qc))?;
    let w = nx.wq(a, q)?;
    let wf = nx.wq(&fa, q)?;
    let fw = w.value.powf(p);
    Ok(Eval::of(vec![
        Ineq::le("lower", q * q * inp.alpha.cos() * fw, q * wf.value).gap(wf.gap),
        Ineq::le("upper", q * wf.value, sec(inp.alpha).powi(3) * fw).gap(w.gap),
    ]))
}

pub fn p16(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, b, q, p, g) = (&inp.mats[0], &inp.mats[1], c.q(), c.f(), c.gamma());
    let fa = nx.cached("f(A)", p, 0.0, |qc| fpow(a, p, qc))?;
    let fb = nx.cached("f(B)", p, 0.0, |qc| fpow(b, p, qc))?;
    let mix = fa.scale_re(1.0 - g) + fb.scale_re(g);
    let wm = nx.wq(&mix, q)?;
    let wa = nx.wq(a, q)?;
    let wb = nx.wq(b, q)?;
    let rhs = sec(inp.alpha).powi(3) * ((1.0 - g) * wa.value + g * wb.value).powf(p);
    Ok(Eval::of(vec![Ineq::le("convex", q * wm.value, rhs).gap(wa.gap.max(wb.gap))]))
}

pub fn p17(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, b, q, p) = (&inp.mats[0], &inp.mats[1], c.q(), c.f());
    let fab = nx.cached("f(A+B)", p, 0.0, |qc| fpow(&(a + b), p, qc))?;
    let fa = nx.cached("f(A)", p, 0.0, |qc| fpow(a, p, qc))?;
    let fb = nx.cached("f(B)", p, 0.0, |qc| fpow(b, p, qc))?;
    let l = nx.wq(&fab, q)?;
    let r = nx.wq(&(fa + fb), q)?;
    Ok(Eval::of(vec![Ineq::le("subadditive", q * l.value, sec(inp.alpha).powi(3) * r.value).gap(r.gap)]))
}

/// Powers `A^t`, `B^t`, `(A+B)^t` shared by the power-mean predicates.
fn powers(inp: &Inputs, t: f64, nx: &mut Numerics) -> Result<(CMatrix, CMatrix, CMatrix)> {
    let (a, b) = (&inp.mats[0], &inp.mats[1]);
    let at = nx.cached("A^t", t, 0.0, |qc| fpow(a, t, qc))?;
    let bt = nx.cached("B^t", t, 0.0, |qc| fpow(b, t, qc))?;
    let abt = nx.cached("(A+B)^t", t, 0.0, |qc| fpow(&(a + b), t, qc))?;
    Ok((at, bt, abt))
}

/// Three power-function bounds with constant `k` (`sec^3` in the sector, `1` at `alpha = 0`)
/// and lower constant `lo` on the first.
fn power_parts(inp: &Inputs, c: &Case, nx: &mut Numerics, k: f64, lo: f64) -> Result<Eval> {
    let (q, t, g) = (c.q(), c.t(), c.gamma());
    let (at, bt, abt) = powers(inp, t, nx)?;
    let wa = nx.wq(&inp.mats[0], q)?;
    let wb = nx.wq(&inp.mats[1], q)?;
    let wat = nx.wq(&at, q)?;
    let mix = nx.wq(&(at.scale_re(1.0 - g) + bt.scale_re(g)), q)?;
    let wabt = nx.wq(&abt, q)?;
    let wsum = nx.wq(&(&at + &bt), q)?;
    Ok(Eval::of(vec![
        Ineq::le("a lower", q * q * lo * wa.value.powf(t), q * wat.value).gap(wat.gap),
        Ineq::le("a upper", q * wat.value, k * wa.value.powf(t)).gap(wa.gap),
        Ineq::le("b", q * mix.value, k * ((1.0 - g) * wa.value + g * wb.value).powf(t)).gap(wa.gap.max(wb.gap)),
        Ineq::le("c", q * wabt.value, k * wsum.value).gap(wsum.gap),
    ]))
}

pub fn p18(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    power_parts(inp, c, nx, sec(inp.alpha).powi(3), inp.alpha.cos())
}

pub fn p19(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (q, t) = (c.q(), c.t());
    let (at, bt, abt) = powers(inp, t, nx)?;
    let wa = nx.wq(&inp.mats[0], q)?;
    let wb = nx.wq(&inp.mats[1], q)?;
    let wsum = nx.wq(&(&at + &bt), q)?;
    let wabt = nx.wq(&abt, q)?;
    let ca = inp.alpha.cos();
    let bound = 2f64.powf(1.0 - t) * sec(inp.alpha).powi(3) * (wa.value + wb.value).powf(t);
    let g = wa.gap.max(wb.gap);
    Ok(Eval::of(vec![
        Ineq::le("sum", q * wsum.value, bound).gap(g),
        Ineq::le("two-sided lower", q * ca.powi(3) * wabt.value, wsum.value).gap(wsum.gap),
        Ineq::le("two-sided upper", wsum.value, bound / q).gap(g),
    ]))
}

pub fn p20(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    power_parts(inp, c, nx, 1.0, 1.0)
}

pub fn p21(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let q = c.q();
    let [a, b, cm, d] = [&inp.mats[0], &inp.mats[1], &inp.mats[2], &inp.mats[3]];
    let f = power(c.f())?;
    let ab = nx.cached("AsB", c.f(), 0.0, |qc| means::sigma_f(a, b, &f, qc))?;
    let cd = nx.cached("CsD", c.f(), 0.0, |qc| means::sigma_f(cm, d, &f, qc))?;
    let l = nx.wq(&ab, q)?;
    let r = nx.wq(&cd, q)?;
    let s = sec(inp.alpha);
    let sharper = Ineq::le("sec2", q * l.value, s * s * r.value);
    Ok(Eval {
        ineqs: vec![Ineq::le("dominated", q * l.value, s.powi(3) * r.value).gap(r.gap)],
        info: vec![("sec2_variant_violations", violated(&sharper))],
    })
}

pub fn p22(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, b, q) = (&inp.mats[0], &inp.mats[1], c.q());
    let f = power(c.f())?;
    let ab = nx.cached("AsB", c.f(), 0.0, |qc| means::sigma_f(a, b, &f, qc))?;
    let l = nx.wq(&ab, q)?;
    let wa = nx.wq(a, q)?;
    let wb = nx.wq(b, q)?;
    let rhs = sec(inp.alpha).powi(3) * means::scalar_sigma(&f, wa.value, wb.value);
    Ok(Eval::of(vec![Ineq::le("mean", q * q * l.value, rhs).gap(wa.gap.max(wb.gap))]))
}

pub fn p23(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, b, q, t) = (&inp.mats[0], &inp.mats[1], c.q(), c.t());
    let s = sec(inp.alpha);
    let s3 = s.powi(3);
    let geo = nx.cached("A#tB", t, 0.0, |qc| means::weighted_geomean(a, b, t, qc))?;
    let har = nx.cached("A!tB", t, 0.0, |_| means::harmonic(a, b, t))?;
    let wa = nx.wq(a, q)?;
    let wb = nx.wq(b, q)?;
    let g = wa.gap.max(wb.gap);
    let wg = nx.wq(&geo, q)?;
    let wh = nx.wq(&har, q)?;
    let scalar_h = means::scalar_mean(MeanKind::Harmonic, wa.value, wb.value, Some(t));
    let mut ineqs = vec![
        Ineq::le("geometric", q * q * wg.value, s3 * wa.value.powf(1.0 - t) * wb.value.powf(t)).gap(g),
        Ineq::le("harmonic", q * q * wh.value, s3 * scalar_h).gap(g),
    ];
    // The statement with inverses on the left, kept as a counter only.
    let inv = nx.cached("(1-t)A^-1+tB^-1", t, 0.0, |_| {
        Ok(kernel::accretive_inv(a)?.scale_re(1.0 - t) + kernel::accretive_inv(b)?.scale_re(t))
    })?;
    let wi = nx.wq(&inv, q)?;
    let literal = Ineq::le("literal", q * q * wi.value, s3 * ((1.0 - t) / wa.value + t / wb.value));
    let mut info = vec![("literal_harmonic_violations", violated(&literal))];
    if t == 0.5 {
        let dg = nx.cached("A#B", 0.0, 0.0, |qc| means::drury_geomean(a, b, qc))?;
        let wd = nx.wq(&dg, q)?;
        let rhs = (wa.value * wb.value).sqrt();
        ineqs.push(Ineq::le("midpoint", q * q * wd.value, s3 * rhs).gap(g));
        info.push(("midpoint_sec2_violations", violated(&Ineq::le("sec2", q * q * wd.value, s * s * rhs))));
    }
    Ok(Eval { ineqs, info })
}

pub fn p24(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, b, q, t) = (&inp.mats[0], &inp.mats[1], c.q(), c.t());
    let s3 = sec(inp.alpha).powi(3);
    let lm = nx.cached("L(A,B)", 0.0, 0.0, |qc| means::log_mean(a, b, qc))?;
    let hm = nx.cached("H_t(A,B)", t, 0.0, |qc| means::heinz(a, b, t, qc))?;
    let wa = nx.wq(a, q)?;
    let wb = nx.wq(b, q)?;
    let g = wa.gap.max(wb.gap);
    let wl = nx.wq(&lm, q)?;
    let wh = nx.wq(&hm, q)?;
    Ok(Eval::of(vec![
        Ineq::le("log", q * q * wl.value, s3 * means::scalar_mean(MeanKind::Log, wa.value, wb.value, None)).gap(g),
        Ineq::le("heinz", q * q * wh.value, s3 * means::scalar_mean(MeanKind::Heinz, wa.value, wb.value, Some(t))).gap(g),
    ]))
}

pub fn p25(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let (a, b, q, t) = (&inp.mats[0], &inp.mats[1], c.q(), c.t());
    let ca = inp.alpha.cos();
    let gm = nx.cached("A#B", 0.0, 0.0, |qc| means::drury_geomean(a, b, qc))?;
    let hm = nx.cached("H_t(A,B)", t, 0.0, |qc| means::heinz(a, b, t, qc))?;
    let am = means::arithmetic(a, b)?;
    let wg = nx.wq(&gm, q)?;
    let wh = nx.wq(&hm, q)?;
    let wm = nx.wq(&am, q)?;
    Ok(Eval::of(vec![
        Ineq::le("lower", q * q * ca.powi(4) * wg.value, q * wh.value).gap(wh.gap),
        Ineq::le("upper", q * wh.value, wm.value / ca.powi(4)).gap(wm.gap),
    ]))
}

/// Mean axiom: `sigma(A, B) <= sigma(C, D) + 1e-8 I` for `A <= C`, `B <= D`.
pub const MONOTONICITY_TOL: f64 = 1e-8;
/// Mean axiom: relative Frobenius error of the congruence identity.
pub const CONGRUENCE_TOL: f64 = 1e-7;
/// Mean axiom: `||I sigma I - I||_F`.
pub const IDENTITY_TOL: f64 = 1e-10;

fn axiom_fn(c: &Case) -> Result<MonotoneFn> {
    power(c.f())
}

pub fn axiom_monotone(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let f = axiom_fn(c)?;
    let lo = means::sigma_f(&inp.mats[0], &inp.mats[1], &f, &nx.quad)?;
    let hi = means::sigma_f(&inp.mats[2], &inp.mats[3], &f, &nx.quad)?;
    let gap = lambda_min(&kernel::re_part(&(hi - lo))?)?;
    Ok(Eval::of(vec![Ineq::within("monotone", -gap, MONOTONICITY_TOL)]))
}

/// `inputs.mats[2]` is the congruence factor.
pub fn axiom_congruence(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let f = axiom_fn(c)?;
    let (a, b, k) = (&inp.mats[0], &inp.mats[1], &inp.mats[2]);
    let kh = k.adjoint();
    let lhs = &(&kh * &means::sigma_f(a, b, &f, &nx.quad)?) * k;
    let rhs = means::sigma_f(&(&(&kh * a) * k), &(&(&kh * b) * k), &f, &nx.quad)?;
    let rel = lhs.dist(&rhs) / lhs.frobenius();
    Ok(Eval::of(vec![Ineq::within("congruence", rel, CONGRUENCE_TOL)]))
}

pub fn axiom_identity(inp: &Inputs, c: &Case, nx: &mut Numerics) -> Result<Eval> {
    let f = axiom_fn(c)?;
    let id = CMatrix::identity(inp.n);
    let m = means::sigma_f(&id, &id, &f, &nx.quad)?;
    Ok(Eval::of(vec![Ineq::within("identity", m.dist(&id), IDENTITY_TOL)]))
}

/// Relative and absolute tolerances applied to the slack `rhs - lhs`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-8, abs: 1e-10 }
    }
}

impl Ineq {
    /// Whether the inequality is violated beyond tolerance.
    pub fn violates(&self, tol: Tolerance) -> bool {
        let d = self.rhs - self.lhs;
        if self.strict {
            return !(d >= 0.0);
        }
        !(d >= -tol.abs - tol.rel * self.scale)
    }

    /// `(rhs - lhs) / max(1, scale)`.
    pub fn slack(&self) -> f64 {
        (self.rhs - self.lhs) / self.scale.max(1.0)
    }
}

fn violated(i: &Ineq) -> bool {
    i.violates(Tolerance::default())
}
