//! q-numerical radius and q-numerical range, classical and `A`-weighted.
//!
//! For a unit vector `x` the admissible partners are `y = conj(q) x + sqrt(1-|q|^2) z`
//! with `z` a unit vector orthogonal to `x`. The supremum over `z` is attained in
//! closed form, so the radius becomes a maximization over `x` alone:
//!
//! ```text
//! F(x) = |q| |<Tx, x>| + sqrt(1 - |q|^2) || Tx - <Tx, x> x ||
//! ```
//!
//! [`q_radius`] maximizes `F` by multistart conjugate-gradient ascent on the
//! unit sphere of the compressed space and reports a sampling lower bound next
//! to the optimum.

mod range;
mod sphere;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel;
use crate::matrix::{CMatrix, CVector, C64};
use crate::random::{self, rng_from};
use crate::sectorial::numrange_support;
use crate::semi::SemiSpace;

pub use range::{q_range_sample, PointCloud};
use sphere::{AscentCfg, SphereObjective, Workspace};

/// A point `q` of the closed unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QParam(C64);

impl QParam {
    pub fn new(q: C64) -> Result<Self> {
        let m = q.norm();
        if !m.is_finite() || m > 1.0 + 1e-15 {
            return Err(Error::InvalidQ { modulus: m });
        }
        Ok(QParam(q))
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(C64::new(q, 0.0))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm().min(1.0)
    }

    /// `sqrt(1 - |q|^2)`, exactly zero on the unit circle.
    pub fn complement(&self) -> f64 {
        let m = self.modulus();
        if m >= 1.0 {
            0.0
        } else {
            (1.0 - m * m).max(0.0).sqrt()
        }
    }
}

/// An admissible pair `(x, y)`: unit seminorms and `<x, y>_A = q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QPair {
    pub x: CVector,
    pub y: CVector,
}

/// Solver settings. Every random draw derives from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverCfg {
    pub starts: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub oracle_samples: usize,
    pub seed: u64,
}

impl Default for SolverCfg {
    fn default() -> Self {
        SolverCfg { starts: 64, max_iter: 200, rel_tol: 1e-10, oracle_samples: 2048, seed: 0 }
    }
}

impl SolverCfg {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }
}

/// A q-numerical radius estimate.
#[derive(Debug, Clone)]
pub struct QnrResult {
    pub value: f64,
    /// Witness pair in the original space.
    pub witness: QPair,
    /// Best value found by the sampling oracle.
    pub oracle_lower: f64,
    pub starts: usize,
    pub converged: bool,
    /// Index of the winning start.
    pub best_start: usize,
    /// Ascent iterations of the winning start.
    pub iterations: usize,
}

impl QnrResult {
    pub fn oracle_gap(&self) -> f64 {
        self.value - self.oracle_lower
    }
}

/// The reduced objective `F` for a square matrix in row-major flat storage.
pub(crate) struct QObjective {
    r: usize,
    t: Vec<C64>,
    th: Vec<C64>,
    qa: f64,
    qs: f64,
}

impl QObjective {
    pub(crate) fn new(m: &CMatrix, q: QParam) -> Self {
        let t = m.to_row_major();
        let th = m.adjoint().to_row_major();
        QObjective { r: m.rows(), t, th, qa: q.modulus(), qs: q.complement() }
    }

    #[inline]
    fn apply(r: usize, m: &[C64], x: &[C64], out: &mut [C64]) {
        for i in 0..r {
            let row = &m[i * r..(i + 1) * r];
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..r {
                acc += row[j] * x[j];
            }
            out[i] = acc;
        }
    }

    /// Fills `ws.tx` and `ws.res`; returns `(mu, ||res||)`.
    #[inline]
    fn parts(&self, x: &[C64], ws: &mut Workspace) -> (C64, f64) {
        Self::apply(self.r, &self.t, x, &mut ws.tx);
        let mut mu = C64::new(0.0, 0.0);
        for i in 0..self.r {
            mu += x[i].conj() * ws.tx[i];
        }
        let mut rn = 0.0;
        for i in 0..self.r {
            let v = ws.tx[i] - mu * x[i];
            ws.res[i] = v;
            rn += v.norm_sqr();
        }
        (mu, rn.sqrt())
    }
}

impl SphereObjective for QObjective {
    fn dim(&self) -> usize {
        self.r
    }

    fn value(&self, x: &[C64], ws: &mut Workspace) -> f64 {
        let (mu, rn) = self.parts(x, ws);
        self.qa * mu.norm() + self.qs * rn
    }

    fn value_grad(&self, x: &[C64], g: &mut [C64], ws: &mut Workspace) -> f64 {
        let (mu, rn) = self.parts(x, ws);
        let r = self.r;
        g.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        let mabs = mu.norm();
        if self.qa > 0.0 && mabs > 1e-300 {
            Self::apply(r, &self.th, x, &mut ws.thx);
            let c = self.qa / mabs;
            for i in 0..r {
                g[i] += (mu.conj() * ws.tx[i] + mu * ws.thx[i]) * c;
            }
        }
        if self.qs > 0.0 && rn > 1e-14 {
            Self::apply(r, &self.th, &ws.res.clone(), &mut ws.aux);
            let c = self.qs / rn;
            for i in 0..r {
                g[i] += (ws.aux[i] - mu.conj() * ws.tx[i]) * c;
            }
        }
        self.qa * mabs + self.qs * rn
    }
}

/// Closed-form supremum of `|<T x, y>|` over admissible partners `y` of a unit vector `x`.
pub fn q_objective(ttil: &CMatrix, x: &CVector, q: QParam) -> Result<f64> {
    let r = ttil.ensure_square()?;
    if x.len() != r {
        return Err(Error::DimensionMismatch { expected: r.to_string(), got: x.len().to_string() });
    }
    if r < 2 && q.modulus() < 1.0 {
        return Err(Error::DimensionTooSmall { dim: r });
    }
    let nx = x.norm();
    if (nx - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("x must be a unit vector, |x| = {nx}")));
    }
    let obj = QObjective::new(ttil, q);
    let mut ws = Workspace::new(r);
    Ok(obj.value(x.as_slice(), &mut ws))
}

/// Unit vector orthogonal to `x` (requires `dim >= 2`).
fn orthogonal_unit(x: &[C64]) -> Vec<C64> {
    let r = x.len();
    let k = (0..r).min_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm())).unwrap();
    let mut z = vec![C64::new(0.0, 0.0); r];
    z[k] = C64::new(1.0, 0.0);
    // z - <z, x> x
    let proj = x[k].conj();
    for i in 0..r {
        z[i] -= x[i] * proj;
    }
    sphere::normalize(&mut z);
    z
}

/// The maximizing partner `y` for a unit `x`, so that `<T x, y>` has modulus `F(x)`.
pub(crate) fn best_partner(obj: &QObjective, x: &[C64], q: QParam) -> Vec<C64> {
    let mut ws = Workspace::new(obj.r);
    let (mu, rn) = obj.parts(x, &mut ws);
    let qv = q.value();
    let s = q.complement();
    let mut y: Vec<C64> = x.iter().map(|xi| xi * qv.conj()).collect();
    if s == 0.0 {
        return y;
    }
    let z = if rn > 1e-14 {
        let qmu = qv * mu;
        // <T x, c r> = conj(c) ||r||; align conj(c) with arg(q mu).
        let phase = if qmu.norm() > 0.0 { (qmu / qmu.norm()).conj() } else { C64::new(1.0, 0.0) };
        ws.res.iter().map(|v| v / rn * phase).collect()
    } else {
        orthogonal_unit(x)
    };
    for i in 0..y.len() {
        y[i] += z[i] * s;
    }
    y
}

fn seeds(ttil: &CMatrix, cfg: &SolverCfg) -> Vec<Vec<C64>> {
    let r = ttil.rows();
    let n_eig = cfg.starts / 2;
    let angles = 8;
    let mut eig_vecs: Vec<Vec<Vec<C64>>> = Vec::with_capacity(angles);
    if n_eig > 0 {
        for k in 0..angles {
            let th = std::f64::consts::PI * k as f64 / 4.0;
            let rot = ttil.scale(C64::from_polar(1.0, th));
            let e = kernel::herm_eig_unchecked(&(&rot + rot.adjoint()).scale_re(0.5));
            // Descending eigenvalue order.
            eig_vecs.push((0..r).rev().map(|j| e.vectors.column(j).iter().copied().collect()).collect());
        }
    }
    let mut out = Vec::with_capacity(cfg.starts);
    for idx in 0..cfg.starts {
        let from_eig = idx < n_eig && idx / angles < r;
        if from_eig {
            out.push(eig_vecs[idx % angles][idx / angles].clone());
        } else {
            let mut rng = rng_from(cfg.seed, &[0x5747_4152, idx as u64]);
            out.push(random::unit_vector(&mut rng, r).iter().copied().collect());
        }
    }
    out
}

/// Best value of `F` over random unit vectors, refined by a (1+1) random search.
pub(crate) fn sampling_oracle(obj: &QObjective, samples: usize, seed: u64) -> (f64, Vec<C64>) {
    let r = obj.r;
    let mut ws = Workspace::new(r);
    let mut rng = rng_from(seed, &[0x4f52_4143]);
    let mut best = f64::NEG_INFINITY;
    let mut best_x = vec![C64::new(0.0, 0.0); r];
    if samples == 0 {
        return (0.0, best_x);
    }
    let random_phase = samples.div_ceil(2);
    for _ in 0..random_phase {
        let x: Vec<C64> = random::unit_vector(&mut rng, r).iter().copied().collect();
        let v = obj.value(&x, &mut ws);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let mut sigma = 0.3;
    let mut cand = best_x.clone();
    for _ in random_phase..samples {
        for i in 0..r {
            cand[i] = best_x[i] + random::complex_normal(&mut rng) * sigma;
        }
        sphere::normalize(&mut cand);
        let v = obj.value(&cand, &mut ws);
        if v > best {
            best = v;
            best_x.copy_from_slice(&cand);
            sigma = (sigma * 1.5).min(1.0);
        } else {
            sigma = (sigma * 0.9).max(1e-8);
        }
    }
    (best.max(0.0), best_x)
}

/// `w_{q,A}(T)`, or the classical `w_q(T)` when `space` is `None`.
pub fn q_radius(space: Option<&SemiSpace>, t: &CMatrix, q: QParam, cfg: &SolverCfg) -> Result<QnrResult> {
    let ttil = match space {
        Some(s) => s.compress(t)?.mat,
        None => {
            t.ensure_square()?;
            t.clone()
        }
    };
    let r = ttil.rows();
    if r < 2 && q.modulus() < 1.0 {
        return Err(Error::DimensionTooSmall { dim: r });
    }
    if cfg.starts == 0 {
        return Err(Error::InvalidParameter("at least one start is required".into()));
    }
    let obj = QObjective::new(&ttil, q);
    let acfg = AscentCfg { max_iter: cfg.max_iter, rel_tol: cfg.rel_tol };
    let mut ws = Workspace::new(r);
    let mut best: Option<(usize, sphere::AscentResult)> = None;
    for (idx, x0) in seeds(&ttil, cfg).into_iter().enumerate() {
        let res = sphere::maximize(&obj, &x0, acfg, &mut ws);
        if best.as_ref().is_none_or(|(_, b)| res.value > b.value) {
            best = Some((idx, res));
        }
    }
    let (mut best_start, mut best) = best.expect("starts > 0");
    let (oracle_lower, oracle_x) = sampling_oracle(&obj, cfg.oracle_samples, cfg.seed);
    if oracle_lower > best.value {
        // The oracle found a better basin; polish it and keep it as an extra start.
        let res = sphere::maximize(&obj, &oracle_x, acfg, &mut ws);
        if res.value > best.value {
            best = res;
            best_start = cfg.starts;
        }
    }
    let x_red = best.x.clone();
    let y_red = best_partner(&obj, &x_red, q);
    let xv = CVector::from_vec(x_red);
    let yv = CVector::from_vec(y_red);
    let value = yv.dotc(&ttil.mul_vec(&xv)).norm();
    let witness = match space {
        Some(s) => QPair { x: s.lift(&xv), y: s.lift(&yv) },
        None => QPair { x: xv, y: yv },
    };
    Ok(QnrResult {
        value,
        witness,
        oracle_lower,
        starts: cfg.starts,
        converged: best.converged,
        best_start,
        iterations: best.iterations,
    })
}

/// Classical numerical radius `w(M) = max_theta lambda_max(Re(e^{i theta} M))`.
pub fn classical_radius(m: &CMatrix) -> Result<f64> {
    m.ensure_square()?;
    const GRID: usize = 64;
    let h = |th: f64| numrange_support(m, th).map(|(s, _)| s);
    let step = 2.0 * std::f64::consts::PI / GRID as f64;
    let vals: Vec<f64> = (0..GRID).map(|k| h(k as f64 * step)).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..GRID).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let mut best = vals[order[0]];
    for &k in order.iter().take(3) {
        let th = k as f64 * step;
        let (_, v) = brent_max(|x| h(x).unwrap_or(f64::NEG_INFINITY), th - step, th + step, 1e-12);
        best = best.max(v);
    }
    Ok(best.max(0.0))
}

/// Maximizes a scalar function on `[a, b]` by golden-section search with
/// parabolic acceleration. Returns `(argmax, max)`.
pub fn brent_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105;
    let (mut a, mut b) = (a, b);
    let mut x = a + GOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = -f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..200 {
        let xm = 0.5 * (a + b);
        let tol1 = tol * x.abs() + 1e-15;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + if d >= 0.0 { tol1 } else { -tol1 } };
        let fu = -f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, -fx)
}

/// Draws a uniformly random admissible pair in `C^r`, used by the range sampler.
pub(crate) fn random_pair<R: Rng + ?Sized>(rng: &mut R, r: usize, q: QParam) -> (Vec<C64>, Vec<C64>) {
    let x: Vec<C64> = random::unit_vector(rng, r).iter().copied().collect();
    let s = q.complement();
    let mut y: Vec<C64> = x.iter().map(|xi| xi * q.value().conj()).collect();
    if s > 0.0 {
        let mut z: Vec<C64> = random::unit_vector(rng, r).iter().copied().collect();
        let ip: C64 = x.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
        for i in 0..r {
            z[i] -= x[i] * ip;
        }
        if sphere::norm(&z) < 1e-10 {
            z = orthogonal_unit(&x);
        }
        sphere::normalize(&mut z);
        for i in 0..r {
            y[i] += z[i] * s;
        }
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, r};

    fn jordan() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    fn swap() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn q(v: f64) -> QParam {
        QParam::real(v).unwrap()
    }

    #[test]
    fn qparam_validation() {
        assert!(QParam::new(c(0.6, 0.8)).is_ok());
        assert!(matches!(QParam::new(c(0.8, 0.8)), Err(Error::InvalidQ { .. })));
        assert_eq!(q(1.0).complement(), 0.0);
        assert!((q(0.6).complement() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn objective_examples() {
        let x = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        assert!((q_objective(&CMatrix::identity(2), &x, q(0.6)).unwrap() - 0.6).abs() < 1e-15);
        let e1 = CVector::from_vec(vec![r(1.0), r(0.0)]);
        // T e1 = 0 for the Jordan block; the columns are swapped in the row convention.
        let jt = jordan().adjoint();
        assert!((q_objective(&jt, &e1, q(0.0)).unwrap() - 1.0).abs() < 1e-15);
        // sin(2 theta) = q gives <Tx, x> = q and full residual weight.
        let th = 0.6f64.asin() / 2.0;
        let x = CVector::from_vec(vec![r(th.cos()), r(th.sin())]);
        assert!((q_objective(&swap(), &x, q(0.6)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn objective_requires_dimension_two() {
        let one = CMatrix::identity(1);
        let x = CVector::from_vec(vec![r(1.0)]);
        assert!(matches!(q_objective(&one, &x, q(0.5)), Err(Error::DimensionTooSmall { dim: 1 })));
        assert!((q_objective(&one, &x, q(1.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let m = CMatrix::from_rows(&[
            vec![c(0.3, 1.0), c(-1.0, 0.2), c(0.5, 0.5)],
            vec![c(0.0, -0.7), c(1.2, 0.0), c(0.1, 0.3)],
            vec![c(0.4, 0.4), c(-0.2, 0.9), c(-0.6, 0.1)],
        ]);
        let obj = QObjective::new(&m, q(0.4));
        let mut ws = Workspace::new(3);
        let mut x = vec![c(0.3, 0.2), c(-0.5, 0.4), c(0.1, -0.6)];
        sphere::normalize(&mut x);
        let mut g = vec![c(0.0, 0.0); 3];
        obj.value_grad(&x, &mut g, &mut ws);
        let h = 1e-6;
        // Only the tangential part of the gradient is meaningful on the sphere.
        for k in 0..3 {
            for dir in [c(1.0, 0.0), c(0.0, 1.0)] {
                let mut d = vec![c(0.0, 0.0); 3];
                d[k] = dir;
                let radial: f64 = x.iter().zip(&d).map(|(a, b)| (a.conj() * b).re).sum();
                for i in 0..3 {
                    d[i] -= x[i] * radial;
                }
                let step = |sgn: f64| {
                    let mut y: Vec<C64> = x.iter().zip(&d).map(|(a, b)| a + b * (sgn * h)).collect();
                    sphere::normalize(&mut y);
                    y
                };
                let fd = (obj.value(&step(1.0), &mut ws) - obj.value(&step(-1.0), &mut ws)) / (2.0 * h);
                let an: f64 = g.iter().zip(&d).map(|(a, b)| (a.conj() * b).re).sum();
                assert!((fd - an).abs() < 1e-6, "k={k} fd={fd} an={an}");
            }
        }
    }

    #[test]
    fn radius_examples() {
        let cfg = SolverCfg::default();
        let v = q_radius(None, &CMatrix::identity(2), q(0.3), &cfg).unwrap().value;
        assert!((v - 0.3).abs() < 1e-12);
        let v = q_radius(None, &jordan(), q(0.6), &cfg).unwrap().value;
        assert!((v - 0.9).abs() < 1e-9, "{v}");
        let v = q_radius(None, &swap(), q(0.6), &cfg).unwrap().value;
        assert!((v - 1.0).abs() < 1e-9, "{v}");
        let space = SemiSpace::with_default_tol(&CMatrix::from_real_diag(&[1.0, 1.0, 0.0])).unwrap();
        let t = CMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 5.0]]);
        let res = q_radius(Some(&space), &t, q(0.6), &cfg).unwrap();
        assert!((res.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn witness_is_admissible_and_attains_value() {
        let space = SemiSpace::with_default_tol(&CMatrix::from_real_diag(&[4.0, 1.0, 0.5, 0.0])).unwrap();
        let inner = CMatrix::from_rows(&[
            vec![c(0.3, 1.0), c(-1.0, 0.2), c(0.5, 0.5)],
            vec![c(0.0, -0.7), c(1.2, 0.0), c(0.1, 0.3)],
            vec![c(0.4, 0.4), c(-0.2, 0.9), c(-0.6, 0.1)],
        ]);
        let t = space.expand(&inner).unwrap();
        let qq = QParam::new(c(0.3, -0.4)).unwrap();
        let res = q_radius(Some(&space), &t, qq, &SolverCfg::default()).unwrap();
        let w = &res.witness;
        assert!((space.a_norm(&w.x).unwrap() - 1.0).abs() < 1e-10);
        assert!((space.a_norm(&w.y).unwrap() - 1.0).abs() < 1e-10);
        assert!((space.a_inner(&w.x, &w.y).unwrap() - qq.value()).norm() < 1e-10);
        let tx = t.mul_vec(&w.x);
        assert!((space.a_inner(&tx, &w.y).unwrap().norm() - res.value).abs() < 1e-9);
        assert!(res.oracle_lower <= res.value + 1e-9);
        assert!(res.value <= space.a_op_norm(&t).unwrap() + 1e-9);
    }

    #[test]
    fn unit_modulus_q_forces_partner() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 1.0), r(2.0)], vec![r(0.0), c(-1.0, 0.5)]]);
        let qq = QParam::new(C64::from_polar(1.0, 0.7)).unwrap();
        let res = q_radius(None, &m, qq, &SolverCfg::default()).unwrap();
        let expected_y = &res.witness.x * qq.value().conj();
        assert!((&res.witness.y - expected_y).norm() < 1e-15);
        assert!((res.value - classical_radius(&m).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn classical_radius_examples() {
        assert!((classical_radius(&jordan()).unwrap() - 0.5).abs() < 1e-12);
        assert!((classical_radius(&CMatrix::from_real_diag(&[-3.0, 2.0])).unwrap() - 3.0).abs() < 1e-12);
        assert!((classical_radius(&CMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_one_needs_unit_q() {
        let one = CMatrix::identity(1);
        assert!(matches!(
            q_radius(None, &one, q(0.5), &SolverCfg::default()),
            Err(Error::DimensionTooSmall { .. })
        ));
        assert!((q_radius(None, &one, q(1.0), &SolverCfg::default()).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unbounded_operator_rejected() {
        let space = SemiSpace::with_default_tol(&CMatrix::from_real_diag(&[1.0, 1.0, 0.0])).unwrap();
        let swap13 = CMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
        assert!(matches!(
            q_radius(Some(&space), &swap13, q(0.5), &SolverCfg::default()),
            Err(Error::NotABounded { .. })
        ));
    }

    #[test]
    fn brent_finds_interior_max() {
        let (x, v) = brent_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-8 && (v - 2.0).abs() < 1e-14);
    }
}
