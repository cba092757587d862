//! Local ascent on the unit sphere of `C^r`.
//!
//! The sphere is treated as the real manifold `S^{2r-1}`. Directions come from
//! a nonlinear conjugate-gradient recursion on the projected gradient; steps
//! are taken along great circles with a derivative-free bracketing line search.

use crate::matrix::C64;

/// Objective `F: S^{2r-1} -> R` with its Euclidean gradient `g`, in the sense
/// `dF = Re(g^* dx)`.
pub(crate) trait SphereObjective {
    fn dim(&self) -> usize;
    fn value(&self, x: &[C64], ws: &mut Workspace) -> f64;
    fn value_grad(&self, x: &[C64], grad: &mut [C64], ws: &mut Workspace) -> f64;
}

/// Scratch buffers shared by objective evaluations.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    pub tx: Vec<C64>,
    pub thx: Vec<C64>,
    pub res: Vec<C64>,
    pub aux: Vec<C64>,
}

impl Workspace {
    pub fn new(r: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); r];
        Workspace { tx: z.clone(), thx: z.clone(), res: z.clone(), aux: z }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AscentCfg {
    pub max_iter: usize,
    pub rel_tol: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct AscentResult {
    pub x: Vec<C64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn normalize(x: &mut [C64]) {
    let n = norm(x);
    if n > 0.0 {
        let inv = 1.0 / n;
        x.iter_mut().for_each(|z| *z *= inv);
    }
}

/// `Re(a^* b)`.
fn re_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p.re * q.re + p.im * q.im).sum()
}

/// Removes the radial component: `v - Re(x^* v) x`.
fn project(v: &mut [C64], x: &[C64]) {
    let c = re_dot(x, v);
    v.iter_mut().zip(x).for_each(|(vi, xi)| *vi -= *xi * c);
}

/// Point on the great circle through `x` with unit tangent `u`.
fn geodesic(x: &[C64], u: &[C64], theta: f64, out: &mut [C64]) {
    let (s, c) = theta.sin_cos();
    for i in 0..x.len() {
        out[i] = x[i] * c + u[i] * s;
    }
    normalize(out);
}

struct LineSearch<'a, O: SphereObjective> {
    obj: &'a O,
    x: &'a [C64],
    u: &'a [C64],
    buf: Vec<C64>,
}

impl<O: SphereObjective> LineSearch<'_, O> {
    fn eval(&mut self, theta: f64, ws: &mut Workspace) -> f64 {
        geodesic(self.x, self.u, theta, &mut self.buf);
        self.obj.value(&self.buf, ws)
    }

    /// Approximate maximizer of `phi(theta)` for `theta > 0`, given `phi(0) = f0`.
    fn run(&mut self, f0: f64, guess: f64, ws: &mut Workspace) -> Option<(f64, f64)> {
        const THETA_MAX: f64 = std::f64::consts::PI;
        let mut b = guess.clamp(1e-12, 1.0);
        let mut fb = self.eval(b, ws);
        let (mut a, mut fa) = (0.0, f0);
        let (mut c, mut fc);
        if fb > f0 {
            c = (2.0 * b).min(THETA_MAX);
            fc = self.eval(c, ws);
            while fc > fb && c < THETA_MAX {
                a = b;
                fa = fb;
                b = c;
                fb = fc;
                c = (2.0 * c).min(THETA_MAX);
                fc = self.eval(c, ws);
            }
            if fc > fb {
                return Some((c, fc));
            }
        } else {
            c = b;
            fc = fb;
            loop {
                b = c * 0.25;
                if b < 1e-15 {
                    return None;
                }
                fb = self.eval(b, ws);
                if fb > f0 {
                    break;
                }
                c = b;
                fc = fb;
            }
        }
        // Bracket a < b < c with fb >= fa, fb >= fc: parabolic steps with golden fallback.
        const GOLD: f64 = 0.381_966_011_250_105;
        for _ in 0..12 {
            if (c - a) <= 1e-5 * b.max(1e-12) {
                break;
            }
            let p = (b - a) * (fb - fc);
            let q = (b - c) * (fb - fa);
            let denom = 2.0 * (p - q);
            let mut trial = if denom.abs() > 1e-300 { b - ((b - a) * p - (b - c) * q) / denom } else { f64::NAN };
            let lo = a + 1e-3 * (c - a);
            let hi = c - 1e-3 * (c - a);
            if !(trial > lo && trial < hi) || (trial - b).abs() < 1e-9 * b {
                trial = if (b - a) > (c - b) { b - GOLD * (b - a) } else { b + GOLD * (c - b) };
            }
            let ft = self.eval(trial, ws);
            if ft > fb {
                if trial < b {
                    c = b;
                    fc = fb;
                } else {
                    a = b;
                    fa = fb;
                }
                b = trial;
                fb = ft;
            } else if trial < b {
                a = trial;
                fa = ft;
            } else {
                c = trial;
                fc = ft;
            }
        }
        Some((b, fb))
    }
}

/// Conjugate-gradient ascent from `x0`.
pub(crate) fn maximize<O: SphereObjective>(obj: &O, x0: &[C64], cfg: AscentCfg, ws: &mut Workspace) -> AscentResult {
    let r = obj.dim();
    let zero = C64::new(0.0, 0.0);
    let mut x = x0.to_vec();
    normalize(&mut x);
    let mut g = vec![zero; r];
    let mut f = obj.value_grad(&x, &mut g, ws);
    project(&mut g, &x);
    let mut d = g.clone();
    let mut u = vec![zero; r];
    let mut xn = vec![zero; r];
    let mut gn = vec![zero; r];
    let mut step = 0.2;
    let mut steepest = true;
    let mut since_restart = 0usize;
    let restart_every = 2 * r;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        let mut dn = norm(&d);
        let mut slope = if dn > 0.0 { re_dot(&g, &d) / dn } else { 0.0 };
        if !(slope > 0.0) && !steepest {
            d.copy_from_slice(&g);
            steepest = true;
            dn = norm(&d);
            slope = dn;
        }
        if dn <= 1e-14 * f.abs().max(1e-300) || !(slope > 0.0) {
            converged = true;
            break;
        }
        for i in 0..r {
            u[i] = d[i] / dn;
        }
        // Angle guess: last accepted step, scaled to the new direction length.
        let guess = step;
        let found = {
            let mut ls = LineSearch { obj, x: &x, u: &u, buf: vec![zero; r] };
            ls.run(f, guess, ws)
        };
        let Some((theta, _)) = found else {
            if steepest {
                converged = true;
                break;
            }
            d.copy_from_slice(&g);
            steepest = true;
            continue;
        };
        geodesic(&x, &u, theta, &mut xn);
        let fnew = obj.value_grad(&xn, &mut gn, ws);
        if fnew <= f {
            if steepest {
                converged = true;
                break;
            }
            d.copy_from_slice(&g);
            steepest = true;
            continue;
        }
        project(&mut gn, &xn);
        let improvement = fnew - f;
        step = theta.max(1e-10);
        // Polak-Ribiere+ with transport by projection.
        let gg = re_dot(&g, &g);
        let mut g_old_t = g.clone();
        project(&mut g_old_t, &xn);
        let mut d_t = d.clone();
        project(&mut d_t, &xn);
        let diff: Vec<C64> = gn.iter().zip(&g_old_t).map(|(a, b)| a - b).collect();
        let beta = if gg > 0.0 { (re_dot(&gn, &diff) / gg).max(0.0) } else { 0.0 };
        x.copy_from_slice(&xn);
        f = fnew;
        g.copy_from_slice(&gn);
        since_restart += 1;
        let small = improvement <= cfg.rel_tol * f.abs().max(1e-300);
        if small && steepest {
            converged = true;
            break;
        }
        if small || since_restart >= restart_every || beta == 0.0 {
            d.copy_from_slice(&g);
            steepest = true;
            since_restart = 0;
        } else {
            for i in 0..r {
                d[i] = g[i] + d_t[i] * beta;
            }
            steepest = false;
        }
    }
    AscentResult { x, value: f, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rayleigh quotient of a real diagonal matrix: maximum is the top entry.
    struct Rayleigh(Vec<f64>);

    impl SphereObjective for Rayleigh {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn value(&self, x: &[C64], _: &mut Workspace) -> f64 {
            x.iter().zip(&self.0).map(|(z, l)| l * z.norm_sqr()).sum()
        }
        fn value_grad(&self, x: &[C64], g: &mut [C64], ws: &mut Workspace) -> f64 {
            for i in 0..x.len() {
                g[i] = x[i] * (2.0 * self.0[i]);
            }
            self.value(x, ws)
        }
    }

    #[test]
    fn finds_top_eigenvalue_of_rayleigh_quotient() {
        let obj = Rayleigh(vec![1.0, -2.0, 3.0, 0.5]);
        let x0 = vec![C64::new(0.5, 0.1), C64::new(0.5, -0.3), C64::new(0.1, 0.2), C64::new(0.5, 0.0)];
        let mut ws = Workspace::new(4);
        let res = maximize(&obj, &x0, AscentCfg { max_iter: 200, rel_tol: 1e-14 }, &mut ws);
        assert!((res.value - 3.0).abs() < 1e-10, "{}", res.value);
        assert!((norm(&res.x) - 1.0).abs() < 1e-14);
    }
}
