//! Quadrature rules on `[0, 1]` for integrands with algebraic endpoint weights.
//!
//! Gauss-Jacobi rules come from the Golub-Welsch eigenvalue method; a
//! tanh-substitution trapezoid rule serves as an independent fallback.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::beta::ln_beta;

use crate::error::{Error, Result};

/// Nodes `s_i` in `[0, 1]` with their complements `1 - s_i` and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub comps: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        (0..self.len()).map(|i| self.weights[i] * f(self.nodes[i], self.comps[i])).sum()
    }
}

/// `B(a, b)`.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// `int_0^1 s^p (1-s)^q ds`.
pub fn weight_mass(p: f64, q: f64) -> f64 {
    beta(p + 1.0, q + 1.0)
}

type Key = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss rule for `int_0^1 g(s) s^p (1-s)^q ds` with `n` nodes, `p, q > -1`.
pub fn gauss_jacobi01(n: usize, p: f64, q: f64) -> Result<Arc<Rule>> {
    if n == 0 {
        return Err(Error::InvalidParameter("quadrature needs at least one node".into()));
    }
    if !(p > -1.0 && q > -1.0) {
        return Err(Error::InvalidMeasure(format!("endpoint exponents must exceed -1, got ({p}, {q})")));
    }
    let key = (n, p.to_bits(), q.to_bits());
    if let Some(rule) = cache().lock().expect("quadrature cache").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(golub_welsch(n, q, p)?);
    cache().lock().expect("quadrature cache").insert(key, rule.clone());
    Ok(rule)
}

/// Gauss-Legendre rule on `[0, 1]`.
pub fn gauss_legendre01(n: usize) -> Result<Arc<Rule>> {
    gauss_jacobi01(n, 0.0, 0.0)
}

/// Golub-Welsch on `[-1, 1]` for the weight `(1-x)^a (1+x)^b`, mapped to `[0, 1]`
/// through `s = (1 + x) / 2`, so `a` is the `(1-s)` exponent and `b` the `s` exponent.
fn golub_welsch(n: usize, a: f64, b: f64) -> Result<Rule> {
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    diag[0] = (b - a) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag[k] = (b * b - a * a) / (s * (s + 2.0));
    }
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let beta = if k == 1 {
            // The general formula is 0/0 when a + b = -1; this is its cancelled form.
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[k - 1] = beta.sqrt();
    }
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jm[(k, k)] = diag[k];
        if k + 1 < n {
            jm[(k, k + 1)] = off[k];
            jm[(k + 1, k)] = off[k];
        }
    }
    let eig = SymmetricEigen::new(jm);
    // Weight on [0, 1]: int s^b (1-s)^a ds.
    let mu0 = weight_mass(b, a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut nodes = Vec::with_capacity(n);
    let mut comps = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &k in &order {
        let x = eig.eigenvalues[k].clamp(-1.0, 1.0);
        let v0 = eig.eigenvectors[(0, k)];
        nodes.push(0.5 * (1.0 + x));
        comps.push(0.5 * (1.0 - x));
        weights.push(mu0 * v0 * v0);
    }
    if weights.iter().chain(&nodes).any(|v| !v.is_finite()) {
        return Err(Error::InvalidMeasure(format!("Jacobi rule ({a}, {b}) with {n} nodes is not finite")));
    }
    Ok(Rule { nodes, comps, weights })
}

/// Trapezoid rule after `s = (1 + tanh v) / 2` for `int_0^1 g(s) s^p (1-s)^q ds`.
///
/// The weight `s^p (1-s)^q ds` becomes `2 s^{p+1} (1-s)^{q+1} dv`, which decays
/// exponentially in both directions; `n` sets the step as `h = 4 / sqrt(n)`.
pub fn tanh_rule(n: usize, p: f64, q: f64) -> Result<Rule> {
    if !(p > -1.0 && q > -1.0) {
        return Err(Error::InvalidMeasure(format!("endpoint exponents must exceed -1, got ({p}, {q})")));
    }
    let h = 4.0 / (n.max(4) as f64).sqrt();
    // Cut where the transformed weight is below 1e-17 on each side.
    let lo = 19.5 / (p + 1.0);
    let hi = 19.5 / (q + 1.0);
    let k_lo = (lo / h).ceil() as i64;
    let k_hi = (hi / h).ceil() as i64;
    let mut rule = Rule { nodes: vec![], comps: vec![], weights: vec![] };
    for k in -k_lo..=k_hi {
        let v = k as f64 * h;
        // s = 1 / (1 + e^{-2v}), 1 - s = 1 / (1 + e^{2v}) without cancellation.
        let s = 1.0 / (1.0 + (-2.0 * v).exp());
        let sc = 1.0 / (1.0 + (2.0 * v).exp());
        let w = 2.0 * h * (p + 1.0).mul_add(s.ln(), (q + 1.0) * sc.ln()).exp();
        if w > 0.0 {
            rule.nodes.push(s);
            rule.comps.push(sc);
            rule.weights.push(w);
        }
    }
    Ok(rule)
}
