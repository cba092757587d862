//! Sector angles of accretive matrices, numerical-range support functions and
//! seeded generators for the input families used by the verification suites.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, spectral_norm};
use crate::matrix::{CMatrix, C64};
use crate::random::{self, rng_from, SeededRng};

/// Largest accepted condition number of `Re(A)` in [`sector_angle`].
pub const MAX_COND: f64 = 1e12;
/// Relative slack of the Loewner tests in [`is_in_sector`].
pub const SECTOR_TOL: f64 = 1e-12;

/// Smallest sector containing the numerical range of an accretive matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorCert {
    pub alpha_min: f64,
    pub re_min_eig: f64,
    pub rho: f64,
}

/// Minimal half-angle `alpha` with `W(A)` inside the sector `S_alpha`.
///
/// With `H = Re A`, `K = Im A`, the angle is `arctan` of the spectral radius of
/// `H^{-1/2} K H^{-1/2}`.
pub fn sector_angle(a: &CMatrix) -> Result<SectorCert> {
    kernel::ensure_accretive(a)?;
    let h = kernel::re_part(a)?;
    let k = kernel::im_part(a)?;
    let eh = kernel::herm_eig(&h)?;
    let cond = eh.max() / eh.min();
    if cond > MAX_COND {
        return Err(Error::IllConditioned { cond });
    }
    let h_isqrt = eh.map(|l| 1.0 / l.sqrt());
    let pencil = h_isqrt.sandwich(&k);
    let ep = kernel::herm_eig(&(&pencil + pencil.adjoint()).scale_re(0.5))?;
    let rho = ep.max().abs().max(ep.min().abs());
    Ok(SectorCert { alpha_min: rho.atan(), re_min_eig: eh.min(), rho })
}

/// Loewner test `tan(alpha) Re A +- Im A >= 0` with `Re A > 0`.
pub fn is_in_sector(a: &CMatrix, alpha: f64) -> bool {
    if !a.is_square() || !a.is_finite() {
        return false;
    }
    let h = (a + a.adjoint()).scale_re(0.5);
    let (re_min, _) = kernel::re_extremes(a);
    if !(re_min > 0.0) {
        return false;
    }
    if alpha >= FRAC_PI_2 {
        return true;
    }
    if alpha < 0.0 {
        return false;
    }
    let k = (a - a.adjoint()).scale(C64::new(0.0, -0.5));
    let tol = SECTOR_TOL * spectral_norm(a);
    let th = h.scale_re(alpha.tan());
    let lo_plus = kernel::re_extremes(&(&th + &k)).0;
    let lo_minus = kernel::re_extremes(&(&th - &k)).0;
    lo_plus >= -tol && lo_minus >= -tol
}

/// Support function `lambda_max(Re(e^{-i theta} T))` and the boundary point
/// `<T x, x>` of the numerical range at the top eigenvector `x`.
pub fn numrange_support(t: &CMatrix, theta: f64) -> Result<(f64, C64)> {
    t.ensure_square()?;
    let rot = t.scale(C64::from_polar(1.0, -theta));
    let e = kernel::herm_eig_unchecked(&(&rot + rot.adjoint()).scale_re(0.5));
    let x = e.vectors.column(t.rows() - 1);
    let point = x.dotc(&t.mul_vec(&x));
    Ok((e.max(), point))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Psd,
    Sectorial,
    Accretive,
    Hermitian,
    Ginibre,
    DominatedQuadruple,
}

impl GenKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "psd" => GenKind::Psd,
            "sectorial" => GenKind::Sectorial,
            "accretive" => GenKind::Accretive,
            "hermitian" => GenKind::Hermitian,
            "ginibre" => GenKind::Ginibre,
            "dominated_quadruple" => GenKind::DominatedQuadruple,
            other => return Err(Error::InvalidSpec(format!("unknown kind '{other}'"))),
        })
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub rank: Option<usize>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, seed: u64) -> Self {
        GenSpec { kind, n, alpha: 0.0, rank: None, seed }
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("n must be at least 2, got {}", self.n)));
        }
        if !(0.0..FRAC_PI_2).contains(&self.alpha) {
            return Err(Error::InvalidSpec(format!("alpha must lie in [0, pi/2), got {}", self.alpha)));
        }
        if let Some(r) = self.rank {
            if r > self.n {
                return Err(Error::InvalidSpec(format!("rank {r} exceeds n = {}", self.n)));
            }
            if self.kind != GenKind::Psd {
                return Err(Error::InvalidSpec("rank applies to kind psd only".into()));
            }
        }
        Ok(())
    }
}

/// Output of [`gen`]: one matrix, or `(A, B, C, D)` for dominated quadruples.
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Single(CMatrix),
    Quadruple([CMatrix; 4]),
}

impl Generated {
    pub fn single(self) -> Option<CMatrix> {
        match self {
            Generated::Single(m) => Some(m),
            Generated::Quadruple(_) => None,
        }
    }

    pub fn quadruple(self) -> Option<[CMatrix; 4]> {
        match self {
            Generated::Quadruple(q) => Some(q),
            Generated::Single(_) => None,
        }
    }

    pub fn to_json_string(&self) -> String {
        match self {
            Generated::Single(m) => m.to_json_string(),
            Generated::Quadruple(q) => serde_json::to_string(q).expect("matrices serialize"),
        }
    }
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale_re(0.5)
}

/// `U diag(lambda) U^*` with Haar `U`; the first `rank` eigenvalues are drawn from `[lo, hi]`.
fn random_psd(rng: &mut SeededRng, n: usize, rank: usize, lo: f64, hi: f64) -> CMatrix {
    let u = random::unitary(rng, n);
    let d: Vec<f64> = (0..n).map(|k| if k < rank { random::uniform(rng, lo, hi) } else { 0.0 }).collect();
    hermitian_part(&u.sandwich(&CMatrix::from_real_diag(&d)))
}

/// Hermitian matrix with spectral norm `u`, `u` uniform in `[0.9, 1]`.
fn random_contraction(rng: &mut SeededRng, n: usize) -> CMatrix {
    let g = random::hermitian(rng, n);
    let nrm = spectral_norm(&g).max(f64::MIN_POSITIVE);
    let u = random::uniform(rng, 0.9, 1.0);
    g.scale_re(u / nrm)
}

/// `H + i tan(alpha) H^{1/2} C H^{1/2}` for a PD `H`.
fn sectorial_from(rng: &mut SeededRng, h: &CMatrix, alpha: f64) -> Result<CMatrix> {
    if alpha == 0.0 {
        return Ok(h.clone());
    }
    let n = h.rows();
    let c = random_contraction(rng, n);
    let hs = kernel::psd_power(h, 0.5)?;
    let k = hermitian_part(&hs.sandwich(&c));
    Ok(h + k.scale(C64::new(0.0, alpha.tan())))
}

/// Deterministic generator for the input families.
pub fn gen(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = rng_from(spec.seed, &[spec.kind.tag(), n as u64]);
    let rng = &mut rng;
    Ok(match spec.kind {
        GenKind::Psd => Generated::Single(random_psd(rng, n, spec.rank.unwrap_or(n), 0.5, 2.0)),
        GenKind::Hermitian => Generated::Single(random::hermitian(rng, n)),
        GenKind::Ginibre => Generated::Single(random::ginibre(rng, n, n)),
        GenKind::Accretive => {
            let h = random_psd(rng, n, n, 0.5, 2.0);
            let k = random::hermitian(rng, n);
            Generated::Single(&h + k.scale(C64::new(0.0, 1.0)))
        }
        GenKind::Sectorial => {
            let h = random_psd(rng, n, n, 0.5, 2.0);
            Generated::Single(sectorial_from(rng, &h, spec.alpha)?)
        }
        GenKind::DominatedQuadruple => {
            let ha = random_psd(rng, n, n, 0.5, 2.0);
            let hb = random_psd(rng, n, n, 0.5, 2.0);
            let rank_c = 1 + (rng_index(rng, n));
            let rank_d = 1 + (rng_index(rng, n));
            let hc = &ha + random_psd(rng, n, rank_c, 0.0, 1.0);
            let hd = &hb + random_psd(rng, n, rank_d, 0.0, 1.0);
            let a = sectorial_from(rng, &ha, spec.alpha)?;
            let b = sectorial_from(rng, &hb, spec.alpha)?;
            let c = sectorial_from(rng, &hermitian_part(&hc), spec.alpha)?;
            let d = sectorial_from(rng, &hermitian_part(&hd), spec.alpha)?;
            Generated::Quadruple([a, b, c, d])
        }
    })
}

fn rng_index(rng: &mut SeededRng, n: usize) -> usize {
    use rand::Rng;
    rng.random_range(0..n)
}

/// Convenience for single-matrix kinds.
pub fn gen_matrix(spec: &GenSpec) -> Result<CMatrix> {
    gen(spec)?
        .single()
        .ok_or_else(|| Error::InvalidSpec("kind produces a quadruple, not a single matrix".into()))
}
