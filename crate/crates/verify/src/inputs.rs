//! Seeded input families for the predicates.

use serde::Serialize;
use sha2::{Digest, Sha256};

use qradius_core::kernel;
use qradius_core::random::{self, derive_seed, rng_from};
use qradius_core::sectorial::{gen, gen_matrix, sector_angle, GenKind, GenSpec};
use qradius_core::semi::SemiSpace;
use qradius_core::{CMatrix, Result, C64};

/// Input family a predicate is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    General,
    ASelfadjoint,
    Sectorial,
    Psd,
    DominatedQuadruple,
    FixedDemo,
}

/// Metric used by the `A`-weighted predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Identity,
    Definite,
    Deficient,
}

/// Everything fixed per trial before the parameter sweep.
#[derive(Debug, Clone, Copy)]
pub struct TrialSetup {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    /// Sector target; zero outside the sectorial families.
    pub alpha: f64,
    /// Exponent of `f = x^p` for predicates with a fixed operator monotone function.
    pub f_power: f64,
    /// Convex weight for predicates that fix it per trial.
    pub gamma: f64,
    pub metric: MetricKind,
}

/// Concrete inputs of one trial.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub n: usize,
    /// `None` means the Euclidean geometry `A = I`.
    pub metric: Option<CMatrix>,
    pub mats: Vec<CMatrix>,
    pub alpha: f64,
    /// Largest certified sector angle among the inputs, when they are sectorial.
    pub alpha_true: Option<f64>,
}

impl Inputs {
    fn plain(n: usize, mats: Vec<CMatrix>) -> Self {
        Inputs { n, metric: None, mats, alpha: 0.0, alpha_true: None }
    }

    pub fn space(&self) -> Result<Option<SemiSpace>> {
        self.metric.as_ref().map(SemiSpace::with_default_tol).transpose()
    }

    pub(crate) fn certify(&mut self) {
        let angles: Option<Vec<f64>> = self.mats.iter().map(|m| sector_angle(m).ok().map(|c| c.alpha_min)).collect();
        self.alpha_true = angles.map(|a| a.into_iter().fold(0.0, f64::max));
    }

    /// SHA-256 of the trial identity and every input entry.
    pub fn digest(&self, id: &str, seed: u64) -> Sha256 {
        let mut h = Sha256::new();
        h.update(id.as_bytes());
        h.update(seed.to_le_bytes());
        h.update((self.n as u64).to_le_bytes());
        h.update(self.alpha.to_bits().to_le_bytes());
        if let Some(a) = &self.metric {
            h.update(b"metric");
            hash_matrix(&mut h, a);
        }
        for m in &self.mats {
            hash_matrix(&mut h, m);
        }
        h
    }
}

fn hash_matrix(h: &mut Sha256, m: &CMatrix) {
    h.update((m.rows() as u64).to_le_bytes());
    for z in m.to_row_major() {
        h.update(z.re.to_bits().to_le_bytes());
        h.update(z.im.to_bits().to_le_bytes());
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn spec_seed(setup: &TrialSetup, k: u64) -> u64 {
    derive_seed(setup.seed, &[k])
}

fn ginibre(setup: &TrialSetup, k: u64) -> Result<CMatrix> {
    gen_matrix(&GenSpec::new(GenKind::Ginibre, setup.n, spec_seed(setup, k)))
}

fn metric(setup: &TrialSetup) -> Result<Option<CMatrix>> {
    let n = setup.n;
    let seed = spec_seed(setup, 100);
    Ok(match setup.metric {
        MetricKind::Identity => None,
        MetricKind::Definite => Some(gen_matrix(&GenSpec::new(GenKind::Psd, n, seed))?),
        MetricKind::Deficient => Some(gen_matrix(&GenSpec::new(GenKind::Psd, n, seed).rank(n - 1))?),
    })
}

/// Drops the block of `T` that maps `N(A)` into `R(A)`, leaving an `A`-bounded operator
/// that also admits an `A`-adjoint.
pub(crate) fn make_bounded(space: &SemiSpace, t: &CMatrix) -> CMatrix {
    let p = space.proj();
    let q = CMatrix::identity(t.rows()) - p;
    t - &(p * t * &q)
}

fn semi_family(setup: &TrialSetup, count: usize) -> Result<Inputs> {
    let a = metric(setup)?;
    let mut mats = Vec::with_capacity(count);
    let space = a.as_ref().map(SemiSpace::with_default_tol).transpose()?;
    for k in 0..count {
        let t = ginibre(setup, k as u64)?;
        mats.push(match &space {
            Some(s) => make_bounded(s, &t),
            None => t,
        });
    }
    Ok(Inputs { n: setup.n, metric: a, mats, alpha: 0.0, alpha_true: None })
}

/// One `A`-bounded operator under the rotating metric.
pub fn draw_semi(setup: &TrialSetup) -> Result<Inputs> {
    semi_family(setup, 1)
}

/// Two `A`-bounded operators under the rotating metric.
pub fn draw_semi_pair(setup: &TrialSetup) -> Result<Inputs> {
    semi_family(setup, 2)
}

/// `Re_A(T)` of a random `A`-bounded operator.
pub fn draw_selfadjoint(setup: &TrialSetup) -> Result<Inputs> {
    let mut inp = semi_family(setup, 1)?;
    if let Some(s) = inp.space()? {
        inp.mats[0] = s.cartesian(&inp.mats[0])?.0;
    } else {
        inp.mats[0] = kernel::re_part(&inp.mats[0])?;
    }
    Ok(inp)
}

/// Weighted shift with weights `w`, padded by zeros to `n x n`.
pub fn weighted_shift(n: usize, w: &[f64]) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for (k, &wk) in w.iter().enumerate().take(n.saturating_sub(1)) {
        m.set(k, k + 1, C64::new(wk, 0.0));
    }
    m
}

/// Odd trials carry a unitarily rotated weighted shift, for which the lower
/// bound `w^2 >= ||T^# T + T T^#|| / 4` is an equality at `|q| = 1`.
/// With a definite metric the shift is transported by `A^{-1/2} (.) A^{1/2}`.
pub fn draw_near_equality(setup: &TrialSetup) -> Result<Inputs> {
    if setup.index % 2 == 0 {
        return draw_semi(setup);
    }
    let n = setup.n;
    let mut rng = rng_from(setup.seed, &[0x5348_4946]);
    let w: Vec<f64> = if n == 2 {
        vec![random::uniform(&mut rng, 0.5, 1.5)]
    } else {
        (0..2).map(|_| random::uniform(&mut rng, 0.5, 1.5)).collect()
    };
    let u = random::unitary(&mut rng, n);
    let t = u.sandwich(&weighted_shift(n, &w));
    let a = match setup.metric {
        MetricKind::Identity => None,
        _ => Some(gen_matrix(&GenSpec::new(GenKind::Psd, n, spec_seed(setup, 100)))?),
    };
    let t = match &a {
        Some(a) => &(&kernel::psd_power(a, -0.5)? * &t) * &kernel::psd_power(a, 0.5)?,
        None => t,
    };
    Ok(Inputs { n, metric: a, mats: vec![t], alpha: 0.0, alpha_true: None })
}

/// One random operator at `A = I`.
pub fn draw_plain(setup: &TrialSetup) -> Result<Inputs> {
    Ok(Inputs::plain(setup.n, vec![ginibre(setup, 0)?]))
}

/// Two random operators at `A = I`.
pub fn draw_plain_pair(setup: &TrialSetup) -> Result<Inputs> {
    Ok(Inputs::plain(setup.n, vec![ginibre(setup, 0)?, ginibre(setup, 1)?]))
}

fn sectorial_family(setup: &TrialSetup, count: usize) -> Result<Inputs> {
    let mats = (0..count)
        .map(|k| gen_matrix(&GenSpec::new(GenKind::Sectorial, setup.n, spec_seed(setup, k as u64)).alpha(setup.alpha)))
        .collect::<Result<Vec<_>>>()?;
    let mut inp = Inputs { n: setup.n, metric: None, mats, alpha: setup.alpha, alpha_true: None };
    inp.certify();
    Ok(inp)
}

/// One matrix in the sector `S_alpha`.
pub fn draw_sectorial(setup: &TrialSetup) -> Result<Inputs> {
    sectorial_family(setup, 1)
}

/// Two matrices in the sector `S_alpha`.
pub fn draw_sectorial_pair(setup: &TrialSetup) -> Result<Inputs> {
    sectorial_family(setup, 2)
}

/// Two positive definite matrices.
pub fn draw_psd_pair(setup: &TrialSetup) -> Result<Inputs> {
    let mats = (0..2)
        .map(|k| gen_matrix(&GenSpec::new(GenKind::Psd, setup.n, spec_seed(setup, k))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Inputs::plain(setup.n, mats))
}

/// `(A, B, C, D)` in `S_alpha` with `Re A <= Re C` and `Re B <= Re D`.
pub fn draw_quadruple(setup: &TrialSetup) -> Result<Inputs> {
    let spec = GenSpec::new(GenKind::DominatedQuadruple, setup.n, spec_seed(setup, 0)).alpha(setup.alpha);
    let quad = gen(&spec)?.quadruple().expect("quadruple kind");
    let mut inp = Inputs { n: setup.n, metric: None, mats: quad.to_vec(), alpha: setup.alpha, alpha_true: None };
    inp.certify();
    Ok(inp)
}

/// The fixed pair `T = [[0,1],[1,0]]`, `S = 2I`.
pub fn draw_demo(_setup: &TrialSetup) -> Result<Inputs> {
    let t = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let s = CMatrix::identity(2).scale_re(2.0);
    Ok(Inputs::plain(2, vec![t, s]))
}

/// Positive `(A, B, C, D)` with `A <= C`, `B <= D`.
pub fn draw_axiom_monotone(setup: &TrialSetup) -> Result<Inputs> {
    draw_quadruple(&TrialSetup { alpha: 0.0, ..*setup })
}

/// Positive `A`, `B` and an invertible `K = U diag(d) V` with `d` in `[0.5, 2]`.
pub fn draw_axiom_congruence(setup: &TrialSetup) -> Result<Inputs> {
    let mut inp = draw_psd_pair(setup)?;
    let mut rng = rng_from(setup.seed, &[0x434f_4e47]);
    let u = random::unitary(&mut rng, setup.n);
    let v = random::unitary(&mut rng, setup.n);
    let d: Vec<f64> = (0..setup.n).map(|_| random::uniform(&mut rng, 0.5, 2.0)).collect();
    inp.mats.push(&(&u * &CMatrix::from_real_diag(&d)) * &v);
    Ok(inp)
}

/// No matrices: the identity axiom only needs the dimension.
pub fn draw_axiom_identity(setup: &TrialSetup) -> Result<Inputs> {
    Ok(Inputs::plain(setup.n, vec![]))
}
