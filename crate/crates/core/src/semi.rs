//! The `A`-weighted geometry induced by a positive semidefinite metric `A`.
//!
//! Every `A`-weighted quantity is reduced to a classical one on the range of
//! `A`: with `A = U diag(s^2) U^*` restricted to its range, the map
//! `rho(x) = S U^* x` is an isometry from the seminormed space onto `C^r`, and
//! an `A`-bounded operator `T` acts there as `S U^* T U S^{-1}`.

use nalgebra::Schur;

use crate::error::{Error, Result};
use crate::kernel::{self, spectral_norm};
use crate::matrix::{CMatrix, CVector, C64};

/// Default relative threshold below which eigenvalues of the metric count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Relative residual tolerance for the `A`-boundedness and `A`-adjoint checks.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// A validated positive semidefinite metric together with its range data.
#[derive(Debug, Clone)]
pub struct SemiSpace {
    metric: CMatrix,
    rank: usize,
    /// Orthonormal basis of `R(A)`, one column per retained eigenvalue.
    basis: CMatrix,
    /// `sqrt(lambda_i)` for the retained eigenvalues.
    scale: Vec<f64>,
    proj: CMatrix,
    rank_tol: f64,
    metric_pinv: CMatrix,
    metric_sqrt_norm: f64,
}

/// The reduction of an operator to the range space.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedOp {
    pub mat: CMatrix,
}

impl SemiSpace {
    /// Validates `a` and builds its range data.
    pub fn new(a: &CMatrix, rank_tol: f64) -> Result<Self> {
        a.ensure_square()?;
        if !(rank_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("rank_tol must be positive, got {rank_tol}")));
        }
        let eig = kernel::herm_eig(a)?;
        let lmax = eig.max();
        if lmax <= 0.0 {
            return Err(Error::RankTooSmall { rank: 0 });
        }
        if eig.min() < -kernel::PSD_TOL * lmax {
            return Err(Error::NotPsd { lambda_min: eig.min() });
        }
        // Descending eigenvalues; ties keep the solver's order so that A = I gives the standard basis.
        let mut kept: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > rank_tol * lmax).collect();
        kept.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]).then(a.cmp(&b)));
        let rank = kept.len();
        if rank < 2 {
            return Err(Error::RankTooSmall { rank });
        }
        let cols: Vec<CVector> = kept.iter().map(|&k| eig.vectors.column(k)).collect();
        let basis = CMatrix::from_columns(&cols);
        let scale: Vec<f64> = kept.iter().map(|&k| eig.values[k].sqrt()).collect();
        let proj = &basis * &basis.adjoint();
        let inv_sq: Vec<C64> = scale.iter().map(|s| C64::new(1.0 / (s * s), 0.0)).collect();
        let metric_pinv = basis.sandwich(&CMatrix::from_diag(&inv_sq));
        let metric = (a + a.adjoint()).scale_re(0.5);
        Ok(SemiSpace { metric, rank, basis, scale, proj, rank_tol, metric_pinv, metric_sqrt_norm: lmax.sqrt() })
    }

    pub fn with_default_tol(a: &CMatrix) -> Result<Self> {
        Self::new(a, DEFAULT_RANK_TOL)
    }

    /// The Euclidean space `A = I`.
    pub fn identity(n: usize) -> Self {
        Self::new(&CMatrix::identity(n), DEFAULT_RANK_TOL).expect("identity metric")
    }

    pub fn dim(&self) -> usize {
        self.metric.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn metric(&self) -> &CMatrix {
        &self.metric
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn proj(&self) -> &CMatrix {
        &self.proj
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Pseudoinverse of the metric, consistent with the detected rank.
    pub fn metric_pinv(&self) -> &CMatrix {
        &self.metric_pinv
    }

    fn check_vec(&self, x: &CVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim().to_string(), got: x.len().to_string() });
        }
        Ok(())
    }

    fn check_op(&self, t: &CMatrix) -> Result<()> {
        let n = self.dim();
        if t.rows() != n || t.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", t.rows(), t.cols()),
            });
        }
        Ok(())
    }

    /// `<x, y>_A = <A x, y>`, linear in `x`, conjugate-linear in `y`.
    pub fn a_inner(&self, x: &CVector, y: &CVector) -> Result<C64> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(y.dotc(&self.metric.mul_vec(x)))
    }

    pub fn a_norm(&self, x: &CVector) -> Result<f64> {
        Ok(self.a_inner(x, x)?.re.max(0.0).sqrt())
    }

    /// `rho(x) = S U^* x`, the isometric image of `x` in `C^r`.
    pub fn reduce(&self, x: &CVector) -> CVector {
        let mut v = self.basis.adjoint().mul_vec(x);
        for (vi, s) in v.iter_mut().zip(&self.scale) {
            *vi *= *s;
        }
        v
    }

    /// A preimage of `v` under [`SemiSpace::reduce`], lying in `R(A)`.
    pub fn lift(&self, v: &CVector) -> CVector {
        let mut w = v.clone();
        for (wi, s) in w.iter_mut().zip(&self.scale) {
            *wi /= *s;
        }
        self.basis.mul_vec(&w)
    }

    /// Residual `||A^{1/2} T (I - P)|| / (||A^{1/2}|| ||T||)`.
    pub fn boundedness_residual(&self, t: &CMatrix) -> Result<f64> {
        self.check_op(t)?;
        let tn = spectral_norm(t);
        if tn == 0.0 {
            return Ok(0.0);
        }
        let n = self.dim();
        let comp = CMatrix::identity(n) - &self.proj;
        // ||A^{1/2} M|| = ||S U^* M|| since U has orthonormal columns.
        let su = self.scaled_basis_adjoint();
        let res = spectral_norm(&(&su * t * &comp));
        Ok(res / (self.metric_sqrt_norm * tn))
    }

    fn scaled_basis_adjoint(&self) -> CMatrix {
        let s: Vec<C64> = self.scale.iter().map(|&v| C64::new(v, 0.0)).collect();
        &CMatrix::from_diag(&s) * &self.basis.adjoint()
    }

    /// Whether `T` maps `N(A)` into `N(A)`, with the relative residual.
    pub fn is_a_bounded(&self, t: &CMatrix) -> Result<(bool, f64)> {
        let res = self.boundedness_residual(t)?;
        Ok((res <= RESIDUAL_TOL, res))
    }

    fn ensure_bounded(&self, t: &CMatrix) -> Result<()> {
        let (ok, residual) = self.is_a_bounded(t)?;
        if ok {
            Ok(())
        } else {
            Err(Error::NotABounded { residual })
        }
    }

    /// The reduced solution `X = A^+ T^* A` of `A X = T^* A`.
    pub fn sharp(&self, t: &CMatrix) -> Result<CMatrix> {
        self.check_op(t)?;
        let n = self.dim();
        let tn = spectral_norm(t);
        if tn == 0.0 {
            return Ok(CMatrix::zeros(n, n));
        }
        let an = self.metric_sqrt_norm * self.metric_sqrt_norm;
        let ts_a = &t.adjoint() * &self.metric;
        let comp = CMatrix::identity(n) - &self.proj;
        let pre = spectral_norm(&(&comp * &ts_a)) / (an * tn);
        if pre > RESIDUAL_TOL {
            return Err(Error::NoAAdjoint { residual: pre });
        }
        let x = &self.metric_pinv * &ts_a;
        let eq_res = spectral_norm(&(&self.metric * &x - &ts_a)) / (an * tn);
        let xn = spectral_norm(&x);
        let range_res = if xn > 0.0 { spectral_norm(&(&comp * &x)) / xn } else { 0.0 };
        if eq_res > RESIDUAL_TOL || range_res > RESIDUAL_TOL {
            return Err(Error::NoAAdjoint { residual: eq_res.max(range_res) });
        }
        Ok(x)
    }

    /// `A`-Cartesian decomposition `(Re_A T, Im_A T)`.
    pub fn cartesian(&self, t: &CMatrix) -> Result<(CMatrix, CMatrix)> {
        let ts = self.sharp(t)?;
        let re = (t + &ts).scale_re(0.5);
        let im = (t - &ts).scale(C64::new(0.0, -0.5));
        Ok((re, im))
    }

    /// Whether `A T` is Hermitian within tolerance.
    pub fn is_a_selfadjoint(&self, t: &CMatrix) -> Result<bool> {
        self.check_op(t)?;
        let at = &self.metric * t;
        let scale = (self.metric_sqrt_norm * self.metric_sqrt_norm * spectral_norm(t)).max(f64::MIN_POSITIVE);
        Ok(spectral_norm(&(&at - at.adjoint())) <= RESIDUAL_TOL * scale)
    }

    /// Reduction `S U^* T U S^{-1}` of an `A`-bounded operator.
    pub fn compress(&self, t: &CMatrix) -> Result<CompressedOp> {
        self.check_op(t)?;
        self.ensure_bounded(t)?;
        let r = self.rank;
        let inner = &self.basis.adjoint() * t * &self.basis;
        let mut m = inner.into_na();
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] *= self.scale[i] / self.scale[j];
            }
        }
        Ok(CompressedOp { mat: CMatrix::from_na(m) })
    }

    /// Operator `T` acting on `C^n` whose compression is `mat` and which
    /// annihilates `N(A)`.
    pub fn expand(&self, mat: &CMatrix) -> Result<CMatrix> {
        if mat.rows() != self.rank || mat.cols() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.rank),
                got: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        let mut m = mat.as_na().clone();
        for i in 0..self.rank {
            for j in 0..self.rank {
                m[(i, j)] *= self.scale[j] / self.scale[i];
            }
        }
        Ok(&self.basis * &CMatrix::from_na(m) * &self.basis.adjoint())
    }

    /// `||T||_A`.
    pub fn a_op_norm(&self, t: &CMatrix) -> Result<f64> {
        Ok(spectral_norm(&self.compress(t)?.mat))
    }

    /// `r_A(T)`, the largest eigenvalue modulus of the compression.
    pub fn a_spectral_radius(&self, t: &CMatrix) -> Result<f64> {
        Ok(spectral_radius(&self.compress(t)?.mat))
    }

    /// The sequence `||T^k||_A^{1/k}` for `k = 1..=kmax`.
    pub fn power_norm_sequence(&self, t: &CMatrix, kmax: u32) -> Result<Vec<f64>> {
        let tt = self.compress(t)?.mat;
        let mut acc = tt.clone();
        let mut out = Vec::with_capacity(kmax as usize);
        for k in 1..=kmax {
            out.push(spectral_norm(&acc).powf(1.0 / k as f64));
            acc = &acc * &tt;
        }
        Ok(out)
    }
}

/// Largest eigenvalue modulus of a square matrix (complex Schur form).
pub fn spectral_radius(m: &CMatrix) -> f64 {
    let schur = Schur::new(m.as_na().clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)].norm()).fold(0.0, f64::max)
}
