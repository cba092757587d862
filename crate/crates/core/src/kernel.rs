//! Decompositions and spectral functions on [`CMatrix`].
//!
//! Hermitian eigendecompositions and SVDs are delegated to `nalgebra`; every
//! Hermitian input is symmetrized as `(M + M^*)/2` first so that rounding in
//! upstream constructions does not leak into complex eigenvalues.

use nalgebra::{DMatrix, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, C64};

/// Relative Hermitian tolerance for [`herm_eig`].
pub const HERM_TOL: f64 = 1e-10;
/// Relative tolerance for positive semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-10;
/// Relative accretivity margin: `lambda_min(Re M) > ACC_TOL * ||M||`.
pub const ACC_TOL: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `V diag(f(lambda)) V^*`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let v = self.vectors.as_na();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fl = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= fl;
            }
        }
        CMatrix::from_na(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| x)
    }
}

/// Hermitian part `(M + M^*)/2`.
pub fn re_part(m: &CMatrix) -> Result<CMatrix> {
    m.ensure_square()?;
    Ok(symmetrize(m))
}

/// Skew part `(M - M^*)/(2i)`, Hermitian.
pub fn im_part(m: &CMatrix) -> Result<CMatrix> {
    m.ensure_square()?;
    let d = m - m.adjoint();
    Ok(d.scale(C64::new(0.0, -0.5)))
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale_re(0.5)
}

/// Hermitian eigendecomposition.
pub fn herm_eig(m: &CMatrix) -> Result<HermEigen> {
    m.ensure_square()?;
    let scale = m.frobenius();
    let residual = (m - m.adjoint()).frobenius();
    if residual > HERM_TOL * scale.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::NotHermitian { residual: residual / scale });
    }
    Ok(herm_eig_unchecked(&symmetrize(m)))
}

/// Eigendecomposition of a matrix already known to be Hermitian.
pub(crate) fn herm_eig_unchecked(m: &CMatrix) -> HermEigen {
    let eig = SymmetricEigen::new(m.as_na().clone());
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let cols: Vec<_> = order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
    HermEigen { values, vectors: CMatrix::from_columns(&cols) }
}

/// Extreme eigenvalues `(lambda_min, lambda_max)` of the Hermitian part of `m`.
pub fn re_extremes(m: &CMatrix) -> (f64, f64) {
    let e = herm_eig_unchecked(&symmetrize(m));
    (e.min(), e.max())
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let sv = m.as_na().clone().singular_values();
    let mut v: Vec<f64> = sv.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.max_abs() == 0.0 {
        return 0.0;
    }
    singular_values(m)[0]
}

/// Default rank cutoff `n * eps` used by [`pinv_default`].
pub fn default_rtol(m: &CMatrix) -> f64 {
    m.rows().max(m.cols()) as f64 * f64::EPSILON
}

/// Moore-Penrose pseudoinverse; singular values below `rtol * sigma_max` are dropped.
pub fn pinv(m: &CMatrix, rtol: f64) -> Result<CMatrix> {
    if !(rtol > 0.0) {
        return Err(Error::InvalidParameter(format!("rtol must be positive, got {rtol}")));
    }
    let (rows, cols) = (m.rows(), m.cols());
    if m.max_abs() == 0.0 {
        return Ok(CMatrix::zeros(cols, rows));
    }
    let svd = SVD::new(m.as_na().clone(), true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let cut = rtol * smax;
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let mut out = DMatrix::<C64>::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            let vk = vt.row(k).adjoint();
            let uk = u.column(k);
            out += (vk * uk.adjoint()) * C64::new(1.0 / s, 0.0);
        }
    }
    Ok(CMatrix::from_na(out))
}

pub fn pinv_default(m: &CMatrix) -> CMatrix {
    pinv(m, default_rtol(m)).expect("positive default tolerance")
}

/// `M^p` for positive semidefinite `M` via its eigendecomposition.
pub fn psd_power(m: &CMatrix, p: f64) -> Result<CMatrix> {
    let e = herm_eig(m)?;
    let scale = e.max().abs().max(e.min().abs());
    if e.min() < -PSD_TOL * scale {
        return Err(Error::NotPsd { lambda_min: e.min() });
    }
    if p < 0.0 && e.min() <= PSD_TOL * scale {
        return Err(Error::SingularForNegativePower { lambda_min: e.min() });
    }
    if p == 1.0 {
        return Ok(symmetrize(m));
    }
    Ok(e.map(|lam| lam.max(0.0).powf(p)))
}

/// Applies a real scalar function to a Hermitian matrix through its eigenvalues.
pub fn herm_apply<F: Fn(f64) -> f64>(m: &CMatrix, f: F) -> Result<CMatrix> {
    Ok(herm_eig(m)?.map(f))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min(m: &CMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.min())
}

pub fn lambda_max(m: &CMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.max())
}

/// General inverse by LU with partial pivoting.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.ensure_square()?;
    m.as_na().clone().try_inverse().map(CMatrix::from_na).ok_or(Error::Singular)
}

/// Checks that `Re(M)` is positive definite with margin [`ACC_TOL`]`* ||M||`.
pub fn ensure_accretive(m: &CMatrix) -> Result<f64> {
    m.ensure_square()?;
    let (lmin, _) = re_extremes(m);
    let scale = m.frobenius();
    if !(lmin > ACC_TOL * scale) {
        return Err(Error::NotAccretive { lambda_min: lmin });
    }
    Ok(lmin)
}

/// Inverse of an accretive matrix.
pub fn accretive_inv(m: &CMatrix) -> Result<CMatrix> {
    ensure_accretive(m)?;
    inverse(m)
}
