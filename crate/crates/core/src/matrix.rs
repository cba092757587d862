//! Dense complex matrices and their JSON wire format.
//!
//! [`CMatrix`] wraps an `nalgebra` dense matrix of `Complex64` and is the
//! carrier for every operator in the crate. The JSON form is row-major:
//!
//! ```json
//! {"rows": 2, "cols": 2, "data": [[0,0],[1,0],[0,0],[0,0]]}
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidData { expected: rows * cols, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix(DMatrix::from_row_slice(rows, cols, &data)))
    }

    /// Builds a matrix from nested rows.
    ///
    /// Panics on ragged input; intended for literals in code and tests.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        let data: Vec<C64> = rows.iter().flatten().copied().collect();
        CMatrix::new(n, m, data).expect("invalid matrix literal")
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diag(d: &[C64]) -> Self {
        CMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let d: Vec<C64> = d.iter().map(|&x| r(x)).collect();
        Self::from_diag(&d)
    }

    /// Wraps an `nalgebra` matrix. Entries are assumed finite.
    pub fn from_na(m: DMatrix<C64>) -> Self {
        debug_assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        CMatrix(m)
    }

    /// Column matrix built from `cols` vectors.
    pub fn from_columns(cols: &[CVector]) -> Self {
        CMatrix(DMatrix::from_columns(cols))
    }

    pub fn as_na(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_na(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NonSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn column(&self, j: usize) -> CVector {
        self.0.column(j).into_owned()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> CMatrix {
        CMatrix(self.0.map(|z| z * s))
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn dist(&self, other: &CMatrix) -> f64 {
        (self - other).frobenius()
    }

    /// `self * other * self^*`.
    pub fn sandwich(&self, inner: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &inner.0 * self.0.adjoint())
    }

    pub fn powi(&self, k: u32) -> CMatrix {
        let n = self.rows();
        let mut acc = DMatrix::identity(n, n);
        for _ in 0..k {
            acc = &acc * &self.0;
        }
        CMatrix(acc)
    }

    pub fn to_json_value(&self) -> MatrixJson {
        MatrixJson::from(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("matrix serialization")
    }

    pub fn from_json_str(s: &str) -> Result<CMatrix> {
        let raw: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        CMatrix::try_from(raw)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Matrix JSON wire format: row-major `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            data: m.to_row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        let data = raw.data.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        CMatrix::new(raw.rows, raw.cols, data)
    }
}

impl Serialize for CMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        CMatrix::try_from(raw).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(self.0 $op rhs.0)
            }
        }
        impl $tr<&CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                CMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<C64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: C64) -> CMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: f64) -> CMatrix {
        self.scale_re(rhs)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

/// Euclidean inner product, linear in the first argument: `<x, y> = y^* x`.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}

pub fn vnorm(x: &CVector) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
