//! Numerical laboratory for q-numerical radii in semi-Hilbertian spaces,
//! sectorial matrices, matrix means and operator monotone calculus.
//!
//! Module map:
//!
//! - [`matrix`], [`kernel`]: dense complex matrices and decompositions.
//! - [`semi`]: the `A`-weighted geometry (semi-inner product, `A`-adjoint,
//!   compression onto the range of `A`).
//! - [`qnr`]: q-numerical radius solver, classical numerical radius and
//!   q-numerical range sampling.
//! - [`sectorial`]: sector angles, membership tests and input generators.
//! - [`quad`], [`means`]: quadrature rules and matrix means of accretive
//!   matrices through their integral representations.

pub mod error;
pub mod kernel;
pub mod matrix;
pub mod means;
pub mod qnr;
pub mod quad;
pub mod random;
pub mod sectorial;
pub mod semi;

pub use error::{Error, Result};
pub use matrix::{c, r, CMatrix, CVector, C64};
