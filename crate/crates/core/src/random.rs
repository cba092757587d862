//! Seeded random sources. All randomness in the crate flows through here.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{CMatrix, CVector, C64};

pub type SeededRng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a path of indices into an independent stream seed.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix(base), |acc, &p| splitmix(acc ^ splitmix(p.wrapping_add(0x632B_E59B_D9B4_E019))))
}

/// Stable 64-bit hash of a label, for mixing string identifiers into seeds.
pub fn label_seed(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

pub fn rng_from(base: u64, path: &[u64]) -> SeededRng {
    SeededRng::seed_from_u64(derive_seed(base, path))
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniform random unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| complex_normal(rng));
        let nv = v.norm();
        if nv > 1e-12 {
            return v / C64::new(nv, 0.0);
        }
    }
}

/// Complex Ginibre matrix with standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_na(DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng)))
}

/// Random Hermitian matrix `(G + G^*)/2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = ginibre(rng, n, n);
    (&g + &g.adjoint()).scale_re(0.5)
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = ginibre(rng, n, n).into_na();
    let qr = g.qr();
    let mut q = qr.q();
    let rm = qr.r();
    for j in 0..n {
        let d = rm[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    CMatrix::from_na(q)
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
