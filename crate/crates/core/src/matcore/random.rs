use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, Isometry};
use crate::error::{Error, Result};

/// The generator behind every seeded sampler. ChaCha20 (rand_chacha 0.9 stream),
/// keyed by the 64-bit seed; changing this type changes every seeded output.
pub type SeededRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian sample (independent N(0,1) real and imaginary parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Row-major `rows × cols` complex Gaussian matrix.
pub fn gaussian_entries<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<Complex64> {
    (0..rows * cols).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-distributed `n × n` unitary, a deterministic function of `(n, seed)`.
pub fn haar_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = rng_from_seed(seed);
    haar_unitary_with(n, &mut rng)
}

/// Haar unitary from QR of a Ginibre matrix, with the columns of Q rescaled by
/// the phases of diag(R).
pub fn haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::BadShape { rows: 0, cols: 0 });
    }
    super::matrix::check_dim(n)?;
    let g = gaussian_entries(n, n, rng);
    let qr = DMatrix::from_fn(n, n, |i, j| g[i * n + j]).qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..n)
        .map(|j| {
            let d = r[(j, j)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    Ok(ComplexMatrix::from_fn(n, |i, j| q[(i, j)] * phases[j]))
}

/// First `r` columns of `haar_unitary(m, seed)`.
pub fn haar_isometry(m: usize, r: usize, seed: u64) -> Result<Isometry> {
    let mut rng = rng_from_seed(seed);
    haar_isometry_with(m, r, &mut rng)
}

pub fn haar_isometry_with<R: Rng + ?Sized>(m: usize, r: usize, rng: &mut R) -> Result<Isometry> {
    if r == 0 || m < r {
        return Err(Error::BadShape { rows: m, cols: r });
    }
    let u = haar_unitary_with(m, rng)?;
    let mut entries = Vec::with_capacity(m * r);
    for i in 0..m {
        entries.extend_from_slice(&u.row(i)[..r]);
    }
    Ok(Isometry::from_vec_unchecked(m, r, entries))
}

/// Haar-random unit vector of length `n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v = gaussian_entries(n, 1, rng);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}
