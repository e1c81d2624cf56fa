//! Dense complex matrices, Hermitian eigendecomposition, tensor products and
//! seeded Haar sampling.

mod eig;
mod matrix;
mod random;

use std::sync::OnceLock;

pub use eig::{eig_hermitian, eig_hermitian_with_tol, eigenvalues_hermitian, HermitianSpectrum};
pub use matrix::{tensor, tensor_vec, ComplexMatrix, Isometry};
pub use random::{
    complex_gaussian, gaussian_entries, haar_isometry, haar_isometry_with, haar_unitary,
    haar_unitary_with, random_unit_vector, rng_from_seed, SeededRng,
};

pub(crate) use matrix::check_dim;

/// Hermiticity tolerance (Frobenius distance between `M` and `M†`).
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Orthonormality and reconstruction tolerance.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Default cap on the dimension of any constructed matrix.
pub const DEFAULT_MAX_DIM: usize = 4096;
/// Environment variable that lowers the dimension cap.
pub const MAX_DIM_ENV: &str = "ENTLAB_MAX_DIM";

/// Effective dimension cap: `DEFAULT_MAX_DIM`, lowered by `ENTLAB_MAX_DIM` if set.
/// Read once per process.
pub fn max_dim() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v >= 1)
            .map_or(DEFAULT_MAX_DIM, |v| v.min(DEFAULT_MAX_DIM))
    })
}
