use std::cmp::Ordering;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Eigenvalues within this distance are treated as one cluster when ordering.
const TIE_TOL: f64 = 1e-12;

/// Spectral data of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k])
                .sum()
        })
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues and phase-fixed
/// eigenvectors.
///
/// Each eigenvector is rotated so that its first component of (near-)maximal
/// modulus is real and positive. Within a cluster of equal eigenvalues the
/// vectors are ordered lexicographically by their phase-fixed components, so
/// the output is a deterministic function of the input.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    eig_hermitian_with_tol(m, HERMITIAN_TOL)
}

pub fn eig_hermitian_with_tol(m: &ComplexMatrix, hermitian_tol: f64) -> Result<HermitianSpectrum> {
    let distance = m.hermiticity_defect();
    if !(distance <= hermitian_tol) {
        return Err(Error::NotHermitian { distance });
    }
    let n = m.dim();
    let herm = m.hermitian_part();
    let max_iter = 1000 * n.max(1);
    let eig = SymmetricEigen::try_new(herm.to_nalgebra(), f64::EPSILON, max_iter)
        .ok_or_else(|| Error::NumericalFailure(format!("eigensolver did not converge (dim {n})")))?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite())
        || eig.eigenvectors.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NumericalFailure("non-finite eigendecomposition".into()));
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let col: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
            (eig.eigenvalues[k], phase_fix(col))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Reorder within clusters of (numerically) equal eigenvalues.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].0 - pairs[end - 1].0 <= TIE_TOL {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|a, b| lex_cmp(&a.1, &b.1));
        }
        start = end;
    }

    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let mut vecs = ComplexMatrix::zeros(n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        for (i, z) in v.iter().enumerate() {
            vecs[(i, k)] = *z;
        }
    }
    Ok(HermitianSpectrum { eigenvalues, eigenvectors: vecs })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let distance = m.hermiticity_defect();
    if !(distance <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian { distance });
    }
    let n = m.dim();
    let eig = SymmetricEigen::try_new(m.hermitian_part().to_nalgebra(), f64::EPSILON, 1000 * n.max(1))
        .ok_or_else(|| Error::NumericalFailure(format!("eigensolver did not converge (dim {n})")))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if vals.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
    }
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn phase_fix(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    // First component within a relative 1e-8 of the maximum modulus.
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-8))
        .unwrap_or(0);
    let p = v[pivot];
    let phase = p.conj() / p.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
    v
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        // Descending so that vectors concentrated on early indices come first.
        let o = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}
