use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::max_dim;
use crate::error::{Error, Result};

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Wire form: `{"dim": n, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<RawMatrix> for ComplexMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        let entries = raw
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(raw.dim, entries)
    }
}

impl From<ComplexMatrix> for RawMatrix {
    fn from(m: ComplexMatrix) -> Self {
        RawMatrix {
            dim: m.dim,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    let cap = max_dim();
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        ComplexMatrix { dim, entries }
    }

    /// Builds a matrix from real row vectors, mostly for tests and literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(dim, entries)
    }

    /// `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal lengths");
        let dim = u.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                entries.push(a * b.conj());
            }
        }
        ComplexMatrix { dim, entries }
    }

    /// `|v><v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        Self::outer(v, v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance between `self` and `other`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "distance between unequal dims");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖M − M†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).distance(&Self::identity(self.dim))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Adds `w · other` in place.
    pub fn add_scaled(&mut self, w: f64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * w;
        }
    }

    /// Adds `w · |v><v|` in place.
    pub fn add_projector(&mut self, w: f64, v: &[Complex64]) {
        assert_eq!(self.dim, v.len());
        let n = self.dim;
        for i in 0..n {
            let vi = v[i] * w;
            if vi == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &mut self.entries[i * n..(i + 1) * n];
            for (r, vj) in row.iter_mut().zip(v) {
                *r += vi * vj.conj();
            }
        }
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product of unequal dims");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rrow = &rhs.entries[k * n..(k + 1) * n];
                let orow = &mut out.entries[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product; row `(a, b)` maps to `a·dim(B) + b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .ok_or(Error::DimensionOverflow { dim: usize::MAX, cap: max_dim() })?;
    check_dim(dim)?;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for ia in 0..a.dim {
        for ja in 0..a.dim {
            let x = a[(ia, ja)];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..b.dim {
                let row = ia * b.dim + ib;
                for jb in 0..b.dim {
                    entries[row * dim + ja * b.dim + jb] = x * b[(ib, jb)];
                }
            }
        }
    }
    Ok(ComplexMatrix { dim, entries })
}

/// Kronecker product of two vectors.
pub fn tensor_vec(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

/// Column-orthonormal `rows × cols` matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIsometry", into = "RawIsometry")]
pub struct Isometry {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIsometry {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<RawIsometry> for Isometry {
    type Error = Error;

    fn try_from(raw: RawIsometry) -> Result<Self> {
        let entries = raw
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        Isometry::new(raw.rows, raw.cols, entries)
    }
}

impl From<Isometry> for RawIsometry {
    fn from(w: Isometry) -> Self {
        RawIsometry {
            rows: w.rows,
            cols: w.cols,
            entries: w.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl Isometry {
    /// Validates shape and column orthonormality (within 1e-10).
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if cols == 0 || rows < cols {
            return Err(Error::BadShape { rows, cols });
        }
        check_dim(rows)?;
        if rows.checked_mul(cols) != Some(entries.len()) {
            return Err(Error::InvalidMatrix(format!(
                "expected {rows}x{cols} entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let w = Isometry { rows, cols, entries };
        let defect = w.orthonormality_defect();
        if defect > super::ORTHONORMAL_TOL {
            return Err(Error::InvalidMatrix(format!(
                "columns not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(w)
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Isometry { rows, cols, entries }
    }

    /// The embedding `[I_cols; 0]`.
    pub fn embedding(rows: usize, cols: usize) -> Result<Self> {
        let mut entries = vec![Complex64::new(0.0, 0.0); rows * cols];
        for i in 0..cols.min(rows) {
            entries[i * cols + i] = Complex64::new(1.0, 0.0);
        }
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// `W†W` as a `cols × cols` matrix.
    pub fn gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, |a, b| {
            (0..self.rows).map(|r| self.get(r, a).conj() * self.get(r, b)).sum()
        })
    }

    /// `‖W†W − I‖_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        self.gram().distance(&ComplexMatrix::identity(self.cols))
    }

    /// Applies the unitary `[[c, −conj(s)], [s, c]]` (with `c` real and
    /// `c² + |s|² = 1`) to rows `k` and `l`. Column orthonormality is preserved.
    pub fn rotate_rows(&mut self, k: usize, l: usize, c: f64, s: Complex64) {
        assert_ne!(k, l);
        let cols = self.cols;
        for j in 0..cols {
            let a = self.entries[k * cols + j];
            let b = self.entries[l * cols + j];
            self.entries[k * cols + j] = a * c - s.conj() * b;
            self.entries[l * cols + j] = s * a + b * c;
        }
    }
}
