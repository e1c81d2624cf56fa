//! Multipartite density matrices and pure states with positionally labeled
//! subsystems.
//!
//! Subsystems are indexed from 0 in the order of [`SubsystemDims`]; a full
//! basis index is the row-major composition of the per-subsystem indices,
//! subsystem 0 most significant (the [`tensor`] convention).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    self, check_dim, eig_hermitian, eigenvalues_hermitian, gaussian_entries, rng_from_seed,
    tensor, tensor_vec, ComplexMatrix,
};

/// Trace and Hermiticity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-8;
/// Norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are treated as zero when sizing supports.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Tolerance for [`reduced_spectra_match`].
pub const SPECTRUM_MATCH_TOL: f64 = 1e-9;

/// Ordered subsystem dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SubsystemDims(Vec<usize>);

impl TryFrom<Vec<usize>> for SubsystemDims {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        SubsystemDims::new(v)
    }
}

impl From<SubsystemDims> for Vec<usize> {
    fn from(d: SubsystemDims) -> Self {
        d.0
    }
}

impl SubsystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidState("empty subsystem list".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidState(format!("zero subsystem dimension in {dims:?}")));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::DimensionOverflow { dim: usize::MAX, cap: matcore::max_dim() })?;
        check_dim(total)?;
        Ok(SubsystemDims(dims))
    }

    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    fn select(&self, idx: &[usize]) -> SubsystemDims {
        SubsystemDims(idx.iter().map(|&i| self.0[i]).collect())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix on labeled subsystems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensity", into = "RawDensity")]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: SubsystemDims,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDensity {
    dims: SubsystemDims,
    mat: ComplexMatrix,
}

impl TryFrom<RawDensity> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: RawDensity) -> Result<Self> {
        DensityMatrix::new(raw.mat, raw.dims)
    }
}

impl From<DensityMatrix> for RawDensity {
    fn from(d: DensityMatrix) -> Self {
        RawDensity { dims: d.dims, mat: d.mat }
    }
}

impl DensityMatrix {
    /// Validates dimensions, Hermiticity, unit trace and positivity (all within 1e-8).
    pub fn new(mat: ComplexMatrix, dims: SubsystemDims) -> Result<Self> {
        if mat.dim() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "matrix dim {} vs subsystem product {}",
                mat.dim(),
                dims.total()
            )));
        }
        let defect = mat.hermiticity_defect();
        if !(defect <= STATE_TOL) {
            return Err(Error::NotHermitian { distance: defect });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        // Entries of a unit-trace PSD matrix are bounded by 1 in modulus.
        if mat.max_abs() > 1.0 + STATE_TOL {
            return Err(Error::InvalidState("entry exceeds unit modulus".into()));
        }
        let min = eigenvalues_hermitian(&mat)?.first().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { mat, dims })
    }

    /// Single-subsystem state.
    pub fn from_matrix(mat: ComplexMatrix) -> Result<Self> {
        let dims = SubsystemDims::single(mat.dim())?;
        Self::new(mat, dims)
    }

    pub(crate) fn from_parts_unchecked(mat: ComplexMatrix, dims: SubsystemDims) -> Self {
        debug_assert_eq!(mat.dim(), dims.total());
        DensityMatrix { mat, dims }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix {
            mat: ComplexMatrix::projector(&psi.vec),
            dims: psi.dims.clone(),
        }
    }

    /// `I/d` on the given subsystems.
    pub fn maximally_mixed(dims: SubsystemDims) -> Self {
        let d = dims.total();
        DensityMatrix {
            mat: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            dims,
        }
    }

    /// Diagonal single-subsystem state, e.g. `diag(0.9, 0.1)`.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::from_diag(probs))
    }

    /// `ρ_a ⊗ ρ_b` with concatenated subsystem lists.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let mut dims = self.dims.0.clone();
        dims.extend_from_slice(&other.dims.0);
        let dims = SubsystemDims::new(dims)?;
        Ok(DensityMatrix { mat: tensor(&self.mat, &other.mat)?, dims })
    }

    /// Same matrix, different subsystem labelling (same total dimension).
    pub fn with_dims(&self, dims: SubsystemDims) -> Result<Self> {
        if dims.total() != self.dims.total() {
            return Err(Error::DimMismatch(format!(
                "cannot relabel dim {} as {:?}",
                self.dims.total(),
                dims.as_slice()
            )));
        }
        Ok(DensityMatrix { mat: self.mat.clone(), dims })
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn arity(&self) -> usize {
        self.dims.arity()
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigenvalues_hermitian(&self.mat)
    }

    /// Number of eigenvalues above `cutoff`.
    pub fn numerical_rank(&self, cutoff: f64) -> Result<usize> {
        Ok(self.eigenvalues()?.iter().filter(|&&x| x > cutoff).count())
    }

    /// Marginal on the `kept` subsystems (in their original order).
    pub fn marginal(&self, kept: &[usize]) -> Result<DensityMatrix> {
        let traced: Vec<usize> = (0..self.arity()).filter(|i| !kept.contains(i)).collect();
        if traced.is_empty() {
            check_subset(kept, self.arity())?;
            return Ok(self.clone());
        }
        partial_trace(self, &traced)
    }
}

/// Unit vector on labeled subsystems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPure", into = "RawPure")]
pub struct PureState {
    vec: Vec<Complex64>,
    dims: SubsystemDims,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPure {
    dims: SubsystemDims,
    vec: Vec<[f64; 2]>,
}

impl TryFrom<RawPure> for PureState {
    type Error = Error;

    fn try_from(raw: RawPure) -> Result<Self> {
        let vec = raw.vec.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        PureState::new(vec, raw.dims)
    }
}

impl From<PureState> for RawPure {
    fn from(p: PureState) -> Self {
        RawPure {
            dims: p.dims,
            vec: p.vec.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl PureState {
    pub fn new(vec: Vec<Complex64>, dims: SubsystemDims) -> Result<Self> {
        if vec.len() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "vector length {} vs subsystem product {}",
                vec.len(),
                dims.total()
            )));
        }
        if vec.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = vec_norm(&vec);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(PureState { vec, dims })
    }

    /// Rescales `vec` to unit norm.
    pub fn normalized(mut vec: Vec<Complex64>, dims: SubsystemDims) -> Result<Self> {
        let norm = vec_norm(&vec);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        for z in vec.iter_mut() {
            *z /= norm;
        }
        Self::new(vec, dims)
    }

    pub(crate) fn from_parts_unchecked(vec: Vec<Complex64>, dims: SubsystemDims) -> Self {
        PureState { vec, dims }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dims: SubsystemDims, index: usize) -> Result<Self> {
        let n = dims.total();
        if index >= n {
            return Err(Error::InvalidState(format!("basis index {index} out of range {n}")));
        }
        let mut vec = vec![Complex64::new(0.0, 0.0); n];
        vec[index] = Complex64::new(1.0, 0.0);
        Ok(PureState { vec, dims })
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut dims = self.dims.0.clone();
        dims.extend_from_slice(&other.dims.0);
        let dims = SubsystemDims::new(dims)?;
        Ok(PureState { vec: tensor_vec(&self.vec, &other.vec), dims })
    }

    pub fn with_dims(&self, dims: SubsystemDims) -> Result<Self> {
        if dims.total() != self.vec.len() {
            return Err(Error::DimMismatch("relabel changes total dimension".into()));
        }
        Ok(PureState { vec: self.vec.clone(), dims })
    }

    pub fn vec(&self) -> &[Complex64] {
        &self.vec
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced state on `kept`, computed directly from the amplitudes.
    pub fn marginal(&self, kept: &[usize]) -> Result<DensityMatrix> {
        check_subset(kept, self.dims.arity())?;
        let mat = reduce_vector(&self.vec, self.dims.as_slice(), kept);
        Ok(DensityMatrix::from_parts_unchecked(mat, self.dims.select(kept)))
    }
}

/// `(|00⟩ + |11⟩)/√2` on two qubits.
pub fn bell_state() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    PureState::from_parts_unchecked(
        vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)],
        SubsystemDims(vec![2, 2]),
    )
}

/// `(|000⟩ + |111⟩)/√2` on three qubits.
pub fn ghz_state() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut vec = vec![Complex64::new(0.0, 0.0); 8];
    vec[0] = Complex64::new(h, 0.0);
    vec[7] = Complex64::new(h, 0.0);
    PureState::from_parts_unchecked(vec, SubsystemDims(vec![2, 2, 2]))
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_subset(idx: &[usize], arity: usize) -> Result<()> {
    let mut seen = vec![false; arity];
    for &i in idx {
        if i >= arity || seen[i] {
            return Err(Error::BadSubsystemSet { traced: idx.to_vec(), arity });
        }
        seen[i] = true;
    }
    Ok(())
}

/// For every full basis index, its index within the `kept` subsystems and
/// within the complement (both in original subsystem order).
fn split_indices(dims: &[usize], kept: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let total: usize = dims.iter().product();
    let mut keep_idx = vec![0usize; total];
    let mut rest_idx = vec![0usize; total];
    let mut digits = vec![0usize; dims.len()];
    for full in 0..total {
        let (mut k, mut r) = (0usize, 0usize);
        for (s, &d) in dims.iter().enumerate() {
            if kept.contains(&s) {
                k = k * d + digits[s];
            } else {
                r = r * d + digits[s];
            }
        }
        keep_idx[full] = k;
        rest_idx[full] = r;
        // Increment the mixed-radix counter, last subsystem fastest.
        for s in (0..dims.len()).rev() {
            digits[s] += 1;
            if digits[s] < dims[s] {
                break;
            }
            digits[s] = 0;
        }
    }
    (keep_idx, rest_idx)
}

/// Reduced density matrix of the (unnormalized) vector `vec` on `kept`.
pub(crate) fn reduce_vector(vec: &[Complex64], dims: &[usize], kept: &[usize]) -> ComplexMatrix {
    let dk: usize = kept.iter().map(|&i| dims[i]).product();
    let dr = vec.len() / dk;
    let (keep_idx, rest_idx) = split_indices(dims, kept);
    // Reshape to a dk × dr matrix M; the marginal is M M†.
    let mut m = vec![Complex64::new(0.0, 0.0); dk * dr];
    for (full, z) in vec.iter().enumerate() {
        m[keep_idx[full] * dr + rest_idx[full]] = *z;
    }
    let mut out = ComplexMatrix::zeros(dk);
    for a in 0..dk {
        let ra = &m[a * dr..(a + 1) * dr];
        for b in a..dk {
            let rb = &m[b * dr..(b + 1) * dr];
            let s: Complex64 = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
            out[(a, b)] = s;
            out[(b, a)] = s.conj();
        }
    }
    out
}

/// Traces out the subsystems in `traced` (0-based), keeping the rest in order.
pub fn partial_trace(rho: &DensityMatrix, traced: &[usize]) -> Result<DensityMatrix> {
    let arity = rho.arity();
    let bad = || Error::BadSubsystemSet { traced: traced.to_vec(), arity };
    if traced.is_empty() || traced.len() >= arity {
        return Err(bad());
    }
    check_subset(traced, arity).map_err(|_| bad())?;
    let kept: Vec<usize> = (0..arity).filter(|i| !traced.contains(i)).collect();
    let dims = rho.dims.as_slice();
    let dk: usize = kept.iter().map(|&i| dims[i]).product();
    let dt = rho.dim() / dk;
    let (keep_idx, rest_idx) = split_indices(dims, &kept);
    // groups[t][a] = full index with traced part t and kept part a.
    let mut groups = vec![0usize; dt * dk];
    for full in 0..rho.dim() {
        groups[rest_idx[full] * dk + keep_idx[full]] = full;
    }
    let mut out = ComplexMatrix::zeros(dk);
    for t in 0..dt {
        let g = &groups[t * dk..(t + 1) * dk];
        for (a, &ia) in g.iter().enumerate() {
            for (b, &ib) in g.iter().enumerate() {
                out[(a, b)] += rho.mat[(ia, ib)];
            }
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(out, rho.dims.select(&kept)))
}

/// Purification `Σ_i √p_i |e_i⟩⊗|i⟩` of `rho` viewed as a single system.
///
/// The ancilla dimension equals the number of eigenvalues above
/// [`RANK_CUTOFF`]; ancilla index 0 carries the largest weight.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let spec = eig_hermitian(rho.mat())?;
    let d = rho.dim();
    let support: Vec<usize> = (0..d).rev().filter(|&k| spec.eigenvalues[k] > RANK_CUTOFF).collect();
    let r = support.len().max(1);
    let mut vec = vec![Complex64::new(0.0, 0.0); d * r];
    for (i, &k) in support.iter().enumerate() {
        let w = spec.eigenvalues[k].sqrt();
        for a in 0..d {
            vec[a * r + i] = spec.eigenvectors[(a, k)] * w;
        }
    }
    let dims = SubsystemDims::new(vec![d, r])?;
    PureState::normalized(vec, dims)
}

/// Outcome of comparing the two reduced spectra of a bipartite pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectraMatch {
    pub matches: bool,
    pub max_gap: f64,
}

/// Compares the sorted nonzero spectra of both marginals of a bipartite pure state.
pub fn reduced_spectra_match(psi: &PureState) -> Result<SpectraMatch> {
    if psi.dims.arity() != 2 {
        return Err(Error::BadArity { expected: 2, found: psi.dims.arity() });
    }
    let nonzero = |m: &ComplexMatrix| -> Result<Vec<f64>> {
        let mut v: Vec<f64> = eigenvalues_hermitian(m)?
            .into_iter()
            .filter(|&x| x > RANK_CUTOFF)
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(v)
    };
    let s1 = nonzero(psi.marginal(&[0])?.mat())?;
    let s2 = nonzero(psi.marginal(&[1])?.mat())?;
    let n = s1.len().max(s2.len());
    let at = |s: &[f64], i: usize| s.get(i).copied().unwrap_or(0.0);
    let max_gap = (0..n).map(|i| (at(&s1, i) - at(&s2, i)).abs()).fold(0.0, f64::max);
    Ok(SpectraMatch { matches: max_gap <= SPECTRUM_MATCH_TOL, max_gap })
}

/// `G·G†/Tr(G·G†)` with `G` a seeded `product(dims) × rank` complex Gaussian.
pub fn random_density(dims: &SubsystemDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let d = dims.total();
    if rank == 0 || rank > d {
        return Err(Error::BadRank { rank, max: d });
    }
    let mut rng = rng_from_seed(seed);
    let g = gaussian_entries(d, rank, &mut rng);
    let mut mat = ComplexMatrix::zeros(d);
    for c in 0..rank {
        let col: Vec<Complex64> = (0..d).map(|r| g[r * rank + c]).collect();
        mat.add_projector(1.0, &col);
    }
    let tr = mat.trace().re;
    let mat = mat.scale(1.0 / tr).hermitian_part();
    Ok(DensityMatrix::from_parts_unchecked(mat, dims.clone()))
}

/// Haar-random pure state on `dims`.
pub fn random_pure(dims: &SubsystemDims, seed: u64) -> PureState {
    let mut rng = rng_from_seed(seed);
    let vec = matcore::random_unit_vector(dims.total(), &mut rng);
    PureState::from_parts_unchecked(vec, dims.clone())
}

/// Weights and local factors of a finitely separable state `Σ ν_k ρ₁^k ⊗ ρ₂^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableSpec {
    pub weights: Vec<f64>,
    pub factors: Vec<(DensityMatrix, DensityMatrix)>,
}

/// Tolerance on the sum of mixture weights.
pub const WEIGHT_TOL: f64 = 1e-10;

pub(crate) fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::WeightMismatch("no weights".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::WeightMismatch(format!("weight {w} is not positive")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::WeightMismatch(format!("weights sum to {sum}")));
    }
    Ok(())
}

impl SeparableSpec {
    pub fn new(weights: Vec<f64>, factors: Vec<(DensityMatrix, DensityMatrix)>) -> Result<Self> {
        let spec = SeparableSpec { weights, factors };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_weights(&self.weights)?;
        if self.weights.len() != self.factors.len() {
            return Err(Error::WeightMismatch(format!(
                "{} weights for {} factor pairs",
                self.weights.len(),
                self.factors.len()
            )));
        }
        let (d1, d2) = self.local_dims();
        if self.factors.iter().any(|(a, b)| a.dim() != d1 || b.dim() != d2) {
            return Err(Error::DimMismatch("factor dimensions differ across terms".into()));
        }
        Ok(())
    }

    /// `(d₁, d₂)` of the first term.
    pub fn local_dims(&self) -> (usize, usize) {
        self.factors.first().map_or((0, 0), |(a, b)| (a.dim(), b.dim()))
    }
}

/// `Σ_k ν_k ρ₁^k ⊗ ρ₂^k` on dims `[d₁, d₂]`.
pub fn separable_mixture(spec: &SeparableSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    let (d1, d2) = spec.local_dims();
    let dims = SubsystemDims::new(vec![d1, d2])?;
    let mut mat = ComplexMatrix::zeros(dims.total());
    for (w, (a, b)) in spec.weights.iter().zip(&spec.factors) {
        mat.add_scaled(*w, &tensor(a.mat(), b.mat())?);
    }
    Ok(DensityMatrix::from_parts_unchecked(mat, dims))
}

/// Reorders subsystems so that output subsystem `i` is input subsystem `perm[i]`.
pub fn permute_subsystems(rho: &DensityMatrix, perm: &[usize]) -> Result<DensityMatrix> {
    let arity = rho.arity();
    let mut seen = vec![false; arity];
    if perm.len() != arity || perm.iter().any(|&p| p >= arity || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::BadPermutation { perm: perm.to_vec(), arity });
    }
    let dims = rho.dims.as_slice();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let n = rho.dim();
    // Map every input index to its output index.
    let mut map = vec![0usize; n];
    let mut digits = vec![0usize; arity];
    for slot in map.iter_mut() {
        *slot = perm.iter().zip(&new_dims).fold(0, |acc, (&p, &d)| acc * d + digits[p]);
        for s in (0..arity).rev() {
            digits[s] += 1;
            if digits[s] < dims[s] {
                break;
            }
            digits[s] = 0;
        }
    }
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = rho.mat[(i, j)];
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(out, SubsystemDims(new_dims)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(v: &[usize]) -> SubsystemDims {
        SubsystemDims::new(v.to_vec()).unwrap()
    }

    #[test]
    fn trace_out_product_factor() {
        let a = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let b = random_density(&dims(&[3]), 2, 1).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert!(partial_trace(&ab, &[1]).unwrap().mat().distance(a.mat()) < 1e-14);
        assert!(partial_trace(&ab, &[0]).unwrap().mat().distance(b.mat()) < 1e-14);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let r = partial_trace(&bell_state().density(), &[1]).unwrap();
        assert!(r.mat().distance(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_composes() {
        let rho = random_density(&dims(&[2, 2, 2]), 8, 3).unwrap();
        let step = partial_trace(&partial_trace(&rho, &[2]).unwrap(), &[1]).unwrap();
        let once = partial_trace(&rho, &[1, 2]).unwrap();
        assert!(step.mat().distance(once.mat()) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_sets() {
        let rho = random_density(&dims(&[2, 2]), 2, 0).unwrap();
        for t in [&[][..], &[0, 1], &[2], &[0, 0]] {
            assert!(matches!(partial_trace(&rho, t), Err(Error::BadSubsystemSet { .. })));
        }
    }

    #[test]
    fn purify_pure_state() {
        let psi = random_pure(&dims(&[3]), 4);
        let p = purify(&psi.density()).unwrap();
        assert_eq!(p.dims().as_slice(), &[3, 1]);
        let overlap: Complex64 = p.vec().iter().zip(psi.vec()).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purify_maximally_mixed_qubit() {
        let rho = DensityMatrix::maximally_mixed(dims(&[2]));
        let p = purify(&rho).unwrap();
        assert_eq!(p.dims().as_slice(), &[2, 2]);
        assert!(p.marginal(&[0]).unwrap().mat().distance(rho.mat()) < 1e-12);
        let m = reduced_spectra_match(&p).unwrap();
        assert!(m.matches);
    }

    #[test]
    fn purify_rank_three() {
        let rho = random_density(&dims(&[4]), 3, 12).unwrap();
        let p = purify(&rho).unwrap();
        assert_eq!(p.dims().as_slice(), &[4, 3]);
        assert!(p.marginal(&[0]).unwrap().mat().distance(rho.mat()) < 1e-10);
    }

    #[test]
    fn spectra_match_examples() {
        let b = reduced_spectra_match(&bell_state()).unwrap();
        assert!(b.matches && b.max_gap < 1e-15);
        let prod = PureState::basis(dims(&[2, 3]), 4).unwrap();
        assert!(reduced_spectra_match(&prod).unwrap().matches);
        let r = random_pure(&dims(&[3, 5]), 77);
        assert!(reduced_spectra_match(&r).unwrap().matches);
        assert!(matches!(
            reduced_spectra_match(&ghz_state()),
            Err(Error::BadArity { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn random_density_rank_and_purity() {
        let pure = random_density(&dims(&[2, 2]), 1, 9).unwrap();
        let sq = pure.mat() * pure.mat();
        assert!(sq.distance(pure.mat()) < 1e-10);
        let r2 = random_density(&dims(&[2, 2]), 2, 9).unwrap();
        assert_eq!(r2.numerical_rank(1e-10).unwrap(), 2);
        assert!((r2.mat().trace().re - 1.0).abs() < 1e-12);
        assert!(matches!(random_density(&dims(&[2]), 3, 0), Err(Error::BadRank { .. })));
        assert!(matches!(random_density(&dims(&[2]), 0, 0), Err(Error::BadRank { .. })));
    }

    #[test]
    fn separable_examples() {
        let a = DensityMatrix::diagonal(&[0.4, 0.6]).unwrap();
        let b = DensityMatrix::diagonal(&[0.1, 0.9]).unwrap();
        let one = separable_mixture(&SeparableSpec::new(vec![1.0], vec![(a.clone(), b.clone())]).unwrap())
            .unwrap();
        assert!(one.mat().distance(a.tensor(&b).unwrap().mat()) < 1e-15);

        let p0 = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let p1 = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let cl = separable_mixture(
            &SeparableSpec::new(vec![0.5, 0.5], vec![(p0.clone(), p0.clone()), (p1.clone(), p1)]).unwrap(),
        )
        .unwrap();
        assert!(cl.mat().distance(&ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5])) < 1e-15);

        assert!(matches!(
            SeparableSpec::new(vec![0.5, 0.4], vec![(a.clone(), b.clone()), (a.clone(), b.clone())]),
            Err(Error::WeightMismatch(_))
        ));
        let c = DensityMatrix::maximally_mixed(dims(&[3]));
        assert!(matches!(
            SeparableSpec::new(vec![0.5, 0.5], vec![(a.clone(), b.clone()), (c, b)]),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn permutation_examples() {
        let a = random_density(&dims(&[2]), 2, 1).unwrap();
        let b = random_density(&dims(&[3]), 2, 2).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(permute_subsystems(&ab, &[0, 1]).unwrap(), ab);
        let ba = permute_subsystems(&ab, &[1, 0]).unwrap();
        assert!(ba.mat().distance(b.tensor(&a).unwrap().mat()) < 1e-15);
        assert_eq!(ba.dims().as_slice(), &[3, 2]);
        assert_eq!(permute_subsystems(&ba, &[1, 0]).unwrap(), ab);
        assert!(matches!(permute_subsystems(&ab, &[0, 0]), Err(Error::BadPermutation { .. })));
        assert!(matches!(permute_subsystems(&ab, &[0]), Err(Error::BadPermutation { .. })));
    }

    #[test]
    fn density_validation() {
        let not_trace_one = ComplexMatrix::from_diag(&[0.5, 0.4]);
        assert!(DensityMatrix::from_matrix(not_trace_one).is_err());
        let negative = ComplexMatrix::from_diag(&[1.5, -0.5]);
        assert!(DensityMatrix::from_matrix(negative).is_err());
        let nonherm = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.0, 0.5]]).unwrap();
        assert!(matches!(DensityMatrix::from_matrix(nonherm), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn json_round_trip() {
        let rho = random_density(&dims(&[2, 3]), 3, 5).unwrap();
        let s = serde_json::to_string(&rho).unwrap();
        assert!(s.starts_with(r#"{"dims":[2,3],"mat":{"dim":6,"entries":"#));
        let back: DensityMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rho);
        let psi = bell_state();
        let s = serde_json::to_string(&psi).unwrap();
        assert!(s.starts_with(r#"{"dims":[2,2],"vec":[["#));
        assert_eq!(serde_json::from_str::<PureState>(&s).unwrap(), psi);
    }
}
