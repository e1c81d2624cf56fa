use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::pure_marginal_entropy;
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, ComplexMatrix, Isometry};
use crate::states::{vec_norm, DensityMatrix, PureState, SubsystemDims, RANK_CUTOFF};

/// Maximal reconstruction residual for a decomposition to be usable.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Ensemble members with weight at or below this are dropped.
pub const PRUNE_WEIGHT: f64 = 1e-14;

/// Pure-state ensemble `ρ₁₂ = Σ_k λ_k |ω^k⟩⟨ω^k|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDecomposition")]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
    /// Frobenius distance between the mixture and the target it was built for.
    residual: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
    residual: f64,
}

impl TryFrom<RawDecomposition> for Decomposition {
    type Error = Error;

    fn try_from(raw: RawDecomposition) -> Result<Self> {
        check_ensemble(&raw.weights, &raw.states)?;
        if !(raw.residual >= 0.0) {
            return Err(Error::InvalidState("negative residual".into()));
        }
        Ok(Decomposition { weights: raw.weights, states: raw.states, residual: raw.residual })
    }
}

fn check_ensemble(weights: &[f64], states: &[PureState]) -> Result<()> {
    crate::states::check_weights(weights).map_err(|_| {
        Error::WeightMismatch("ensemble weights must be positive and sum to 1".into())
    })?;
    if weights.len() != states.len() {
        return Err(Error::WeightMismatch(format!(
            "{} weights for {} states",
            weights.len(),
            states.len()
        )));
    }
    let dims = states[0].dims();
    if dims.arity() != 2 || states.iter().any(|s| s.dims() != dims) {
        return Err(Error::DimMismatch("ensemble states must share bipartite dims".into()));
    }
    Ok(())
}

impl Decomposition {
    /// Builds an ensemble for `target`, recording the reconstruction residual.
    pub fn new(weights: Vec<f64>, states: Vec<PureState>, target: &DensityMatrix) -> Result<Self> {
        check_ensemble(&weights, &states)?;
        if states[0].dims() != target.dims() {
            return Err(Error::DimMismatch("ensemble and target dims differ".into()));
        }
        let mut d = Decomposition { weights, states, residual: 0.0 };
        d.residual = d.mixture().distance(target.mat());
        Ok(d)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dims(&self) -> &SubsystemDims {
        self.states[0].dims()
    }

    /// `Σ_k λ_k |ω^k⟩⟨ω^k|`.
    pub fn mixture(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dims().total());
        for (w, s) in self.weights.iter().zip(&self.states) {
            m.add_projector(*w, s.vec());
        }
        m
    }
}

/// `Σ_k λ_k S(Tr₂ ω^k)`, the entanglement-of-formation cost of an ensemble.
pub fn decomposition_cost(dec: &Decomposition) -> Result<f64> {
    if !(dec.residual <= RECONSTRUCTION_TOL) {
        return Err(Error::BadDecomposition { residual: dec.residual });
    }
    let dims = dec.dims().as_slice();
    let mut cost = 0.0;
    for (w, s) in dec.weights.iter().zip(&dec.states) {
        cost += w * pure_marginal_entropy(s.vec(), dims, &[0])?;
    }
    Ok(cost.max(0.0))
}

/// Eigen-ensemble of a state restricted to its support: columns
/// `√p_i |e_i⟩`, descending in `p_i`.
#[derive(Debug, Clone)]
pub(crate) struct EigenEnsemble {
    pub dims: SubsystemDims,
    /// `scaled[i]` is `√p_i |e_i⟩`.
    pub scaled: Vec<Vec<Complex64>>,
}

impl EigenEnsemble {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        let spec = eig_hermitian(rho.mat())?;
        let n = rho.dim();
        let scaled = (0..n)
            .rev()
            .filter(|&k| spec.eigenvalues[k] > RANK_CUTOFF)
            .map(|k| {
                let s = spec.eigenvalues[k].sqrt();
                spec.eigenvector(k).into_iter().map(|z| z * s).collect()
            })
            .collect();
        Ok(EigenEnsemble { dims: rho.dims().clone(), scaled })
    }

    pub fn rank(&self) -> usize {
        self.scaled.len()
    }

    /// Unnormalized member `Σ_i conj(row_i) √p_i |e_i⟩`.
    pub fn member(&self, row: &[Complex64], out: &mut Vec<Complex64>) {
        let n = self.dims.total();
        out.clear();
        out.resize(n, Complex64::new(0.0, 0.0));
        for (wi, col) in row.iter().zip(&self.scaled) {
            let c = wi.conj();
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o += c * x;
            }
        }
    }

    /// `λ · S(Tr₂ ω)` for an unnormalized member `√λ |ω⟩`.
    pub fn member_cost(&self, v: &[Complex64]) -> Result<f64> {
        let n2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if n2 <= PRUNE_WEIGHT {
            return Ok(0.0);
        }
        let inv = 1.0 / n2.sqrt();
        let unit: Vec<Complex64> = v.iter().map(|z| z * inv).collect();
        Ok(n2 * pure_marginal_entropy(&unit, self.dims.as_slice(), &[0])?)
    }
}

/// Ensemble `√λ_k |ω^k⟩ = Σ_i conj(W_ki) √p_i |e_i⟩` of `rho` induced by an
/// `m × r` isometry, `r` the numerical rank of `rho`.
pub fn decomposition_from_isometry(rho: &DensityMatrix, w: &Isometry) -> Result<Decomposition> {
    let ens = EigenEnsemble::of(rho)?;
    decomposition_from_ensemble(rho, &ens, w)
}

pub(crate) fn decomposition_from_ensemble(
    rho: &DensityMatrix,
    ens: &EigenEnsemble,
    w: &Isometry,
) -> Result<Decomposition> {
    if rho.arity() != 2 {
        return Err(Error::BadArity { expected: 2, found: rho.arity() });
    }
    if w.cols() != ens.rank() {
        return Err(Error::BadShape { rows: w.rows(), cols: w.cols() });
    }
    let mut weights = Vec::new();
    let mut states = Vec::new();
    let mut v = Vec::new();
    for k in 0..w.rows() {
        ens.member(w.row(k), &mut v);
        let norm = vec_norm(&v);
        let weight = norm * norm;
        if weight <= PRUNE_WEIGHT {
            continue;
        }
        let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        weights.push(weight);
        states.push(PureState::from_parts_unchecked(unit, ens.dims.clone()));
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    Decomposition::new(weights, states, rho)
}
