//! States with `S₁₂ = S₁ − S₂` and the tripartite extensions built from them.
//!
//! The saturating family is a κ-weighted mixture of purifications of a fixed
//! `ρ₂` whose ranges in `ℋ₁` are mutually orthogonal. `ℋ₁` is sized to exactly
//! `n·r₂` (n terms, `r₂ = rank ρ₂`), the j-th purification living in the
//! standard-basis block `j·r₂ .. (j+1)·r₂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::{BipartiteEntropies, TripartiteEntropies};
use crate::error::{Error, Result};
use crate::matcore::{check_dim, eig_hermitian, ComplexMatrix};
use crate::states::{
    check_weights, partial_trace, purify, DensityMatrix, PureState, SeparableSpec, SubsystemDims,
    RANK_CUTOFF,
};

/// Rank cutoff used by [`verify_equality_conditions`].
pub const CERT_RANK_CUTOFF: f64 = 1e-10;
/// Residual and entropy-gap threshold for a passing certificate.
pub const CERT_TOL: f64 = 1e-7;
/// Below this `S(ρ₂)` the sharpness ratio is 0/0.
pub const WITNESS_ENTROPY_FLOOR: f64 = 1e-9;
/// Nonzero eigenvalues closer than this are reported as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// Mixture weights κ and the common reduced state ρ₂ of a saturating state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct SaturatingSpec {
    kappas: Vec<f64>,
    rho2: DensityMatrix,
    #[serde(skip)]
    support: Support,
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Support {
    /// Descending eigenvalues of ρ₂ above the rank cutoff.
    weights: Vec<f64>,
    /// Matching eigenvectors in ℋ₂.
    vectors: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kappas: Vec<f64>,
    rho2: DensityMatrix,
}

impl TryFrom<RawSpec> for SaturatingSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        SaturatingSpec::new(raw.kappas, raw.rho2)
    }
}

impl From<SaturatingSpec> for RawSpec {
    fn from(s: SaturatingSpec) -> Self {
        RawSpec { kappas: s.kappas, rho2: s.rho2 }
    }
}

impl SaturatingSpec {
    /// κ must be strictly positive and sum to 1 within 1e-10. `rho2` is
    /// treated as a single system; the construction lives on its support.
    pub fn new(kappas: Vec<f64>, rho2: DensityMatrix) -> Result<Self> {
        check_weights(&kappas).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let spec = eig_hermitian(rho2.mat())?;
        let d2 = rho2.dim();
        let mut support = Support::default();
        for k in (0..d2).rev() {
            let w = spec.eigenvalues[k];
            if w > RANK_CUTOFF {
                support.weights.push(w);
                support.vectors.push(spec.eigenvector(k));
            }
        }
        let d1 = kappas.len().saturating_mul(support.weights.len());
        check_dim(d1.saturating_mul(d2))?;
        Ok(SaturatingSpec { kappas, rho2, support })
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn rho2(&self) -> &DensityMatrix {
        &self.rho2
    }

    /// Number of mixture terms `n`.
    pub fn terms(&self) -> usize {
        self.kappas.len()
    }

    /// Numerical rank `r₂` of ρ₂.
    pub fn rank2(&self) -> usize {
        self.support.weights.len()
    }

    /// `(d₁, d₂) = (n·r₂, dim ρ₂)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.terms() * self.rank2(), self.rho2.dim())
    }

    /// `−Σ κ_j ln κ_j`, the predicted `S₁₂`.
    pub fn predicted_s12(&self) -> f64 {
        self.kappas.iter().map(|&k| -k * k.ln()).sum()
    }
}

/// The `n` purifications `|Φ_j⟩ = Σ_i √μ_i |j·r₂ + i⟩ ⊗ |e_i⟩` of ρ₂ on dims `[n·r₂, d₂]`.
pub fn orthogonal_purifications(spec: &SaturatingSpec) -> Result<Vec<PureState>> {
    let (d1, d2) = spec.dims();
    let r2 = spec.rank2();
    let dims = SubsystemDims::new(vec![d1, d2])?;
    let norm: f64 = spec.support.weights.iter().sum::<f64>().sqrt();
    (0..spec.terms())
        .map(|j| {
            let mut vec = vec![Complex64::new(0.0, 0.0); d1 * d2];
            for (i, (mu, e)) in spec.support.weights.iter().zip(&spec.support.vectors).enumerate() {
                let amp = mu.sqrt() / norm;
                let row = j * r2 + i;
                for (x, ex) in e.iter().enumerate() {
                    vec[row * d2 + x] = ex * amp;
                }
            }
            PureState::new(vec, dims.clone())
        })
        .collect()
}

/// `ρ₁₂ = Σ_j κ_j |Φ_j⟩⟨Φ_j|`, which satisfies `S₁₂ = S₁ − S₂`.
pub fn build_saturating_state(spec: &SaturatingSpec) -> Result<DensityMatrix> {
    let phis = orthogonal_purifications(spec)?;
    let dims = phis[0].dims().clone();
    let mut mat = ComplexMatrix::zeros(dims.total());
    for (k, phi) in spec.kappas.iter().zip(&phis) {
        mat.add_projector(*k, phi.vec());
    }
    DensityMatrix::new(mat, dims)
}

/// Outcome of testing a bipartite state against the rank and spectral
/// conditions characterizing `S₁₂ = S₁ − S₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityCertificate {
    pub rank1: usize,
    pub rank2: usize,
    pub rank12: usize,
    /// `rank ρ₁ = rank ρ₂ · rank ρ₁₂`.
    pub rank_condition: bool,
    /// `max_{i,j} ‖Tr₁|φ_i⟩⟨φ_j| − δ_ij ρ₂‖_F` over the nonzero eigenvectors of ρ₁₂.
    pub offdiag_residual: f64,
    /// `|S₁₂ − (S₁ − S₂)|`.
    pub entropy_gap: f64,
    /// Repeated nonzero eigenvalues: the residual refers to the eigenbasis
    /// picked by the eigensolver, one of many valid choices.
    pub degenerate_spectrum: bool,
    pub passes: bool,
}

impl EqualityCertificate {
    pub fn scaled(&self, factor: f64) -> Self {
        EqualityCertificate { entropy_gap: self.entropy_gap * factor, ..self.clone() }
    }
}

pub fn verify_equality_conditions(rho12: &DensityMatrix) -> Result<EqualityCertificate> {
    if rho12.arity() != 2 {
        return Err(Error::BadArity { expected: 2, found: rho12.arity() });
    }
    let d1 = rho12.dims().get(0);
    let d2 = rho12.dims().get(1);
    let rho1 = partial_trace(rho12, &[1])?;
    let rho2 = partial_trace(rho12, &[0])?;
    let rank1 = rho1.numerical_rank(CERT_RANK_CUTOFF)?;
    let rank2 = rho2.numerical_rank(CERT_RANK_CUTOFF)?;

    let spec = eig_hermitian(rho12.mat())?;
    let support: Vec<usize> = (0..rho12.dim())
        .rev()
        .filter(|&k| spec.eigenvalues[k] > CERT_RANK_CUTOFF)
        .collect();
    let rank12 = support.len();
    let degenerate_spectrum = support
        .windows(2)
        .any(|w| (spec.eigenvalues[w[0]] - spec.eigenvalues[w[1]]).abs() <= DEGENERACY_TOL);

    let phis: Vec<Vec<Complex64>> = support.iter().map(|&k| spec.eigenvector(k)).collect();
    let mut offdiag_residual: f64 = 0.0;
    for (i, pi) in phis.iter().enumerate() {
        for (j, pj) in phis.iter().enumerate() {
            // Tr₁ |φ_i⟩⟨φ_j|
            let block = ComplexMatrix::from_fn(d2, |x, y| {
                (0..d1).map(|a| pi[a * d2 + x] * pj[a * d2 + y].conj()).sum()
            });
            let residual = if i == j {
                block.distance(rho2.mat())
            } else {
                block.frobenius_norm()
            };
            offdiag_residual = offdiag_residual.max(residual);
        }
    }

    let e = BipartiteEntropies::of(rho12)?;
    let entropy_gap = (e.s12 - (e.s1 - e.s2)).abs();
    let rank_condition = rank1 == rank2 * rank12;
    let passes = rank_condition && offdiag_residual <= CERT_TOL && entropy_gap <= CERT_TOL;
    Ok(EqualityCertificate {
        rank1,
        rank2,
        rank12,
        rank_condition,
        offdiag_residual,
        entropy_gap,
        degenerate_spectrum,
        passes,
    })
}

/// `ρ₁₂₃ = Σ_k λ_k ω^k ⊗ |k⟩⟨k|` on dims `[d₁, d₂, n]`.
pub fn canonical_extension(weights: &[f64], omegas: &[DensityMatrix]) -> Result<DensityMatrix> {
    check_weights(weights)?;
    if weights.len() != omegas.len() {
        return Err(Error::WeightMismatch(format!(
            "{} weights for {} states",
            weights.len(),
            omegas.len()
        )));
    }
    let dims12 = omegas[0].dims().clone();
    if dims12.arity() != 2 || omegas.iter().any(|w| w.dims() != &dims12) {
        return Err(Error::DimMismatch("terms must share bipartite dims".into()));
    }
    let n = omegas.len();
    let d12 = dims12.total();
    let dims = SubsystemDims::new(vec![dims12.get(0), dims12.get(1), n])?;
    let mut mat = ComplexMatrix::zeros(dims.total());
    for (k, (w, omega)) in weights.iter().zip(omegas).enumerate() {
        for x in 0..d12 {
            for y in 0..d12 {
                mat[(x * n + k, y * n + k)] = omega.mat()[(x, y)] * *w;
            }
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(mat, dims))
}

/// [`canonical_extension`] for a pure-state ensemble.
pub fn canonical_extension_pure(weights: &[f64], states: &[PureState]) -> Result<DensityMatrix> {
    let omegas: Vec<DensityMatrix> = states.iter().map(PureState::density).collect();
    canonical_extension(weights, &omegas)
}

/// Tripartite state attaining the factor 2 in the extended SSA bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessWitness {
    pub state: DensityMatrix,
    pub cmi: f64,
    /// `max{S₁ − S₁₂, S₂ − S₁₂, 0}` of the bipartite marginal.
    pub bound: f64,
    pub ratio: f64,
}

/// Canonical extension of the saturating decomposition; its CMI is exactly
/// twice the entropic lower bound.
pub fn build_sharpness_witness(spec: &SaturatingSpec) -> Result<SharpnessWitness> {
    if spec.terms() < 2 {
        return Err(Error::InvalidSpec(format!(
            "sharpness witness needs at least 2 terms, got {}",
            spec.terms()
        )));
    }
    let s2 = crate::entropy::von_neumann_entropy(spec.rho2())?;
    if s2 <= WITNESS_ENTROPY_FLOOR {
        return Err(Error::DegenerateWitness { entropy: s2 });
    }
    let phis = orthogonal_purifications(spec)?;
    let state = canonical_extension_pure(spec.kappas(), &phis)?;
    let e = TripartiteEntropies::of(&state)?;
    let cmi = e.cmi();
    let bound = e.bipartite().lower_bound();
    Ok(SharpnessWitness { state, cmi, bound, ratio: cmi / bound })
}

/// Extension of a separable state with vanishing CMI: each `ρ₁^k` is purified
/// into its own orthogonal sector of `ℋ₃` and tensored with `ρ₂^k`.
///
/// Output dims are `[d₁, d₂, Σ_k r_k]` with `r_k = rank ρ₁^k`.
pub fn separable_equality_extension(sep: &SeparableSpec) -> Result<DensityMatrix> {
    sep.validate()?;
    let (d1, d2) = sep.local_dims();
    let purifications: Vec<PureState> = sep
        .factors
        .iter()
        .map(|(a, _)| purify(&a.with_dims(SubsystemDims::single(a.dim())?)?))
        .collect::<Result<_>>()?;
    let d3: usize = purifications.iter().map(|p| p.dims().get(1)).sum();
    let dims = SubsystemDims::new(vec![d1, d2, d3])?;
    let mut mat = ComplexMatrix::zeros(dims.total());
    let index = |x: usize, b: usize, s: usize| (x * d2 + b) * d3 + s;
    let mut offset = 0;
    for ((w, (_, rho2)), psi) in sep.weights.iter().zip(&sep.factors).zip(&purifications) {
        let r = psi.dims().get(1);
        let v = psi.vec();
        for x in 0..d1 {
            for s in 0..r {
                let a = v[x * r + s] * *w;
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for y in 0..d1 {
                    for t in 0..r {
                        let amp = a * v[y * r + t].conj();
                        for b in 0..d2 {
                            for c in 0..d2 {
                                mat[(index(x, b, offset + s), index(y, c, offset + t))] +=
                                    amp * rho2.mat()[(b, c)];
                            }
                        }
                    }
                }
            }
        }
        offset += r;
    }
    Ok(DensityMatrix::from_parts_unchecked(mat, dims))
}
