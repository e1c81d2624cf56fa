use num_complex::Complex64;
use rayon::prelude::*;

use super::optimizer::{rotation_descent, PairOrder, RowObjective};
use super::{best_restart, Certificate, EstimateKind, EstimateResult, EstimatorConfig, RestartOutcome};
use super::{estimate_ef_upper, LOWER_BOUND_TOL};
use crate::entropy::{lower_bound_ent, pure_marginal_entropy, TripartiteEntropies};
use crate::error::{Error, Result};
use crate::extremal::canonical_extension_pure;
use crate::matcore::{check_dim, haar_isometry_with, rng_from_seed, Isometry};
use crate::states::{purify, reduce_vector, DensityMatrix, SubsystemDims};

/// Half the CMI of extensions obtained by sending the purifying system of the
/// target through a Stinespring isometry into `ancilla ⊗ env`.
struct ExtensionObjective {
    /// Canonical purification, `psi[a·r + i]`, `a` the joint index on 12.
    psi: Vec<Complex64>,
    d1: usize,
    d2: usize,
    ancilla: usize,
    env: usize,
    rank: usize,
    scratch: Vec<Complex64>,
}

impl ExtensionObjective {
    fn new(rho: &DensityMatrix, ancilla: usize, env: usize) -> Result<Self> {
        let single = rho.with_dims(SubsystemDims::single(rho.dim())?)?;
        let p = purify(&single)?;
        Ok(ExtensionObjective {
            rank: p.dims().get(1),
            psi: p.vec().to_vec(),
            d1: rho.dims().get(0),
            d2: rho.dims().get(1),
            ancilla,
            env,
            scratch: Vec::new(),
        })
    }

    /// Joint pure state on (1, 2, 3, E) for the isometry entries `v`.
    fn joint_state(&self, v: &[Complex64]) -> Vec<Complex64> {
        let rows = self.ancilla * self.env;
        let d12 = self.d1 * self.d2;
        let r = self.rank;
        let mut phi = vec![Complex64::new(0.0, 0.0); d12 * rows];
        for a in 0..d12 {
            let pa = &self.psi[a * r..(a + 1) * r];
            let out = &mut phi[a * rows..(a + 1) * rows];
            for (t, o) in out.iter_mut().enumerate() {
                *o = pa.iter().zip(&v[t * r..(t + 1) * r]).map(|(x, y)| x * y).sum();
            }
        }
        phi
    }

    fn half_cmi(&self, v: &[Complex64]) -> Result<f64> {
        let phi = self.joint_state(v);
        let dims = [self.d1, self.d2, self.ancilla, self.env];
        let s13 = pure_marginal_entropy(&phi, &dims, &[0, 2])?;
        let s23 = pure_marginal_entropy(&phi, &dims, &[1, 2])?;
        let s123 = pure_marginal_entropy(&phi, &dims, &[3])?;
        let s3 = pure_marginal_entropy(&phi, &dims, &[2])?;
        Ok(0.5 * (s13 + s23 - s123 - s3))
    }
}

impl RowObjective for ExtensionObjective {
    fn evaluate(&mut self, w: &Isometry) -> f64 {
        self.half_cmi(w.entries()).unwrap_or(f64::INFINITY)
    }

    fn evaluate_pair(
        &mut self,
        w: &Isometry,
        k: usize,
        l: usize,
        row_k: &[Complex64],
        row_l: &[Complex64],
    ) -> f64 {
        let r = self.rank;
        let mut v = std::mem::take(&mut self.scratch);
        v.clear();
        v.extend_from_slice(w.entries());
        v[k * r..(k + 1) * r].copy_from_slice(row_k);
        v[l * r..(l + 1) * r].copy_from_slice(row_l);
        let value = self.half_cmi(&v).unwrap_or(f64::INFINITY);
        self.scratch = v;
        value
    }

    fn commit(&mut self, _: &Isometry, _: usize, _: usize) {}
}

/// Environment dimension paired with an ancilla of dimension `ancilla` for a
/// rank-`rank` target: `ancilla`, raised if needed so that the isometry has
/// at least `rank` rows.
fn env_dim(ancilla: usize, rank: usize) -> usize {
    ancilla.max(rank.div_ceil(ancilla))
}

/// The extension `Tr_E (id₁₂ ⊗ V)|Ψ⟩⟨Ψ|(id₁₂ ⊗ V)†` on dims `[d₁, d₂, ancilla]`,
/// with `|Ψ⟩` the canonical purification of `rho` (see [`crate::states::purify`]).
pub fn extension_from_stinespring(
    rho: &DensityMatrix,
    ancilla_dim: usize,
    env_dim: usize,
    v: &Isometry,
) -> Result<DensityMatrix> {
    if rho.arity() != 2 {
        return Err(Error::BadArity { expected: 2, found: rho.arity() });
    }
    let obj = ExtensionObjective::new(rho, ancilla_dim, env_dim)?;
    if v.rows() != ancilla_dim * env_dim || v.cols() != obj.rank {
        return Err(Error::BadShape { rows: v.rows(), cols: v.cols() });
    }
    let dims = SubsystemDims::new(vec![obj.d1, obj.d2, ancilla_dim])?;
    let phi = obj.joint_state(v.entries());
    let mat = reduce_vector(&phi, &[obj.d1, obj.d2, ancilla_dim, env_dim], &[0, 1, 2]);
    DensityMatrix::new(mat, dims)
}

/// Upper estimate of the squashed entanglement.
///
/// Searches extensions through an ancilla of dimension `d₃` (`rank²` unless
/// configured) and an environment of the same size, parametrized by
/// Stinespring isometries refined by rotation descent over random row pairs.
/// The canonical extension of the best E_f ensemble is also evaluated; the
/// smaller of the two half-CMIs is returned.
pub fn estimate_esq_upper(rho: &DensityMatrix, cfg: &EstimatorConfig) -> Result<EstimateResult> {
    let ef = estimate_ef_upper(rho, cfg)?;
    estimate_esq_with_ef(rho, cfg, &ef)
}

pub(crate) fn estimate_esq_with_ef(
    rho: &DensityMatrix,
    cfg: &EstimatorConfig,
    ef: &EstimateResult,
) -> Result<EstimateResult> {
    if rho.arity() != 2 {
        return Err(Error::BadArity { expected: 2, found: rho.arity() });
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidSpec("at least one restart is required".into()));
    }
    let lower = lower_bound_ent(rho)?;
    let probe = ExtensionObjective::new(rho, 1, 1)?;
    let r = probe.rank;
    let ancilla = cfg.ancilla_dim.unwrap_or(r * r);
    if ancilla == 0 {
        return Err(Error::BadRank { rank: 0, max: r });
    }
    let env = env_dim(ancilla, r);
    let rows = ancilla * env;
    check_dim(rows)?;
    let pairs_per_sweep = (rows * (rows - 1) / 2).clamp(1, 2 * rows);

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(cfg.seed.wrapping_add(i as u64));
            let start = haar_isometry_with(rows, r, &mut rng)?;
            let mut objective = ExtensionObjective::new(rho, ancilla, env)?;
            let out = rotation_descent(
                &mut objective,
                start,
                cfg.budget,
                PairOrder::Random(pairs_per_sweep),
                &mut rng,
            );
            Ok(RestartOutcome {
                index: i,
                value: out.value,
                isometry: out.isometry,
                evaluations: out.evaluations,
                converged: out.converged,
                budget_exhausted: out.budget_exhausted,
            })
        })
        .collect::<Result<_>>()?;
    let best = best_restart(&outcomes).expect("at least one restart");
    let iterations = outcomes.iter().map(|o| o.evaluations).sum();

    let mut result = EstimateResult {
        value: best.value,
        kind: EstimateKind::EsqUpper,
        restarts_used: cfg.restarts,
        iterations,
        seed: cfg.seed,
        converged: best.converged,
        budget_exhausted: best.budget_exhausted,
        search_dim: Some(ancilla),
        certificate: Some(Certificate::Stinespring {
            ancilla_dim: ancilla,
            env_dim: env,
            isometry: best.isometry.clone(),
        }),
    };

    if let Some(Certificate::Decomposition(dec)) = &ef.certificate {
        // Skipped when the extension would exceed the dimension cap.
        let dims_ok = dec.dims().total().checked_mul(dec.len()).is_some_and(|d| check_dim(d).is_ok());
        if dims_ok {
            let ext = canonical_extension_pure(dec.weights(), dec.states())?;
            let value = 0.5 * TripartiteEntropies::of(&ext)?.cmi();
            if value <= result.value {
                result.value = value;
                result.converged = ef.converged;
                result.budget_exhausted = ef.budget_exhausted;
                result.certificate = Some(Certificate::Decomposition(dec.clone()));
            }
        }
    }

    if result.value < lower - LOWER_BOUND_TOL {
        return Err(Error::SandwichViolation(format!(
            "half CMI {} below entropic lower bound {lower}",
            result.value
        )));
    }
    Ok(result)
}
