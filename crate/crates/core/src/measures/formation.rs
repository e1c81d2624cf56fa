use num_complex::Complex64;
use rayon::prelude::*;

use super::decomposition::{decomposition_cost, decomposition_from_ensemble, EigenEnsemble};
use super::optimizer::{rotation_descent, PairOrder, RowObjective};
use super::{best_restart, Certificate, EstimateKind, EstimateResult, EstimatorConfig, RestartOutcome};
use super::LOWER_BOUND_TOL;
use crate::entropy::lower_bound_ent;
use crate::error::{Error, Result};
use crate::matcore::{haar_isometry_with, rng_from_seed, Isometry};
use crate::states::DensityMatrix;

/// Ensemble cost with a per-row cache, so a two-row move costs two entropies.
struct FormationObjective<'a> {
    ens: &'a EigenEnsemble,
    row_costs: Vec<f64>,
    total: f64,
    buf: Vec<Complex64>,
}

impl<'a> FormationObjective<'a> {
    fn new(ens: &'a EigenEnsemble) -> Self {
        FormationObjective { ens, row_costs: Vec::new(), total: 0.0, buf: Vec::new() }
    }

    fn row_cost(&mut self, row: &[Complex64]) -> f64 {
        self.ens.member(row, &mut self.buf);
        self.ens.member_cost(&self.buf).unwrap_or(f64::INFINITY)
    }
}

impl RowObjective for FormationObjective<'_> {
    fn evaluate(&mut self, w: &Isometry) -> f64 {
        self.row_costs = (0..w.rows()).map(|k| self.row_cost(w.row(k))).collect();
        self.total = self.row_costs.iter().sum();
        self.total
    }

    fn evaluate_pair(
        &mut self,
        _: &Isometry,
        k: usize,
        l: usize,
        row_k: &[Complex64],
        row_l: &[Complex64],
    ) -> f64 {
        let ck = self.row_cost(row_k);
        let cl = self.row_cost(row_l);
        self.total - self.row_costs[k] - self.row_costs[l] + ck + cl
    }

    fn commit(&mut self, w: &Isometry, k: usize, l: usize) {
        self.row_costs[k] = self.row_cost(w.row(k));
        self.row_costs[l] = self.row_cost(w.row(l));
        self.total = self.row_costs.iter().sum();
    }
}

/// Upper estimate of the entanglement of formation.
///
/// Searches `m`-member pure-state ensembles (`m = rank²` unless configured),
/// parametrized by `m × rank` isometries. Restart `i` uses the generator
/// seeded with `seed + i`; restart 0 starts from the eigen-ensemble and the
/// others from Haar-random isometries. Every restart is refined by rotation
/// descent and the lowest-cost ensemble wins (ties to the lowest restart).
pub fn estimate_ef_upper(rho: &DensityMatrix, cfg: &EstimatorConfig) -> Result<EstimateResult> {
    if rho.arity() != 2 {
        return Err(Error::BadArity { expected: 2, found: rho.arity() });
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidSpec("at least one restart is required".into()));
    }
    let ens = EigenEnsemble::of(rho)?;
    let r = ens.rank();
    let lower = lower_bound_ent(rho)?;

    if r == 1 {
        // A pure state has exactly one decomposition.
        let dec = decomposition_from_ensemble(rho, &ens, &Isometry::embedding(1, 1)?)?;
        let value = decomposition_cost(&dec)?;
        return Ok(EstimateResult {
            value,
            kind: EstimateKind::EfUpper,
            restarts_used: 0,
            iterations: 0,
            seed: cfg.seed,
            converged: true,
            budget_exhausted: false,
            search_dim: Some(1),
            certificate: Some(Certificate::Decomposition(dec)),
        });
    }

    let m = cfg.ensemble_size.unwrap_or(r * r);
    if m < r {
        return Err(Error::BadRank { rank: m, max: r });
    }
    crate::matcore::check_dim(m)?;

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(cfg.seed.wrapping_add(i as u64));
            let start = if i == 0 {
                Isometry::embedding(m, r)?
            } else {
                haar_isometry_with(m, r, &mut rng)?
            };
            let mut objective = FormationObjective::new(&ens);
            let out = rotation_descent(&mut objective, start, cfg.budget, PairOrder::Cyclic, &mut rng);
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
    let dec = decomposition_from_ensemble(rho, &ens, &best.isometry)?;
    let value = decomposition_cost(&dec)?;
    if value < lower - LOWER_BOUND_TOL {
        return Err(Error::SandwichViolation(format!(
            "ensemble cost {value} below entropic lower bound {lower}"
        )));
    }
    Ok(EstimateResult {
        value,
        kind: EstimateKind::EfUpper,
        restarts_used: cfg.restarts,
        iterations: outcomes.iter().map(|o| o.evaluations).sum(),
        seed: cfg.seed,
        converged: best.converged,
        budget_exhausted: best.budget_exhausted,
        search_dim: Some(m),
        certificate: Some(Certificate::Decomposition(dec)),
    })
}
