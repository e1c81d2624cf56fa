//! One-sided numerical estimates of entanglement of formation and squashed
//! entanglement.
//!
//! Both estimators search a restricted family (pure-state ensembles of a
//! fixed size, extensions through a fixed-size ancilla) and therefore return
//! upper bounds. They are reported next to the entropic lower bound
//! `max{S₁ − S₁₂, S₂ − S₁₂, 0}` and the local upper bound `min{S₁, S₂}`; the
//! estimate equals the true value only when the lower bound pinches it.

mod decomposition;
mod formation;
mod optimizer;
mod sandwich;
mod squashed;

use serde::{Deserialize, Serialize};

pub use decomposition::{
    decomposition_cost, decomposition_from_isometry, Decomposition, PRUNE_WEIGHT,
    RECONSTRUCTION_TOL,
};
pub use formation::estimate_ef_upper;
pub use sandwich::{entanglement_bounds, verify_iden, IdenReport, SandwichReport};
pub use squashed::{estimate_esq_upper, extension_from_stinespring};

use crate::matcore::Isometry;

/// Slack allowed between estimates and bounds when checking their ordering.
pub const SANDWICH_TOL: f64 = 1e-4;
/// Tolerance of the runtime check `estimate ≥ lower bound`.
pub const LOWER_BOUND_TOL: f64 = 1e-8;

/// Search settings shared by both estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Ensemble size for E_f; `None` means `rank²`.
    pub ensemble_size: Option<usize>,
    /// Dimension of the extending system for E_sq; `None` means `rank²`.
    pub ancilla_dim: Option<usize>,
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub budget: usize,
    pub seed: u64,
    /// Ordering tolerance for the bound sandwich.
    pub tolerance: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            ensemble_size: None,
            ancilla_dim: None,
            restarts: 32,
            budget: 2000,
            seed: 0,
            tolerance: SANDWICH_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    EfUpper,
    EsqUpper,
    Lower,
}

/// Witness that makes an estimate replayable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Certificate {
    /// A pure-state ensemble; for E_sq it stands for its canonical extension.
    Decomposition(Decomposition),
    /// Extension `(id₁₂ ⊗ V)|Ψ⟩` traced over the environment, where `|Ψ⟩` is
    /// the canonical purification of the target and `V` maps the purifying
    /// system into `ancilla_dim × env_dim`.
    Stinespring {
        ancilla_dim: usize,
        env_dim: usize,
        isometry: Isometry,
    },
}

/// A one-sided bound with search telemetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    /// Nats.
    pub value: f64,
    pub kind: EstimateKind,
    pub restarts_used: usize,
    /// Objective evaluations summed over restarts.
    pub iterations: usize,
    pub seed: u64,
    pub converged: bool,
    /// The winning restart stopped on its evaluation budget. The value is
    /// still a valid bound.
    pub budget_exhausted: bool,
    /// Search radius actually used: ensemble size (E_f) or ancilla dimension (E_sq).
    pub search_dim: Option<usize>,
    pub certificate: Option<Certificate>,
}

impl EstimateResult {
    /// Copy with `value` rescaled (unit conversion).
    pub fn scaled(&self, factor: f64) -> Self {
        EstimateResult { value: self.value * factor, ..self.clone() }
    }
}

/// Per-restart outcome, reduced by minimum value with ties to the lowest index.
#[derive(Debug, Clone)]
pub(crate) struct RestartOutcome {
    pub index: usize,
    pub value: f64,
    pub isometry: Isometry,
    pub evaluations: usize,
    pub converged: bool,
    pub budget_exhausted: bool,
}

pub(crate) fn best_restart(outcomes: &[RestartOutcome]) -> Option<&RestartOutcome> {
    outcomes.iter().min_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)))
}
