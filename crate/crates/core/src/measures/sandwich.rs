use serde::{Deserialize, Serialize};

use super::formation::estimate_ef_upper;
use super::squashed::estimate_esq_with_ef;
use super::{EstimateResult, EstimatorConfig};
use crate::entropy::BipartiteEntropies;
use crate::error::{Error, Result};
use crate::extremal::{build_saturating_state, SaturatingSpec};
use crate::states::DensityMatrix;

/// Lower bounds, numerical upper estimates and the local upper bound of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// `max{S₁ − S₁₂, S₂ − S₁₂, 0}`.
    pub lower: f64,
    /// `(S₁ + S₂)/2 − S₁₂`.
    pub weaker: f64,
    /// `min{S₁, S₂}`.
    pub upper_local: f64,
    pub ef_upper: EstimateResult,
    pub esq_upper: EstimateResult,
    pub tol: f64,
}

impl SandwichReport {
    pub fn scaled(&self, factor: f64) -> Self {
        SandwichReport {
            lower: self.lower * factor,
            weaker: self.weaker * factor,
            upper_local: self.upper_local * factor,
            ef_upper: self.ef_upper.scaled(factor),
            esq_upper: self.esq_upper.scaled(factor),
            tol: self.tol * factor,
        }
    }
}

/// Computes the bound sandwich and checks
/// `lower ≤ esq_upper ≤ ef_upper ≤ upper_local` up to `cfg.tolerance`.
///
/// A violated ordering is reported as [`Error::SandwichViolation`]; it can
/// only arise from a numerical defect.
pub fn entanglement_bounds(rho12: &DensityMatrix, cfg: &EstimatorConfig) -> Result<SandwichReport> {
    let e = BipartiteEntropies::of(rho12)?;
    let ef = estimate_ef_upper(rho12, cfg)?;
    let esq = estimate_esq_with_ef(rho12, cfg, &ef)?;
    let report = SandwichReport {
        lower: e.lower_bound(),
        weaker: e.averaged_bound(),
        upper_local: e.local_bound(),
        ef_upper: ef,
        esq_upper: esq,
        tol: cfg.tolerance,
    };
    let tol = cfg.tolerance;
    let checks = [
        ("lower <= esq_upper", report.lower, report.esq_upper.value),
        ("esq_upper <= ef_upper", report.esq_upper.value, report.ef_upper.value),
        ("ef_upper <= upper_local", report.ef_upper.value, report.upper_local),
    ];
    for (name, small, large) in checks {
        if small > large + tol {
            return Err(Error::SandwichViolation(format!("{name}: {small} > {large} + {tol}")));
        }
    }
    Ok(report)
}

/// Analytic and numerical values for one member of the saturating family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdenReport {
    pub kappas: Vec<f64>,
    /// `−Σ κ ln κ`.
    pub analytic_s12: f64,
    pub analytic_s2: f64,
    /// `S₁₂ + S₂`.
    pub analytic_s1: f64,
    pub measured: BipartiteEntropies,
    pub sandwich: SandwichReport,
    /// `|ef_upper − lower|`.
    pub ef_gap: f64,
    /// `|esq_upper − lower|`.
    pub esq_gap: f64,
    /// Both gaps within the sandwich tolerance.
    pub certified: bool,
}

impl IdenReport {
    pub fn scaled(&self, factor: f64) -> Self {
        let m = self.measured;
        IdenReport {
            kappas: self.kappas.clone(),
            analytic_s12: self.analytic_s12 * factor,
            analytic_s2: self.analytic_s2 * factor,
            analytic_s1: self.analytic_s1 * factor,
            measured: BipartiteEntropies { s1: m.s1 * factor, s2: m.s2 * factor, s12: m.s12 * factor },
            sandwich: self.sandwich.scaled(factor),
            ef_gap: self.ef_gap * factor,
            esq_gap: self.esq_gap * factor,
            certified: self.certified,
        }
    }
}

/// Builds the saturating state of `spec` and checks that both estimates meet
/// the lower bound `S₁ − S₁₂ = S₂`.
pub fn verify_iden(spec: &SaturatingSpec, cfg: &EstimatorConfig) -> Result<IdenReport> {
    if spec.terms() < 2 {
        return Err(Error::InvalidSpec(format!("need at least 2 terms, got {}", spec.terms())));
    }
    let rho = build_saturating_state(spec)?;
    let analytic_s12 = spec.predicted_s12();
    let analytic_s2 = crate::entropy::von_neumann_entropy(spec.rho2())?;
    let sandwich = entanglement_bounds(&rho, cfg)?;
    let ef_gap = (sandwich.ef_upper.value - sandwich.lower).abs();
    let esq_gap = (sandwich.esq_upper.value - sandwich.lower).abs();
    Ok(IdenReport {
        kappas: spec.kappas().to_vec(),
        analytic_s12,
        analytic_s2,
        analytic_s1: analytic_s12 + analytic_s2,
        measured: BipartiteEntropies::of(&rho)?,
        certified: ef_gap <= cfg.tolerance && esq_gap <= cfg.tolerance,
        ef_gap,
        esq_gap,
        sandwich,
    })
}
