//! Von Neumann entropy and the entropy inequalities evaluated on concrete states.
//!
//! All entropies are in nats. Every inequality check returns an
//! [`InequalityReport`] carrying both sides, the slack and the tolerance used
//! for the verdict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigenvalues_hermitian, ComplexMatrix};
use crate::states::{reduce_vector, DensityMatrix};

/// Eigenvalues at or below this contribute nothing to the entropy.
pub const ENTROPY_CLAMP: f64 = 1e-12;
/// Tolerance recorded in every inequality report.
pub const INEQUALITY_TOL: f64 = 1e-8;

/// `−Σ λ ln λ` over eigenvalues above [`ENTROPY_CLAMP`].
pub fn entropy_from_eigenvalues(vals: &[f64]) -> f64 {
    let s: f64 = vals
        .iter()
        .filter(|&&x| x > ENTROPY_CLAMP)
        .map(|&x| -x * x.ln())
        .sum();
    // Eigenvalues a rounding error above 1 give −0.0 or a tiny negative sum.
    if s > 0.0 {
        s
    } else {
        0.0
    }
}

pub(crate) fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(entropy_from_eigenvalues(&eigenvalues_hermitian(m)?))
}

/// `S(ρ) = −Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.mat())
}

/// Entropy of the marginal of a pure vector on `subset`, evaluated on
/// whichever side of the cut is smaller (both share the nonzero spectrum).
pub(crate) fn pure_marginal_entropy(vec: &[Complex64], dims: &[usize], subset: &[usize]) -> Result<f64> {
    let inside: usize = subset.iter().map(|&i| dims[i]).product();
    let outside = vec.len() / inside;
    if outside == 1 || inside == 1 {
        return Ok(0.0);
    }
    let m = if inside <= outside {
        reduce_vector(vec, dims, subset)
    } else {
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !subset.contains(i)).collect();
        reduce_vector(vec, dims, &rest)
    };
    matrix_entropy(&m)
}

fn require_arity(rho: &DensityMatrix, expected: usize) -> Result<()> {
    if rho.arity() != expected {
        return Err(Error::BadArity { expected, found: rho.arity() });
    }
    Ok(())
}

fn marginal_entropy(rho: &DensityMatrix, kept: &[usize]) -> Result<f64> {
    von_neumann_entropy(&rho.marginal(kept)?)
}

/// `S₁, S₂, S₁₂` of a bipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BipartiteEntropies {
    pub s1: f64,
    pub s2: f64,
    pub s12: f64,
}

impl BipartiteEntropies {
    pub fn of(rho12: &DensityMatrix) -> Result<Self> {
        require_arity(rho12, 2)?;
        Ok(BipartiteEntropies {
            s1: marginal_entropy(rho12, &[0])?,
            s2: marginal_entropy(rho12, &[1])?,
            s12: von_neumann_entropy(rho12)?,
        })
    }

    /// `max{S₁ − S₁₂, S₂ − S₁₂, 0}`.
    pub fn lower_bound(&self) -> f64 {
        (self.s1 - self.s12).max(self.s2 - self.s12).max(0.0)
    }

    /// `(S₁ + S₂)/2 − S₁₂`.
    pub fn averaged_bound(&self) -> f64 {
        0.5 * (self.s1 + self.s2) - self.s12
    }

    /// `min{S₁, S₂}`.
    pub fn local_bound(&self) -> f64 {
        self.s1.min(self.s2)
    }
}

/// All marginal entropies of a tripartite state, each from a freshly reduced state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripartiteEntropies {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s12: f64,
    pub s13: f64,
    pub s23: f64,
    pub s123: f64,
}

impl TripartiteEntropies {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        require_arity(rho, 3)?;
        Ok(TripartiteEntropies {
            s1: marginal_entropy(rho, &[0])?,
            s2: marginal_entropy(rho, &[1])?,
            s3: marginal_entropy(rho, &[2])?,
            s12: marginal_entropy(rho, &[0, 1])?,
            s13: marginal_entropy(rho, &[0, 2])?,
            s23: marginal_entropy(rho, &[1, 2])?,
            s123: von_neumann_entropy(rho)?,
        })
    }

    /// `I(1,2|3) = S₁₃ + S₂₃ − S₁₂₃ − S₃`.
    pub fn cmi(&self) -> f64 {
        self.s13 + self.s23 - self.s123 - self.s3
    }

    pub fn bipartite(&self) -> BipartiteEntropies {
        BipartiteEntropies { s1: self.s1, s2: self.s2, s12: self.s12 }
    }
}

/// One evaluated inequality `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    pub tol: f64,
}

impl InequalityReport {
    pub fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        Self::with_tol(name, lhs, rhs, INEQUALITY_TOL)
    }

    pub fn with_tol(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        InequalityReport {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            satisfied: slack >= -tol,
            tol,
        }
    }

    /// Rescales every entropic number (unit conversion); the verdict is kept.
    pub fn scaled(&self, factor: f64) -> Self {
        InequalityReport {
            name: self.name.clone(),
            lhs: self.lhs * factor,
            rhs: self.rhs * factor,
            slack: self.slack * factor,
            satisfied: self.satisfied,
            tol: self.tol * factor,
        }
    }
}

/// `(S₁₂ − S₁, S₁₂ − S₂)`.
pub fn conditional_entropies(rho12: &DensityMatrix) -> Result<(f64, f64)> {
    let e = BipartiteEntropies::of(rho12)?;
    Ok((e.s12 - e.s1, e.s12 - e.s2))
}

/// Conditional mutual information `I(1,2|3)` of a state on subsystems (1, 2, 3).
pub fn cmi(rho123: &DensityMatrix) -> Result<f64> {
    Ok(TripartiteEntropies::of(rho123)?.cmi())
}

pub fn check_ssa(rho123: &DensityMatrix) -> Result<InequalityReport> {
    let e = TripartiteEntropies::of(rho123)?;
    Ok(ssa_report(&e))
}

pub fn check_extended_ssa(rho123: &DensityMatrix) -> Result<InequalityReport> {
    let e = TripartiteEntropies::of(rho123)?;
    Ok(extended_ssa_report(&e))
}

pub fn check_triangle(rho12: &DensityMatrix) -> Result<InequalityReport> {
    let e = BipartiteEntropies::of(rho12)?;
    Ok(triangle_report(&e))
}

pub fn check_weak_monotonicity(rho123: &DensityMatrix) -> Result<InequalityReport> {
    let e = TripartiteEntropies::of(rho123)?;
    Ok(weak_monotonicity_report(&e))
}

/// The three auxiliary inequalities, in the order `essa00`, `essa0B-left`, `essa0B-right`.
pub fn check_aux_inequalities(rho123: &DensityMatrix) -> Result<Vec<InequalityReport>> {
    let e = TripartiteEntropies::of(rho123)?;
    Ok(aux_reports(&e))
}

pub fn ssa_report(e: &TripartiteEntropies) -> InequalityReport {
    InequalityReport::new("ssa", e.cmi(), 0.0)
}

pub fn extended_ssa_report(e: &TripartiteEntropies) -> InequalityReport {
    InequalityReport::new("essa", e.cmi(), 2.0 * e.bipartite().lower_bound())
}

pub fn triangle_report(e: &BipartiteEntropies) -> InequalityReport {
    InequalityReport::new("triangle", e.s12, (e.s1 - e.s2).abs())
}

/// `S₁₂ + S₂₃ ≥ S₁ + S₃`.
pub fn weak_monotonicity_report(e: &TripartiteEntropies) -> InequalityReport {
    InequalityReport::new("weakmono", e.s12 + e.s23, e.s1 + e.s3)
}

pub fn aux_reports(e: &TripartiteEntropies) -> Vec<InequalityReport> {
    vec![
        InequalityReport::new(
            "essa00",
            e.s12 + e.s13 + 2.0 * e.s23,
            2.0 * e.s1 + e.s2 + e.s3,
        ),
        InequalityReport::new(
            "essa0B-left",
            2.0 * e.s12 + e.s13 + 2.0 * e.s23,
            2.0 * e.s1 + e.s2 + 2.0 * e.s3,
        ),
        InequalityReport::new("essa0B-right", e.s12 + e.s13 + e.s23, e.s1 + e.s2 + e.s3),
    ]
}

/// `max{S₁ − S₁₂, S₂ − S₁₂, 0}`, a lower bound on both E_f and E_sq.
pub fn lower_bound_ent(rho12: &DensityMatrix) -> Result<f64> {
    Ok(BipartiteEntropies::of(rho12)?.lower_bound())
}

/// `(S₁ + S₂)/2 − S₁₂`; may be negative.
pub fn weaker_bound(rho12: &DensityMatrix) -> Result<f64> {
    Ok(BipartiteEntropies::of(rho12)?.averaged_bound())
}

/// `min{S₁, S₂}`, an upper bound on E_f.
pub fn upper_bound_local(rho12: &DensityMatrix) -> Result<f64> {
    Ok(BipartiteEntropies::of(rho12)?.local_bound())
}
