//! Derivative-free descent over column-orthonormal matrices.
//!
//! Each step applies a two-row unitary rotation `[[c, −conj(s)], [s, c]]` with
//! `c = cos θ`, `s = e^{iφ} sin θ`, choosing θ by a three-point quadratic fit
//! around the current point. The probe width adapts to the accepted step
//! sizes, and a wide probe is retried whenever the fit is not convex. The
//! objective is π-periodic in θ because a common sign flip of two rows does
//! not change the ensemble it describes, so steps are kept within ±π/2.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::matcore::{Isometry, SeededRng};

/// Initial and maximal probe width in θ.
const WIDE_STEP: f64 = PI / 6.0;
const MIN_STEP: f64 = 1e-6;
/// Improvement below which a sweep counts as converged.
pub(crate) const CONVERGENCE_TOL: f64 = 1e-9;

/// Objective over the rows of an isometry.
pub(crate) trait RowObjective {
    /// Full evaluation; refreshes any per-row cache.
    fn evaluate(&mut self, w: &Isometry) -> f64;

    /// Value with rows `k`, `l` of `w` replaced by `row_k`, `row_l`.
    fn evaluate_pair(
        &mut self,
        w: &Isometry,
        k: usize,
        l: usize,
        row_k: &[Complex64],
        row_l: &[Complex64],
    ) -> f64;

    /// Called after `w` has been updated in rows `k`, `l`.
    fn commit(&mut self, w: &Isometry, k: usize, l: usize);
}

/// How pairs of rows are visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PairOrder {
    /// Every `k < l` in lexicographic order.
    Cyclic,
    /// The given number of uniformly random pairs per sweep.
    Random(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct DescentOutcome {
    pub value: f64,
    pub isometry: Isometry,
    pub evaluations: usize,
    pub converged: bool,
    pub budget_exhausted: bool,
}

fn rotated(
    w: &Isometry,
    k: usize,
    l: usize,
    theta: f64,
    phase: Complex64,
    row_k: &mut Vec<Complex64>,
    row_l: &mut Vec<Complex64>,
) {
    let c = theta.cos();
    let s = phase * theta.sin();
    row_k.clear();
    row_l.clear();
    for (a, b) in w.row(k).iter().zip(w.row(l)) {
        row_k.push(a * c - s.conj() * b);
        row_l.push(s * a + b * c);
    }
}

/// Minimizer of the parabola through `(−h, fm)`, `(0, f0)`, `(h, fp)`, or
/// `None` when it is not convex.
fn parabola_step(h: f64, fm: f64, f0: f64, fp: f64) -> Option<f64> {
    let curv = fp - 2.0 * f0 + fm;
    if !(curv > 0.0) {
        return None;
    }
    let t = 0.5 * h * (fm - fp) / curv;
    t.is_finite().then(|| t.clamp(-FRAC_PI_2, FRAC_PI_2))
}

/// Rotation descent from `start` until `budget` evaluations are spent or a
/// full sweep improves the objective by less than [`CONVERGENCE_TOL`].
pub(crate) fn rotation_descent<O: RowObjective>(
    objective: &mut O,
    start: Isometry,
    budget: usize,
    order: PairOrder,
    rng: &mut SeededRng,
) -> DescentOutcome {
    let mut w = start;
    let mut current = objective.evaluate(&w);
    let mut evaluations = 1usize;
    let rows = w.rows();
    let mut converged = rows < 2;
    let mut budget_exhausted = false;
    let mut step = WIDE_STEP;
    let (mut rk, mut rl) = (Vec::new(), Vec::new());

    'sweeps: while !converged {
        let sweep_start = current;
        let pairs: Vec<(usize, usize)> = match order {
            PairOrder::Cyclic => (0..rows)
                .flat_map(|k| (k + 1..rows).map(move |l| (k, l)))
                .collect(),
            PairOrder::Random(count) => (0..count)
                .map(|_| {
                    let k = rng.random_range(0..rows);
                    let l = (k + rng.random_range(1..rows)) % rows;
                    (k, l)
                })
                .collect(),
        };
        let phi0: f64 = rng.random_range(0.0..PI);
        let mut moved = 0.0f64;
        let mut accepted = 0usize;
        for (k, l) in pairs {
            for phi in [phi0, phi0 + 0.5 * PI] {
                let phase = Complex64::from_polar(1.0, phi);
                let mut eval = |theta: f64, evaluations: &mut usize| {
                    rotated(&w, k, l, theta, phase, &mut rk, &mut rl);
                    *evaluations += 1;
                    objective.evaluate_pair(&w, k, l, &rk, &rl)
                };
                let mut best = (0.0, current);
                let mut h = step;
                for _ in 0..2 {
                    let fm = eval(-h, &mut evaluations);
                    let fp = eval(h, &mut evaluations);
                    for cand in [(-h, fm), (h, fp)] {
                        if cand.1 < best.1 {
                            best = cand;
                        }
                    }
                    if let Some(t) = parabola_step(h, fm, current, fp) {
                        if t != 0.0 && t.abs() != h {
                            let ft = eval(t, &mut evaluations);
                            if ft < best.1 {
                                best = (t, ft);
                            }
                        }
                        break;
                    }
                    // Not locally convex at this width: probe once more wide.
                    if h >= WIDE_STEP {
                        break;
                    }
                    h = WIDE_STEP;
                }
                if best.1 < current && best.0 != 0.0 {
                    let s = phase * best.0.sin();
                    w.rotate_rows(k, l, best.0.cos(), s);
                    objective.commit(&w, k, l);
                    current = best.1;
                    moved += best.0.abs();
                    accepted += 1;
                }
                if evaluations >= budget {
                    budget_exhausted = true;
                    break 'sweeps;
                }
            }
        }
        step = if accepted > 0 {
            (moved / accepted as f64).clamp(MIN_STEP, WIDE_STEP)
        } else {
            (0.5 * step).max(MIN_STEP)
        };
        converged = sweep_start - current < CONVERGENCE_TOL;
    }

    // Re-evaluate from scratch so the reported value carries no drift from
    // incremental updates.
    let value = objective.evaluate(&w);
    DescentOutcome {
        value,
        isometry: w,
        evaluations,
        converged,
        budget_exhausted: budget_exhausted && !converged,
    }
}
