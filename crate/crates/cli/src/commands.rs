use std::fs;
use std::path::Path;

use entlab_core::entropy::{
    aux_reports, extended_ssa_report, ssa_report, triangle_report, weak_monotonicity_report,
    BipartiteEntropies, InequalityReport, TripartiteEntropies,
};
use entlab_core::extremal::{
    build_saturating_state, build_sharpness_witness, verify_equality_conditions,
    EqualityCertificate, SaturatingSpec,
};
use entlab_core::measures::{entanglement_bounds, SandwichReport};
use entlab_core::states::{random_density, DensityMatrix, SubsystemDims};
use serde::Serialize;

use crate::config::{Cli, Command, Family, RunConfig};
use crate::io::{emit, read_json, to_json, write_atomic};
use crate::{CliError, Result};

/// Largest total dimension accepted by tripartite sweeps.
pub const SWEEP_MAX_DIM: usize = 64;

/// Common header of every report.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a RunConfig,
    #[serde(flatten)]
    pub body: T,
}

fn envelope<T: Serialize>(config: &RunConfig, body: T) -> Envelope<'_, T> {
    Envelope { tool: "entlab", version: entlab_core::VERSION, config, body }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::from_cli(cli);
    match &cli.command {
        Command::Check { state, family } => cmd_check(&cfg, state, *family),
        Command::Extremal { kappas, rho2 } => cmd_extremal(&cfg, kappas, rho2),
        Command::Bounds { state } => cmd_bounds(&cfg, state),
        Command::Sweep { dims, count, family } => cmd_sweep(&cfg, dims, *count, *family),
    }
}

fn require_seed(cfg: &RunConfig) -> Result<u64> {
    cfg.seed
        .ok_or_else(|| CliError::Usage(format!("`{}` is stochastic and needs --seed", cfg.command)))
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum Entropies {
    Bipartite(BipartiteEntropies),
    Tripartite(TripartiteEntropies),
}

impl Entropies {
    fn scaled(self, f: f64) -> Self {
        match self {
            Entropies::Bipartite(e) => Entropies::Bipartite(scale_bipartite(e, f)),
            Entropies::Tripartite(e) => Entropies::Tripartite(TripartiteEntropies {
                s1: e.s1 * f,
                s2: e.s2 * f,
                s3: e.s3 * f,
                s12: e.s12 * f,
                s13: e.s13 * f,
                s23: e.s23 * f,
                s123: e.s123 * f,
            }),
        }
    }
}

fn scale_bipartite(e: BipartiteEntropies, f: f64) -> BipartiteEntropies {
    BipartiteEntropies { s1: e.s1 * f, s2: e.s2 * f, s12: e.s12 * f }
}

/// Entropies and inequality reports of `family` on `rho`.
///
/// Tripartite states support every family (`triangle` refers to the 12
/// marginal); bipartite states support `triangle` and `all`.
pub fn family_reports(rho: &DensityMatrix, family: Family) -> Result<(Entropies, Vec<InequalityReport>)> {
    match rho.arity() {
        3 => {
            let e = TripartiteEntropies::of(rho)?;
            let reports = match family {
                Family::Ssa => vec![ssa_report(&e)],
                Family::Essa => vec![extended_ssa_report(&e)],
                Family::Triangle => vec![triangle_report(&e.bipartite())],
                Family::Weakmono => vec![weak_monotonicity_report(&e)],
                Family::Aux => aux_reports(&e),
                Family::All => {
                    let mut v = vec![
                        ssa_report(&e),
                        extended_ssa_report(&e),
                        triangle_report(&e.bipartite()),
                        weak_monotonicity_report(&e),
                    ];
                    v.extend(aux_reports(&e));
                    v
                }
            };
            Ok((Entropies::Tripartite(e), reports))
        }
        2 => match family {
            Family::Triangle | Family::All => {
                let e = BipartiteEntropies::of(rho)?;
                Ok((Entropies::Bipartite(e), vec![triangle_report(&e)]))
            }
            other => Err(CliError::Usage(format!(
                "family {other:?} needs a tripartite state, got a bipartite one"
            ))),
        },
        n => Err(CliError::Usage(format!("expected a bipartite or tripartite state, got {n} subsystems"))),
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub dims: Vec<usize>,
    pub entropies: Entropies,
    pub reports: Vec<InequalityReport>,
    pub all_satisfied: bool,
}

fn cmd_check(cfg: &RunConfig, path: &Path, family: Family) -> Result<()> {
    let rho: DensityMatrix = read_json(path)?;
    let (e, reports) = family_reports(&rho, family)?;
    let f = cfg.unit.factor();
    let all_satisfied = reports.iter().all(|r| r.satisfied);
    let body = CheckReport {
        dims: rho.dims().as_slice().to_vec(),
        entropies: e.scaled(f),
        reports: reports.iter().map(|r| r.scaled(f)).collect(),
        all_satisfied,
    };
    emit(cfg.output.as_deref(), &envelope(cfg, body))?;
    if all_satisfied {
        Ok(())
    } else {
        let names: Vec<&str> = reports.iter().filter(|r| !r.satisfied).map(|r| r.name.as_str()).collect();
        Err(CliError::Violation(format!("violated: {}", names.join(", "))))
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessSummary {
    pub cmi: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct ExtremalReport {
    pub kappas: Vec<f64>,
    pub dims: [usize; 2],
    /// `−Σ κ ln κ`, `S(ρ₂)` and their sum.
    pub predicted: BipartiteEntropies,
    pub measured: BipartiteEntropies,
    pub certificate: EqualityCertificate,
    pub witness: Option<WitnessSummary>,
    pub witness_error: Option<String>,
}

fn cmd_extremal(cfg: &RunConfig, kappas: &[f64], rho2_path: &Path) -> Result<()> {
    let dir = cfg
        .output
        .as_deref()
        .ok_or_else(|| CliError::Usage("`extremal` writes several files and needs --out <dir>".into()))?;
    let rho2: DensityMatrix = read_json(rho2_path)?;
    let spec = SaturatingSpec::new(kappas.to_vec(), rho2)?;
    let rho12 = build_saturating_state(&spec)?;
    let cert = verify_equality_conditions(&rho12)?;
    let s12 = spec.predicted_s12();
    let s2 = entlab_core::entropy::von_neumann_entropy(spec.rho2())?;
    let (witness, witness_error) = match build_sharpness_witness(&spec) {
        Ok(w) => (Some(w), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let f = cfg.unit.factor();
    let (d1, d2) = spec.dims();
    let body = ExtremalReport {
        kappas: spec.kappas().to_vec(),
        dims: [d1, d2],
        predicted: scale_bipartite(BipartiteEntropies { s1: s12 + s2, s2, s12 }, f),
        measured: scale_bipartite(BipartiteEntropies::of(&rho12)?, f),
        certificate: cert.scaled(f),
        witness: witness.as_ref().map(|w| WitnessSummary { cmi: w.cmi * f, bound: w.bound * f, ratio: w.ratio }),
        witness_error,
    };

    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    write_atomic(&dir.join("rho12.json"), &to_json(&rho12))?;
    write_atomic(&dir.join("certificate.json"), &to_json(&cert.scaled(f)))?;
    if let Some(w) = &witness {
        write_atomic(&dir.join("witness.json"), &to_json(&w.state))?;
    }
    write_atomic(&dir.join("report.json"), &to_json(&envelope(cfg, body)))?;
    if cert.passes {
        Ok(())
    } else {
        Err(CliError::Violation("constructed state fails its equality certificate".into()))
    }
}

#[derive(Debug, Serialize)]
pub struct BoundsReport {
    pub entropies: BipartiteEntropies,
    pub sandwich: SandwichReport,
}

fn cmd_bounds(cfg: &RunConfig, path: &Path) -> Result<()> {
    let seed = require_seed(cfg)?;
    let rho: DensityMatrix = read_json(path)?;
    if rho.arity() != 2 {
        return Err(CliError::Usage(format!("`bounds` needs a bipartite state, got {} subsystems", rho.arity())));
    }
    let e = BipartiteEntropies::of(&rho)?;
    let sandwich = entanglement_bounds(&rho, &cfg.estimator(seed))?;
    let f = cfg.unit.factor();
    let body = BoundsReport { entropies: scale_bipartite(e, f), sandwich: sandwich.scaled(f) };
    emit(cfg.output.as_deref(), &envelope(cfg, body))
}

#[derive(Debug, Serialize)]
pub struct FamilyStats {
    pub name: String,
    pub checked: usize,
    pub min_slack: Option<f64>,
    /// Sample index attaining `min_slack`.
    pub argmin: Option<usize>,
    pub violations: usize,
}

/// Everything needed to replay a violating sample.
#[derive(Debug, Serialize)]
pub struct ViolationDump {
    pub index: usize,
    pub seed: u64,
    pub rank: usize,
    pub report: InequalityReport,
    pub state: DensityMatrix,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub samples: usize,
    pub families: Vec<FamilyStats>,
    pub violations: Vec<ViolationDump>,
    pub all_satisfied: bool,
}

/// Seed and rank of sample `index`: seeds advance by one and ranks cycle
/// through `1..=total`.
pub fn sweep_sample(seed: u64, index: usize, total: usize) -> (u64, usize) {
    (seed.wrapping_add(index as u64), 1 + index % total)
}

fn cmd_sweep(cfg: &RunConfig, dims: &[usize], count: usize, family: Family) -> Result<()> {
    let seed = require_seed(cfg)?;
    let sd = SubsystemDims::new(dims.to_vec()).map_err(|e| CliError::Usage(format!("--dims: {e}")))?;
    if !(2..=3).contains(&sd.arity()) {
        return Err(CliError::Usage(format!("--dims needs 2 or 3 entries, got {}", sd.arity())));
    }
    let total = sd.total();
    if sd.arity() == 3 && total > SWEEP_MAX_DIM {
        return Err(CliError::Usage(format!("tripartite sweeps are limited to total dimension {SWEEP_MAX_DIM}, got {total}")));
    }
    let f = cfg.unit.factor();
    let mut families: Vec<FamilyStats> = Vec::new();
    let mut violations = Vec::new();
    for index in 0..count {
        let (s, rank) = sweep_sample(seed, index, total);
        let rho = random_density(&sd, rank, s)?;
        let (_, reports) = family_reports(&rho, family)?;
        for r in reports {
            let stats = match families.iter().position(|x| x.name == r.name) {
                Some(i) => &mut families[i],
                None => {
                    families.push(FamilyStats { name: r.name.clone(), checked: 0, min_slack: None, argmin: None, violations: 0 });
                    families.last_mut().expect("just pushed")
                }
            };
            stats.checked += 1;
            if stats.min_slack.is_none_or(|m| r.slack < m) {
                stats.min_slack = Some(r.slack);
                stats.argmin = Some(index);
            }
            if !r.satisfied {
                stats.violations += 1;
                violations.push(ViolationDump { index, seed: s, rank, report: r.scaled(f), state: rho.clone() });
            }
        }
    }
    for s in families.iter_mut() {
        s.min_slack = s.min_slack.map(|m| m * f);
    }
    let all_satisfied = violations.is_empty();
    let n = violations.len();
    let body = SweepReport { samples: count, families, violations, all_satisfied };
    emit(cfg.output.as_deref(), &envelope(cfg, body))?;
    if all_satisfied {
        Ok(())
    } else {
        Err(CliError::Violation(format!("{n} violations in sweep")))
    }
}
