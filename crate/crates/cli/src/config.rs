use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entlab_core::measures::{EstimatorConfig, SANDWICH_TOL};
use serde::Serialize;

/// Entropy inequalities, extremal states and entanglement bounds.
#[derive(Debug, Parser)]
#[command(name = "entlab", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for every stochastic step (required by `bounds` and `sweep`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Independent optimizer restarts.
    #[arg(long, global = true, default_value_t = 32)]
    pub restarts: usize,

    /// Objective evaluations per restart.
    #[arg(long, global = true, default_value_t = 2000)]
    pub budget: usize,

    /// Dimension of the extending system searched for E_sq (default rank²).
    #[arg(long, global = true)]
    pub ancilla_dim: Option<usize>,

    /// Pure-state ensemble size searched for E_f (default rank²).
    #[arg(long, global = true)]
    pub ensemble_size: Option<usize>,

    /// Ordering tolerance for the bound sandwich.
    #[arg(long, global = true, default_value_t = SANDWICH_TOL)]
    pub tolerance: f64,

    /// Unit of reported entropies.
    #[arg(long, global = true, value_enum, default_value_t = Unit::Nats)]
    pub unit: Unit,

    /// Report file, or output directory for `extremal`. Reports go to stdout
    /// when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check entropy inequalities on a state file.
    Check {
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
    },
    /// Build a saturating state, its equality certificate and sharpness witness.
    Extremal {
        /// Mixture weights, comma separated; fractions such as `1/3` are accepted.
        #[arg(long, value_delimiter = ',', value_parser = parse_fraction, required = true)]
        kappas: Vec<f64>,
        /// Density matrix file for the second subsystem.
        #[arg(long)]
        rho2: PathBuf,
    },
    /// Lower bounds and upper estimates of E_f and E_sq for a bipartite state.
    Bounds { state: PathBuf },
    /// Check inequality families on seeded random states.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ssa,
    Essa,
    Triangle,
    Weakmono,
    Aux,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Nats,
    Bits,
}

impl Unit {
    /// Multiplier applied to values in nats at serialization.
    pub fn factor(self) -> f64 {
        match self {
            Unit::Nats => 1.0,
            Unit::Bits => std::f64::consts::LOG2_E,
        }
    }
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let d: f64 = d.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            n / d
        }
        None => s.parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{s}: not a finite number"))
    }
}

/// Everything that determines a report, embedded verbatim in it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub input: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub dims: Option<Vec<usize>>,
    pub family: Option<Family>,
    pub count: Option<usize>,
    pub kappas: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub restarts: usize,
    pub budget: usize,
    pub ancilla_dim: Option<usize>,
    pub ensemble_size: Option<usize>,
    pub tolerance: f64,
    pub unit: Unit,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let o = &cli.opts;
        let mut cfg = RunConfig {
            command: "",
            input: Vec::new(),
            output: o.out.clone(),
            dims: None,
            family: None,
            count: None,
            kappas: None,
            seed: o.seed,
            restarts: o.restarts,
            budget: o.budget,
            ancilla_dim: o.ancilla_dim,
            ensemble_size: o.ensemble_size,
            tolerance: o.tolerance,
            unit: o.unit,
        };
        match &cli.command {
            Command::Check { state, family } => {
                cfg.command = "check";
                cfg.input = vec![state.clone()];
                cfg.family = Some(*family);
            }
            Command::Extremal { kappas, rho2 } => {
                cfg.command = "extremal";
                cfg.input = vec![rho2.clone()];
                cfg.kappas = Some(kappas.clone());
            }
            Command::Bounds { state } => {
                cfg.command = "bounds";
                cfg.input = vec![state.clone()];
            }
            Command::Sweep { dims, count, family } => {
                cfg.command = "sweep";
                cfg.dims = Some(dims.clone());
                cfg.count = Some(*count);
                cfg.family = Some(*family);
            }
        }
        cfg
    }

    pub fn estimator(&self, seed: u64) -> EstimatorConfig {
        EstimatorConfig {
            ensemble_size: self.ensemble_size,
            ancilla_dim: self.ancilla_dim,
            restarts: self.restarts,
            budget: self.budget,
            seed,
            tolerance: self.tolerance,
        }
    }
}
