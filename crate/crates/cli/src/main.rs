//! Batch front end for the extended Dicke model solvers: every computation is
//! a reproducible job with CSV outputs and a JSON config sidecar.
//!
//! Exit codes: 0 success, 1 oracle mismatch, 2 configuration error,
//! 3 numerical non-convergence.

mod jobs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dicke_core::scan::{GridSpec, ModelKind, ScanTolerances, SecondAxis};
use dicke_core::spectrum::ConvergencePolicy;

use jobs::{
    CliError, JobConfig, ProbsJob, RangeArg, RwaDiagramJob, ScanJob, SpectrumJob, VariationalJob,
};

#[derive(Parser)]
#[command(
    name = "dicke",
    about = "Ground states, phase diagrams, and fluctuations of the extended Dicke model",
    version
)]
struct Cli {
    /// Cap the worker pool used by grid scans.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Load the full job from a JSON config (parameter flags are ignored).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV path (a `<output>.config.json` sidecar is written too).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct FrequencyOpts {
    /// Field frequency.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,

    /// Lower atomic level energy.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega1: f64,

    /// Upper atomic level energy.
    #[arg(long, default_value_t = 1.0)]
    omega2: f64,
}

#[derive(Args, Debug, Clone)]
struct PolicyOpts {
    /// Starting photon cutoff (default: N_a + 10).
    #[arg(long)]
    initial_cutoff: Option<u32>,

    /// Cutoff increment between convergence checks.
    #[arg(long, default_value_t = 2)]
    cutoff_step: u32,

    /// Required squared overlap between successive ground vectors.
    #[arg(long, default_value_t = 1.0 - 1e-8)]
    overlap_threshold: f64,

    /// Energy tolerance per particle between successive cutoffs.
    #[arg(long, default_value_t = 1e-9)]
    energy_tol: f64,

    /// Photon cutoff ceiling.
    #[arg(long, default_value_t = 512)]
    max_cutoff: u32,
}

impl PolicyOpts {
    fn to_policy(&self) -> ConvergencePolicy {
        ConvergencePolicy {
            initial_cutoff: self.initial_cutoff,
            cutoff_step: self.cutoff_step,
            overlap_threshold: self.overlap_threshold,
            energy_tol_per_particle: self.energy_tol,
            max_cutoff: self.max_cutoff,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonOpts,

    #[arg(long)]
    na: Option<u32>,

    #[arg(long, allow_hyphen_values = true)]
    x12: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<f64>,

    /// Non-diagonal dipole strength (diagram label).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    eta: f64,

    /// Solve the excitation-conserving model instead of the full one.
    #[arg(long)]
    rwa: bool,

    /// Levels to report per sector.
    #[arg(long, default_value_t = 1)]
    levels: usize,

    /// Block ceiling for the excitation-conserving ground search.
    #[arg(long)]
    m_max: Option<u32>,

    #[command(flatten)]
    freq: FrequencyOpts,

    #[command(flatten)]
    policy: PolicyOpts,
}

#[derive(Args, Debug, Clone)]
struct RwaDiagramArgs {
    #[command(flatten)]
    common: CommonOpts,

    #[arg(long)]
    na: Option<u32>,

    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<f64>,

    /// x12 range, `min:max:count`.
    #[arg(long, allow_hyphen_values = true)]
    x12: Option<RangeArg>,

    /// Number of block energy curves to emit.
    #[arg(long, default_value_t = 5)]
    m_curves: u32,

    #[arg(long)]
    m_max: Option<u32>,

    #[command(flatten)]
    freq: FrequencyOpts,
}

#[derive(Args, Debug, Clone)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonOpts,

    #[arg(long)]
    na: Option<u32>,

    /// x12 range, `min:max:count`.
    #[arg(long, allow_hyphen_values = true)]
    x12: Option<RangeArg>,

    /// zeta range, `min:max:count` (exclusive with --chi).
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<RangeArg>,

    /// chi range, `min:max:count` (converted via chi = (zeta + 2 eta)/omega_a).
    #[arg(long, conflicts_with = "zeta", allow_hyphen_values = true)]
    chi: Option<RangeArg>,

    /// Non-diagonal dipole strength (diagram label).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    eta: f64,

    /// Edge fidelity at or below this marks a discontinuous transition.
    #[arg(long, default_value_t = 1e-6)]
    zero_fid_threshold: f64,

    /// Local fidelity minima above this are not reported.
    #[arg(long, default_value_t = 0.999)]
    continuous_ceiling: f64,

    #[command(flatten)]
    freq: FrequencyOpts,

    #[command(flatten)]
    policy: PolicyOpts,
}

#[derive(Args, Debug, Clone)]
struct ScanFluctuationsArgs {
    #[command(flatten)]
    scan: ScanArgs,

    /// Scan the excitation-conserving model instead of the full one.
    #[arg(long)]
    rwa: bool,

    #[arg(long)]
    m_max: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct VariationalArgs {
    #[command(flatten)]
    common: CommonOpts,

    /// x12 range, `min:max:count`.
    #[arg(long, allow_hyphen_values = true)]
    x12: Option<RangeArg>,

    /// chi range, `min:max:count`.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<RangeArg>,

    #[arg(long, default_value_t = 0.0)]
    omega1: f64,

    #[arg(long, default_value_t = 1.0)]
    omega_a: f64,
}

#[derive(Args, Debug, Clone)]
struct ProbsArgs {
    #[command(flatten)]
    common: CommonOpts,

    #[arg(long)]
    na: Option<u32>,

    #[arg(long, allow_hyphen_values = true)]
    x12: Option<f64>,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    eta: f64,

    /// Single value or range `min:max:count`; default covers zeta = 0.05 k
    /// for k in [-80, 20].
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<RangeArg>,

    #[command(flatten)]
    freq: FrequencyOpts,

    #[command(flatten)]
    policy: PolicyOpts,
}

#[derive(Args, Debug, Clone)]
struct OracleCheckArgs {}

#[derive(Subcommand)]
enum Command {
    /// Lowest levels and the ground-state summary at a single parameter point.
    Spectrum(SpectrumArgs),
    /// Block ground energies per particle versus x12 at fixed zeta.
    RwaDiagram(RwaDiagramArgs),
    /// Full-model fidelity phase diagram over (x12, zeta-or-chi).
    ScanFidelity(ScanArgs),
    /// Fluctuation maps over (x12, zeta-or-chi) for either model.
    ScanFluctuations(ScanFluctuationsArgs),
    /// Closed-form mean-field minimum energy surface and separatrix.
    Variational(VariationalArgs),
    /// Excitation and zero-photon conditional probability tables.
    Probs(ProbsArgs),
    /// Closed-form-versus-numeric oracle suite; nonzero exit on mismatch.
    OracleCheck(OracleCheckArgs),
}

fn missing(flag: &str) -> CliError {
    CliError::Config(format!("--{flag} is required (or use --config)"))
}

fn build_scan_spec(
    a: &ScanArgs,
    model: ModelKind,
    m_max: Option<u32>,
) -> Result<GridSpec, CliError> {
    let x12 = a.x12.ok_or_else(|| missing("x12"))?;
    let (second_axis, second) = match (a.zeta, a.chi) {
        (Some(z), None) => (SecondAxis::Zeta, z),
        (None, Some(c)) => (SecondAxis::Chi, c),
        (None, None) => return Err(missing("zeta")),
        (Some(_), Some(_)) => unreachable!("clap enforces exclusivity"),
    };
    Ok(GridSpec {
        n_atoms: a.na.ok_or_else(|| missing("na"))?,
        model,
        x12: x12.to_axis(),
        second_axis,
        second: second.to_axis(),
        eta: a.eta,
        omega_field: a.freq.omega,
        omega1: a.freq.omega1,
        omega2: a.freq.omega2,
        policy: a.policy.to_policy(),
        tolerances: ScanTolerances {
            zero_fidelity_threshold: a.zero_fid_threshold,
            continuous_ceiling: a.continuous_ceiling,
        },
        m_max,
    })
}

fn resolve(command: Command) -> Result<(JobConfig, PathBuf), CliError> {
    let (config, output, built): (Option<PathBuf>, Option<PathBuf>, _) = match command {
        Command::Spectrum(a) => (
            a.common.config.clone(),
            a.common.output.clone(),
            if a.common.config.is_some() {
                None
            } else {
                Some(JobConfig::Spectrum(SpectrumJob {
                    n_atoms: a.na.ok_or_else(|| missing("na"))?,
                    x12: a.x12.ok_or_else(|| missing("x12"))?,
                    zeta: a.zeta.ok_or_else(|| missing("zeta"))?,
                    eta: a.eta,
                    rwa: a.rwa,
                    levels: a.levels.max(1),
                    omega_field: a.freq.omega,
                    omega1: a.freq.omega1,
                    omega2: a.freq.omega2,
                    policy: a.policy.to_policy(),
                    m_max: a.m_max,
                }))
            },
        ),
        Command::RwaDiagram(a) => (
            a.common.config.clone(),
            a.common.output.clone(),
            if a.common.config.is_some() {
                None
            } else {
                Some(JobConfig::RwaDiagram(RwaDiagramJob {
                    n_atoms: a.na.ok_or_else(|| missing("na"))?,
                    zeta: a.zeta.ok_or_else(|| missing("zeta"))?,
                    x12: a.x12.ok_or_else(|| missing("x12"))?,
                    m_curves: a.m_curves.max(1),
                    omega_field: a.freq.omega,
                    omega1: a.freq.omega1,
                    omega2: a.freq.omega2,
                    m_max: a.m_max,
                }))
            },
        ),
        Command::ScanFidelity(a) => (
            a.common.config.clone(),
            a.common.output.clone(),
            if a.common.config.is_some() {
                None
            } else {
                Some(JobConfig::ScanFidelity(ScanJob {
                    spec: build_scan_spec(&a, ModelKind::Full, None)?,
                }))
            },
        ),
        Command::ScanFluctuations(a) => (
            a.scan.common.config.clone(),
            a.scan.common.output.clone(),
            if a.scan.common.config.is_some() {
                None
            } else {
                let model = if a.rwa {
                    ModelKind::Rwa
                } else {
                    ModelKind::Full
                };
                Some(JobConfig::ScanFluctuations(ScanJob {
                    spec: build_scan_spec(&a.scan, model, a.m_max)?,
                }))
            },
        ),
        Command::Variational(a) => (
            a.common.config.clone(),
            a.common.output.clone(),
            if a.common.config.is_some() {
                None
            } else {
                Some(JobConfig::Variational(VariationalJob {
                    x12: a.x12.ok_or_else(|| missing("x12"))?,
                    chi: a.chi.ok_or_else(|| missing("chi"))?,
                    omega1: a.omega1,
                    omega_a: a.omega_a,
                }))
            },
        ),
        Command::Probs(a) => (
            a.common.config.clone(),
            a.common.output.clone(),
            if a.common.config.is_some() {
                None
            } else {
                Some(JobConfig::Probs(ProbsJob {
                    n_atoms: a.na.ok_or_else(|| missing("na"))?,
                    x12: a.x12.ok_or_else(|| missing("x12"))?,
                    eta: a.eta,
                    zeta: a.zeta.unwrap_or(RangeArg {
                        min: -4.0,
                        max: 1.0,
                        count: 101,
                    }),
                    omega_field: a.freq.omega,
                    omega1: a.freq.omega1,
                    omega2: a.freq.omega2,
                    policy: a.policy.to_policy(),
                }))
            },
        ),
        Command::OracleCheck(_) => (None, None, Some(JobConfig::OracleCheck {})),
    };
    let job = match (config, built) {
        (Some(path), _) => JobConfig::load(&path)?,
        (None, Some(job)) => job,
        (None, None) => unreachable!(),
    };
    let out = output.unwrap_or_else(|| PathBuf::from(job.default_output()));
    Ok((job, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let (job, output) = match resolve(cli.command) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if matches!(job, JobConfig::OracleCheck {}) {
        return match jobs::run_oracle_check() {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => {
                eprintln!("oracle check failed");
                ExitCode::from(1)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    match jobs::run(&job, &output) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Numerical(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
