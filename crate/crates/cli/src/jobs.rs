//! Job descriptions and runners. Every command resolves its flags into a
//! serializable [`JobConfig`] whose JSON form is written next to the output,
//! so any result can be reproduced byte for byte with `--config`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dicke_core::analytic::{decoupled_ground, na2_rwa_spectrum, zeta_transition_points};
use dicke_core::fock::{build_sector, SectorLabel};
use dicke_core::hamiltonian::{assemble, assemble_decoupled};
use dicke_core::model::{DiagramControls, DimensionlessControls, ModelParams};
use dicke_core::observables::{excitation_distribution, number_stats, NumberObservable};
use dicke_core::scan::{
    fmt_float, overlay_variational, scan_fidelity, scan_fluctuations, scan_rwa, AxisSpec, GridSpec,
    ModelKind,
};
use dicke_core::spectrum::{
    default_m_max, full_ground, lowest_eigenpair, parity_sector_ground, rwa_block_ground,
    rwa_ground, ConvergencePolicy, ParityTag,
};
use dicke_core::variational::min_energy;
use dicke_core::DickeError;

/// CLI failure classes; the numeric codes are part of the interface.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Config(String),
    /// Exit code 3.
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl From<DickeError> for CliError {
    fn from(e: DickeError) -> Self {
        match &e {
            DickeError::NonConvergence { .. }
            | DickeError::CutoffExceeded { .. }
            | DickeError::MMaxTooSmall { .. }
            | DickeError::InvariantViolated(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `min:max:count` range (or a single value) on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeArg {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl RangeArg {
    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            vec![self.min]
        } else {
            (0..self.count)
                .map(|i| self.min + i as f64 * (self.max - self.min) / (self.count as f64 - 1.0))
                .collect()
        }
    }

    pub fn to_axis(&self) -> AxisSpec {
        AxisSpec::new(self.min, self.max, self.count)
    }
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = |m: &str| format!("{m} (expected `value` or `min:max:count`, got `{s}`)");
        match parts.as_slice() {
            [v] => {
                let x: f64 = v.parse().map_err(|_| bad("not a number"))?;
                Ok(RangeArg {
                    min: x,
                    max: x,
                    count: 1,
                })
            }
            [a, b, n] => {
                let min: f64 = a.parse().map_err(|_| bad("bad min"))?;
                let max: f64 = b.parse().map_err(|_| bad("bad max"))?;
                let count: usize = n.parse().map_err(|_| bad("bad count"))?;
                if count < 2 {
                    return Err(bad("count must be >= 2"));
                }
                if !(max >= min) {
                    return Err(bad("max must be >= min"));
                }
                Ok(RangeArg { min, max, count })
            }
            _ => Err(bad("wrong number of fields")),
        }
    }
}

// ---------------------------------------------------------------------------
// job descriptions

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJob {
    pub n_atoms: u32,
    pub x12: f64,
    pub zeta: f64,
    pub eta: f64,
    pub rwa: bool,
    pub levels: usize,
    pub omega_field: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub policy: ConvergencePolicy,
    pub m_max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RwaDiagramJob {
    pub n_atoms: u32,
    pub zeta: f64,
    pub x12: RangeArg,
    pub m_curves: u32,
    pub omega_field: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub m_max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanJob {
    pub spec: GridSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalJob {
    pub x12: RangeArg,
    pub chi: RangeArg,
    pub omega1: f64,
    pub omega_a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbsJob {
    pub n_atoms: u32,
    pub x12: f64,
    pub eta: f64,
    pub zeta: RangeArg,
    pub omega_field: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub policy: ConvergencePolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum JobConfig {
    Spectrum(SpectrumJob),
    RwaDiagram(RwaDiagramJob),
    ScanFidelity(ScanJob),
    ScanFluctuations(ScanJob),
    Variational(VariationalJob),
    Probs(ProbsJob),
    OracleCheck {},
}

impl JobConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn default_output(&self) -> &'static str {
        match self {
            JobConfig::Spectrum(_) => "spectrum.csv",
            JobConfig::RwaDiagram(_) => "rwa_diagram.csv",
            JobConfig::ScanFidelity(_) => "scan_fidelity.csv",
            JobConfig::ScanFluctuations(_) => "scan_fluctuations.csv",
            JobConfig::Variational(_) => "variational.csv",
            JobConfig::Probs(_) => "probs.csv",
            JobConfig::OracleCheck {} => "oracle_check.txt",
        }
    }
}

fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)?;
    Ok(())
}

fn write_sidecar(output: &Path, job: &JobConfig) -> CliResult<()> {
    let mut sidecar = output.as_os_str().to_owned();
    sidecar.push(".config.json");
    let doc = serde_json::to_string_pretty(job)
        .map_err(|e| CliError::Config(format!("serialize config: {e}")))?;
    fs::write(PathBuf::from(sidecar), doc + "\n")?;
    Ok(())
}

fn separatrix_path(output: &Path) -> PathBuf {
    let mut p = output.as_os_str().to_owned();
    p.push(".separatrix.csv");
    PathBuf::from(p)
}

// ---------------------------------------------------------------------------
// runners

fn diagram_params(
    n_atoms: u32,
    x12: f64,
    zeta: f64,
    eta: f64,
    omega_field: f64,
    omega1: f64,
    omega2: f64,
) -> CliResult<ModelParams> {
    Ok(DiagramControls { x12, zeta, eta }.to_params(n_atoms, omega_field, omega1, omega2)?)
}

fn run_spectrum(job: &SpectrumJob, output: &Path) -> CliResult<()> {
    let p = diagram_params(
        job.n_atoms,
        job.x12,
        job.zeta,
        job.eta,
        job.omega_field,
        job.omega1,
        job.omega2,
    )?;
    let na = job.n_atoms as f64;
    let mut csv = String::from("sector,level,energy,energy_pp\n");
    let summary;
    if job.rwa {
        let m_max = match job.m_max {
            Some(m) => m,
            None => default_m_max(&p)?,
        };
        let g = rwa_ground(&p, m_max)?;
        let m_star = g.excitation_mean.round() as u32;
        for m in 0..=(m_star + 3).min(m_max) {
            let basis = build_sector(p.n_atoms, SectorLabel::RwaBlock(m))?;
            let h = assemble(&p, &basis, true)?;
            let pairs = lowest_eigenpair(&h, job.levels.min(h.dim()))?;
            for (j, pair) in pairs.iter().enumerate() {
                csv.push_str(&format!(
                    "m={m},{j},{},{}\n",
                    fmt_float(pair.energy),
                    fmt_float(pair.energy / na)
                ));
            }
        }
        summary = format!(
            "ground: E = {:.12e} (per particle {:.12e}), m = {m_star}, parity = {}, degenerate = {}",
            g.energy(),
            g.energy_per_particle(),
            g.parity.sign().unwrap(),
            g.near_degenerate
        );
    } else {
        for parity in [ParityTag::Even, ParityTag::Odd] {
            let g = parity_sector_ground(&p, parity, &job.policy)?;
            let h = assemble(&p, &g.basis, false)?;
            let pairs = lowest_eigenpair(&h, job.levels.min(h.dim()))?;
            let name = match parity {
                ParityTag::Even => "even",
                ParityTag::Odd => "odd",
                ParityTag::Mixed => unreachable!(),
            };
            for (j, pair) in pairs.iter().enumerate() {
                csv.push_str(&format!(
                    "{name},{j},{},{}\n",
                    fmt_float(pair.energy),
                    fmt_float(pair.energy / na)
                ));
            }
        }
        let g = full_ground(&p, &job.policy)?;
        let var_nu = number_stats(&g, NumberObservable::Photons).variance;
        let var_n2 = number_stats(&g, NumberObservable::Level2).variance;
        summary = format!(
            "ground: E = {:.12e} (per particle {:.12e}), parity = {}, <M> = {:.9}, \
             cutoff = {}, overlap = {:.12}, var_nu = {:.6e}, var_n2 = {:.6e}",
            g.energy(),
            g.energy_per_particle(),
            g.parity.sign().unwrap(),
            g.excitation_mean,
            g.cutoff_used,
            g.convergence_overlap,
            var_nu,
            var_n2
        );
    }
    write_output(output, &csv)?;
    println!("{summary}");
    Ok(())
}

fn run_rwa_diagram(job: &RwaDiagramJob, output: &Path) -> CliResult<()> {
    let na = job.n_atoms as f64;
    let xs = job.x12.values();
    let rows: Vec<CliResult<String>> = xs
        .par_iter()
        .map(|&x12| {
            let p = diagram_params(
                job.n_atoms,
                x12,
                job.zeta,
                0.0,
                job.omega_field,
                job.omega1,
                job.omega2,
            )?;
            let m_max = match job.m_max {
                Some(m) => m,
                None => default_m_max(&p)?,
            };
            let g = rwa_ground(&p, m_max)?;
            let m_star = g.excitation_mean.round() as u32;
            let mut out = String::new();
            for m in 0..job.m_curves {
                let pair = rwa_block_ground(&p, m)?;
                out.push_str(&format!(
                    "{},{m},{},{}\n",
                    fmt_float(x12),
                    fmt_float(pair.energy / na),
                    u32::from(m == m_star)
                ));
            }
            Ok(out)
        })
        .collect();
    let mut csv = String::from("x12,m,energy_pp,is_ground\n");
    for row in rows {
        csv.push_str(&row?);
    }
    write_output(output, &csv)?;
    Ok(())
}

fn run_scan(job: &ScanJob, fluctuations: bool, output: &Path) -> CliResult<()> {
    let grid = if fluctuations {
        scan_fluctuations(&job.spec)?
    } else {
        match job.spec.model {
            ModelKind::Rwa => scan_rwa(&job.spec)?,
            ModelKind::Full => scan_fidelity(&job.spec)?,
        }
    };
    write_output(output, &grid.to_csv())?;
    let mut sep = String::from("x12,zeta_or_chi\n");
    for (x, second) in overlay_variational(&job.spec) {
        sep.push_str(&format!("{},{}\n", fmt_float(x), fmt_float(second)));
    }
    write_output(&separatrix_path(output), &sep)?;
    if grid.failed_cells > 0 {
        return Err(CliError::Numerical(format!(
            "{} of {} cells failed to converge (flagged `failed` in {})",
            grid.failed_cells,
            grid.cells.len(),
            output.display()
        )));
    }
    Ok(())
}

fn run_variational(job: &VariationalJob, output: &Path) -> CliResult<()> {
    if !(job.omega_a > 0.0) {
        return Err(CliError::Config(format!(
            "omega_a must be positive, got {}",
            job.omega_a
        )));
    }
    let mut csv = String::from("x12,chi,e_min\n");
    for &x12 in &job.x12.values() {
        for &chi in &job.chi.values() {
            let d = DimensionlessControls {
                x12,
                chi,
                zeta_bar: chi,
                eta_bar: 0.0,
                omega_a: job.omega_a,
            };
            csv.push_str(&format!(
                "{},{},{}\n",
                fmt_float(x12),
                fmt_float(chi),
                fmt_float(min_energy(&d, job.omega1))
            ));
        }
    }
    write_output(output, &csv)?;
    let mut sep = String::from("x12,chi\n");
    for &x12 in &job.x12.values() {
        sep.push_str(&format!(
            "{},{}\n",
            fmt_float(x12),
            fmt_float(x12 * x12 - 1.0)
        ));
    }
    write_output(&separatrix_path(output), &sep)?;
    Ok(())
}

fn run_probs(job: &ProbsJob, output: &Path) -> CliResult<()> {
    let zetas = job.zeta.values();
    let blocks: Vec<CliResult<String>> = zetas
        .par_iter()
        .map(|&zeta| {
            let p = diagram_params(
                job.n_atoms,
                job.x12,
                zeta,
                job.eta,
                job.omega_field,
                job.omega1,
                job.omega2,
            )?;
            let g = full_ground(&p, &job.policy)?;
            let dist = excitation_distribution(&g);
            let mut out = String::new();
            for (&m, &pm) in &dist.p_of_m {
                if pm > 0.0 {
                    out.push_str(&format!("{},p_m,{m},{}\n", fmt_float(zeta), fmt_float(pm)));
                }
            }
            if let Some(cond) = &dist.p_n2_given_nu0 {
                for (&n2, &pn) in cond {
                    if pn > 0.0 {
                        out.push_str(&format!(
                            "{},p_n2_given_nu0,{n2},{}\n",
                            fmt_float(zeta),
                            fmt_float(pn)
                        ));
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut csv = String::from("zeta,kind,index,value\n");
    for block in blocks {
        csv.push_str(&block?);
    }
    write_output(output, &csv)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// oracle check

struct OracleReport {
    failures: usize,
}

impl OracleReport {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

/// Runs the closed-form-versus-numeric oracle suite; returns false on any
/// mismatch.
pub fn run_oracle_check() -> CliResult<bool> {
    let mut report = OracleReport { failures: 0 };

    // Two-atom block spectra against assembled blocks.
    let mut worst_e = 0.0f64;
    for m in 0..=6u32 {
        let basis = build_sector(2, SectorLabel::RwaBlock(m))?;
        for i in 0..10 {
            for j in 0..10 {
                let x12 = i as f64 * 2.0 / 9.0;
                let zeta = -3.0 + j as f64 * 4.0 / 9.0;
                let p = diagram_params(2, x12, zeta, 0.0, 1.0, 0.0, 1.0)?;
                let h = assemble(&p, &basis, true)?;
                let pairs = lowest_eigenpair(&h, h.dim())?;
                let levels = na2_rwa_spectrum(m, x12, zeta, 1.0)?;
                for (pair, level) in pairs.iter().zip(&levels) {
                    worst_e = worst_e.max((pair.energy - level.energy).abs());
                }
            }
        }
    }
    report.record(
        "two-atom block spectrum",
        worst_e < 1e-10,
        format!("max |dE| = {worst_e:.3e} over m <= 6 on a 10x10 grid"),
    );

    // Zero-coupling transition points characterize adjacent level crossings.
    let mut worst_cross = 0.0f64;
    for na in 2..=8u32 {
        for (m, &zm) in zeta_transition_points(na, 1.0)?.iter().enumerate() {
            let level = |mm: u32| -> f64 {
                let n1 = (na - mm) as f64;
                (1.0 + zm * n1 / (na as f64 - 1.0)) * mm as f64
            };
            worst_cross = worst_cross.max((level(m as u32) - level(m as u32 + 1)).abs());
        }
    }
    report.record(
        "zero-coupling transition points",
        worst_cross < 1e-12,
        format!("max |E_m - E_(m+1)| at the crossings = {worst_cross:.3e}"),
    );

    // Decoupled closed-form ground states against the zero-photon sectors.
    let mut worst_dec = 0.0f64;
    for na in [2u32, 3] {
        for i in 0..7 {
            for j in 0..7 {
                let zb = -3.0 + i as f64;
                let eb = -1.5 + j as f64 * 0.5;
                let p = diagram_params(na, 0.0, zb, eb, 1.0, 0.0, 1.0)?;
                let (even, odd, _) = decoupled_ground(na, zb, eb, 1.0)?;
                for dg in [&even, &odd] {
                    let label = match dg.parity {
                        ParityTag::Even => SectorLabel::ParityEven(0),
                        ParityTag::Odd => SectorLabel::ParityOdd(0),
                        ParityTag::Mixed => unreachable!(),
                    };
                    let basis = build_sector(na, label)?;
                    let h = assemble_decoupled(&p, &basis)?;
                    let e = lowest_eigenpair(&h, 1)?[0].energy;
                    worst_dec = worst_dec.max((e - dg.energy).abs());
                }
            }
        }
    }
    report.record(
        "decoupled closed-form ground states",
        worst_dec < 1e-10,
        format!("max |dE| = {worst_dec:.3e} for 2 and 3 atoms on a coupling grid"),
    );

    // Mean-field minimum against a direct surface scan.
    let mut worst_var = 0.0f64;
    for i in 0..12 {
        for j in 0..12 {
            let x12 = i as f64 * 2.5 / 11.0;
            let chi = -2.0 + j as f64 * 4.0 / 11.0;
            let p = ModelParams::resonant(2, 0.5 * x12, chi, 0.0);
            let direct = {
                use dicke_core::variational::{energy_surface, VariationalPoint};
                let g = |rho: f64| {
                    let r = 2.0 * p.mu / p.omega_field * rho / (1.0 + rho * rho);
                    energy_surface(&p, &VariationalPoint::radial(r, rho), false)
                };
                let mut best = g(0.0);
                let n = 40_000;
                for t in 1..=n {
                    best = best.min(g(t as f64 * 8.0 / n as f64));
                }
                best
            };
            let d = DimensionlessControls {
                x12,
                chi,
                zeta_bar: chi,
                eta_bar: 0.0,
                omega_a: 1.0,
            };
            worst_var = worst_var.max((direct - min_energy(&d, 0.0)).abs());
        }
    }
    report.record(
        "mean-field minimum energy",
        worst_var < 1e-6,
        format!("max |scan - formula| = {worst_var:.3e} (dense 1-D scan)"),
    );

    // Fixed-excitation fluctuation identity on a sample of ground states.
    let mut worst_fluct = 0.0f64;
    for (x12, zeta) in [(0.4, 0.5), (1.1, -0.6), (0.9, -2.5), (1.8, 0.1)] {
        let p = diagram_params(7, x12, zeta, 0.0, 1.0, 0.0, 1.0)?;
        let g = rwa_ground(&p, default_m_max(&p)?)?;
        let nu = number_stats(&g, NumberObservable::Photons).variance;
        let n1 = number_stats(&g, NumberObservable::Level1).variance;
        let n2 = number_stats(&g, NumberObservable::Level2).variance;
        worst_fluct = worst_fluct.max((nu - n2).abs()).max((n1 - n2).abs());
    }
    report.record(
        "fixed-excitation fluctuation identity",
        worst_fluct < 1e-12,
        format!("max variance spread = {worst_fluct:.3e}"),
    );

    Ok(report.failures == 0)
}

/// Executes a job; the output path is not part of the job identity.
pub fn run(job: &JobConfig, output: &Path) -> CliResult<()> {
    match job {
        JobConfig::OracleCheck {} => unreachable!("oracle-check is dispatched separately"),
        _ => write_sidecar(output, job)?,
    }
    match job {
        JobConfig::Spectrum(j) => run_spectrum(j, output),
        JobConfig::RwaDiagram(j) => run_rwa_diagram(j, output),
        JobConfig::ScanFidelity(j) => run_scan(j, false, output),
        JobConfig::ScanFluctuations(j) => run_scan(j, true, output),
        JobConfig::Variational(j) => run_variational(j, output),
        JobConfig::Probs(j) => run_probs(j, output),
        JobConfig::OracleCheck {} => unreachable!(),
    }
}
