//! Parameter-grid scans producing phase diagrams: excitation maps of the
//! excitation-conserving model, fidelity surfaces with transition
//! classification, fluctuation maps, and the variational-separatrix overlay.
//!
//! Cells are independent work items solved on a worker pool; every cell is
//! solved from scratch (no warm starts across cells, which could leak a
//! parity sector across a discontinuous crossing). Results are collected in
//! grid order and the classification pass is a sequential post-step, so
//! output is independent of worker scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::DiagramControls;
use crate::observables::{fidelity, number_stats, NumberObservable};
use crate::spectrum::{
    default_m_max, full_ground, rwa_ground, ConvergencePolicy, GroundState, DEGENERACY_TOL,
    RESIDUAL_TOL,
};
use crate::{DickeError, Result};

/// Inclusive linearly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(DickeError::InvalidParams(format!(
                "axis needs at least 2 points, got {}",
                self.count
            )));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(DickeError::InvalidParams(format!(
                "axis range [{}, {}] must be finite and ordered",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + i as f64 * (self.max - self.min) / (self.count as f64 - 1.0)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count as f64 - 1.0)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondAxis {
    Zeta,
    Chi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Rwa,
    Full,
}

/// Fidelity thresholds for transition classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanTolerances {
    /// Edge fidelity at or below this marks a discontinuous transition.
    pub zero_fidelity_threshold: f64,
    /// Local fidelity minima above this are not reported as transitions.
    pub continuous_ceiling: f64,
}

impl Default for ScanTolerances {
    fn default() -> Self {
        Self {
            zero_fidelity_threshold: 1e-6,
            continuous_ceiling: 0.999,
        }
    }
}

fn default_omega_field() -> f64 {
    1.0
}
fn default_omega2() -> f64 {
    1.0
}

/// A rectangular scan over `(x12, zeta-or-chi)` at fixed `eta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_atoms: u32,
    pub model: ModelKind,
    pub x12: AxisSpec,
    pub second_axis: SecondAxis,
    pub second: AxisSpec,
    /// Non-diagonal dipole strength (diagram label); must be 0 for the
    /// excitation-conserving model.
    #[serde(default)]
    pub eta: f64,
    #[serde(default = "default_omega_field")]
    pub omega_field: f64,
    #[serde(default)]
    pub omega1: f64,
    #[serde(default = "default_omega2")]
    pub omega2: f64,
    #[serde(default)]
    pub policy: ConvergencePolicy,
    #[serde(default)]
    pub tolerances: ScanTolerances,
    /// Optional override of the block ceiling for the excitation-conserving
    /// ground search.
    #[serde(default)]
    pub m_max: Option<u32>,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.x12.validate()?;
        self.second.validate()?;
        if matches!(self.model, ModelKind::Rwa) && self.eta != 0.0 {
            return Err(DickeError::InvalidParams(
                "the excitation-conserving model requires eta = 0".into(),
            ));
        }
        let omega_a = self.omega2 - self.omega1;
        if !(omega_a > 0.0) || !(self.omega_field > 0.0) {
            return Err(DickeError::InvalidParams(
                "frequencies must satisfy omega_field > 0 and omega2 > omega1".into(),
            ));
        }
        Ok(())
    }

    pub fn omega_a(&self) -> f64 {
        self.omega2 - self.omega1
    }

    /// Diagram `zeta` for a value on the second axis.
    pub fn zeta_at(&self, second_value: f64) -> f64 {
        match self.second_axis {
            SecondAxis::Zeta => second_value,
            SecondAxis::Chi => self.omega_a() * second_value - 2.0 * self.eta,
        }
    }

    fn controls(&self, ix: usize, iy: usize) -> DiagramControls {
        DiagramControls {
            x12: self.x12.value(ix),
            zeta: self.zeta_at(self.second.value(iy)),
            eta: self.eta,
        }
    }

    fn solve_cell(&self, ix: usize, iy: usize) -> Result<GroundState> {
        let p = self.controls(ix, iy).to_params(
            self.n_atoms,
            self.omega_field,
            self.omega1,
            self.omega2,
        )?;
        match self.model {
            ModelKind::Rwa => {
                let m_max = match self.m_max {
                    Some(m) => m,
                    None => default_m_max(&p)?,
                };
                rwa_ground(&p, m_max)
            }
            ModelKind::Full => full_ground(&p, &self.policy),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    None,
    Discontinuous,
    Continuous,
    Failed,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::None => "none",
            Classification::Discontinuous => "discontinuous",
            Classification::Continuous => "continuous",
            Classification::Failed => "failed",
        }
    }
}

/// Per-cell summary of a scan.
#[derive(Debug, Clone)]
pub struct CellRecord {
    pub x12: f64,
    pub second: f64,
    /// Minimizing excitation number (excitation-conserving model) or parity
    /// sign +-1 (full model); meaningless for failed cells.
    pub label: i64,
    pub energy_pp: f64,
    pub excitation_mean: f64,
    pub var_n2: f64,
    pub var_nu: f64,
    pub var_n1: f64,
    pub fid_right: Option<f64>,
    pub fid_up: Option<f64>,
    pub class: Classification,
}

/// A completed scan.
#[derive(Debug, Clone)]
pub struct PhaseDiagramGrid {
    pub spec: GridSpec,
    pub nx: usize,
    pub ny: usize,
    /// Row-major cells, `index = iy * nx + ix`.
    pub cells: Vec<CellRecord>,
    pub failed_cells: usize,
}

impl PhaseDiagramGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &CellRecord {
        &self.cells[iy * self.nx + ix]
    }

    /// CSV with one record per cell, floats printed with 17 significant
    /// digits so identical jobs produce byte-identical files.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "x12,zeta_or_chi,energy_pp,m_or_parity,var_n2,var_nu,fid_right,fid_up,class\n",
        );
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                fmt_float(c.x12),
                fmt_float(c.second),
                fmt_float(c.energy_pp),
                c.label,
                fmt_float(c.var_n2),
                fmt_float(c.var_nu),
                fmt_float(c.fid_right.unwrap_or(f64::NAN)),
                fmt_float(c.fid_up.unwrap_or(f64::NAN)),
                c.class.as_str()
            ));
        }
        out
    }

    /// JSON document with the grid spec and every tolerance that shaped the
    /// result, for reproducibility.
    pub fn sidecar_json(&self) -> String {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            spec: &'a GridSpec,
            residual_tol: f64,
            degeneracy_tol: f64,
            failed_cells: usize,
        }
        serde_json::to_string_pretty(&Sidecar {
            spec: &self.spec,
            residual_tol: RESIDUAL_TOL,
            degeneracy_tol: DEGENERACY_TOL,
            failed_cells: self.failed_cells,
        })
        .expect("grid spec serializes")
    }
}

/// Prints a float with 17 significant digits (`nan` for missing values).
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn run_scan(spec: &GridSpec) -> Result<PhaseDiagramGrid> {
    spec.validate()?;
    let nx = spec.x12.count;
    let ny = spec.second.count;

    let solutions: Vec<Option<GroundState>> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = (idx % nx, idx / nx);
            spec.solve_cell(ix, iy).ok()
        })
        .collect();
    let failed_cells = solutions.iter().filter(|s| s.is_none()).count();

    let mut cells = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let idx = iy * nx + ix;
            let x12 = spec.x12.value(ix);
            let second = spec.second.value(iy);
            match &solutions[idx] {
                None => cells.push(CellRecord {
                    x12,
                    second,
                    label: 0,
                    energy_pp: f64::NAN,
                    excitation_mean: f64::NAN,
                    var_n2: f64::NAN,
                    var_nu: f64::NAN,
                    var_n1: f64::NAN,
                    fid_right: None,
                    fid_up: None,
                    class: Classification::Failed,
                }),
                Some(g) => {
                    let label = match spec.model {
                        ModelKind::Rwa => g.excitation_mean.round() as i64,
                        ModelKind::Full => g.parity.sign().unwrap_or(0) as i64,
                    };
                    let fid_to = |jx: usize, jy: usize| -> Option<f64> {
                        solutions[jy * nx + jx]
                            .as_ref()
                            .and_then(|h| fidelity(g, h).ok())
                    };
                    let fid_right = (ix + 1 < nx).then(|| fid_to(ix + 1, iy)).flatten();
                    let fid_up = (iy + 1 < ny).then(|| fid_to(ix, iy + 1)).flatten();
                    cells.push(CellRecord {
                        x12,
                        second,
                        label,
                        energy_pp: g.energy_per_particle(),
                        excitation_mean: g.excitation_mean,
                        var_n2: number_stats(g, NumberObservable::Level2).variance,
                        var_nu: number_stats(g, NumberObservable::Photons).variance,
                        var_n1: number_stats(g, NumberObservable::Level1).variance,
                        fid_right,
                        fid_up,
                        class: Classification::None,
                    });
                }
            }
        }
    }

    let mut grid = PhaseDiagramGrid {
        spec: spec.clone(),
        nx,
        ny,
        cells,
        failed_cells,
    };
    classify(&mut grid);
    Ok(grid)
}

/// Marks per-axis local minima of the edge-fidelity sequences: at or below
/// the zero threshold they are discontinuous, otherwise local minima below
/// the detection ceiling are continuous.
fn classify(grid: &mut PhaseDiagramGrid) {
    let zero = grid.spec.tolerances.zero_fidelity_threshold;
    let ceiling = grid.spec.tolerances.continuous_ceiling;
    let (nx, ny) = (grid.nx, grid.ny);

    let mark = |cells: &mut [CellRecord], idx: usize, class: Classification| {
        let c = &mut cells[idx];
        if c.class == Classification::Failed || c.class == Classification::Discontinuous {
            return;
        }
        if class == Classification::Discontinuous || c.class == Classification::None {
            c.class = class;
        }
    };

    // Horizontal edges: fidelity between (ix, iy) and (ix+1, iy).
    for iy in 0..ny {
        let f: Vec<Option<f64>> = (0..nx.saturating_sub(1))
            .map(|ix| grid.cells[iy * nx + ix].fid_right)
            .collect();
        for ix in 0..f.len() {
            let Some(v) = f[ix] else { continue };
            let left = ix.checked_sub(1).and_then(|i| f[i]);
            let right = f.get(ix + 1).copied().flatten();
            let local_min = left.map_or(true, |l| v < l) && right.map_or(true, |r| v <= r);
            if v <= zero {
                mark(&mut grid.cells, iy * nx + ix, Classification::Discontinuous);
            } else if local_min && v < ceiling {
                mark(&mut grid.cells, iy * nx + ix, Classification::Continuous);
            }
        }
    }
    // Vertical edges: fidelity between (ix, iy) and (ix, iy+1).
    for ix in 0..nx {
        let f: Vec<Option<f64>> = (0..ny.saturating_sub(1))
            .map(|iy| grid.cells[iy * nx + ix].fid_up)
            .collect();
        for iy in 0..f.len() {
            let Some(v) = f[iy] else { continue };
            let below = iy.checked_sub(1).and_then(|i| f[i]);
            let above = f.get(iy + 1).copied().flatten();
            let local_min = below.map_or(true, |l| v < l) && above.map_or(true, |r| v <= r);
            if v <= zero {
                mark(&mut grid.cells, iy * nx + ix, Classification::Discontinuous);
            } else if local_min && v < ceiling {
                mark(&mut grid.cells, iy * nx + ix, Classification::Continuous);
            }
        }
    }
}

/// Excitation map of the excitation-conserving model.
pub fn scan_rwa(spec: &GridSpec) -> Result<PhaseDiagramGrid> {
    if !matches!(spec.model, ModelKind::Rwa) {
        return Err(DickeError::InvalidParams(
            "scan_rwa requires model = rwa".into(),
        ));
    }
    run_scan(spec)
}

/// Fidelity surface of the full model with transition classification.
pub fn scan_fidelity(spec: &GridSpec) -> Result<PhaseDiagramGrid> {
    if !matches!(spec.model, ModelKind::Full) {
        return Err(DickeError::InvalidParams(
            "scan_fidelity requires model = full".into(),
        ));
    }
    run_scan(spec)
}

/// Fluctuation map for either model; the excitation-conserving identity
/// `var(nu) = var(n2)` is asserted cellwise when applicable.
pub fn scan_fluctuations(spec: &GridSpec) -> Result<PhaseDiagramGrid> {
    let grid = run_scan(spec)?;
    if matches!(spec.model, ModelKind::Rwa) {
        for c in &grid.cells {
            if c.class == Classification::Failed {
                continue;
            }
            if (c.var_nu - c.var_n2).abs() > 1e-10 {
                return Err(DickeError::InvariantViolated(format!(
                    "fixed-excitation fluctuation identity failed at (x12={}, {}={}): \
                     var_nu={} var_n2={}",
                    c.x12,
                    match spec.second_axis {
                        SecondAxis::Zeta => "zeta",
                        SecondAxis::Chi => "chi",
                    },
                    c.second,
                    c.var_nu,
                    c.var_n2
                )));
            }
        }
    }
    Ok(grid)
}

/// The variational separatrix `chi = x12^2 - 1` expressed in the grid's
/// coordinates (converted to `zeta` via `chi = (zeta + 2 eta) / omega_a` when
/// the second axis is `zeta`).
pub fn overlay_variational(spec: &GridSpec) -> Vec<(f64, f64)> {
    spec.x12
        .values()
        .into_iter()
        .map(|x| {
            let chi = x * x - 1.0;
            let second = match spec.second_axis {
                SecondAxis::Chi => chi,
                SecondAxis::Zeta => spec.omega_a() * chi - 2.0 * spec.eta,
            };
            (x, second)
        })
        .collect()
}
