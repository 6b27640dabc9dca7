//! Physical and dimensionless parameter sets and the maps between them.
//!
//! Two coordinate systems coexist and must not be confused:
//!
//! * [`DimensionlessControls`] is the mean-field map `x12 = 2 mu / sqrt(Omega
//!   omega_a)`, `chi = (zeta + 2 eta) / omega_a`, under which the variational
//!   separatrix is `chi = x12^2 - 1`.
//! * [`DiagramControls`] are the phase-diagram coordinates used by the
//!   scanners, the CLI, and the two-atom closed forms: the matter-field
//!   coupling is `mu = x12 * sqrt(Omega omega_a)` and the cross-dipole
//!   strength is `xi = eta / 2`. Under this normalization the closed-form
//!   block spectra in [`crate::analytic`] hold verbatim and the zero-coupling
//!   transition points land at `zeta_m = -(N_a-1) omega_a / (N_a-1-2m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{DickeError, Result};

/// Physical couplings of the extended Dicke Hamiltonian.
///
/// `xi` is stored complex to cover the phase dependence of the mean-field
/// surfaces; the exact-diagonalization scans require `Im xi = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Field frequency, > 0.
    pub omega_field: f64,
    /// Energy of the lower atomic level.
    pub omega1: f64,
    /// Energy of the upper atomic level; `omega2 - omega1 > 0`.
    pub omega2: f64,
    /// Matter-field coupling strength (real).
    pub mu: f64,
    /// Diagonal dipole-dipole coupling (opposite dipoles).
    pub zeta: f64,
    /// Non-diagonal dipole-dipole coupling (aligned dipoles).
    pub xi: Complex64,
    /// Number of atoms, >= 2.
    pub n_atoms: u32,
}

impl ModelParams {
    /// Parameters with the conventional frequencies `Omega = 1`, `omega1 = 0`,
    /// `omega2 = 1` and the given couplings.
    pub fn resonant(n_atoms: u32, mu: f64, zeta: f64, eta: f64) -> Self {
        Self {
            omega_field: 1.0,
            omega1: 0.0,
            omega2: 1.0,
            mu,
            zeta,
            xi: Complex64::new(eta, 0.0),
            n_atoms,
        }
    }

    /// Atomic transition frequency `omega_a = omega2 - omega1`.
    pub fn omega_a(&self) -> f64 {
        self.omega2 - self.omega1
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_field > 0.0) {
            return Err(DickeError::InvalidParams(format!(
                "omega_field must be positive, got {}",
                self.omega_field
            )));
        }
        if self.n_atoms < 2 {
            return Err(DickeError::InvalidParams(format!(
                "n_atoms must be >= 2, got {}",
                self.n_atoms
            )));
        }
        if !(self.omega_a() > 0.0) {
            return Err(DickeError::InvalidParams(format!(
                "omega2 - omega1 must be positive, got {}",
                self.omega_a()
            )));
        }
        if !self.mu.is_finite() || !self.zeta.is_finite() || !self.xi.norm().is_finite() {
            return Err(DickeError::InvalidParams("couplings must be finite".into()));
        }
        Ok(())
    }

    /// True when the non-diagonal dipole coupling is real, as required by the
    /// exact-diagonalization path.
    pub fn xi_is_real(&self) -> bool {
        self.xi.im == 0.0
    }
}

/// Dimensionless mean-field controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessControls {
    /// Matter-field control, `x12 = 2 mu / sqrt(Omega omega_a)`; carries the
    /// sign of `mu`.
    pub x12: f64,
    /// Effective dipole-dipole control, `chi = zeta_bar + 2 eta_bar`.
    pub chi: f64,
    pub zeta_bar: f64,
    /// `Re(xi) / omega_a`.
    pub eta_bar: f64,
    pub omega_a: f64,
}

/// Maps physical parameters to the dimensionless mean-field controls.
pub fn to_dimensionless(p: &ModelParams) -> Result<DimensionlessControls> {
    p.validate()?;
    let omega_a = p.omega_a();
    let x12 = 2.0 * p.mu / (p.omega_field * omega_a).sqrt();
    let zeta_bar = p.zeta / omega_a;
    let eta_bar = p.xi.re / omega_a;
    Ok(DimensionlessControls {
        x12,
        chi: zeta_bar + 2.0 * eta_bar,
        zeta_bar,
        eta_bar,
        omega_a,
    })
}

/// Inverse of [`to_dimensionless`] given the dimensionful frequencies.
pub fn from_dimensionless(
    d: &DimensionlessControls,
    omega_field: f64,
    omega1: f64,
    n_atoms: u32,
) -> Result<ModelParams> {
    if !(d.omega_a > 0.0) {
        return Err(DickeError::InvalidParams(format!(
            "omega_a must be positive, got {}",
            d.omega_a
        )));
    }
    let p = ModelParams {
        omega_field,
        omega1,
        omega2: omega1 + d.omega_a,
        mu: 0.5 * d.x12 * (omega_field * d.omega_a).sqrt(),
        zeta: d.zeta_bar * d.omega_a,
        xi: Complex64::new(d.eta_bar * d.omega_a, 0.0),
        n_atoms,
    };
    p.validate()?;
    Ok(p)
}

/// Phase-diagram control coordinates used by the scanners and the CLI.
///
/// The exact-diagonalization normalization differs from the mean-field one:
/// here `mu = x12 * sqrt(Omega omega_a)` and `xi = eta / 2`, which is the
/// convention under which the two-atom closed-form spectra are exact and the
/// diagram axes carry the conventional labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramControls {
    pub x12: f64,
    pub zeta: f64,
    /// Non-diagonal dipole strength as labeled on diagram axes.
    pub eta: f64,
}

impl DiagramControls {
    pub fn to_params(
        &self,
        n_atoms: u32,
        omega_field: f64,
        omega1: f64,
        omega2: f64,
    ) -> Result<ModelParams> {
        let omega_a = omega2 - omega1;
        if !(omega_a > 0.0) {
            return Err(DickeError::InvalidParams(format!(
                "omega2 - omega1 must be positive, got {omega_a}"
            )));
        }
        let p = ModelParams {
            omega_field,
            omega1,
            omega2,
            mu: self.x12 * (omega_field * omega_a).sqrt(),
            zeta: self.zeta,
            xi: Complex64::new(0.5 * self.eta, 0.0),
            n_atoms,
        };
        p.validate()?;
        Ok(p)
    }

    /// Resonant parameters `Omega = omega2 = 1`, `omega1 = 0`.
    pub fn to_params_resonant(&self, n_atoms: u32) -> Result<ModelParams> {
        self.to_params(n_atoms, 1.0, 0.0, 1.0)
    }
}
