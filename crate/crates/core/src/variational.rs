//! Coherent-state energy surfaces, their critical points, the closed-form
//! minimum-energy surface, and the variational separatrix `chi = x12^2 - 1`.

use serde::{Deserialize, Serialize};

use crate::model::{to_dimensionless, DimensionlessControls, ModelParams};
use crate::{DickeError, Result};

/// A point on the trial-state manifold: field amplitude/phase `(r, theta)`
/// and matter amplitude/phase `(rho, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalPoint {
    pub r: f64,
    pub theta: f64,
    pub rho: f64,
    pub phi: f64,
}

impl VariationalPoint {
    pub fn radial(r: f64, rho: f64) -> Self {
        Self {
            r,
            theta: 0.0,
            rho,
            phi: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Normal,
    Collective,
}

/// Critical point of the full energy surface on the canonical angular branch
/// `theta_c = phi_c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub r_c: f64,
    pub rho_c: f64,
    pub theta_c: f64,
    pub phi_c: f64,
    pub region: Region,
}

/// Energy per particle of the trial state.
///
/// With `rwa = true` the interaction coefficient is halved and the
/// double-exchange dipole term is dropped, which is the surface of the
/// excitation-conserving model.
pub fn energy_surface(p: &ModelParams, v: &VariationalPoint, rwa: bool) -> f64 {
    let rho2 = v.rho * v.rho;
    let denom = 1.0 + rho2;
    let mu_eff = if rwa { 0.5 * p.mu } else { p.mu };
    let eta_mag = p.xi.norm();
    let phi_xi = p.xi.arg();
    let dipole = if rwa {
        p.zeta
    } else {
        p.zeta + 2.0 * eta_mag * (2.0 * v.phi + phi_xi).cos()
    };
    p.omega_field * v.r * v.r + (p.omega1 + rho2 * p.omega2) / denom
        - 4.0 * mu_eff * v.r * v.rho * v.theta.cos() * v.phi.cos() / denom
        + dipole * rho2 / (denom * denom)
}

/// Critical point of the full surface; requires a real effective dipole
/// strength (`xi` with phase 0 or pi).
pub fn critical_point(p: &ModelParams) -> Result<CriticalPoint> {
    p.validate()?;
    if p.xi.im != 0.0 {
        return Err(DickeError::InvalidParams(
            "critical values require a real dipole strength (phase 0 or pi)".into(),
        ));
    }
    let d = to_dimensionless(p)?;
    let x2 = d.x12 * d.x12;
    let excess = x2 - 1.0 - d.chi;
    if excess <= 0.0 {
        return Ok(CriticalPoint {
            r_c: 0.0,
            rho_c: 0.0,
            theta_c: 0.0,
            phi_c: 0.0,
            region: Region::Normal,
        });
    }
    let rho_c2 = excess / (x2 + 1.0 - d.chi);
    let rho_c = rho_c2.sqrt();
    let r_c = 2.0 * p.mu.abs() / p.omega_field * rho_c / (1.0 + rho_c2);
    Ok(CriticalPoint {
        r_c,
        rho_c,
        theta_c: 0.0,
        phi_c: 0.0,
        region: Region::Collective,
    })
}

/// Closed-form minimum of the energy surface in dimensionless controls.
///
/// Collective branch for `x12^2 - 1 - chi > 0`, otherwise the normal-region
/// value `omega1`; the two branches join continuously on the separatrix.
pub fn min_energy(d: &DimensionlessControls, omega1: f64) -> f64 {
    let x2 = d.x12 * d.x12;
    let excess = x2 - 1.0 - d.chi;
    if excess > 0.0 {
        omega1 - 0.25 * d.omega_a * excess * excess / (x2 - d.chi)
    } else {
        omega1
    }
}

/// The separatrix `chi = x12^2 - 1` sampled over a range of `x12`.
pub fn variational_separatrix(x12: impl IntoIterator<Item = f64>) -> Vec<(f64, f64)> {
    x12.into_iter().map(|x| (x, x * x - 1.0)).collect()
}
