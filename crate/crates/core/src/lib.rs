//! Exact and variational ground states of the extended two-level Dicke model
//! with atomic dipole-dipole interaction.
//!
//! The crate is organized around a pipeline: parameter sets ([`model`]),
//! symmetry-adapted Fock bases ([`fock`]), sparse Hamiltonian assembly
//! ([`hamiltonian`]), eigensolution with certified photon-cutoff convergence
//! ([`spectrum`]), closed-form references ([`analytic`], [`variational`]),
//! ground-state observables ([`observables`]), and parallel parameter-grid
//! scans producing phase diagrams ([`scan`]).

pub mod analytic;
mod dense;
pub mod fock;
pub mod hamiltonian;
pub mod model;
pub mod observables;
pub mod scan;
pub mod spectrum;
pub mod variational;

use thiserror::Error;

/// Errors reported by the solver stack.
#[derive(Debug, Error)]
pub enum DickeError {
    /// Parameter or basis validation failed.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A basis was used with a Hamiltonian or state it does not belong to.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// Iterative eigensolver failed to certify the requested residual.
    #[error("eigensolver did not converge: best residual {best_residual:.3e} after {iterations} iterations (tol {tol:.3e})")]
    NonConvergence {
        best_residual: f64,
        iterations: usize,
        tol: f64,
    },

    /// Photon-cutoff convergence loop hit its ceiling.
    #[error(
        "photon cutoff ceiling {ceiling} exceeded: best energy {best_energy:.12e}, \
         last overlap {last_overlap:.12}, last energy change per particle {last_energy_change:.3e}"
    )]
    CutoffExceeded {
        ceiling: u32,
        best_energy: f64,
        last_overlap: f64,
        last_energy_change: f64,
    },

    /// The block-label ceiling for the excitation-conserving ground search was
    /// too small: the minimum was found at the boundary.
    #[error("m_max {m_max} too small: ground-state search minimum lies on the boundary")]
    MMaxTooSmall { m_max: u32 },

    /// A mathematical invariant of the solution failed, indicating a
    /// numerical problem rather than bad input.
    #[error("numerical invariant violated: {0}")]
    InvariantViolated(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DickeError>;
