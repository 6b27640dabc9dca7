//! Expectation values, quadratic fluctuations, excitation distributions,
//! parity, and fidelity between ground states.
//!
//! Everything is computed from the reported amplitudes, never by
//! re-diagonalization, so observables are always consistent with the ground
//! state they describe.

use std::collections::BTreeMap;

use crate::spectrum::GroundState;
use crate::{DickeError, Result};

/// Mean and variance of an observable in a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableStats {
    pub mean: f64,
    pub variance: f64,
}

/// Diagonal number observables of the photon-matter basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberObservable {
    Photons,
    Level1,
    Level2,
    Excitation,
}

/// Weight below which the zero-photon conditional distribution is reported as
/// undefined instead of renormalized noise.
pub const CONDITIONAL_WEIGHT_FLOOR: f64 = 1e-14;

/// Mean and variance of a diagonal number operator in the ground state.
pub fn number_stats(g: &GroundState, which: NumberObservable) -> ObservableStats {
    let n_atoms = g.basis.n_atoms;
    let value = |i: usize| -> f64 {
        let s = &g.basis.states[i];
        match which {
            NumberObservable::Photons => s.nu as f64,
            NumberObservable::Level1 => s.n1(n_atoms) as f64,
            NumberObservable::Level2 => s.n2 as f64,
            NumberObservable::Excitation => s.excitation() as f64,
        }
    };
    let mut mean = 0.0;
    let mut second = 0.0;
    for i in 0..g.basis.len() {
        let p = g.pair.amplitudes.prob(i);
        let v = value(i);
        mean += p * v;
        second += p * v * v;
    }
    let variance = (second - mean * mean).max(0.0);
    ObservableStats { mean, variance }
}

/// Probabilities of total-excitation values and of excited-atom counts
/// conditioned on an empty field.
#[derive(Debug, Clone)]
pub struct ExcitationDistribution {
    /// `P(m)`, keyed by the total excitation `m = nu + n2`.
    pub p_of_m: BTreeMap<u32, f64>,
    /// `P(n2 | nu = 0)`; `None` when the zero-photon weight is below
    /// [`CONDITIONAL_WEIGHT_FLOOR`].
    pub p_n2_given_nu0: Option<BTreeMap<u32, f64>>,
    /// Total zero-photon weight `P(nu = 0)`.
    pub p_nu0: f64,
}

pub fn excitation_distribution(g: &GroundState) -> ExcitationDistribution {
    let mut p_of_m = BTreeMap::new();
    let mut zero_photon = BTreeMap::new();
    let mut p_nu0 = 0.0;
    for (i, s) in g.basis.states.iter().enumerate() {
        let p = g.pair.amplitudes.prob(i);
        *p_of_m.entry(s.excitation()).or_insert(0.0) += p;
        if s.nu == 0 {
            *zero_photon.entry(s.n2).or_insert(0.0) += p;
            p_nu0 += p;
        }
    }
    let p_n2_given_nu0 = if p_nu0 < CONDITIONAL_WEIGHT_FLOOR {
        None
    } else {
        Some(
            zero_photon
                .into_iter()
                .map(|(n2, p)| (n2, p / p_nu0))
                .collect(),
        )
    };
    ExcitationDistribution {
        p_of_m,
        p_n2_given_nu0,
        p_nu0,
    }
}

/// Expectation of the excitation-parity operator, in `[-1, 1]`; exactly `+-1`
/// for sector-pure states.
pub fn parity_expectation(g: &GroundState) -> f64 {
    g.basis
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| g.pair.amplitudes.prob(i) * s.parity_sign() as f64)
        .sum()
}

/// `|<a|b>|^2` with the two vectors zero-padded onto the union of their
/// bases. States are matched by their `(nu, n2)` labels, so bases of unequal
/// cutoff or different sectors compare correctly (disjoint sectors give 0).
pub fn fidelity(a: &GroundState, b: &GroundState) -> Result<f64> {
    if a.basis.n_atoms != b.basis.n_atoms {
        return Err(DickeError::BasisMismatch(format!(
            "fidelity between states with N_a = {} and N_a = {}",
            a.basis.n_atoms, b.basis.n_atoms
        )));
    }
    let (small, large) = if a.basis.len() <= b.basis.len() {
        (a, b)
    } else {
        (b, a)
    };
    let mut dot = num_complex::Complex64::new(0.0, 0.0);
    for (i, s) in small.basis.states.iter().enumerate() {
        if let Some(j) = large.basis.position(s) {
            let x = match &small.pair.amplitudes {
                crate::spectrum::Amplitudes::Real(v) => num_complex::Complex64::new(v[i], 0.0),
                crate::spectrum::Amplitudes::Complex(v) => v[i],
            };
            let y = match &large.pair.amplitudes {
                crate::spectrum::Amplitudes::Real(v) => num_complex::Complex64::new(v[j], 0.0),
                crate::spectrum::Amplitudes::Complex(v) => v[j],
            };
            dot += x.conj() * y;
        }
    }
    Ok(dot.norm_sqr().min(1.0))
}
