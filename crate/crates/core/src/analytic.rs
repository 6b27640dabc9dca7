//! Closed-form reference solutions used as exact oracles: the two-atom
//! excitation-block spectra, the zero-coupling transition points, and the
//! two- and three-atom decoupled ground states.
//!
//! All formulas are written in the resonant convention `omega1 = 0`,
//! `omega2 = Omega = omega_a`; energies scale linearly with `omega_a` and the
//! couplings enter through `x12`, `zeta_bar = zeta / omega_a`, and
//! `eta_bar = eta / omega_a`.

use crate::fock::FockState;
use crate::spectrum::ParityTag;
use crate::{DickeError, Result};

/// One closed-form level of a two-atom excitation block.
#[derive(Debug, Clone)]
pub struct Na2RwaLevel {
    pub m: u32,
    /// Level index within the block, ascending in energy.
    pub j: usize,
    pub energy: f64,
    /// Unnormalized eigenvector as (state, coefficient) pairs.
    pub unnormalized_amplitudes: Vec<(FockState, f64)>,
}

/// Spectral radical `sqrt(4 (2m-1) x12^2 + zeta_bar^2)` of the two-atom
/// blocks.
pub fn zeta_radical(m: u32, x12: f64, zeta_bar: f64) -> f64 {
    (4.0 * (2.0 * m as f64 - 1.0) * x12 * x12 + zeta_bar * zeta_bar).sqrt()
}

/// Closed-form spectrum of the two-atom block with `m` excitations, energies
/// ascending.
///
/// `zeta` is dimensionful; energies are returned in the same units. At
/// `x12 = 0` the printed eigenvector expressions degenerate, so the basis-state
/// limits are returned instead (two levels coincide at energy `m omega_a` for
/// `m >= 2`).
pub fn na2_rwa_spectrum(m: u32, x12: f64, zeta: f64, omega_a: f64) -> Result<Vec<Na2RwaLevel>> {
    if !(omega_a > 0.0) {
        return Err(DickeError::InvalidParams(format!(
            "omega_a must be positive, got {omega_a}"
        )));
    }
    let zb = zeta / omega_a;
    let s = |nu: u32, n2: u32| FockState::new(nu, n2);
    let levels: Vec<(f64, Vec<(FockState, f64)>)> = if m == 0 {
        vec![(0.0, vec![(s(0, 0), 1.0)])]
    } else if m == 1 {
        let z12 = zeta_radical(1, x12, zb);
        if x12 == 0.0 {
            // Diagonal block: levels 1 and 1 + zeta_bar.
            let mut v = vec![
                (1.0 + zb, vec![(s(0, 1), 1.0)]),
                (1.0, vec![(s(1, 0), 1.0)]),
            ];
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            v
        } else {
            vec![
                (
                    0.5 * (2.0 + zb - z12),
                    vec![(s(1, 0), (zb + z12) / (2.0 * x12)), (s(0, 1), 1.0)],
                ),
                (
                    0.5 * (2.0 + zb + z12),
                    vec![(s(1, 0), (zb - z12) / (2.0 * x12)), (s(0, 1), 1.0)],
                ),
            ]
        }
    } else {
        let mf = m as f64;
        let z12 = zeta_radical(m, x12, zb);
        let mid = (
            mf,
            vec![(s(m, 0), -((mf - 1.0) / mf).sqrt()), (s(m - 2, 2), 1.0)],
        );
        if x12 == 0.0 {
            // Diagonal block: {m, m, m + zeta_bar}; the coinciding pair is
            // spanned by the two limits of the coupled eigenvectors.
            let outer = (mf + zb, vec![(s(m - 1, 1), 1.0)]);
            let plus = (
                mf,
                vec![(s(m, 0), (mf / (mf - 1.0)).sqrt()), (s(m - 2, 2), 1.0)],
            );
            let mut v = vec![outer, mid, plus];
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            v
        } else {
            let low = (
                0.5 * (2.0 * mf + zb - z12),
                vec![
                    (s(m, 0), (mf / (mf - 1.0)).sqrt()),
                    (s(m - 1, 1), -(zb - z12) / (2.0 * (mf - 1.0).sqrt() * x12)),
                    (s(m - 2, 2), 1.0),
                ],
            );
            let high = (
                0.5 * (2.0 * mf + zb + z12),
                vec![
                    (s(m, 0), (mf / (mf - 1.0)).sqrt()),
                    (s(m - 1, 1), -(zb + z12) / (2.0 * (mf - 1.0).sqrt() * x12)),
                    (s(m - 2, 2), 1.0),
                ],
            );
            let mut v = vec![low, mid, high];
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            v
        }
    };
    Ok(levels
        .into_iter()
        .enumerate()
        .map(|(j, (e, amps))| Na2RwaLevel {
            m,
            j,
            energy: e * omega_a,
            unnormalized_amplitudes: amps,
        })
        .collect())
}

/// Decoupled (zero matter-field coupling) level energy with `m` matter
/// excitations.
pub fn decoupled_level_energy(n_atoms: u32, m: u32, zeta: f64, omega1: f64, omega2: f64) -> f64 {
    let n1 = (n_atoms - m) as f64;
    omega1 * n1 + (omega2 + zeta * n1 / (n_atoms as f64 - 1.0)) * m as f64
}

/// The `floor(N_a/2)` negative couplings at which the zero-coupling ground
/// state gains one excitation: `zeta_m = -(N_a-1) omega_a / (N_a-1-2m)`.
pub fn zeta_transition_points(n_atoms: u32, omega_a: f64) -> Result<Vec<f64>> {
    if n_atoms < 2 {
        return Err(DickeError::InvalidParams(format!(
            "n_atoms must be >= 2, got {n_atoms}"
        )));
    }
    let na = n_atoms as f64;
    Ok((0..n_atoms / 2)
        .map(|m| -(na - 1.0) * omega_a / (na - 1.0 - 2.0 * m as f64))
        .collect())
}

/// Closed-form decoupled ground state of one parity sector.
#[derive(Debug, Clone)]
pub struct DecoupledGround {
    pub parity: ParityTag,
    pub energy: f64,
    pub unnormalized_amplitudes: Vec<(FockState, f64)>,
}

/// Both parity-sector decoupled ground states for two or three atoms, with
/// the index of the global minimum (ties resolve to even).
pub fn decoupled_ground(
    n_atoms: u32,
    zeta_bar: f64,
    eta_bar: f64,
    omega_a: f64,
) -> Result<(DecoupledGround, DecoupledGround, ParityTag)> {
    if !(omega_a > 0.0) {
        return Err(DickeError::InvalidParams(format!(
            "omega_a must be positive, got {omega_a}"
        )));
    }
    let s = |nu: u32, n2: u32| FockState::new(nu, n2);
    let (even, odd) = match n_atoms {
        2 => {
            let root = (1.0 + eta_bar * eta_bar).sqrt();
            let even = DecoupledGround {
                parity: ParityTag::Even,
                energy: omega_a * (1.0 - root),
                unnormalized_amplitudes: vec![(s(0, 0), 1.0 + root), (s(0, 2), -eta_bar)],
            };
            let odd = DecoupledGround {
                parity: ParityTag::Odd,
                energy: omega_a * (1.0 + zeta_bar),
                unnormalized_amplitudes: vec![(s(0, 1), 1.0)],
            };
            (even, odd)
        }
        3 => {
            let re = ((2.0 + zeta_bar).powi(2) + 3.0 * eta_bar * eta_bar).sqrt();
            let ro = ((2.0 - zeta_bar).powi(2) + 3.0 * eta_bar * eta_bar).sqrt();
            // At eta_bar = 0 the printed two-component kets collapse to the
            // zero vector on one side of the diagonal crossing; the ground is
            // then the lower basis state (ties resolve to fewer excitations).
            let even_amps = if eta_bar == 0.0 {
                if 2.0 + zeta_bar >= 0.0 {
                    vec![(s(0, 0), 1.0)]
                } else {
                    vec![(s(0, 2), 1.0)]
                }
            } else {
                vec![
                    (s(0, 0), 2.0 + zeta_bar + re),
                    (s(0, 2), -3.0_f64.sqrt() * eta_bar),
                ]
            };
            let odd_amps = if eta_bar == 0.0 {
                if 2.0 - zeta_bar >= 0.0 {
                    vec![(s(0, 1), 1.0)]
                } else {
                    vec![(s(0, 3), 1.0)]
                }
            } else {
                vec![
                    (s(0, 1), 2.0 - zeta_bar + ro),
                    (s(0, 3), -3.0_f64.sqrt() * eta_bar),
                ]
            };
            let even = DecoupledGround {
                parity: ParityTag::Even,
                energy: 0.5 * omega_a * (2.0 + zeta_bar - re),
                unnormalized_amplitudes: even_amps,
            };
            let odd = DecoupledGround {
                parity: ParityTag::Odd,
                energy: 0.5 * omega_a * (4.0 + zeta_bar - ro),
                unnormalized_amplitudes: odd_amps,
            };
            (even, odd)
        }
        other => {
            return Err(DickeError::InvalidParams(format!(
                "closed-form decoupled ground states exist for 2 or 3 atoms, got {other}"
            )))
        }
    };
    let winner = if even.energy <= odd.energy {
        ParityTag::Even
    } else {
        ParityTag::Odd
    };
    Ok((even, odd, winner))
}
