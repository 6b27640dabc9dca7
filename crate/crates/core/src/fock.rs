//! Symmetry-adapted orthonormal bases of Fock states `|nu; n1, n2>`.
//!
//! A state is stored as `(nu, n2)`; the lower-level population `n1 = N_a - n2`
//! is derived, so particle-number conservation holds by construction. Bases
//! are ordered lexicographically in `(nu, n2)` so eigenvector layouts and file
//! outputs are reproducible across runs and platforms.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{DickeError, Result};

/// A photon-matter Fock state `|nu; N_a - n2, n2>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockState {
    /// Photon number.
    pub nu: u32,
    /// Excited-level population.
    pub n2: u32,
}

impl FockState {
    pub fn new(nu: u32, n2: u32) -> Self {
        Self { nu, n2 }
    }

    /// Ground-level population for the given atom count.
    pub fn n1(&self, n_atoms: u32) -> u32 {
        n_atoms - self.n2
    }

    /// Total excitation number `m = nu + n2`.
    pub fn excitation(&self) -> u32 {
        self.nu + self.n2
    }

    /// Excitation parity, `+1` or `-1`.
    pub fn parity_sign(&self) -> i32 {
        if self.excitation() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{};{}>", self.nu, self.n2)
    }
}

/// Which invariant subspace a basis spans.
///
/// Fixed-excitation blocks are finite on their own; parity and full sectors
/// carry an explicit photon cutoff `nu <= nu_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorLabel {
    /// All states with `nu + n2 = m`.
    RwaBlock(u32),
    /// Even total excitation, photons truncated at the cutoff.
    ParityEven(u32),
    /// Odd total excitation, photons truncated at the cutoff.
    ParityOdd(u32),
    /// No symmetry restriction, photons truncated at the cutoff.
    Full(u32),
}

impl SectorLabel {
    pub fn cutoff(&self) -> Option<u32> {
        match self {
            SectorLabel::RwaBlock(_) => None,
            SectorLabel::ParityEven(c) | SectorLabel::ParityOdd(c) | SectorLabel::Full(c) => {
                Some(*c)
            }
        }
    }

    fn accepts(&self, s: &FockState) -> bool {
        match self {
            SectorLabel::RwaBlock(m) => s.excitation() == *m,
            SectorLabel::ParityEven(c) => s.nu <= *c && s.excitation() % 2 == 0,
            SectorLabel::ParityOdd(c) => s.nu <= *c && s.excitation() % 2 == 1,
            SectorLabel::Full(c) => s.nu <= *c,
        }
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorLabel::RwaBlock(m) => write!(f, "m={m}"),
            SectorLabel::ParityEven(c) => write!(f, "even(cutoff={c})"),
            SectorLabel::ParityOdd(c) => write!(f, "odd(cutoff={c})"),
            SectorLabel::Full(c) => write!(f, "full(cutoff={c})"),
        }
    }
}

/// An ordered basis of one symmetry sector with its inverse index map.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub n_atoms: u32,
    pub label: SectorLabel,
    pub states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Position of a state in the basis, if it belongs to the sector.
    pub fn position(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }
}

/// Builds the ordered basis of a symmetry sector.
pub fn build_sector(n_atoms: u32, label: SectorLabel) -> Result<SectorBasis> {
    if n_atoms < 2 {
        return Err(DickeError::InvalidParams(format!(
            "n_atoms must be >= 2, got {n_atoms}"
        )));
    }
    let mut states = Vec::new();
    match label {
        SectorLabel::RwaBlock(m) => {
            // n2 = k with 0 <= k <= min(m, N_a); lexicographic order in
            // (nu, n2) means descending k.
            let k_max = m.min(n_atoms);
            for k in (0..=k_max).rev() {
                states.push(FockState::new(m - k, k));
            }
        }
        SectorLabel::ParityEven(c) | SectorLabel::ParityOdd(c) | SectorLabel::Full(c) => {
            for nu in 0..=c {
                for n2 in 0..=n_atoms {
                    let s = FockState::new(nu, n2);
                    if label.accepts(&s) {
                        states.push(s);
                    }
                }
            }
        }
    }
    debug_assert!(states.windows(2).all(|w| w[0] < w[1]));
    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    Ok(SectorBasis {
        n_atoms,
        label,
        states,
        index,
    })
}

/// Sector size without materializing the state list.
pub fn sector_dimension(n_atoms: u32, label: SectorLabel) -> Result<usize> {
    if n_atoms < 2 {
        return Err(DickeError::InvalidParams(format!(
            "n_atoms must be >= 2, got {n_atoms}"
        )));
    }
    let na = n_atoms as usize;
    Ok(match label {
        SectorLabel::RwaBlock(m) => (m.min(n_atoms) + 1) as usize,
        SectorLabel::Full(c) => (c as usize + 1) * (na + 1),
        SectorLabel::ParityEven(c) | SectorLabel::ParityOdd(c) => {
            let even_n2 = na / 2 + 1;
            let odd_n2 = (na + 1) / 2;
            let even_nu = c as usize / 2 + 1;
            let odd_nu = (c as usize + 1) / 2;
            if matches!(label, SectorLabel::ParityEven(_)) {
                even_nu * even_n2 + odd_nu * odd_n2
            } else {
                even_nu * odd_n2 + odd_nu * even_n2
            }
        }
    })
}
