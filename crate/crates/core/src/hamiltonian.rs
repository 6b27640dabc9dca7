//! Sparse assembly of the extended Dicke Hamiltonian in a symmetry sector.
//!
//! The full model couples a state `|nu; n1, n2>` to at most seven states:
//! itself, the four single-photon matter exchanges from
//! `-(mu/sqrt(N_a)) (A12 + A21)(a + a^dag)`, and the two photonless double
//! exchanges from `(xi A12^2 + xi* A21^2) / (N_a - 1)`. The
//! excitation-conserving variant keeps only the two exchanges with
//! `nu + n2` fixed and drops the `xi` terms.
//!
//! Matrix elements that would raise the photon number above a sector cutoff
//! are dropped (hard truncation); accuracy in the truncated sectors is
//! certified downstream by the cutoff-convergence loop in [`crate::spectrum`].

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::{FockState, SectorBasis, SectorLabel};
use crate::model::ModelParams;
use crate::{DickeError, Result};

/// Which interaction pieces an assembly includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Terms {
    counter_rotating: bool,
    dipole_exchange: bool,
}

const FULL: Terms = Terms {
    counter_rotating: true,
    dipole_exchange: true,
};
const EXCITATION_CONSERVING: Terms = Terms {
    counter_rotating: false,
    dipole_exchange: false,
};
const CO_ROTATING_ONLY: Terms = Terms {
    counter_rotating: false,
    dipole_exchange: true,
};

/// Compressed sparse rows over the full (two-sided) symmetric pattern.
#[derive(Debug, Clone)]
struct Csr {
    row_ptr: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl Csr {
    fn from_upper(dim: usize, upper: &[(u32, u32, f64)]) -> Self {
        let mut counts = vec![0u32; dim + 1];
        for &(i, j, _) in upper {
            counts[i as usize + 1] += 1;
            if i != j {
                counts[j as usize + 1] += 1;
            }
        }
        for r in 0..dim {
            counts[r + 1] += counts[r];
        }
        let nnz = counts[dim] as usize;
        let mut cols = vec![0u32; nnz];
        let mut vals = vec![0.0; nnz];
        let mut next = counts.clone();
        for &(i, j, v) in upper {
            let p = next[i as usize] as usize;
            cols[p] = j;
            vals[p] = v;
            next[i as usize] += 1;
            if i != j {
                let q = next[j as usize] as usize;
                cols[q] = i;
                vals[q] = v;
                next[j as usize] += 1;
            }
        }
        Csr {
            row_ptr: counts,
            cols,
            vals,
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let lo = self.row_ptr[r] as usize;
            let hi = self.row_ptr[r + 1] as usize;
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            *yr = acc;
        }
    }
}

#[derive(Debug, Clone)]
enum Storage {
    /// Upper-triangle triplets (row <= col) plus a two-sided CSR for matvec.
    Real {
        upper: Vec<(u32, u32, f64)>,
        csr: Csr,
    },
    /// Upper-triangle triplets of a Hermitian matrix; value is `<row|H|col>`.
    Complex { upper: Vec<(u32, u32, Complex64)> },
}

/// A Hamiltonian matrix over one [`SectorBasis`], in symmetric storage.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    pub basis: SectorBasis,
    storage: Storage,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True when all entries are real (the `Im xi = 0` path).
    pub fn is_real(&self) -> bool {
        matches!(self.storage, Storage::Real { .. })
    }

    /// Matrix-vector product for the real representation.
    ///
    /// Panics if the matrix is complex.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        match &self.storage {
            Storage::Real { csr, .. } => csr.apply(x, y),
            Storage::Complex { .. } => panic!("apply() called on a complex Hamiltonian"),
        }
    }

    pub fn to_dense_real(&self) -> Option<DMatrix<f64>> {
        match &self.storage {
            Storage::Real { upper, .. } => {
                let n = self.dim();
                let mut m = DMatrix::zeros(n, n);
                for &(i, j, v) in upper {
                    m[(i as usize, j as usize)] = v;
                    m[(j as usize, i as usize)] = v;
                }
                Some(m)
            }
            Storage::Complex { .. } => None,
        }
    }

    pub fn to_dense_complex(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        match &self.storage {
            Storage::Real { upper, .. } => {
                for &(i, j, v) in upper {
                    m[(i as usize, j as usize)] = Complex64::new(v, 0.0);
                    m[(j as usize, i as usize)] = Complex64::new(v, 0.0);
                }
            }
            Storage::Complex { upper } => {
                for &(i, j, v) in upper {
                    m[(i as usize, j as usize)] = v;
                    m[(j as usize, i as usize)] = v.conj();
                }
            }
        }
        m
    }

    /// Number of stored (upper-triangle) entries.
    pub fn nnz_upper(&self) -> usize {
        match &self.storage {
            Storage::Real { upper, .. } => upper.len(),
            Storage::Complex { upper } => upper.len(),
        }
    }

    /// Infinity norm (maximum absolute row sum) of the symmetric matrix.
    pub fn inf_norm(&self) -> f64 {
        let mut row_sums = vec![0.0; self.dim()];
        let mut add = |i: u32, j: u32, a: f64| {
            row_sums[i as usize] += a;
            if i != j {
                row_sums[j as usize] += a;
            }
        };
        match &self.storage {
            Storage::Real { upper, .. } => {
                for &(i, j, v) in upper {
                    add(i, j, v.abs());
                }
            }
            Storage::Complex { upper } => {
                for &(i, j, v) in upper {
                    add(i, j, v.norm());
                }
            }
        }
        row_sums.into_iter().fold(0.0, f64::max)
    }

    /// Writes the stored entries as coordinate-format text, one
    /// `row col value` triple per line, 0-based, 17 significant digits.
    /// Only the upper triangle (`row <= col`) is emitted.
    pub fn write_coordinate_format<W: Write>(&self, w: &mut W) -> Result<()> {
        match &self.storage {
            Storage::Real { upper, .. } => {
                for &(i, j, v) in upper {
                    writeln!(w, "{i} {j} {v:.16e}")?;
                }
            }
            Storage::Complex { upper } => {
                for &(i, j, v) in upper {
                    writeln!(w, "{i} {j} {:.16e}{:+.16e}i", v.re, v.im)?;
                }
            }
        }
        Ok(())
    }
}

/// `<bra| H |ket>` for the full Hamiltonian, valid for any pair of states.
///
/// Returns zero for uncoupled pairs. Couplings (with `n1 = N_a - n2` of the
/// ket, `N = N_a`):
///
/// * diagonal: `Omega nu + omega1 n1 + omega2 n2 + zeta n1 n2 / (N-1)`
/// * `(nu-1, n2+1)` and `(nu+1, n2+1)`: `-(mu/sqrt(N)) sqrt(nu or nu+1) sqrt(n1 (n2+1))`
/// * `(nu-1, n2-1)` and `(nu+1, n2-1)`: `-(mu/sqrt(N)) sqrt(nu or nu+1) sqrt((n1+1) n2)`
/// * `(nu, n2-2)`: `xi  sqrt((n1+1)(n1+2) n2 (n2-1)) / (N-1)`
/// * `(nu, n2+2)`: `xi* sqrt(n1 (n1-1) (n2+1)(n2+2)) / (N-1)`
pub fn matrix_element_full(p: &ModelParams, bra: &FockState, ket: &FockState) -> Complex64 {
    element(p, bra, ket, FULL)
}

fn element(p: &ModelParams, bra: &FockState, ket: &FockState, terms: Terms) -> Complex64 {
    let n = p.n_atoms as f64;
    let nu = ket.nu as f64;
    let n2 = ket.n2 as f64;
    let n1 = ket.n1(p.n_atoms) as f64;
    let dnu = bra.nu as i64 - ket.nu as i64;
    let dn2 = bra.n2 as i64 - ket.n2 as i64;
    if bra.n2 > p.n_atoms || ket.n2 > p.n_atoms {
        return Complex64::new(0.0, 0.0);
    }

    let re = |x: f64| Complex64::new(x, 0.0);
    match (dnu, dn2) {
        (0, 0) => {
            re(p.omega_field * nu + p.omega1 * n1 + p.omega2 * n2 + p.zeta * n1 * n2 / (n - 1.0))
        }
        // Matter raising with photon absorption/emission.
        (-1, 1) => re(-(p.mu / n.sqrt()) * nu.sqrt() * (n1 * (n2 + 1.0)).sqrt()),
        (1, 1) if terms.counter_rotating => {
            re(-(p.mu / n.sqrt()) * (nu + 1.0).sqrt() * (n1 * (n2 + 1.0)).sqrt())
        }
        // Matter lowering with photon emission/absorption.
        (1, -1) => re(-(p.mu / n.sqrt()) * (nu + 1.0).sqrt() * ((n1 + 1.0) * n2).sqrt()),
        (-1, -1) if terms.counter_rotating => {
            re(-(p.mu / n.sqrt()) * nu.sqrt() * ((n1 + 1.0) * n2).sqrt())
        }
        // Photonless double exchange.
        (0, -2) if terms.dipole_exchange => {
            p.xi * ((n1 + 1.0) * (n1 + 2.0) * n2 * (n2 - 1.0)).sqrt() / (n - 1.0)
        }
        (0, 2) if terms.dipole_exchange => {
            p.xi.conj() * (n1 * (n1 - 1.0) * (n2 + 1.0) * (n2 + 2.0)).sqrt() / (n - 1.0)
        }
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Bra candidates coupled to `ket`, in a fixed order.
fn coupled_bras(ket: &FockState, n_atoms: u32, terms: Terms) -> Vec<FockState> {
    let mut out = Vec::with_capacity(7);
    out.push(*ket);
    let mut push = |dnu: i64, dn2: i64| {
        let nu = ket.nu as i64 + dnu;
        let n2 = ket.n2 as i64 + dn2;
        if nu >= 0 && n2 >= 0 && n2 <= n_atoms as i64 {
            out.push(FockState::new(nu as u32, n2 as u32));
        }
    };
    push(-1, 1);
    push(1, -1);
    if terms.counter_rotating {
        push(1, 1);
        push(-1, -1);
    }
    if terms.dipole_exchange {
        push(0, -2);
        push(0, 2);
    }
    out
}

fn assemble_terms(p: &ModelParams, basis: &SectorBasis, terms: Terms) -> Result<SparseHamiltonian> {
    p.validate()?;
    if p.n_atoms != basis.n_atoms {
        return Err(DickeError::BasisMismatch(format!(
            "model has N_a = {} but basis was built for N_a = {}",
            p.n_atoms, basis.n_atoms
        )));
    }
    let real = p.xi_is_real() || !terms.dipole_exchange;

    // Each unordered pair is assembled exactly once (row <= col), in
    // deterministic order.
    if real {
        let mut upper: Vec<(u32, u32, f64)> = Vec::with_capacity(4 * basis.len());
        for (j, ket) in basis.states.iter().enumerate() {
            for bra in coupled_bras(ket, p.n_atoms, terms) {
                if let Some(i) = basis.position(&bra) {
                    if i > j {
                        continue;
                    }
                    let v = element(p, &bra, ket, terms).re;
                    if v != 0.0 || i == j {
                        upper.push((i as u32, j as u32, v));
                    }
                }
            }
        }
        upper.sort_unstable_by_key(|&(i, j, _)| (j, i));
        let csr = Csr::from_upper(basis.len(), &upper);
        Ok(SparseHamiltonian {
            basis: basis.clone(),
            storage: Storage::Real { upper, csr },
        })
    } else {
        let mut upper: Vec<(u32, u32, Complex64)> = Vec::with_capacity(4 * basis.len());
        for (j, ket) in basis.states.iter().enumerate() {
            for bra in coupled_bras(ket, p.n_atoms, terms) {
                if let Some(i) = basis.position(&bra) {
                    if i > j {
                        continue;
                    }
                    let v = element(p, &bra, ket, terms);
                    if v != Complex64::new(0.0, 0.0) || i == j {
                        upper.push((i as u32, j as u32, v));
                    }
                }
            }
        }
        upper.sort_unstable_by_key(|&(i, j, _)| (j, i));
        Ok(SparseHamiltonian {
            basis: basis.clone(),
            storage: Storage::Complex { upper },
        })
    }
}

/// Assembles the Hamiltonian in the given sector.
///
/// With `rwa = true` only the excitation-conserving interaction halves are
/// kept and the basis must be a fixed-excitation block; a nonzero `xi` is an
/// error rather than being silently dropped. With `rwa = false` the basis must
/// be a parity or full sector.
pub fn assemble(p: &ModelParams, basis: &SectorBasis, rwa: bool) -> Result<SparseHamiltonian> {
    if rwa {
        if !matches!(basis.label, SectorLabel::RwaBlock(_)) {
            return Err(DickeError::BasisMismatch(format!(
                "excitation-conserving assembly requires a fixed-excitation block, got {}",
                basis.label
            )));
        }
        if p.xi.norm() != 0.0 {
            return Err(DickeError::InvalidParams(
                "xi must be zero in the excitation-conserving model (it would be dropped)".into(),
            ));
        }
        assemble_terms(p, basis, EXCITATION_CONSERVING)
    } else {
        if matches!(basis.label, SectorLabel::RwaBlock(_)) {
            return Err(DickeError::BasisMismatch(
                "full-model assembly requires a parity or full sector".into(),
            ));
        }
        assemble_terms(p, basis, FULL)
    }
}

/// Assembles the photon-number conserving Hamiltonian at `mu = 0`.
///
/// Equals [`assemble`] with `mu = 0`; restricted to the zero-photon subspace
/// when the basis has cutoff 0.
pub fn assemble_decoupled(p: &ModelParams, basis: &SectorBasis) -> Result<SparseHamiltonian> {
    if p.mu != 0.0 {
        return Err(DickeError::InvalidParams(format!(
            "decoupled assembly requires mu = 0, got {}",
            p.mu
        )));
    }
    assemble(p, basis, false)
}

/// Full-model assembly with the counter-rotating interaction halves zeroed.
///
/// Test hook for cross-checking the parity-sector solver against the
/// fixed-excitation solver; requires `xi = 0` so both describe the same
/// physics.
pub fn assemble_co_rotating_only(
    p: &ModelParams,
    basis: &SectorBasis,
) -> Result<SparseHamiltonian> {
    if p.xi.norm() != 0.0 {
        return Err(DickeError::InvalidParams(
            "co-rotating-only assembly requires xi = 0".into(),
        ));
    }
    if matches!(basis.label, SectorLabel::RwaBlock(_)) {
        return Err(DickeError::BasisMismatch(
            "co-rotating-only assembly expects a parity or full sector".into(),
        ));
    }
    assemble_terms(p, basis, CO_ROTATING_ONLY)
}
