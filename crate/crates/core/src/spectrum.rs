//! Lowest eigenpairs per sector, global ground-state selection, and certified
//! photon-cutoff convergence.
//!
//! Small or mostly-requested problems are solved densely; larger real
//! matrices use a Lanczos iteration with full reorthogonalization and a
//! residual certificate, falling back to the dense path if the certificate
//! fails. Start vectors are keyed by basis-state labels rather than indices,
//! so a degenerate ground subspace supported on low-photon states yields the
//! same representative at every cutoff.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::{build_sector, SectorBasis, SectorLabel};
use crate::hamiltonian::{assemble, SparseHamiltonian};
use crate::model::{to_dimensionless, ModelParams};
use crate::{DickeError, Result};

/// Absolute residual tolerance `||H v - E v||_2` for certified eigenpairs.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Energy gap below which two levels are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Dense solves below this dimension; iterative above.
pub const DENSE_DIM_LIMIT: usize = 64;
/// Largest dimension for which a failed iterative solve retries densely.
const DENSE_FALLBACK_LIMIT: usize = 4096;

/// Excitation parity of a state, or mixed support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityTag {
    Even,
    Odd,
    Mixed,
}

impl ParityTag {
    pub fn sign(&self) -> Option<i32> {
        match self {
            ParityTag::Even => Some(1),
            ParityTag::Odd => Some(-1),
            ParityTag::Mixed => None,
        }
    }
}

/// Amplitudes of an eigenvector over its sector basis.
#[derive(Debug, Clone)]
pub enum Amplitudes {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Amplitudes {
    pub fn len(&self) -> usize {
        match self {
            Amplitudes::Real(v) => v.len(),
            Amplitudes::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|amplitude_i|^2`.
    pub fn prob(&self, i: usize) -> f64 {
        match self {
            Amplitudes::Real(v) => v[i] * v[i],
            Amplitudes::Complex(v) => v[i].norm_sqr(),
        }
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Amplitudes::Real(v) => Some(v),
            Amplitudes::Complex(_) => None,
        }
    }

    pub fn norm_sq(&self) -> f64 {
        (0..self.len()).map(|i| self.prob(i)).sum()
    }

    /// `<self|other>` with conjugation on `self`; both must have equal length.
    pub fn dot(&self, other: &Amplitudes) -> Complex64 {
        assert_eq!(self.len(), other.len());
        let get = |a: &Amplitudes, i: usize| match a {
            Amplitudes::Real(v) => Complex64::new(v[i], 0.0),
            Amplitudes::Complex(v) => v[i],
        };
        (0..self.len())
            .map(|i| get(self, i).conj() * get(other, i))
            .sum()
    }
}

/// One certified eigenpair of a sector Hamiltonian.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub energy: f64,
    pub sector: SectorLabel,
    pub amplitudes: Amplitudes,
}

/// Ground state of the model with its convergence certificate.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub pair: EigenPair,
    pub basis: SectorBasis,
    /// `<nu + n2>` in the ground state.
    pub excitation_mean: f64,
    pub parity: ParityTag,
    /// Photon cutoff of the reported basis (for fixed-excitation grounds, the
    /// largest photon number in the block).
    pub cutoff_used: u32,
    /// Squared overlap between the ground vectors at the last two cutoffs
    /// (1.0 for fixed-excitation grounds, which are exact).
    pub convergence_overlap: f64,
    /// Another sector or block came within [`DEGENERACY_TOL`] of the minimum.
    pub near_degenerate: bool,
}

impl GroundState {
    pub fn energy(&self) -> f64 {
        self.pair.energy
    }

    pub fn energy_per_particle(&self) -> f64 {
        self.pair.energy / self.basis.n_atoms as f64
    }
}

/// Photon-cutoff convergence policy for the full model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePolicy {
    /// Starting photon cutoff; defaults to `N_a + 10` when absent.
    pub initial_cutoff: Option<u32>,
    pub cutoff_step: u32,
    /// Required squared overlap between successive ground vectors.
    pub overlap_threshold: f64,
    pub energy_tol_per_particle: f64,
    pub max_cutoff: u32,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        Self {
            initial_cutoff: None,
            cutoff_step: 2,
            overlap_threshold: 1.0 - 1e-8,
            energy_tol_per_particle: 1e-9,
            max_cutoff: 512,
        }
    }
}

// ---------------------------------------------------------------------------
// small vector helpers

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Deterministic start-vector component keyed by the state label, so the
/// component of a given `|nu; n2>` does not depend on the cutoff.
fn seeded_component(nu: u32, n2: u32, salt: u64) -> f64 {
    let key = ((nu as u64) << 32 | n2 as u64) ^ salt.wrapping_mul(0xA24BAED4963EE407);
    let h = splitmix64(key);
    let u = (h >> 11) as f64 * (1.0 / 9007199254740992.0);
    let sign = if h & 1 == 0 { 1.0 } else { -1.0 };
    sign * (0.25 + u)
}

fn start_vector(basis: &SectorBasis, salt: u64) -> Vec<f64> {
    let mut v: Vec<f64> = basis
        .states
        .iter()
        .map(|s| seeded_component(s.nu, s.n2, salt))
        .collect();
    let n = norm2(&v);
    for x in &mut v {
        *x /= n;
    }
    v
}

fn phase_fix_real(v: &mut [f64]) {
    let mut imax = 0;
    let mut best = -1.0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            imax = i;
        }
    }
    if v[imax] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn residual_real(h: &SparseHamiltonian, e: f64, v: &[f64]) -> f64 {
    let mut w = vec![0.0; v.len()];
    h.apply(v, &mut w);
    axpy(-e, v, &mut w);
    norm2(&w)
}

/// Replaces the vectors of each fully-captured degenerate group with the
/// canonical orthonormal frame obtained by projecting coordinate axes onto
/// the group subspace in index order. The frame depends only on the subspace,
/// so degenerate representatives are reproducible across solvers and cutoffs.
fn canonicalize_degenerate(energies: &[f64], vectors: &mut [Vec<f64>], next_energy: Option<f64>) {
    let k = energies.len();
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && (energies[end] - energies[end - 1]).abs() < DEGENERACY_TOL {
            end += 1;
        }
        let complete = end < k
            || next_energy
                .map(|e| (e - energies[k - 1]).abs() >= DEGENERACY_TOL)
                .unwrap_or(false);
        let g = end - start;
        if g >= 2 && complete {
            let n = vectors[start].len();
            let group: Vec<Vec<f64>> = vectors[start..end].to_vec();
            let mut frame: Vec<Vec<f64>> = Vec::with_capacity(g);
            for axis in 0..n {
                // Projection of e_axis onto the group subspace.
                let mut u = vec![0.0; n];
                for v in &group {
                    axpy(v[axis], v, &mut u);
                }
                for w in &frame {
                    let c = dot(w, &u);
                    axpy(-c, w, &mut u);
                }
                let nu = norm2(&u);
                if nu > 1e-8 {
                    for x in &mut u {
                        *x /= nu;
                    }
                    frame.push(u);
                    if frame.len() == g {
                        break;
                    }
                }
            }
            if frame.len() == g {
                for (slot, f) in vectors[start..end].iter_mut().zip(frame) {
                    *slot = f;
                }
            }
        }
        start = end;
    }
}

// ---------------------------------------------------------------------------
// dense paths

fn dense_lowest_real(
    h: &SparseHamiltonian,
    k: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, Option<f64>)> {
    let d = h
        .to_dense_real()
        .expect("dense path requires a real matrix");
    let (vals, vecs) = crate::dense::sym_eigen(d)?;
    let energies: Vec<f64> = vals[..k].to_vec();
    let vectors: Vec<Vec<f64>> = (0..k)
        .map(|i| vecs.column(i).iter().copied().collect())
        .collect();
    let next = vals.get(k).copied();
    Ok((energies, vectors, next))
}

fn dense_lowest_complex(h: &SparseHamiltonian, k: usize) -> Result<Vec<EigenPair>> {
    let d = h.to_dense_complex();
    let (vals, all_vecs) = crate::dense::herm_eigen(&d)?;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let e = vals[i];
        let mut v: Vec<Complex64> = all_vecs[i].clone();
        // Rotate the global phase so the largest amplitude is real positive.
        let mut imax = 0;
        let mut best = -1.0;
        for (j, z) in v.iter().enumerate() {
            if z.norm() > best {
                best = z.norm();
                imax = j;
            }
        }
        if best > 0.0 {
            let phase = v[imax] / v[imax].norm();
            for z in &mut v {
                *z /= phase;
            }
        }
        let dv = nalgebra::DVector::from_column_slice(&v);
        let res = (&d * &dv - dv.scale(e)).norm();
        if res > RESIDUAL_TOL {
            return Err(DickeError::NonConvergence {
                best_residual: res,
                iterations: 0,
                tol: RESIDUAL_TOL,
            });
        }
        out.push(EigenPair {
            energy: e,
            sector: h.basis.label,
            amplitudes: Amplitudes::Complex(v),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lanczos with full reorthogonalization

fn eig_tridiag(alphas: &[f64], betas: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    crate::dense::tridiag_eigen(alphas, &betas[..alphas.len().saturating_sub(1)])
}

fn lanczos_lowest(
    h: &SparseHamiltonian,
    k: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, Option<f64>)> {
    let n = h.dim();
    let scale = h.inf_norm().max(1.0);
    let breakdown_tol = 1e-13 * scale;

    let mut vs: Vec<Vec<f64>> = vec![start_vector(&h.basis, 0)];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut salt = 0u64;
    let mut w = vec![0.0; n];

    let solution = loop {
        let j = alphas.len();
        h.apply(&vs[j], &mut w);
        if j > 0 && betas[j - 1] != 0.0 {
            let prev = vs[j - 1].clone();
            axpy(-betas[j - 1], &prev, &mut w);
        }
        let a = dot(&w, &vs[j]);
        alphas.push(a);
        axpy(-a, &vs[j], &mut w);
        for _ in 0..2 {
            for v in &vs {
                let c = dot(&w, v);
                if c != 0.0 {
                    axpy(-c, v, &mut w);
                }
            }
        }
        let b = norm2(&w);
        let steps = alphas.len();
        let exhausted = steps == n;
        let broke = b <= breakdown_tol;

        if exhausted || broke || (steps >= k && steps % 5 == 0) {
            let (thetas, s) = eig_tridiag(&alphas, &betas)?;
            let certified =
                steps >= k && (0..k).all(|i| (b * s[(steps - 1, i)]).abs() <= 0.5 * RESIDUAL_TOL);
            if certified || exhausted || (broke && steps >= k) {
                break (thetas, s);
            }
        }

        if broke {
            // Krylov space exhausted before k pairs; extend with a fresh
            // deterministic direction.
            salt += 1;
            if salt > 16 {
                return Err(DickeError::NonConvergence {
                    best_residual: b,
                    iterations: steps,
                    tol: RESIDUAL_TOL,
                });
            }
            let mut f = start_vector(&h.basis, salt);
            for _ in 0..2 {
                for v in &vs {
                    let c = dot(&f, v);
                    if c != 0.0 {
                        axpy(-c, v, &mut f);
                    }
                }
            }
            let fn2 = norm2(&f);
            if fn2 < 1e-10 {
                continue;
            }
            for x in &mut f {
                *x /= fn2;
            }
            betas.push(0.0);
            vs.push(f);
        } else {
            for x in &mut w {
                *x /= b;
            }
            betas.push(b);
            vs.push(w.clone());
        }
    };

    let (thetas, s) = solution;
    let steps = alphas.len();
    if steps < k {
        return Err(DickeError::NonConvergence {
            best_residual: f64::INFINITY,
            iterations: steps,
            tol: RESIDUAL_TOL,
        });
    }
    let mut energies = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for i in 0..k {
        let mut x = vec![0.0; n];
        for (jj, v) in vs.iter().take(steps).enumerate() {
            axpy(s[(jj, i)], v, &mut x);
        }
        let nx = norm2(&x);
        for xv in &mut x {
            *xv /= nx;
        }
        energies.push(thetas[i]);
        vectors.push(x);
    }
    let next = (steps > k).then(|| thetas[k]);
    Ok((energies, vectors, next))
}

// ---------------------------------------------------------------------------
// public eigensolution API

/// Computes the `k` smallest eigenpairs of a sector Hamiltonian, ascending,
/// each certified to residual [`RESIDUAL_TOL`].
///
/// Real matrices of dimension at most [`DENSE_DIM_LIMIT`] (or with `k` a
/// sizable fraction of the dimension) are solved densely; larger ones use
/// Lanczos with a dense retry on certification failure. Complex-Hermitian
/// matrices always take the dense path. With exactly degenerate eigenvalues
/// an iterative solve may return one representative per distinct eigenvalue.
pub fn lowest_eigenpair(h: &SparseHamiltonian, k: usize) -> Result<Vec<EigenPair>> {
    let n = h.dim();
    if k == 0 || k > n {
        return Err(DickeError::InvalidParams(format!(
            "requested {k} eigenpairs of a dimension-{n} matrix"
        )));
    }
    if !h.is_real() {
        return dense_lowest_complex(h, k);
    }

    let use_dense = n <= DENSE_DIM_LIMIT || 3 * k > n;
    let (mut energies, mut vectors, next) = if use_dense {
        dense_lowest_real(h, k)?
    } else {
        match lanczos_lowest(h, k) {
            Ok(sol) => sol,
            Err(e) => {
                if n <= DENSE_FALLBACK_LIMIT {
                    dense_lowest_real(h, k)?
                } else {
                    return Err(e);
                }
            }
        }
    };

    canonicalize_degenerate(&energies, &mut vectors, next);
    for v in &mut vectors {
        phase_fix_real(v);
    }

    // Certify; a failed iterative certificate retries densely once.
    let mut worst = 0.0f64;
    for (e, v) in energies.iter().zip(&vectors) {
        worst = worst.max(residual_real(h, *e, v));
    }
    if worst > RESIDUAL_TOL {
        if !use_dense && n <= DENSE_FALLBACK_LIMIT {
            let (es, mut vsd, nextd) = dense_lowest_real(h, k)?;
            canonicalize_degenerate(&es, &mut vsd, nextd);
            for v in &mut vsd {
                phase_fix_real(v);
            }
            let mut w2 = 0.0f64;
            for (e, v) in es.iter().zip(&vsd) {
                w2 = w2.max(residual_real(h, *e, v));
            }
            if w2 > RESIDUAL_TOL {
                return Err(DickeError::NonConvergence {
                    best_residual: w2,
                    iterations: n,
                    tol: RESIDUAL_TOL,
                });
            }
            energies = es;
            vectors = vsd;
        } else {
            return Err(DickeError::NonConvergence {
                best_residual: worst,
                iterations: n,
                tol: RESIDUAL_TOL,
            });
        }
    }

    Ok(energies
        .into_iter()
        .zip(vectors)
        .map(|(e, v)| EigenPair {
            energy: e,
            sector: h.basis.label,
            amplitudes: Amplitudes::Real(v),
        })
        .collect())
}

/// Lowest eigenpair of one fixed-excitation block.
pub fn rwa_block_ground(p: &ModelParams, m: u32) -> Result<EigenPair> {
    let basis = build_sector(p.n_atoms, SectorLabel::RwaBlock(m))?;
    let h = assemble(p, &basis, true)?;
    Ok(lowest_eigenpair(&h, 1)?.pop().unwrap())
}

/// Default block ceiling for [`rwa_ground`]: a generous envelope of the
/// observed growth of the minimizing excitation number with coupling.
pub fn default_m_max(p: &ModelParams) -> Result<u32> {
    let d = to_dimensionless(p)?;
    let x2 = d.x12 * d.x12;
    Ok(4 * (x2 * p.n_atoms as f64).ceil() as u32 + p.n_atoms + 8)
}

/// Ground state of the excitation-conserving model: minimizes the block
/// ground energies over `m <= m_max` and certifies the minimum is interior.
///
/// Ties are broken toward smaller `m` and flagged as near-degenerate when the
/// runner-up is within [`DEGENERACY_TOL`].
pub fn rwa_ground(p: &ModelParams, m_max: u32) -> Result<GroundState> {
    p.validate()?;
    if p.xi.norm() != 0.0 {
        return Err(DickeError::InvalidParams(
            "excitation-conserving ground search requires xi = 0".into(),
        ));
    }
    if m_max < 1 {
        return Err(DickeError::InvalidParams("m_max must be >= 1".into()));
    }
    let mut best: Option<(u32, EigenPair)> = None;
    let mut runner_up_gap = f64::INFINITY;
    for m in 0..=m_max {
        let pair = rwa_block_ground(p, m)?;
        match &best {
            None => best = Some((m, pair)),
            Some((_, b)) => {
                let gap = (pair.energy - b.energy).abs();
                if pair.energy < b.energy {
                    runner_up_gap = gap;
                    best = Some((m, pair));
                } else {
                    runner_up_gap = runner_up_gap.min(gap);
                }
            }
        }
    }
    let (m_star, pair) = best.unwrap();
    if m_star == m_max {
        return Err(DickeError::MMaxTooSmall { m_max });
    }
    let basis = build_sector(p.n_atoms, SectorLabel::RwaBlock(m_star))?;
    let excitation_mean: f64 = basis
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| pair.amplitudes.prob(i) * s.excitation() as f64)
        .sum();
    Ok(GroundState {
        pair,
        excitation_mean,
        parity: if m_star % 2 == 0 {
            ParityTag::Even
        } else {
            ParityTag::Odd
        },
        cutoff_used: m_star,
        convergence_overlap: 1.0,
        near_degenerate: runner_up_gap < DEGENERACY_TOL,
        basis,
    })
}

struct SectorGround {
    energy: f64,
    vector: Vec<f64>,
    basis: SectorBasis,
    cutoff: u32,
    overlap: f64,
}

/// Squared overlap of the previous ground vector (zero-padded) with the new
/// one; the previous basis is a subset of the new one.
fn padded_overlap_sq(
    prev: &[f64],
    prev_basis: &SectorBasis,
    new: &[f64],
    new_basis: &SectorBasis,
) -> f64 {
    let mut acc = 0.0;
    for (i, s) in prev_basis.states.iter().enumerate() {
        if let Some(j) = new_basis.position(s) {
            acc += prev[i] * new[j];
        }
    }
    acc * acc
}

fn converge_sector(
    p: &ModelParams,
    make_label: fn(u32) -> SectorLabel,
    policy: &ConvergencePolicy,
) -> Result<SectorGround> {
    let mut cutoff = policy.initial_cutoff.unwrap_or(p.n_atoms + 10);
    let mut prev: Option<(f64, Vec<f64>, SectorBasis)> = None;
    let mut last_overlap = 0.0;
    let mut last_change = f64::INFINITY;
    let mut best_energy = f64::INFINITY;
    loop {
        let basis = build_sector(p.n_atoms, make_label(cutoff))?;
        let h = assemble(p, &basis, false)?;
        let k = 2.min(h.dim());
        let pairs = lowest_eigenpair(&h, k)?;
        let e0 = pairs[0].energy;
        let v0 = pairs[0]
            .amplitudes
            .as_real()
            .expect("real xi gives real vectors")
            .to_vec();
        best_energy = best_energy.min(e0);
        if let Some((pe, pv, pb)) = &prev {
            // Variational bound on nested bases: the energy cannot rise.
            if e0 > pe + 1e-10 * pe.abs().max(1.0) {
                return Err(DickeError::InvariantViolated(format!(
                    "ground energy rose from {pe:.15e} to {e0:.15e} when the cutoff grew \
                     ({} -> {}), which violates the variational bound",
                    pb.label, basis.label
                )));
            }
            last_overlap = padded_overlap_sq(pv, pb, &v0, &basis);
            last_change = (pe - e0).abs() / p.n_atoms as f64;
            if last_overlap >= policy.overlap_threshold
                && last_change <= policy.energy_tol_per_particle
            {
                return Ok(SectorGround {
                    energy: e0,
                    vector: v0,
                    basis,
                    cutoff,
                    overlap: last_overlap,
                });
            }
        }
        prev = Some((e0, v0, basis));
        let next = cutoff + policy.cutoff_step;
        if next > policy.max_cutoff {
            return Err(DickeError::CutoffExceeded {
                ceiling: policy.max_cutoff,
                best_energy,
                last_overlap,
                last_energy_change: last_change,
            });
        }
        cutoff = next;
    }
}

fn sector_to_ground(win: SectorGround, tag: ParityTag, near_degenerate: bool) -> GroundState {
    let excitation_mean: f64 = win
        .basis
        .states
        .iter()
        .zip(&win.vector)
        .map(|(s, a)| a * a * s.excitation() as f64)
        .sum();
    GroundState {
        pair: EigenPair {
            energy: win.energy,
            sector: win.basis.label,
            amplitudes: Amplitudes::Real(win.vector),
        },
        excitation_mean,
        parity: tag,
        cutoff_used: win.cutoff,
        convergence_overlap: win.overlap,
        near_degenerate,
        basis: win.basis,
    }
}

/// Cutoff-converged ground state of one parity sector of the full model.
pub fn parity_sector_ground(
    p: &ModelParams,
    parity: ParityTag,
    policy: &ConvergencePolicy,
) -> Result<GroundState> {
    p.validate()?;
    if !p.xi_is_real() {
        return Err(DickeError::InvalidParams(
            "full-model ground states require a real dipole strength xi".into(),
        ));
    }
    let make_label: fn(u32) -> SectorLabel = match parity {
        ParityTag::Even => SectorLabel::ParityEven,
        ParityTag::Odd => SectorLabel::ParityOdd,
        ParityTag::Mixed => {
            return Err(DickeError::InvalidParams(
                "sector convergence needs a definite parity".into(),
            ))
        }
    };
    let win = converge_sector(p, make_label, policy)?;
    Ok(sector_to_ground(win, parity, false))
}

/// Ground state of the full model: both parity sectors are converged in the
/// photon cutoff and the lower one is returned (ties resolve to even).
pub fn full_ground(p: &ModelParams, policy: &ConvergencePolicy) -> Result<GroundState> {
    p.validate()?;
    if !p.xi_is_real() {
        return Err(DickeError::InvalidParams(
            "full-model ground states require a real dipole strength xi".into(),
        ));
    }
    let even = converge_sector(p, SectorLabel::ParityEven, policy)?;
    let odd = converge_sector(p, SectorLabel::ParityOdd, policy)?;
    let near_degenerate = (even.energy - odd.energy).abs() < DEGENERACY_TOL;
    let (win, tag) = if even.energy <= odd.energy {
        (even, ParityTag::Even)
    } else {
        (odd, ParityTag::Odd)
    };
    Ok(sector_to_ground(win, tag, near_degenerate))
}
