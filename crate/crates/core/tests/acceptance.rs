//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p dicke-core --test acceptance -- --nocapture` to see
//! the per-criterion lines and measured margins.

use dicke_core::analytic::{decoupled_ground, na2_rwa_spectrum, zeta_transition_points};
use dicke_core::fock::{build_sector, SectorLabel};
use dicke_core::hamiltonian::assemble;
use dicke_core::model::{DiagramControls, DimensionlessControls, ModelParams};
use dicke_core::observables::{excitation_distribution, fidelity, number_stats, NumberObservable};
use dicke_core::scan::{
    scan_fidelity, scan_fluctuations, scan_rwa, AxisSpec, Classification, GridSpec, ModelKind,
    PhaseDiagramGrid, ScanTolerances, SecondAxis,
};
use dicke_core::spectrum::{
    full_ground, lowest_eigenpair, ConvergencePolicy, GroundState, ParityTag,
};
use dicke_core::variational::{energy_surface, min_energy, VariationalPoint};

fn check(criterion: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("[{verdict}] {criterion}: {detail}");
    assert!(ok, "{criterion}: {detail}");
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + i as f64 * (hi - lo) / (n as f64 - 1.0))
        .collect()
}

fn diagram_resonant(na: u32, x12: f64, zeta: f64, eta: f64) -> ModelParams {
    DiagramControls { x12, zeta, eta }
        .to_params_resonant(na)
        .unwrap()
}

fn ground(na: u32, x12: f64, zeta: f64, eta: f64) -> GroundState {
    full_ground(
        &diagram_resonant(na, x12, zeta, eta),
        &ConvergencePolicy::default(),
    )
    .unwrap()
}

#[test]
fn criterion_1_two_atom_block_oracle() {
    let mut worst_energy = 0.0f64;
    let mut worst_fidelity = 1.0f64;
    for m in 0..=6u32 {
        let basis = build_sector(2, SectorLabel::RwaBlock(m)).unwrap();
        for &x12 in &linspace(0.0, 2.0, 10) {
            for &zeta in &linspace(-3.0, 1.0, 10) {
                let p = diagram_resonant(2, x12, zeta, 0.0);
                let h = assemble(&p, &basis, true).unwrap();
                let pairs = lowest_eigenpair(&h, h.dim()).unwrap();
                let levels = na2_rwa_spectrum(m, x12, zeta, 1.0).unwrap();
                for (pair, level) in pairs.iter().zip(&levels) {
                    worst_energy = worst_energy.max((pair.energy - level.energy).abs());
                }
                // Subspace fidelity within degeneracy groups (the grouped
                // closed-form kets are mutually orthogonal).
                let mut start = 0;
                while start < levels.len() {
                    let mut end = start + 1;
                    while end < levels.len()
                        && (levels[end].energy - levels[end - 1].energy).abs() < 1e-8
                    {
                        end += 1;
                    }
                    for pair in &pairs[start..end] {
                        let v = pair.amplitudes.as_real().unwrap();
                        let mut proj = 0.0;
                        for level in &levels[start..end] {
                            let mut k = vec![0.0; basis.len()];
                            for (s, a) in &level.unnormalized_amplitudes {
                                k[basis.position(s).unwrap()] = *a;
                            }
                            let norm = k.iter().map(|a| a * a).sum::<f64>().sqrt();
                            let d: f64 = k.iter().zip(v).map(|(a, b)| a / norm * b).sum();
                            proj += d * d;
                        }
                        worst_fidelity = worst_fidelity.min(proj);
                    }
                    start = end;
                }
            }
        }
    }
    check(
        "criterion 1 (two-atom closed-form oracle)",
        worst_energy < 1e-10 && worst_fidelity >= 1.0 - 1e-10,
        &format!("max |dE| = {worst_energy:.3e}, min subspace fidelity = {worst_fidelity:.12}"),
    );
}

/// Parity sign of the full-model ground at zero matter-field coupling.
fn parity_at(na: u32, zeta: f64, eta: f64) -> i32 {
    ground(na, 0.0, zeta, eta).parity.sign().unwrap()
}

/// Bisects a parity flip inside a bracketing interval.
fn bisect_flip(na: u32, eta: f64, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = parity_at(na, lo, eta);
    assert_ne!(s_lo, parity_at(na, hi, eta), "bracket does not straddle");
    for _ in 0..52 {
        let mid = 0.5 * (lo + hi);
        if parity_at(na, mid, eta) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_2_transition_points() {
    let mut worst = 0.0f64;
    // Neutral cross-dipole coupling: every atom count from 2 to 8.
    for na in 2..=8u32 {
        let expected = zeta_transition_points(na, 1.0).unwrap();
        let floor = expected.last().unwrap() - 0.75;
        // Coarse scan for parity flips (spacing of the expected points is
        // at least 0.4, so a 0.1 step cannot skip one).
        let mut flips = Vec::new();
        let mut z = 0.25;
        let mut prev = parity_at(na, z, 0.0);
        while z > floor {
            let next = z - 0.1;
            let s = parity_at(na, next, 0.0);
            if s != prev {
                flips.push(bisect_flip(na, 0.0, z, next));
                prev = s;
            }
            z = next;
        }
        assert_eq!(
            flips.len(),
            (na / 2) as usize,
            "N_a = {na}: found {} parity changes, expected {}",
            flips.len(),
            na / 2
        );
        for (found, want) in flips.iter().zip(&expected) {
            worst = worst.max((found - want).abs());
        }
    }
    // Nonzero cross-dipole coupling for the closed-form sizes.
    for na in [2u32, 3] {
        for eta in [0.5, 1.0] {
            let closed = {
                let (mut lo, mut hi) = (-0.5f64, -4.0f64);
                let sign = |z: f64| {
                    let (e, o, _) = decoupled_ground(na, z, eta, 1.0).unwrap();
                    if e.energy <= o.energy {
                        1
                    } else {
                        -1
                    }
                };
                let s_lo = sign(lo);
                assert_ne!(s_lo, sign(hi));
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if sign(mid) == s_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            let detected = bisect_flip(na, eta, -0.5, -4.0);
            worst = worst.max((closed - detected).abs());
            assert_eq!(
                (na / 2) as usize,
                1,
                "closed-form sizes have a single parity change"
            );
        }
    }
    check(
        "criterion 2 (zero-coupling transition points)",
        worst < 1e-8,
        &format!("max |zeta_found - zeta_closed_form| = {worst:.3e}"),
    );
}

/// Direct minimizer of the energy surface on the theta = phi = 0 branch;
/// the quadratic r coordinate is profiled out exactly and the remaining 1-D
/// function is scanned densely then refined by golden-section search.
fn minimize_surface(p: &ModelParams) -> f64 {
    let g = |rho: f64| {
        let r = 2.0 * p.mu / p.omega_field * rho / (1.0 + rho * rho);
        energy_surface(p, &VariationalPoint::radial(r, rho), false)
    };
    let n = 20_000;
    let rho_max = 8.0;
    let mut best = (g(0.0), 0usize);
    for i in 1..=n {
        let e = g(i as f64 * rho_max / n as f64);
        if e < best.0 {
            best = (e, i);
        }
    }
    let step = rho_max / n as f64;
    let (mut lo, mut hi) = (
        (best.1 as f64 - 1.0).max(0.0) * step,
        (best.1 as f64 + 1.0) * step,
    );
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (g(a), g(b));
    while hi - lo > 1e-13 {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = g(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = g(b);
        }
    }
    g(0.5 * (lo + hi)).min(best.0)
}

#[test]
fn criterion_3_variational_consistency() {
    let mut worst = 0.0f64;
    for &x12 in &linspace(0.0, 2.5, 50) {
        for &chi in &linspace(-2.0, 2.5, 50) {
            let p = ModelParams::resonant(2, 0.5 * x12, chi, 0.0);
            let d = DimensionlessControls {
                x12,
                chi,
                zeta_bar: chi,
                eta_bar: 0.0,
                omega_a: 1.0,
            };
            let direct = minimize_surface(&p);
            let formula = min_energy(&d, 0.0);
            worst = worst.max((direct - formula).abs());
        }
    }
    // Continuity across the separatrix chi = x12^2 - 1.
    let mut jump = 0.0f64;
    for &x12 in &linspace(0.0, 2.5, 50) {
        let chi = x12 * x12 - 1.0;
        let delta = 1e-6;
        let above = min_energy(
            &DimensionlessControls {
                x12,
                chi: chi + delta,
                zeta_bar: chi + delta,
                eta_bar: 0.0,
                omega_a: 1.0,
            },
            0.0,
        );
        let below = min_energy(
            &DimensionlessControls {
                x12,
                chi: chi - delta,
                zeta_bar: chi - delta,
                eta_bar: 0.0,
                omega_a: 1.0,
            },
            0.0,
        );
        jump = jump.max((above - below).abs());
    }
    check(
        "criterion 3 (variational consistency)",
        worst < 1e-9 && jump < 1e-9,
        &format!("max |direct - formula| = {worst:.3e}, separatrix jump = {jump:.3e}"),
    );
}

#[test]
fn criterion_4_fluctuation_identities() {
    // Fixed-excitation model: all three variances coincide.
    let spec = GridSpec {
        n_atoms: 7,
        model: ModelKind::Rwa,
        x12: AxisSpec::new(0.0, 2.0, 21),
        second_axis: SecondAxis::Zeta,
        second: AxisSpec::new(-4.0, 1.0, 21),
        eta: 0.0,
        omega_field: 1.0,
        omega1: 0.0,
        omega2: 1.0,
        policy: ConvergencePolicy::default(),
        tolerances: ScanTolerances::default(),
        m_max: None,
    };
    let rwa = scan_fluctuations(&spec).unwrap();
    let mut worst_rwa = 0.0f64;
    for c in &rwa.cells {
        assert_ne!(c.class, Classification::Failed);
        worst_rwa = worst_rwa
            .max((c.var_n1 - c.var_n2).abs())
            .max((c.var_nu - c.var_n2).abs());
    }

    // Full model: population variances coincide, the photon variance is
    // unconstrained.
    let mut worst_full = 0.0f64;
    let mut photon_differs = false;
    for eta in [0.0, 1.0] {
        let full = scan_fluctuations(&GridSpec {
            model: ModelKind::Full,
            eta,
            ..spec.clone()
        })
        .unwrap();
        for c in &full.cells {
            assert_ne!(c.class, Classification::Failed);
            worst_full = worst_full.max((c.var_n1 - c.var_n2).abs());
            if (c.var_nu - c.var_n2).abs() > 1e-6 {
                photon_differs = true;
            }
        }
    }
    check(
        "criterion 4 (fluctuation identities)",
        worst_rwa < 1e-12 && worst_full < 1e-12 && photon_differs,
        &format!(
            "fixed-excitation max spread = {worst_rwa:.3e}, full-model population spread = \
             {worst_full:.3e}, photon variance decouples = {photon_differs}"
        ),
    );
}

fn structure_spec(eta: f64) -> GridSpec {
    GridSpec {
        n_atoms: 5,
        model: ModelKind::Full,
        x12: AxisSpec::new(0.0, 2.0, 61),
        second_axis: SecondAxis::Zeta,
        second: AxisSpec::new(-4.0, 1.0, 61),
        eta,
        omega_field: 1.0,
        omega1: 0.0,
        omega2: 1.0,
        policy: ConvergencePolicy::default(),
        tolerances: ScanTolerances::default(),
        m_max: None,
    }
}

/// Asserts that zero-fidelity edges and parity changes coincide edge-exactly.
fn detectors_agree(grid: &PhaseDiagramGrid) -> bool {
    let zero = grid.spec.tolerances.zero_fidelity_threshold;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let c = grid.cell(ix, iy);
            if let Some(f) = c.fid_right {
                if (f <= zero) != (c.label != grid.cell(ix + 1, iy).label) {
                    return false;
                }
            }
            if let Some(f) = c.fid_up {
                if (f <= zero) != (c.label != grid.cell(ix, iy + 1).label) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn criterion_5_phase_diagram_structure() {
    let mut detail = String::new();
    let mut ok = true;
    for eta in [-1.0, 0.0, 1.0] {
        let spec = structure_spec(eta);
        let grid = scan_fidelity(&spec).unwrap();
        assert_eq!(
            grid.failed_cells, 0,
            "eta = {eta}: cells failed to converge"
        );

        // (a) zero-fidelity edges partition even from odd cells.
        let partition = detectors_agree(&grid);

        // (b) an odd strip at small x12, bounded by discontinuous edges.
        let mut strip = true;
        for ix in [0usize, 1] {
            let odd_rows: Vec<usize> = (0..grid.ny)
                .filter(|&iy| grid.cell(ix, iy).label == -1)
                .collect();
            let contiguous = !odd_rows.is_empty()
                && odd_rows.windows(2).all(|w| w[1] == w[0] + 1)
                && odd_rows[0] > 0
                && *odd_rows.last().unwrap() < grid.ny - 1;
            if !contiguous {
                strip = false;
                continue;
            }
            let zero = spec.tolerances.zero_fidelity_threshold;
            let below = grid.cell(ix, odd_rows[0] - 1);
            let top = grid.cell(ix, *odd_rows.last().unwrap());
            strip &= below.fid_up.unwrap() <= zero
                && top.fid_up.unwrap() <= zero
                && below.class == Classification::Discontinuous
                && top.class == Classification::Discontinuous;
        }

        // (c) continuous minima away from the x12 ~ 0 column.
        let continuous_away = grid
            .cells
            .iter()
            .filter(|c| c.class == Classification::Continuous && c.x12 >= 0.5)
            .count();

        ok &= partition && strip && continuous_away > 0;
        detail.push_str(&format!(
            "eta={eta}: partition={partition}, odd strip={strip}, continuous cells (x12 >= 0.5)={continuous_away}; "
        ));
    }
    check(
        "criterion 5 (phase-diagram structure)",
        ok,
        detail.trim_end(),
    );
}

#[test]
fn criterion_6_convergence_certificate() {
    // The solver enforces the certificate internally; sample representative
    // points (including degenerate ones) and re-verify the recorded values,
    // then re-run one cutoff trace independently.
    let mut min_overlap = 1.0f64;
    for (na, x12, zeta, eta) in [
        (3u32, 0.6, -0.4, 0.3),
        (5, 1.4, -2.0, 1.0),
        (5, 0.0, -4.0 / 3.0, 0.0),
        (7, 0.3, -1.0, -1.0),
        (7, 1.8, 0.5, 0.0),
    ] {
        let g = ground(na, x12, zeta, eta);
        min_overlap = min_overlap.min(g.convergence_overlap);
    }

    let p = diagram_resonant(5, 1.2, -1.5, 1.0);
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for cutoff in [15u32, 17, 19, 21, 23, 25, 27] {
        let basis = build_sector(5, SectorLabel::ParityEven(cutoff)).unwrap();
        let h = assemble(&p, &basis, false).unwrap();
        let e = lowest_eigenpair(&h, 1).unwrap()[0].energy;
        if e > prev + 1e-10 {
            monotone = false;
        }
        prev = e;
    }
    check(
        "criterion 6 (convergence certificate)",
        min_overlap >= 1.0 - 1e-8 && monotone,
        &format!("min recorded overlap = {min_overlap:.12}, cutoff trace monotone = {monotone}"),
    );
}

#[test]
fn criterion_7_zero_photon_dominance() {
    let mut min_p0 = (1.0f64, 0.0f64, 0.0f64);
    let mut conditional_ok = true;
    let mut conditional_detail = String::new();
    for eta in [-1.0, 0.0, 1.0] {
        for k in -80..=20i32 {
            let zeta = 0.05 * k as f64;
            let g = ground(7, 0.3, zeta, eta);
            let dist = excitation_distribution(&g);
            if dist.p_nu0 < min_p0.0 {
                min_p0 = (dist.p_nu0, zeta, eta);
            }
            if eta == 0.0 {
                let cond = dist.p_n2_given_nu0.expect("zero-photon weight present");
                let dominant = cond.values().filter(|&&p| p >= 0.999).count();
                if dominant != 1 {
                    conditional_ok = false;
                    if conditional_detail.is_empty() {
                        conditional_detail =
                            format!(" (first at zeta = {zeta}: {dominant} dominant components)");
                    }
                }
            }
        }
    }
    check(
        "criterion 7 (zero-photon dominance)",
        min_p0.0 >= 0.99 && conditional_ok,
        &format!(
            "min P(nu=0) = {:.6} at zeta = {}, eta = {}; single dominant conditional component \
             for eta = 0: {conditional_ok}{conditional_detail}",
            min_p0.0, min_p0.1, min_p0.2
        ),
    );
}

#[test]
fn criterion_8_normal_region_shrinkage() {
    // Quantum (zero-excitation) vs variational normal regions on a fixed
    // grid; the mismatch area must shrink as the atom count grows. The
    // single-excitation crossing sits exactly on the separatrix in these
    // coordinates, so the finite-size deviation comes from multi-excitation
    // crossings at larger x12; the window is sized to contain those bands
    // for every atom count compared.
    let mut areas = Vec::new();
    for na in [2u32, 5, 7] {
        let spec = GridSpec {
            n_atoms: na,
            model: ModelKind::Rwa,
            x12: AxisSpec::new(0.0, 4.0, 61),
            second_axis: SecondAxis::Zeta,
            second: AxisSpec::new(-4.0, 24.0, 241),
            eta: 0.0,
            omega_field: 1.0,
            omega1: 0.0,
            omega2: 1.0,
            policy: ConvergencePolicy::default(),
            tolerances: ScanTolerances::default(),
            m_max: None,
        };
        let grid = scan_rwa(&spec).unwrap();
        let mismatch = grid
            .cells
            .iter()
            .filter(|c| {
                let quantum_normal = c.label == 0;
                let variational_normal = c.second >= c.x12 * c.x12 - 1.0;
                quantum_normal != variational_normal
            })
            .count();
        areas.push(mismatch);
    }
    check(
        "criterion 8 (normal-region shrinkage)",
        areas[0] > areas[1] && areas[1] > areas[2],
        &format!("mismatch cells for N_a = 2, 5, 7: {areas:?}"),
    );
}

#[test]
fn criterion_9_determinism() {
    let spec = GridSpec {
        n_atoms: 3,
        model: ModelKind::Full,
        x12: AxisSpec::new(0.0, 1.6, 13),
        second_axis: SecondAxis::Zeta,
        second: AxisSpec::new(-3.0, 0.5, 13),
        eta: 1.0,
        omega_field: 1.0,
        omega1: 0.0,
        omega2: 1.0,
        policy: ConvergencePolicy::default(),
        tolerances: ScanTolerances::default(),
        m_max: None,
    };
    let reference = scan_fidelity(&spec).unwrap().to_csv();
    let repeat = scan_fidelity(&spec).unwrap().to_csv();
    // Worker count must not leak into the output.
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| scan_fidelity(&spec).unwrap().to_csv());
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| scan_fidelity(&spec).unwrap().to_csv());
    check(
        "criterion 9 (determinism)",
        reference == repeat && reference == single && reference == four,
        &format!(
            "byte-identical across repeats and worker counts ({} bytes)",
            reference.len()
        ),
    );
}

#[test]
fn rwa_ground_matches_block_crossings() {
    // The minimizing excitation number changes exactly at the closed-form
    // block crossings for two atoms (root-found on the analytic energies).
    let zeta = 0.5f64;
    let crossing_01 = (1.0 + zeta).sqrt(); // E_1 = 0
    let p_before = diagram_resonant(2, crossing_01 - 1e-6, zeta, 0.0);
    let p_after = diagram_resonant(2, crossing_01 + 1e-6, zeta, 0.0);
    let g_before = dicke_core::spectrum::rwa_ground(&p_before, 30).unwrap();
    let g_after = dicke_core::spectrum::rwa_ground(&p_after, 30).unwrap();
    assert_eq!(g_before.excitation_mean, 0.0);
    assert_eq!(g_after.excitation_mean, 1.0);
}

#[test]
fn full_ground_fidelity_oracle_points() {
    // Orthogonality between the two sides of a discontinuous transition and
    // near-unity fidelity inside a phase.
    let a = ground(5, 0.1, -0.8, 0.0);
    let b = ground(5, 0.1, -1.2, 0.0);
    assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
    let c = ground(5, 0.1, -0.78, 0.0);
    assert!(fidelity(&a, &c).unwrap() > 0.999);

    // Photon variance stays small near zero coupling and the zero-photon
    // states dominate.
    let g = ground(7, 0.3, 0.0, 1.0);
    let var_nu = number_stats(&g, NumberObservable::Photons).variance;
    assert!(var_nu < 0.2, "var_nu = {var_nu}");
    assert_eq!(g.parity, ParityTag::Even);
    assert!(excitation_distribution(&g).p_nu0 > 0.9);

    // With a nonzero cross-dipole coupling the zero-photon conditional
    // distribution spreads over several same-parity components.
    let g = ground(7, 0.1, -0.5, 1.0);
    let cond = excitation_distribution(&g).p_n2_given_nu0.unwrap();
    let sizable = cond.iter().filter(|&(_, &p)| p > 0.01).count();
    assert!(sizable >= 2, "conditional support: {cond:?}");
    assert!(cond.keys().all(|n2| n2 % 2 == 0));
}
