//! End-to-end tests of the binary: exit codes, file outputs, the
//! determinism contract, and config round-trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dicke(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicke"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn oracle_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dicke(dir.path(), &["oracle-check"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().filter(|l| l.starts_with("ok")).count() >= 5);
    assert!(!text.contains("FAIL"));
}

#[test]
fn missing_required_flag_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dicke(dir.path(), &["spectrum", "--x12", "0.5", "--zeta", "0.0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--na"));
}

#[test]
fn invalid_atom_count_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dicke(
        dir.path(),
        &["spectrum", "--na", "1", "--x12", "0.5", "--zeta", "0.0"],
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn cutoff_ceiling_is_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dicke(
        dir.path(),
        &[
            "spectrum",
            "--na",
            "3",
            "--x12",
            "2.0",
            "--zeta",
            "-3.0",
            "--max-cutoff",
            "14",
        ],
    );
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cutoff"));
}

#[test]
fn rwa_diagram_rows_and_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let out = dicke(
        dir.path(),
        &[
            "rwa-diagram",
            "--na",
            "2",
            "--zeta",
            "0.5",
            "--x12",
            "0:2:201",
            "-o",
            "rd.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("rd.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x12,m,energy_pp,is_ground");
    assert_eq!(lines.len(), 1 + 201 * 5);
    // The ground flag switches from m = 0 to larger m as x12 grows, with the
    // first crossing at x12 = sqrt(1 + zeta).
    let ground_m: Vec<(f64, u32)> = lines[1..]
        .iter()
        .filter(|l| l.ends_with(",1"))
        .map(|l| {
            let mut it = l.split(',');
            let x: f64 = it.next().unwrap().parse().unwrap();
            let m: u32 = it.next().unwrap().parse().unwrap();
            (x, m)
        })
        .collect();
    assert_eq!(ground_m.len(), 201);
    let crossing = (1.0f64 + 0.5).sqrt();
    for &(x, m) in &ground_m {
        if x < crossing - 0.011 {
            assert_eq!(m, 0, "x12 = {x}");
        }
        if x > crossing + 0.011 {
            assert!(m >= 1, "x12 = {x}");
        }
    }
}

#[test]
fn probs_emits_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dicke(
        dir.path(),
        &[
            "probs", "--na", "7", "--x12", "0", "--eta", "0.1667", "--zeta", "-1.25", "-o", "p.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(text.lines().any(|l| l.contains(",p_m,")));
    assert!(text.lines().any(|l| l.contains(",p_n2_given_nu0,")));
    // Probabilities of each kind sum to one.
    for kind in [",p_m,", ",p_n2_given_nu0,"] {
        let sum: f64 = text
            .lines()
            .filter(|l| l.contains(kind))
            .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
            .sum();
        assert!((sum - 1.0).abs() < 1e-10, "{kind} sums to {sum}");
    }
}

#[test]
fn identical_jobs_give_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "scan-fidelity",
        "--na",
        "2",
        "--eta",
        "1.0",
        "--x12",
        "0:1.5:7",
        "--zeta",
        "-2.5:0.5:7",
    ];
    let mut csvs = Vec::new();
    for (threads, name) in [("1", "a.csv"), ("3", "b.csv")] {
        let full: Vec<&str> = ["--threads", threads]
            .into_iter()
            .chain(args)
            .chain(["-o", name])
            .collect();
        let out = dicke(dir.path(), &full);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        csvs.push(fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);

    // Round-trip through the sidecar config reproduces the bytes.
    let out = dicke(
        dir.path(),
        &[
            "scan-fidelity",
            "--config",
            "a.csv.config.json",
            "-o",
            "c.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csvs[0], fs::read(dir.path().join("c.csv")).unwrap());

    // And the sidecar of the round-trip run is identical to the original.
    let a = fs::read(dir.path().join("a.csv.config.json")).unwrap();
    let c = fs::read(dir.path().join("c.csv.config.json")).unwrap();
    assert_eq!(a, c);
}

#[test]
fn scan_outputs_include_separatrix_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dicke(
        dir.path(),
        &[
            "scan-fluctuations",
            "--rwa",
            "--na",
            "2",
            "--x12",
            "0:2:5",
            "--zeta",
            "-1:1:3",
            "-o",
            "f.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    let sep = fs::read_to_string(dir.path().join("f.csv.separatrix.csv")).unwrap();
    let lines: Vec<&str> = sep.lines().collect();
    assert_eq!(lines[0], "x12,zeta_or_chi");
    assert_eq!(lines.len(), 6);
    // eta = 0 on the zeta axis: the curve is zeta = x12^2 - 1.
    let last: Vec<f64> = lines[5].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last, vec![2.0, 3.0]);
}
