use std::path::Path;
use std::process::{Command, Output};

fn groupwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = groupwalk(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn golden_outputs_are_stable() {
    let cases: [(&[&str], &str); 6] = [
        (&["fourier", "--group", "quaternion"], "quaternion_characters.csv"),
        (&["fourier", "--group", "dihedral:4"], "dihedral4_characters.csv"),
        (&["walk", "--walk", "cube-nn:3", "--kmax", "12"], "walk_cube_nn_3.csv"),
        (&["bounds", "--walk", "simple-circle:11", "--kmax", "30"], "bounds_circle_11.csv"),
        (&["factorize", "urban", "--n", "4"], "urban_4.txt"),
        (&["cutoff", "--family", "cube-nn", "--n", "4,5,6"], "cutoff_cube.csv"),
    ];
    for (args, file) in cases {
        assert_eq!(stdout(args), golden(file), "{args:?}");
    }
}

#[test]
fn walk_row_counts() {
    let out = stdout(&["walk", "--walk", "simple-circle:11", "--kmax", "200"]);
    assert_eq!(out.lines().count(), 202);
    let out = stdout(&["walk", "--walk", "cube-nn:2", "--kmax", "0"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0,0.75,"));
}

#[test]
fn exit_codes() {
    let out = groupwalk(&["walk", "--walk", "simple-circle:4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("coset"), "{err}");

    assert_eq!(groupwalk(&["walk", "--walk", "nonsense:3"]).status.code(), Some(1));
    assert_eq!(groupwalk(&["cutoff", "--family", "cube-nn"]).status.code(), Some(1));
    assert_eq!(groupwalk(&["bounds", "--walk", "random-to-top:4"]).status.code(), Some(3));
    assert_eq!(groupwalk(&["fourier", "--group", "symmetric:3"]).status.code(), Some(3));
    assert_eq!(
        groupwalk(&["cutoff", "--family", "simple-circle", "--n", "9", "--kcap", "10"]).status.code(),
        Some(4)
    );
    assert_eq!(groupwalk(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let p = path.to_str().unwrap();
    let out = groupwalk(&["fourier", "--group", "quaternion", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("quaternion_characters.csv"));
}

#[test]
fn cutoff_long_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("long.csv");
    stdout(&["cutoff", "--family", "simple-circle", "--n", "9,11", "--long", path.to_str().unwrap()]);
    let long = std::fs::read_to_string(&path).unwrap();
    assert!(long.starts_with("n,k,distance\n9,0,"));
}

#[test]
fn simulate_is_reproducible_across_threads() {
    let base = ["simulate", "coupling", "--n", "6", "--trials", "20000", "--seed", "3"];
    let one = stdout(&[&base[..], &["--threads", "1"]].concat());
    let four = stdout(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn missing_seed_is_reported() {
    let out = groupwalk(&["simulate", "sut", "--n", "4", "--trials", "100"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    let seed_line = err.lines().find(|l| l.starts_with("seed: ")).expect("seed printed");
    let seed = seed_line.trim_start_matches("seed: ");
    let again = stdout(&["simulate", "sut", "--n", "4", "--trials", "100", "--seed", seed]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), again);
}

#[test]
fn charge_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    let report = stdout(&["factorize", "charge", "--walk", "cube-nn:2", "--csv", path.to_str().unwrap()]);
    assert!(report.contains("exists: true"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("index,label,charge\n0,00,"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn ergodic_reports_witnesses() {
    let out = stdout(&["ergodic", "--group", "cyclic:6", "--support", "2,4"]);
    assert!(out.contains("ergodic: false"));
    assert!(out.contains("proper subgroup {0 2 4}"));
    let out = stdout(&["ergodic", "--walk", "simple-circle:5"]);
    assert!(out.contains("ergodic: true"));
}
