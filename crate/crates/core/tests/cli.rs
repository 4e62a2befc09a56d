//! Exit codes and outputs of the command-line tool.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_trigshear"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    (
        o.status.code().unwrap(),
        String::from_utf8_lossy(&o.stdout).into_owned(),
    )
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let (code, stdout) = run(&["verify", "windows"], out);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS"));
    assert!(out.join("verify-windows.json").exists());

    assert_eq!(run(&["verify", "nonsense"], out).0, 2);
    assert_eq!(run(&["coeff-map", "--j", "7"], out).0, 2);
    assert_eq!(run(&["coeff-map", "--l", "99", "--j", "4"], out).0, 2);
    assert_eq!(run(&["edge-map", "--j", "4", "--ellipse", "1,3"], out).0, 0);
    let missing = out.join("missing.csv");
    assert_eq!(
        run(&["coeff-map", "--j", "4", "--table", missing.to_str().unwrap()], out).0,
        3
    );
}

#[test]
fn coeff_map_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let (code, _) = run(&["coeff-map", "--j", "4", "--l", "-1", "--s", "5"], out);
    assert_eq!(code, 0);
    let stem = out.join("coeff-h-j4-l-1-s5");
    let pgm = std::fs::read(stem.with_extension("pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n32 32\n65535\n"));
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('m')).count(), 32 * 32);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(meta["s"], 5);
}

#[test]
fn edge_map_is_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run(&["edge-map", "--j", "6", "--s", "6", "--threads", "1"], &a).0, 0);
    assert_eq!(run(&["edge-map", "--j", "6", "--s", "6", "--threads", "3"], &b).0, 0);
    let read = |d: &Path| std::fs::read(d.join("edge-j6-s6.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}
