//! End-to-end runs of the `qu8it` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qu8it_cli::{EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

fn qu8it(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qu8it"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QU8IT_OUT_DIR")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = qu8it(&["verify", "--section", "appD"], dir.path());
    assert_eq!(code(&ok), EXIT_OK);
    let strict = qu8it(&["verify", "--section", "appD", "--identity-tol", "0"], dir.path());
    assert_eq!(code(&strict), EXIT_VERIFY_FAILED);
    let bad_state = qu8it(&["evolve", "--state", "1,9"], dir.path());
    assert_eq!(code(&bad_state), EXIT_USAGE);
    let bad_flag = qu8it(&["spectrum", "--colour", "3"], dir.path());
    assert_eq!(code(&bad_flag), EXIT_USAGE);
}

#[test]
fn verify_section_filter_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = qu8it(&["verify", "--section", "appD", "--format", "json"], dir.path());
    assert_eq!(code(&o), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "qu8it.verify/1");
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["section"] == "appD"));
    let file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(file, v);
}

fn snapshot(dir: &Path) -> Vec<(std::ffi::OsString, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let runs: [&[&str]; 3] = [
        &["spectrum", "--h", "2"],
        &["evolve", "--h", "1", "--order", "2", "--steps", "10"],
        &["resources", "--nf", "2", "--L", "2"],
    ];
    for args in runs {
        let dir = tempfile::tempdir().unwrap();
        let first = qu8it(args, dir.path());
        assert_eq!(code(&first), EXIT_OK, "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        let files = snapshot(dir.path());
        assert!(files.len() >= 2, "{args:?}");
        let second = qu8it(args, dir.path());
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(files, snapshot(dir.path()), "{args:?}");
    }
}

#[test]
fn evolve_writes_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let o = qu8it(&["evolve", "--steps", "5", "--state", "1,8bar"], dir.path());
    assert_eq!(code(&o), EXIT_OK);
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("step,t,norm,energy,baryon,casimir,electric,fidelity"));
    assert_eq!(lines.count(), 6);
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(m["schema"], "qu8it.trajectory/1");
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_qu8it"))
        .args(["verify", "--section", "appA"])
        .env("QU8IT_OUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(code(&o), EXIT_OK);
    assert!(target.join("verify.json").exists());
}
