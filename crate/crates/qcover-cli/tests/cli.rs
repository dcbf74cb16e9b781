//! End-to-end tests of the command-line interface via the built binary.

use std::process::Command;

fn qcover() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcover"))
}

#[test]
fn exponents_profile_values() {
    let out = qcover().args(["exponents", "--m", "1", "--n", "2", "--e", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("D = 6"));
    assert!(text.contains("b = 5"));
    assert!(text.contains("B = 15"));
    assert!(text.contains("eps = 8/5"));
}

#[test]
fn enumerate_counts() {
    let out = qcover().args(["enumerate", "-T", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with("count = 15"));
}

#[test]
fn parabola_experiment_single_hypersurface() {
    let out = qcover()
        .args(["experiment", "--name", "parabola", "-T", "3,10,30"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() == 5 {
            assert_eq!(cols[2], "1", "hypersurfaces-used must be 1: {line}");
            assert_eq!(cols[4], "true", "row must verify: {line}");
        }
    }
}

#[test]
fn experiments_are_deterministic() {
    let run = || {
        qcover()
            .args(["experiment", "--name", "lambda-line", "-T", "2,5"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn powers_ab_counts() {
    let out = qcover()
        .args(["experiment", "--name", "powers-ab", "-T", "10,125"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    assert_eq!(rows[0], vec!["10", "0", "0", "0"]);
    assert_eq!(rows[1][0], "125");
    assert!(rows[1][1].parse::<u64>().unwrap() >= 1);
    assert_eq!(rows[1][3], "0");
}

#[test]
fn cover_verify_roundtrip_and_tampering() {
    let dir = std::env::temp_dir().join("qcover-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("parabola.cert");
    let out = qcover()
        .args(["cover", "--curve", "parabola", "-T", "5", "--out"])
        .arg(&cert)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let ok = qcover()
        .args(["verify", "--curve", "parabola", "-T", "5", "--cert"])
        .arg(&cert)
        .output()
        .unwrap();
    assert!(ok.status.success());

    // perturb one hypersurface coefficient: exit code 1
    let text = std::fs::read_to_string(&cert).unwrap();
    let bad = text.replacen("0 0 1 -1 0 0", "0 0 1 -2 0 0", 1);
    assert_ne!(text, bad);
    let bad_path = dir.join("tampered.cert");
    std::fs::write(&bad_path, bad).unwrap();
    let fail = qcover()
        .args(["verify", "--curve", "parabola", "-T", "5", "--cert"])
        .arg(&bad_path)
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));

    // truncated file: parse error, exit code 2
    let trunc_path = dir.join("truncated.cert");
    std::fs::write(&trunc_path, "").unwrap();
    let fail = qcover()
        .args(["verify", "--curve", "parabola", "-T", "5", "--cert"])
        .arg(&trunc_path)
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let out = qcover().args(["experiment", "--name", "nonsense", "-T", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = qcover().args(["no-such-subcommand"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reparam_pieces_tile_the_interval() {
    let out = qcover().args(["reparam", "--num", "0,0,3", "--k", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("pieces"));
    assert!(text.contains("kind=affine"));
    assert!(text.contains("kind=inverse"));
}
