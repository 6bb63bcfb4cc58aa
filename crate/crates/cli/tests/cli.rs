use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn qmet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmet"))
        .args(args)
        .current_dir(golden_dir())
        .env_remove("QMET_SEED")
        .output()
        .expect("binary runs")
}

/// Compares stdout with `golden/<name>.out`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str], code: i32) {
    let out = qmet(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        out.status.code(),
        Some(code),
        "{name}: stdout {stdout}\nstderr {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = golden_dir().join(format!("{name}.out"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &stdout).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(stdout, want, "{name} differs from its golden file");
}

#[test]
fn validate_goldens() {
    golden("validate_sierpinski", &["validate", "sierpinski.json", "--json"], 0);
    golden("validate_sierpinski_text", &["validate", "sierpinski.json"], 0);
    golden("validate_pm3", &["validate", "pm3_violation.json", "--json"], 1);
    golden("validate_wpm", &["validate", "wpm.json", "--json"], 0);
    golden(
        "validate_weight",
        &["validate", "sierpinski_weight.json", "--space", "sierpinski.json", "--json"],
        0,
    );
    golden("validate_meetsl", &["validate", "diamond.json", "--json"], 0);
    golden("validate_covaluation", &["validate", "diamond_covaluation.json", "--json"], 0);
    golden(
        "validate_relative_covaluation",
        &["validate", "relative_covaluation.json", "--semilattice", "diamond.json", "--json"],
        0,
    );
    golden("validate_digraph", &["validate", "triangle.json", "--json"], 0);
}

#[test]
fn parse_failures_exit_two() {
    let out = qmet(&["validate", "bad_rational.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("$.entries[0][1]") && err.contains("zero denominator"), "{err}");
    let out = qmet(&["validate", "bad_syntax.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(qmet(&["validate", "missing.json"]).status.code(), Some(2));
    assert_eq!(qmet(&["validate", "sierpinski_weight.json"]).status.code(), Some(2));
}

#[test]
fn analyze_goldens() {
    golden("analyze_chain", &["analyze", "chain.json", "--json"], 0);
    golden("analyze_chain_text", &["analyze", "chain.json"], 0);
    golden("analyze_not_weighted", &["analyze", "not_weighted.json", "--json"], 0);
    golden("analyze_graph", &["analyze", "--graph", "bridged.json", "--json"], 0);
}

#[test]
fn not_weighted_verdicts() {
    let out = qmet(&["analyze", "not_weighted.json", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let verdict = |name: &str| {
        v["verdicts"].as_array().unwrap().iter().find(|c| c["check"] == name).unwrap().clone()
    };
    assert_eq!(verdict("invariant")["pass"], true);
    assert_eq!(verdict("dpc")["pass"], false);
    assert_eq!(verdict("weakly weighted")["pass"], false);
    assert!(verdict("dpc")["witness"].is_string());
    assert!(verdict("weakly weighted")["witness"].is_string());
}

#[test]
fn convert_roundtrip_is_byte_identical() {
    golden("convert_sierpinski", &["convert", "sierpinski_canonical.json", "--direction", "d2p"], 0);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let d = dir.path().join("d.json");
    let ps = p.to_str().unwrap();
    let ds = d.to_str().unwrap();
    assert!(qmet(&["convert", "sierpinski_canonical.json", "--direction", "d2p", "-o", ps]).status.success());
    assert!(qmet(&["convert", ps, "--direction", "p2d", "-o", ds]).status.success());
    let original = std::fs::read(golden_dir().join("sierpinski_canonical.json")).unwrap();
    assert_eq!(std::fs::read(&d).unwrap(), original);
}

#[test]
fn convert_metric_and_failures() {
    let out = qmet(&["convert", "metric.json", "--direction", "d2p"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for i in 0..3 {
        assert_eq!(v["entries"][i][i], 0);
    }
    let out = qmet(&["convert", "not_weighted.json", "--direction", "d2p"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not weakly weighted"));
    assert_eq!(qmet(&["convert", "pm3_violation.json", "--direction", "p2d"]).status.code(), Some(1));
    assert_eq!(qmet(&["convert", "chain.json", "--direction", "p2d"]).status.code(), Some(2));
}

#[test]
fn graph_goldens() {
    golden("graph_triangle", &["graph", "triangle.json", "--json"], 0);
    golden("graph_bridged_text", &["graph", "bridged.json"], 0);
}

#[test]
fn align_goldens() {
    golden("align_dna", &["align", "dna.txt", "--json"], 0);
    golden("align_dna_text", &["align", "dna.txt", "--alpha", "2", "--beta", "-1", "--gamma", "-1"], 0);
    golden("align_prefix", &["align", "prefix.txt", "--prefix", "--json"], 0);
    golden("align_invalid_scheme", &["align", "dna.txt", "--beta", "-5", "--json"], 1);
}

#[test]
fn entropy_goldens() {
    golden("entropy_sets", &["entropy", "--family", "pset-shift", "--seeds", "sets.txt", "--json"], 0);
    golden(
        "entropy_subgroups",
        &["entropy", "--family", "bernoulli", "--p", "2", "--seeds", "subgroups.txt", "--horizon", "12", "--json"],
        0,
    );
    golden(
        "entropy_sets_text",
        &["entropy", "--family", "pset-shift", "--shift", "3", "--seeds", "sets.txt", "--horizon", "40"],
        0,
    );
    let out = qmet(&["entropy", "--family", "bernoulli", "--seeds", "subgroups.txt", "--budget", "64"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("budget"));
}

#[test]
fn generate_is_seeded() {
    golden("generate_covaluation", &["generate", "covaluation", "--seed", "7", "--merges", "2"], 0);
    let a = qmet(&["generate", "space", "--seed", "11"]);
    let b = Command::new(env!("CARGO_BIN_EXE_qmet"))
        .args(["generate", "space"])
        .env("QMET_SEED", "11")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("v.json");
    let c = qmet(&["generate", "covaluation", "--seed", "5", "--merges", "2"]);
    std::fs::write(&f, &c.stdout).unwrap();
    assert_eq!(qmet(&["validate", f.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn experiment_golden() {
    golden("experiment_not_weighted", &["experiment", "not_weighted.json", "--map", "0,0,1", "--json"], 0);
    assert_eq!(qmet(&["experiment", "not_weighted.json", "--map", "2,0,1"]).status.code(), Some(1));
}
