use std::io::Write;
use std::process::Command;

use slicegap::cli::{
    cmd_analyze, cmd_entropy, cmd_gap_scan, cmd_trifference, AnalyzeReport, BoundReport, GapScanSummary, RunConfig,
    SearchReport, TrifferenceCmd,
};
use slicegap::entropy::EntropyReport;
use slicegap::trifference::HaemersCertificate;
use tempfile::NamedTempFile;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn json() -> RunConfig {
    RunConfig {
        json: true,
        ..RunConfig::default()
    }
}

const DIAG: &str = "tensor k=3 p=2\nshape 2 2 2\n1 1 1 1\n2 2 2 1\n";
const SLICE: &str = "tensor k=3 p=3\nshape 2 2 2\n1 1 1 1\n1 1 2 2\n1 2 1 1\n1 2 2 2\n";
const BUMP3: &str = "gamma k=3\n2 1 1\n1 2 1\n1 1 2\n";

#[test]
fn analyze_reports() {
    let f = file(DIAG);
    let out = cmd_analyze(f.path(), &json());
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: AnalyzeReport = serde_json::from_str(&out.stdout).unwrap();
    assert!((r.lower_base.unwrap() - 2.0).abs() < 1e-6);
    assert!((r.upper_base.unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(r.concise_shape, vec![2, 2, 2]);

    let f = file(SLICE);
    let out = cmd_analyze(f.path(), &RunConfig::default());
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("slice; asymptotic slice rank 1"), "{}", out.stdout);

    let f = file("tensor k=3 p=2\nshape 2 2 2\n");
    let out = cmd_analyze(f.path(), &json());
    assert_eq!(out.code, 0);
    let r: AnalyzeReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((r.lower_base, r.upper_base), (None, None));
}

#[test]
fn input_errors_exit_2() {
    let cfg = RunConfig::default();
    for bad in ["", "tensor k=3 p=6\nshape 2 2 2\n", "tensor k=2 p=3\nshape 2 2\n1 3 1\n"] {
        let f = file(bad);
        assert_eq!(cmd_analyze(f.path(), &cfg).code, 2, "{bad:?}");
    }
    assert_eq!(cmd_analyze(std::path::Path::new("/nonexistent/t.txt"), &cfg).code, 2);
    let f = file("");
    assert_eq!(cmd_entropy(f.path(), &cfg).code, 2);
    let f = file("gamma k=3\n");
    assert_eq!(cmd_entropy(f.path(), &cfg).code, 2);
    assert_eq!(cmd_gap_scan(3, 0, &cfg).code, 2);
    assert_eq!(cmd_gap_scan(1, 10, &cfg).code, 2);
    let bad_tol = RunConfig {
        tol: 0.0,
        ..RunConfig::default()
    };
    let f = file(BUMP3);
    assert_eq!(cmd_entropy(f.path(), &bad_tol).code, 2);
    let f = file("01\n3\n");
    assert_eq!(cmd_trifference(TrifferenceCmd::Verify(f.path()), &cfg).code, 2);
}

#[test]
fn entropy_command() {
    let f = file(BUMP3);
    let out = cmd_entropy(f.path(), &json());
    assert_eq!(out.code, 0);
    let r: EntropyReport = serde_json::from_str(&out.stdout).unwrap();
    assert!((r.value - 0.63651).abs() < 1e-4);
    assert!((r.exponent_base - 1.8899).abs() < 1e-3);

    let f = file("gamma k=2\n3 7\n");
    let r: EntropyReport = serde_json::from_str(&cmd_entropy(f.path(), &json()).stdout).unwrap();
    assert_eq!(r.value, 0.0);
}

#[test]
fn gap_scan_command() {
    let out = cmd_gap_scan(3, 500, &json());
    assert_eq!(out.code, 0);
    let s: GapScanSummary = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(s.passed, 500);
    assert!(s.min_nonzero_h.unwrap() >= s.xi - 1e-4);

    let s: GapScanSummary = serde_json::from_str(&cmd_gap_scan(2, 100, &json()).stdout).unwrap();
    assert_eq!(s.passed, 100);
    assert!(s.min_nonzero_h.unwrap() >= 2f64.ln() - 1e-4);
}

#[test]
fn trifference_commands() {
    let cfg = json();
    let b: BoundReport = serde_json::from_str(&cmd_trifference(TrifferenceCmd::Bound(4), &cfg).stdout).unwrap();
    assert_eq!(b.bound, 10.125);

    let out = cmd_trifference(TrifferenceCmd::Search(1), &cfg);
    let s: SearchReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((s.size, s.witness.clone()), (3, vec!["0".into(), "1".into(), "2".into()]));

    let s: SearchReport = serde_json::from_str(&cmd_trifference(TrifferenceCmd::Search(2), &cfg).stdout).unwrap();
    let f = file(&s.witness.join("\n"));
    let out = cmd_trifference(TrifferenceCmd::Certify(f.path()), &cfg);
    assert_eq!(out.code, 0);
    let c: HaemersCertificate = serde_json::from_str(&out.stdout).unwrap();
    assert!(c.passed && c.pairs <= 9);
    assert_eq!(cmd_trifference(TrifferenceCmd::Verify(f.path()), &cfg).code, 0);

    let f = file("00\n01\n10\n");
    assert_eq!(cmd_trifference(TrifferenceCmd::Verify(f.path()), &cfg).code, 1);
    assert_eq!(cmd_trifference(TrifferenceCmd::Certify(f.path()), &cfg).code, 1);
}

#[test]
fn json_round_trips_exactly() {
    let f = file(DIAG);
    let out = cmd_analyze(f.path(), &json()).stdout;
    let r: AnalyzeReport = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);

    let f = file("gamma k=3\n1 1 1\n1 2 2\n2 1 2\n2 2 1\n3 3 1\n");
    let out = cmd_entropy(f.path(), &json()).stdout;
    let r: EntropyReport = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);

    let out = cmd_gap_scan(4, 50, &json()).stdout;
    let r: GapScanSummary = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slicegap"))
}

#[test]
fn binary_is_deterministic_and_honours_seed_env() {
    let run = |seed: &str| {
        let out = bin()
            .args(["--json", "gap-scan", "-k", "3", "-t", "40"])
            .env("SLICEGAP_SEED", seed)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("5"), run("5"));

    let f = file("tensor k=3 p=3\nshape 3 3 3\n1 1 1 1\n2 2 1 2\n2 1 2 1\n3 3 3 1\n1 3 2 2\n");
    let a = bin().arg("--json").arg("analyze").arg(f.path()).output().unwrap();
    let b = bin().arg("analyze").arg(f.path()).arg("--json").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn binary_exit_codes() {
    let f = file("tensor k=2\n");
    assert_eq!(bin().arg("analyze").arg(f.path()).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["gap-scan", "-t", "0"]).output().unwrap().status.code(), Some(2));
    let out = bin().args(["trifference", "bound", "4"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "10.125");
}
