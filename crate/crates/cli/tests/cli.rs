use std::path::Path;
use std::process::{Command, Output};

use sphlab_cli::report::without_timestamp;
use sphlab_cli::Report;

fn sphlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn sphlab")
}

fn run_report(args: &[&str]) -> Report {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut all = args.to_vec();
    all.extend(["--out", path.to_str().unwrap()]);
    let out = sphlab(&all, dir.path());
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Report::read_from(&path).unwrap()
}

fn summary_f64(r: &Report, key: &str) -> f64 {
    r.summary_value(key)
        .unwrap_or_else(|| panic!("missing {key} in {:?}", r.summary))
        .parse()
        .unwrap()
}

#[test]
fn kernel_growth_rates() {
    let r = run_report(&[
        "kernel", "--dim", "2", "--alpha", "0", "--gamma", "pi/2,0", "--n-max", "256",
    ]);
    assert_eq!(r.kind, "kernel");
    let interior = summary_f64(&r, "riesz_envelope_slope[gamma=1.5707963267948966]");
    assert!((interior - 0.5).abs() < 0.05, "{interior}");
    let diagonal = summary_f64(&r, "riesz_envelope_slope[gamma=0.0]");
    assert!((diagonal - 2.0).abs() < 0.05, "{diagonal}");

    let r = run_report(&[
        "kernel", "--dim", "3", "--alpha", "1", "--gamma", "2.0", "--n-max", "256",
    ]);
    let cesaro = summary_f64(&r, "cesaro_envelope_slope[gamma=2.0]");
    assert!(cesaro <= 1.15, "{cesaro}");
}

#[test]
fn means_of_constant_and_bandlimited_profiles() {
    let r = run_report(&[
        "means",
        "--dim",
        "3",
        "--profile",
        "constant",
        "--n-max",
        "64",
    ]);
    assert_eq!(r.summary_value("status"), Some("PASS"));
    assert!(summary_f64(&r, "max_abs_diff") < 1e-12);

    let r = run_report(&[
        "means",
        "--dim",
        "2",
        "--alpha",
        "0",
        "--profile",
        "bandlimited:0,0,1",
        "--n-max",
        "32",
    ]);
    assert_eq!(r.summary_value("status"), Some("PASS"));
}

#[test]
fn interpolation_fixtures() {
    let r = run_report(&[
        "interp",
        "--profile",
        "single-jump",
        "--alpha",
        "0.5",
        "--zeta",
        "1",
    ]);
    assert!((summary_f64(&r, "c_fit") - 1.0).abs() < 1e-12);
    assert_eq!(r.summary_value("status"), Some("PASS"));

    let r = run_report(&[
        "interp", "--alpha", "0.3+0.5i", "--zeta", "1+0.2i", "--n-max", "128",
    ]);
    assert_eq!(r.summary_value("alpha"), Some("0.3+0.5i"));
    assert!(summary_f64(&r, "c_fit").is_finite());
}

#[test]
fn maximal_constants() {
    let r = run_report(&[
        "maximal",
        "--dim",
        "2",
        "--profile",
        "constant",
        "--delta",
        "1/8",
        "--n-max",
        "256",
    ]);
    assert!((summary_f64(&r, "max_c[delta=0.125]") - 0.5).abs() < 1e-10);

    let r = run_report(&[
        "maximal",
        "--dim",
        "2",
        "--profile",
        "antipodal-bump:0.3",
        "--delta",
        "1/2,1/4,1/8",
        "--n-max",
        "256",
    ]);
    let c = summary_f64(&r, "max_c[delta=0.125]");
    assert!(c.is_finite() && c > 0.0, "{c}");
    assert!(summary_f64(&r, "max_blowup") <= 2.5);
    assert_eq!(r.summary_value("status"), Some("PASS"));
}

#[test]
fn bad_flags_exit_with_code_2_and_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    for (args, flag) in [
        (vec!["kernel", "--dim", "1"], "--dim"),
        (vec!["kernel", "--gamma", "foo"], "--gamma"),
        (vec!["means", "--profile", "nonsense"], "nonsense"),
        (vec!["accept", "--only", "bogus"], "--only"),
    ] {
        let out = sphlab(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn stdout_report_parses() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphlab(
        &[
            "means",
            "--dim",
            "2",
            "--profile",
            "cap:pi/4",
            "--n-max",
            "32",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let r = Report::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.kind, "means");
    assert!(!r.rows.is_empty());
    assert!(r.meta.iter().any(|(k, _)| k == "config"));
}

#[test]
fn accept_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = sphlab(&["accept", "--only", "kernel", "--out", name], dir.path());
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(stdout.contains("[3] kernel"), "{stdout}");
        texts.push(without_timestamp(
            &std::fs::read_to_string(dir.path().join(name)).unwrap(),
        ));
    }
    assert_eq!(texts[0], texts[1]);
    let r = Report::parse(&texts[0]).unwrap();
    assert_eq!(r.rows.len(), 4);
}

#[test]
fn injected_fault_is_caught_by_the_table_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphlab(
        &[
            "accept",
            "--only",
            "tables",
            "--fault",
            "corrupt-multiplicity",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL [1] tables"), "{stdout}");
    assert!(dir.path().join("accept-report.csv").exists());

    let out = sphlab(&["accept", "--only", "1"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
