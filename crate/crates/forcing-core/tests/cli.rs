//! End-to-end tests of the `forcing` binary: exit codes, file output,
//! certificate round trips, and report reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

use forcing_core::report::ReportDocument;

fn forcing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forcing"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("forcing-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn build_writes_a_parseable_graph_file() {
    let out = tmp("graph.txt");
    let o = forcing(&["build", "prod(Kmn:2,2;C:6)", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let g = forcing_core::graphs::parse_graph(&text).unwrap();
    assert_eq!(g.vertex_count(), 24);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("24 vertices"));
    std::fs::remove_file(out).ok();
}

#[test]
fn build_rejects_bad_expressions_with_exit_2() {
    let o = forcing(&["build", "nosuchfamily:3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = forcing(&["build", "C:5"]);
    assert_eq!(o.status.code(), Some(3), "odd cycles fail the family precondition");
}

#[test]
fn certify_exact_and_failure_exit_codes() {
    let o = forcing(&["certify", "Kmn:2,2", "--k", "2"]);
    assert!(o.status.success());
    let doc: ReportDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.verdict, "EXACT f = 4");

    // Unbalanced host cannot carry an involutory certificate.
    let o = forcing(&["certify", "Kmn:2,3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(3));

    // Missing mode flag is a usage parse error.
    let o = forcing(&["certify", "Kmn:2,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_reports_are_reproducible_modulo_timings() {
    // The same command twice: everything but the timings must coincide.
    let path = tmp("rep.json");
    let run = || {
        let o = forcing(&["certify", "s14", "--prism", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
        let doc: ReportDocument =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        doc
    };
    let d1 = run();
    let d2 = run();
    assert_eq!(d1.stripped_of_timings(), d2.stripped_of_timings());
    std::fs::remove_file(path).ok();
}

#[test]
fn emitted_certificates_can_be_loaded_back() {
    let cert_path = tmp("cert.txt");
    let o = forcing(&[
        "certify",
        "Kmn:3,3",
        "--field",
        "GFp:7",
        "--k",
        "3",
        "--emit-cert",
        cert_path.to_str().unwrap(),
        "--out",
        tmp("c1.json").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = forcing(&[
        "certify",
        "--cert",
        cert_path.to_str().unwrap(),
        "--k",
        "4",
        "--out",
        tmp("c2.json").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("EXACT f = 6"), "{stderr}");
    std::fs::remove_file(cert_path).ok();
    std::fs::remove_file(tmp("c1.json")).ok();
    std::fs::remove_file(tmp("c2.json")).ok();
}

#[test]
fn characteristic_two_grids_are_rejected_as_preconditions() {
    // k = 2 places a 2I block, illegal over GF(2); k = 3 has no
    // coefficient-2 block and goes through.
    let o = forcing(&["certify", "Kmn:1,1", "--field", "GFp:2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("characteristic 2"));
    let o = forcing(&["certify", "Kmn:1,1", "--field", "GFp:2", "--k", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("EXACT f = 2"));
}

#[test]
fn oracle_exit_codes_track_the_budget() {
    let o = forcing(&["oracle", "Q:3"]);
    assert!(o.status.success());
    let doc: ReportDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc.verdict.contains("EXACT f = 2"));

    // Capping the enumeration below the matching count truncates.
    let o = forcing(&["oracle", "Kmn:3,3", "--cap", "2"]);
    assert_eq!(o.status.code(), Some(5));

    // A graph without perfect matchings is a precondition failure.
    let o = forcing(&["oracle", "star:2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_table_lists_every_matching() {
    let o = forcing(&["oracle", "C:6", "--table"]);
    assert!(o.status.success());
    let doc: ReportDocument = serde_json::from_slice(&o.stdout).unwrap();
    let forcing_doc = doc.forcing.unwrap();
    assert_eq!(forcing_doc.table.unwrap().len(), 2);
    assert_eq!(forcing_doc.exact, Some(1));
}

#[test]
fn verify_suite_grid_filter_runs_only_case4() {
    let o = forcing(&["verify-suite", "--grid", "case4", "--jobs", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("criterion  3 [PASS]"));
    assert!(stdout.contains("(4 cells)"), "one case-4 cell per base: {stdout}");
    assert!(stdout.contains("criterion  1 [SKIP]"));
}
