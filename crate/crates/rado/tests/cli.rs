//! End-to-end runs of the `rado` binary: exit codes (0 definite, 1 error,
//! 2 inconclusive), JSON report shape, and the solver round trip with the
//! built-in DPLL as the external child process.

use std::path::Path;
use std::process::{Command, Output};

use rado::matrix::SparseIntMatrix;
use rado::search::classic;
use rado::windows::{Window, WindowSet};

fn rado(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rado"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn check_columns_reports_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let m = SparseIntMatrix::from_dense_rows(&[vec![1, 1, -1]]);
    let path = write_json(dir.path(), "schur.json", &m.to_json());

    let out = rado(&["check-columns", "--matrix", &path]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["result"]["columns_property"], serde_json::json!(true));
    assert_eq!(
        doc["result"]["certificate"],
        serde_json::json!([[1, 3], [2]])
    );
    assert_eq!(doc["config"]["subcommand"], serde_json::json!("check-columns"));
}

#[test]
fn gen_system_feeds_min_n() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = rado(&[
        "gen-system",
        "--family",
        "finite",
        "--nmax",
        "2",
        "--coeffs",
        "1,2",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    // the result block is itself a loadable system file
    let sys_path = write_json(dir.path(), "sys.json", &doc["result"]);

    let out = rado(&[
        "min-n", "--system", &sys_path, "--colors", "1", "--window", "8",
        "--var-bound", "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    // one color: the least window admitting any solution at all
    assert!(report(&out)["result"]["min_forcing_n"].is_number());
}

#[test]
fn forced_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write_json(dir.path(), "schur.json", &classic::schur_image().to_json());

    // definite answers either way exit 0
    let out = rado(&[
        "forced", "--system", &sys, "--colors", "2", "--window", "5", "--var-bound", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verdict"], serde_json::json!("forced"));

    let out = rado(&[
        "forced", "--system", &sys, "--colors", "2", "--window", "4", "--var-bound", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["result"]["verdict"], serde_json::json!("avoidable"));
    assert!(doc["result"]["avoiding_coloring"]["colors"].is_array());

    // budget exhaustion is inconclusive: exit 2
    let out = rado(&[
        "forced", "--system", &sys, "--colors", "2", "--window", "5", "--var-bound", "5",
        "--budget", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["result"]["verdict"], serde_json::json!("unknown"));

    // unreadable input is an error: exit 1
    let out = rado(&[
        "forced", "--system", "/nonexistent.json", "--colors", "2", "--window", "5",
        "--var-bound", "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_cnf_then_solve_with_child_solver() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write_json(dir.path(), "schur.json", &classic::schur_image().to_json());
    let cnf_path = dir.path().join("schur5.cnf");

    let out = rado(&[
        "export-cnf", "--system", &sys, "--colors", "2", "--window", "5", "--var-bound", "5",
        "--cnf-out", cnf_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&cnf_path).unwrap();
    assert!(text.contains("\np cnf 10 "), "header: {text}");

    // the binary's own DPLL subcommand serves as the external solver
    let solver = format!("{} dpll", env!("CARGO_BIN_EXE_rado"));
    let out = rado(&[
        "solve", "--system", &sys, "--colors", "2", "--window", "5", "--var-bound", "5",
        "--solver", &solver,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verdict"], serde_json::json!("forced"));

    let out = rado(&[
        "solve", "--system", &sys, "--colors", "2", "--window", "4", "--var-bound", "4",
        "--solver", &solver,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verdict"], serde_json::json!("avoidable"));
}

#[test]
fn dpll_subcommand_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unsat = dir.path().join("unsat.cnf");
    std::fs::write(&unsat, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let out = rado(&["dpll", unsat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(20));
    assert!(String::from_utf8_lossy(&out.stdout).contains("s UNSATISFIABLE"));

    let sat = dir.path().join("sat.cnf");
    std::fs::write(&sat, "p cnf 2 1\n1 -2 0\n").unwrap();
    let out = rado(&["dpll", sat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    assert!(String::from_utf8_lossy(&out.stdout).contains("s SATISFIABLE"));
}

#[test]
fn sumset_and_density() {
    let dir = tempfile::tempdir().unwrap();
    let w = Window::new(1, 10).unwrap();
    let a = write_json(
        dir.path(),
        "a.json",
        &WindowSet::from_members(w, [1, 3]).unwrap().to_json(),
    );
    let b = write_json(
        dir.path(),
        "b.json",
        &WindowSet::from_members(w, [2, 5]).unwrap().to_json(),
    );
    let out = rado(&[
        "sumset", "--op", "sum", "--a", &a, "--b", &b, "--out-lo", "0", "--out-hi", "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["result"]["members"], serde_json::json!([3, 5, 6, 8]));
    assert_eq!(doc["result"]["clipped"], serde_json::json!(false));

    let out = rado(&["density", "--set", &a, "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["density"], serde_json::json!("1/2"));
}

#[test]
fn check_lemma_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let w = Window::new(1, 300).unwrap();
    let full = write_json(
        dir.path(),
        "full.json",
        &WindowSet::residue_class(w, 0, 1).unwrap().to_json(),
    );
    let out = rado(&[
        "check-lemma", "--lemma", "new", "--set", &full, "--n", "2", "--m", "1",
        "--out-lo", "-50", "--out-hi", "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        report(&out)["result"]["verdict"],
        serde_json::json!("holds-on-window")
    );

    // a singleton far from the window: nothing representable, exit 2
    let single = write_json(
        dir.path(),
        "single.json",
        &WindowSet::from_members(w, [200]).unwrap().to_json(),
    );
    let out = rado(&[
        "check-lemma", "--lemma", "symmetric", "--set", &single, "--n", "2",
        "--out-lo", "-5", "--out-hi", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_proof_success_and_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let parity = write_json(
        dir.path(),
        "parity.json",
        &serde_json::json!({ "rule": "residue", "modulus": 2 }),
    );
    let out = rado(&[
        "run-proof", "--coloring", &parity, "--coeffs", "1,2", "--nmax", "2",
        "--window", "10000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["result"]["success"], serde_json::json!(true));
    assert!(doc["result"]["witness"]["assignment"].is_object());

    // too small a window to certify the subgroup reduction: exit 2
    let out = rado(&[
        "run-proof", "--coloring", &parity, "--coeffs", "1,2", "--nmax", "2",
        "--window", "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["result"]["success"], serde_json::json!(false));
}
