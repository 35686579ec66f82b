use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use convexdom::export::from_json;
use convexdom::io::read_graph;
use convexdom_core::{all_pairs_distances, build_domination, build_wcvx, BuildOptions};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convexdom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.ends_with('\n'),
        "stdout not newline-terminated: {text:?}"
    );
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_reports_example_optima() {
    let g2 = fixture("g2.edges");
    let out = run(&[
        "solve",
        arg(&g2),
        "--problem",
        "cvxds",
        "--formulation",
        "full",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 4);
    assert_eq!(v["status"], "optimal");
    assert_eq!(v["constraints"]["domination"], 7);

    let out = run(&["solve", arg(&fixture("g1.edges")), "--problem", "ds"]);
    let v = json(&out);
    assert_eq!(v["value"], 2);
    assert_eq!(v["witness"], serde_json::json!([1, 3]));

    let out = run(&["solve", arg(&fixture("p3.col")), "--problem", "wcvxds"]);
    assert_eq!(json(&out)["value"], 1);

    let out = run(&[
        "solve",
        arg(&fixture("g3.edges")),
        "--problem",
        "cvxds",
        "--formulation",
        "reduced",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 3);
    assert_eq!(v["oracle_value"], 3);
    assert_eq!(v["witness"], serde_json::json!([1, 3, 4]));
    assert_eq!(v["discrepancy"], false);
}

#[test]
fn solve_timeout_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.col");
    let out = run(&["gen", "gnm", "60", "90", "5", "-o", arg(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "solve",
        arg(&path),
        "--problem",
        "cvxds",
        "--node-limit",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "timeout");
}

#[test]
fn input_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.col");
    std::fs::write(&bad, "p edge 3 2\ne 1 2\ne 2 2\n").unwrap();
    let out = run(&["solve", arg(&bad), "--problem", "ds"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.col") && err.contains("line 3"), "{err}");
    assert!(out.stdout.is_empty());

    let out = run(&["solve", "/nonexistent.col", "--problem", "ds"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["solve", arg(&fixture("p3.col")), "--problem", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "export",
        arg(&fixture("p3.col")),
        "--problem",
        "ds",
        "-f",
        "xlsx",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported model format"));
}

#[test]
fn export_formats() {
    let p3 = fixture("p3.col");
    let out = run(&[
        "export",
        arg(&p3),
        "--problem",
        "cvxds",
        "--formulation",
        "full",
        "-f",
        "lp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lp = String::from_utf8(out.stdout).unwrap();
    for row in ["dom_1:", "dom_2:", "dom_3:", "cvx_1_3_2:"] {
        assert!(lp.contains(row), "{row} missing:\n{lp}");
    }
    assert!(lp.contains(" dom_2: x_1 + x_2 + x_3 >= 1\n"));

    // JSON re-import reproduces the model exactly
    let out = run(&["export", arg(&p3), "--problem", "ds", "-f", "json"]);
    let m = from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(m, build_domination(&read_graph(&p3).unwrap()));

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.mps");
    let b = dir.path().join("b.mps");
    let g2 = fixture("g2.edges");
    for p in [&a, &b] {
        let out = run(&[
            "export",
            arg(&g2),
            "--problem",
            "wcvxds",
            "-f",
            "mps",
            "-o",
            arg(p),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("NAME          WCVX\nROWS\n"));
    assert!(text.ends_with("ENDATA\n"));
    assert!(text.contains(" G  wcvx_1_3\n"));

    let g = read_graph(&g2).unwrap();
    let m = build_wcvx(&g, &all_pairs_distances(&g), BuildOptions::default());
    let bv = text.lines().filter(|l| l.starts_with(" BV ")).count();
    assert_eq!(bv, m.num_vars());
}

#[test]
fn export_keep_trivial_adds_rows() {
    let p3 = fixture("p3.col");
    let plain = run(&["export", arg(&p3), "--problem", "cvxds", "-f", "lp"]);
    let literal = run(&[
        "export",
        arg(&p3),
        "--problem",
        "cvxds",
        "-f",
        "lp",
        "--keep-trivial",
    ]);
    let rows = |o: &Output| String::from_utf8_lossy(&o.stdout).matches(">=").count();
    assert_eq!(rows(&plain), 4);
    assert_eq!(rows(&literal), 7);
}

#[test]
fn verify_verdicts() {
    let out = run(&[
        "verify",
        arg(&fixture("g2.edges")),
        "--problem",
        "cvxds",
        "--set",
        "1,3,4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dominating"], true);
    assert_eq!(v["convex"], false);
    assert_eq!(v["feasible"], false);
    assert_eq!(v["model_feasible"], false);
    assert!(v.get("weakly_convex").is_none());

    let v = json(&run(&[
        "verify",
        arg(&fixture("g1.edges")),
        "--problem",
        "wcvxds",
        "--set",
        "1,2,3",
    ]));
    assert_eq!(v["feasible"], true);
    assert_eq!(v["weakly_convex"], true);

    let v = json(&run(&[
        "verify",
        arg(&fixture("g1.edges")),
        "--problem",
        "ds",
        "--set",
        "1,2,3,4,5,7",
    ]));
    assert_eq!(v["feasible"], true);

    let out = run(&[
        "verify",
        arg(&fixture("g1.edges")),
        "--problem",
        "ds",
        "--set",
        "1,6",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_command() {
    let expected = [
        ("g1.edges", "ds", 2),
        ("g1.edges", "wcvxds", 3),
        ("g2.edges", "ds", 3),
        ("g2.edges", "wcvxds", 3),
        ("g2.edges", "cvxds", 4),
        ("g3.edges", "cvxds", 3),
    ];
    for (file, problem, value) in expected {
        let out = run(&["oracle", arg(&fixture(file)), "--problem", problem]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["value"], value, "{file} {problem}");
        assert_eq!(v["formulation"], "oracle");
    }
    let out = run(&[
        "oracle",
        arg(&fixture("g2.edges")),
        "--problem",
        "ds",
        "--limit",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_families() {
    let out = run(&["gen", "path", "5"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "c path_5\np edge 5 4\ne 1 2\ne 2 3\ne 3 4\ne 4 5\n"
    );

    let out = run(&["gen", "torus", "3", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p edge 12 24\n"));

    let a = run(&["gen", "gnm", "10", "14", "42"]).stdout;
    let b = run(&["gen", "gnm", "10", "14", "42"]).stdout;
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().contains("p edge 10 14\n"));

    assert_eq!(run(&["gen", "torus", "2", "2"]).status.code(), Some(1));
    assert_eq!(run(&["gen", "gnm", "10", "3", "1"]).status.code(), Some(1));
}

#[test]
fn bench_over_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["g1.edges", "g2.edges", "g3.edges"] {
        std::fs::copy(fixture(f), dir.path().join(f)).unwrap();
    }
    let summary = dir.path().join("summary.json");
    let out = run(&[
        "bench",
        "--dir",
        arg(dir.path()),
        "--summary",
        arg(&summary),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "instance,n,m,problem,formulation,constraints_dom,constraints_side,value,status,nodes,millis"
    );
    assert_eq!(lines.len(), 10);
    assert!(lines[1..].iter().all(|l| l.contains(",optimal,")));
    let values: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(7).unwrap())
        .collect();
    assert_eq!(values, ["2", "3", "4", "3", "3", "4", "3", "3", "3"]);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["chain_checked"], 3);
    assert_eq!(s["chain_violations"], 0);
}

#[test]
fn bench_family_full_vs_reduced() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let summary = dir.path().join("summary.json");
    let out = run(&[
        "bench",
        "--family",
        "gnm 10 14",
        "--count",
        "50",
        "--seed",
        "7",
        "--problems",
        "cvxds",
        "--formulations",
        "full,reduced",
        "--jobs",
        "4",
        "--csv",
        arg(&csv),
        "--summary",
        arg(&summary),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["full_vs_reduced"]["compared"], 50);
    assert_eq!(s["full_vs_reduced"]["agree"], 50);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 101);
}

#[test]
fn bench_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bench", "--dir", arg(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}
