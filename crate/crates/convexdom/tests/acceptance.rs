//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! internal criterion is red. Run with
//! `cargo test -p convexdom --test acceptance -- --nocapture`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use convexdom::export::{export_model, ExportFormat};
use convexdom::generate::Family;
use convexdom::io::read_graph;
use convexdom::run::{oracle_value, solve_model, CvxForm, Limits, Problem};
use convexdom_core::{
    all_pairs_distances, build_cvx_full, build_cvx_reduced, build_model, build_wcvx, is_convex,
    is_dominating, is_weakly_convex, verify_witness, BuildOptions, DistanceMatrix, Graph,
    SolveStatus, VertexSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00C0_FFEE;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Seeded connected graphs with `lo <= n <= hi`, edge counts from trees to
/// moderately dense.
fn random_graphs(count: usize, lo: u32, hi: u32, stream: u64) -> Vec<(String, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ stream);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let pairs = u64::from(n) * u64::from(n - 1) / 2;
            let m = rng.gen_range(u64::from(n - 1)..=pairs.min(u64::from(3 * n)));
            let f = Family::Gnm {
                n,
                m,
                seed: rng.gen(),
            };
            (f.name(), f.generate().expect("connected sample"))
        })
        .collect()
}

/// Optimum with witness checks; failures are recorded in `t`.
fn solve_checked(
    t: &mut Tally,
    name: &str,
    g: &Graph,
    dm: &DistanceMatrix,
    problem: Problem,
    form: CvxForm,
) -> Option<usize> {
    let o = solve_model(
        g,
        dm,
        problem,
        form,
        BuildOptions::default(),
        Limits::default(),
    )
    .expect("builders produce clausal models");
    if o.result.status != SolveStatus::Optimal {
        t.fail(format!(
            "{name} {}: status {:?}",
            problem.as_str(),
            o.result.status
        ));
        return None;
    }
    let w = &o.result.witness;
    let model = build_model(g, dm, o.formulation, BuildOptions::default());
    let sound = verify_witness(&model, w)
        && is_dominating(g, w)
        && match problem {
            Problem::Ds => true,
            Problem::Wcvxds => is_weakly_convex(g, dm, w),
            Problem::Cvxds => is_convex(g, dm, w),
        }
        && o.result.value == Some(w.len());
    t.witnesses += 1;
    if !sound {
        t.unsound.push(format!("{name} {}", o.formulation.as_str()));
    }
    o.result.value
}

#[derive(Default)]
struct Tally {
    witnesses: usize,
    unsound: Vec<String>,
    chains: usize,
    chain_violations: Vec<String>,
    errors: Vec<String>,
}

impl Tally {
    fn fail(&mut self, msg: String) {
        self.errors.push(msg);
    }

    /// Solves all three problems and records the chain.
    fn chain(&mut self, name: &str, g: &Graph, dm: &DistanceMatrix) -> [Option<usize>; 3] {
        let v = Problem::ALL.map(|p| solve_checked(self, name, g, dm, p, CvxForm::Full));
        if let [Some(a), Some(b), Some(c)] = v {
            self.chains += 1;
            if !(a <= b && b <= c) {
                self.chain_violations.push(format!("{name}: {a} {b} {c}"));
            }
        }
        v
    }
}

struct Report {
    lines: Vec<(String, bool, String)>,
}

impl Report {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.lines.push((name.to_string(), ok, detail));
    }
}

fn golden(t: &mut Tally, r: &mut Report) {
    let expected = [
        ("g1.edges", [2, 3, 4]),
        ("g2.edges", [3, 3, 4]),
        ("g3.edges", [3, 3, 3]),
    ];
    let start = Instant::now();
    let mut wrong = Vec::new();
    for (file, want) in expected {
        let g = read_graph(&fixture(file)).unwrap();
        let dm = all_pairs_distances(&g);
        let got = t.chain(file, &g, &dm);
        if got != want.map(Some) {
            wrong.push(format!("{file}: got {got:?}, want {want:?}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = wrong.is_empty() && elapsed < Duration::from_secs(1);
    let detail = if wrong.is_empty() {
        format!("g1 2/3/4, g2 3/3/4, g3 γ_cvx=3 reproduced in {elapsed:.2?} (limit 1 s)")
    } else {
        wrong.join("; ")
    };
    r.record("golden fixtures", ok, detail);
}

fn full_vs_reduced(t: &mut Tally, r: &mut Report) {
    let graphs = random_graphs(60, 8, 14, 1);
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for (name, g) in &graphs {
        let dm = all_pairs_distances(g);
        let full = solve_checked(t, name, g, &dm, Problem::Cvxds, CvxForm::Full);
        let reduced = solve_checked(t, name, g, &dm, Problem::Cvxds, CvxForm::Reduced);
        if full.is_none() || full != reduced {
            mismatches.push(format!("{name}: {full:?} vs {reduced:?}"));
        }
        t.chain(name, g, &dm);
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(300);
    r.record(
        "full vs reduced convex optimum",
        ok,
        format!(
            "{}/{} graphs (8 <= n <= 14) agree in {elapsed:.2?} (limit 5 min) {}",
            graphs.len() - mismatches.len(),
            graphs.len(),
            mismatches.join("; ")
        ),
    );
}

fn exhaustive(r: &mut Report) {
    let graphs = random_graphs(25, 6, 10, 2);
    let mut same_feasible = Vec::new();
    let mut characterized = Vec::new();
    let mut vectors = 0usize;
    for (name, g) in &graphs {
        let dm = all_pairs_distances(g);
        let full = build_cvx_full(g, &dm, BuildOptions::default());
        let reduced = build_cvx_reduced(g, &dm, BuildOptions::default());
        let wcvx = build_wcvx(g, &dm, BuildOptions::default());
        let n = g.n();
        for bits in 0u32..(1 << n) {
            let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            let s = VertexSet::from_mask(&mask);
            vectors += 1;
            let dominating = is_dominating(g, &s);
            if full.is_feasible(&mask) != reduced.is_feasible(&mask) {
                same_feasible.push(format!("{name} {bits:#b}"));
            }
            if full.is_feasible(&mask) != (dominating && is_convex(g, &dm, &s)) {
                characterized.push(format!("{name} cvx {bits:#b}"));
            }
            if wcvx.is_feasible(&mask) != (dominating && is_weakly_convex(g, &dm, &s)) {
                characterized.push(format!("{name} wcvx {bits:#b}"));
            }
        }
    }
    r.record(
        "full/reduced feasible sets identical",
        same_feasible.is_empty(),
        format!(
            "{} graphs (n <= 10), {vectors} vectors, {} mismatches {}",
            graphs.len(),
            same_feasible.len(),
            same_feasible
                .iter()
                .take(5)
                .cloned()
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    r.record(
        "model feasibility characterizes (weakly) convex domination",
        characterized.is_empty(),
        format!(
            "{vectors} vectors x 2 models, {} mismatches {}",
            characterized.len(),
            characterized
                .iter()
                .take(5)
                .cloned()
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
}

fn oracle_equivalence(t: &mut Tally, r: &mut Report) {
    let graphs = random_graphs(220, 4, 12, 3);
    let mut mismatches = Vec::new();
    let mut times = Vec::new();
    for (name, g) in &graphs {
        let dm = all_pairs_distances(g);
        let start = Instant::now();
        let solved = t.chain(name, g, &dm);
        let reduced = solve_checked(t, name, g, &dm, Problem::Cvxds, CvxForm::Reduced);
        for (p, v) in Problem::ALL.iter().zip(solved) {
            let o = oracle_value(g, &dm, *p, 12).and_then(|r| r.value);
            if o.is_none() || o != v {
                mismatches.push(format!("{name} {}: solver {v:?} oracle {o:?}", p.as_str()));
            }
        }
        if reduced != solved[2] {
            mismatches.push(format!(
                "{name} cvx_reduced: {reduced:?} vs {:?}",
                solved[2]
            ));
        }
        times.push(start.elapsed());
    }
    times.sort();
    let median = times[times.len() / 2];
    let ok = mismatches.is_empty() && median < Duration::from_secs(1);
    r.record(
        "solver matches oracle",
        ok,
        format!(
            "{} graphs (n <= 12), 3 problems + reduced, {} mismatches, median {median:.2?} (limit 1 s) {}",
            graphs.len(),
            mismatches.len(),
            mismatches.join("; ")
        ),
    );
}

const HIGHS_SCRIPT: &str = r#"
import sys, highspy
for f in sys.argv[1:]:
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(f) != highspy.HighsStatus.kOk:
        print(f, "unreadable"); continue
    h.run()
    ok = h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    print(f, round(h.getInfo().objective_function_value) if ok else "not-optimal")
"#;

fn highs_available() -> bool {
    Command::new("python3")
        .args(["-c", "import highspy"])
        .output()
        .is_ok_and(|o| o.status.success())
}

/// Optional cross-check with an external MIP solver (HiGHS via python).
fn external_solver(r: &mut Report) {
    if !highs_available() {
        println!("SKIP exported models solve externally: python3 with highspy not found");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    let mut expected = Vec::new();
    for name in ["g1", "g2", "g3"] {
        let g = read_graph(&fixture(&format!("{name}.edges"))).unwrap();
        let dm = all_pairs_distances(&g);
        for p in Problem::ALL {
            for form in [CvxForm::Full, CvxForm::Reduced] {
                if p != Problem::Cvxds && form == CvxForm::Reduced {
                    continue;
                }
                let f = p.formulation(form);
                let m = build_model(&g, &dm, f, BuildOptions::default());
                let want =
                    solve_model(&g, &dm, p, form, BuildOptions::default(), Limits::default())
                        .unwrap()
                        .result
                        .value
                        .unwrap();
                for (fmt, ext) in [(ExportFormat::Mps, "mps"), (ExportFormat::Lp, "lp")] {
                    let path = dir.path().join(format!("{name}_{}.{ext}", f.as_str()));
                    std::fs::write(&path, export_model(&m, fmt)).unwrap();
                    expected.push((path.display().to_string(), want.to_string()));
                    files.push(path);
                }
            }
        }
    }
    let out = Command::new("python3")
        .arg("-c")
        .arg(HIGHS_SCRIPT)
        .args(
            files
                .iter()
                .map(|p: &PathBuf| p.as_path())
                .map(Path::as_os_str),
        )
        .output()
        .expect("python3 runs");
    let text = String::from_utf8_lossy(&out.stdout);
    let got: Vec<(String, String)> = text
        .lines()
        .filter_map(|l| l.rsplit_once(' '))
        .map(|(f, v)| (f.to_string(), v.to_string()))
        .collect();
    let ok = out.status.success() && got == expected;
    r.record(
        "exported models solve externally",
        ok,
        if ok {
            format!(
                "HiGHS reproduces all {} MPS/LP optima for g1-g3",
                expected.len()
            )
        } else {
            format!(
                "expected {expected:?}, got {got:?} {}",
                String::from_utf8_lossy(&out.stderr)
            )
        },
    );
}

#[test]
fn acceptance() {
    let mut t = Tally::default();
    let mut r = Report { lines: Vec::new() };
    golden(&mut t, &mut r);
    full_vs_reduced(&mut t, &mut r);
    exhaustive(&mut r);
    oracle_equivalence(&mut t, &mut r);
    r.record(
        "chain γ <= γ_wcvx <= γ_cvx",
        t.chain_violations.is_empty() && t.chains > 0,
        format!(
            "{} instances, {} violations {}",
            t.chains,
            t.chain_violations.len(),
            t.chain_violations.join("; ")
        ),
    );
    r.record(
        "witness soundness",
        t.unsound.is_empty() && t.errors.is_empty(),
        format!(
            "{}/{} witnesses verified {}",
            t.witnesses - t.unsound.len(),
            t.witnesses,
            t.unsound
                .iter()
                .chain(&t.errors)
                .cloned()
                .collect::<Vec<_>>()
                .join("; ")
        ),
    );
    external_solver(&mut r);

    let failed: Vec<&str> = r
        .lines
        .iter()
        .filter(|l| !l.1)
        .map(|l| l.0.as_str())
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
