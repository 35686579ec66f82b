//! Batch runs over a directory of graph files or a generated family.
//!
//! Instances run in parallel; rows come back ordered by instance name and
//! then by problem/formulation, independent of completion order.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use convexdom_core::{all_pairs_distances, BuildOptions, Formulation, Graph, SolveStatus};
use rayon::prelude::*;
use serde::Serialize;

use crate::generate::Family;
use crate::io::read_graph;
use crate::run::{oracle_value, solve_model, status_str, CvxForm, Limits, Problem};

/// File extensions picked up from a bench directory.
pub const GRAPH_EXTENSIONS: [&str; 5] = ["col", "dimacs", "edges", "edgelist", "txt"];

pub const CSV_HEADER: &str =
    "instance,n,m,problem,formulation,constraints_dom,constraints_side,value,status,nodes,millis";

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
}

/// Graph files of `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> anyhow::Result<Vec<Instance>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| GRAPH_EXTENSIONS.contains(&e))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!(
            "no graph files ({}) in {}",
            GRAPH_EXTENSIONS.join(", "),
            dir.display()
        );
    }
    paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(Instance {
                name,
                graph: read_graph(p)?,
            })
        })
        .collect()
}

/// `count` members of a family; for `gnm` the seeds are `seed..seed+count`
/// (a seed inside the spec is ignored), other families are deterministic and
/// yield one instance.
pub fn family_instances(words: &[&str], count: u64, seed: u64) -> anyhow::Result<Vec<Instance>> {
    let seed_text = seed.to_string();
    let mut words = words.to_vec();
    if words.first() == Some(&"gnm") && words.len() == 3 {
        words.push(&seed_text);
    }
    let base = Family::parse(&words)?;
    let families: Vec<Family> = match base {
        Family::Gnm { n, m, .. } => (0..count.max(1))
            .map(|i| Family::Gnm {
                n,
                m,
                seed: seed + i,
            })
            .collect(),
        other => vec![other],
    };
    let mut out = families
        .into_iter()
        .map(|f| {
            Ok(Instance {
                name: f.name(),
                graph: f.generate()?,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub problems: Vec<Problem>,
    pub forms: Vec<CvxForm>,
    pub opts: BuildOptions,
    pub limits: Limits,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    /// Also compare with the brute-force oracle on graphs up to this size.
    pub oracle_limit: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub problem: &'static str,
    pub formulation: &'static str,
    pub constraints_dom: usize,
    pub constraints_side: usize,
    pub value: Option<usize>,
    pub status: &'static str,
    pub nodes: u64,
    pub millis: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub compared: usize,
    pub agree: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BenchSummary {
    pub instances: usize,
    pub rows: usize,
    pub optimal: usize,
    pub timeouts: usize,
    pub infeasible: usize,
    pub witness_failures: usize,
    pub full_vs_reduced: Agreement,
    pub chain_checked: usize,
    pub chain_violations: usize,
    pub oracle: Agreement,
    /// `instance` names with any consistency failure.
    pub failures: Vec<String>,
}

impl BenchSummary {
    /// 0 all optimal and consistent, 2 some timeout, 3 consistency failure.
    pub fn exit_code(&self) -> u8 {
        if !self.failures.is_empty() {
            3
        } else if self.timeouts > 0 {
            2
        } else {
            0
        }
    }
}

#[derive(Debug, Default)]
struct InstanceRun {
    rows: Vec<BenchRow>,
    witness_failures: usize,
    infeasible: usize,
    full_vs_reduced: Agreement,
    chain_checked: bool,
    chain_violated: bool,
    oracle: Agreement,
}

fn run_instance(inst: &Instance, cfg: &BenchConfig) -> anyhow::Result<InstanceRun> {
    let g = &inst.graph;
    let dm = all_pairs_distances(g);
    let mut run = InstanceRun::default();
    // optimum per problem, indexed by `Problem as usize`
    let mut best: [Option<usize>; 3] = [None; 3];
    let mut full = None;
    let mut reduced = None;

    for &problem in &cfg.problems {
        let forms: &[CvxForm] = if problem == Problem::Cvxds {
            &cfg.forms
        } else {
            &[CvxForm::Full]
        };
        let oracle = cfg
            .oracle_limit
            .and_then(|limit| oracle_value(g, &dm, problem, limit))
            .and_then(|r| r.value);
        for &form in forms {
            let o = solve_model(g, &dm, problem, form, cfg.opts, cfg.limits)?;
            if !o.witness_ok {
                run.witness_failures += 1;
            }
            if o.result.status == SolveStatus::Infeasible {
                run.infeasible += 1;
            }
            if o.result.is_optimal() {
                let v = o.result.value.expect("optimal result has a value");
                best[problem as usize] = Some(v);
                match o.formulation {
                    Formulation::CvxFull => full = Some(v),
                    Formulation::CvxReduced => reduced = Some(v),
                    _ => {}
                }
                if let Some(ov) = oracle {
                    run.oracle.compared += 1;
                    run.oracle.agree += usize::from(ov == v);
                }
            }
            run.rows.push(BenchRow {
                instance: inst.name.clone(),
                n: g.n(),
                m: g.m(),
                problem: problem.as_str(),
                formulation: o.formulation.as_str(),
                constraints_dom: o.counts.domination,
                constraints_side: o.counts.side(),
                value: o.result.value,
                status: status_str(o.result.status),
                nodes: o.result.stats.nodes,
                millis: o.millis,
            });
        }
    }
    if let (Some(f), Some(r)) = (full, reduced) {
        run.full_vs_reduced = Agreement {
            compared: 1,
            agree: usize::from(f == r),
        };
    }
    if let [Some(ds), Some(wcvx), Some(cvx)] = best {
        run.chain_checked = true;
        run.chain_violated = !(ds <= wcvx && wcvx <= cvx);
    }
    Ok(run)
}

pub fn run_bench(
    instances: &[Instance],
    cfg: &BenchConfig,
) -> anyhow::Result<(Vec<BenchRow>, BenchSummary)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().context("cannot start worker pool")?;
    let runs: Vec<anyhow::Result<InstanceRun>> = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| run_instance(inst, cfg))
            .collect()
    });

    let mut rows = Vec::new();
    let mut s = BenchSummary {
        instances: instances.len(),
        ..Default::default()
    };
    for (inst, run) in instances.iter().zip(runs) {
        let run = run.with_context(|| format!("instance {}", inst.name))?;
        s.witness_failures += run.witness_failures;
        s.infeasible += run.infeasible;
        s.full_vs_reduced.compared += run.full_vs_reduced.compared;
        s.full_vs_reduced.agree += run.full_vs_reduced.agree;
        s.oracle.compared += run.oracle.compared;
        s.oracle.agree += run.oracle.agree;
        s.chain_checked += usize::from(run.chain_checked);
        s.chain_violations += usize::from(run.chain_violated);
        let inconsistent = run.witness_failures > 0
            || run.infeasible > 0
            || run.chain_violated
            || run.full_vs_reduced.agree != run.full_vs_reduced.compared
            || run.oracle.agree != run.oracle.compared;
        if inconsistent {
            s.failures.push(inst.name.clone());
        }
        rows.extend(run.rows);
    }
    s.rows = rows.len();
    s.optimal = rows.iter().filter(|r| r.status == "optimal").count();
    s.timeouts = rows.iter().filter(|r| r.status == "timeout").count();
    Ok((rows, s))
}

pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}
