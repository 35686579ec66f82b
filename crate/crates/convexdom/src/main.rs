use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use convexdom::bench::{family_instances, load_dir, run_bench, write_csv, BenchConfig};
use convexdom::export::{export_model, ExportFormat};
use convexdom::generate::Family;
use convexdom::io::{read_graph, write_dimacs};
use convexdom::report::{RunReport, Verdict};
use convexdom::run::{oracle_value, solve_model, CvxForm, Limits, Problem};
use convexdom_core::{
    all_pairs_distances, build_model, is_convex, is_dominating, is_weakly_convex, verify_witness,
    BuildOptions, Graph, SolveStatus, VertexSet, DEFAULT_ORACLE_LIMIT,
};

/// Exit codes.
const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_TIMEOUT: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "convexdom",
    version,
    about = "Exact (weakly) convex domination via ILP models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Graph file, DIMACS or edge list (detected from the content).
    graph: PathBuf,
    #[arg(long, value_enum)]
    problem: Problem,
    /// Convexity rows for `cvxds`.
    #[arg(long, value_enum, default_value = "full")]
    formulation: CvxForm,
    /// Also emit rows that hold for every 0/1 vector.
    #[arg(long)]
    keep_trivial: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance exactly and print a JSON report.
    Solve {
        #[command(flatten)]
        args: ProblemArgs,
        /// Wall-clock limit in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Cross-check the optimum with the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
    },
    /// Write the model as LP, MPS or JSON.
    Export {
        #[command(flatten)]
        args: ProblemArgs,
        /// lp, mps or json.
        #[arg(short = 'f', long = "format")]
        format: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check a vertex set against the problem's predicates and model.
    Verify {
        #[command(flatten)]
        args: ProblemArgs,
        /// Comma-separated vertex ids.
        #[arg(long)]
        set: String,
    },
    /// Brute-force optimum by subset enumeration.
    Oracle {
        graph: PathBuf,
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        limit: usize,
    },
    /// Generate a graph: `path N`, `cycle N`, `grid R C`, `torus R C`, `gnm N M SEED`.
    Gen {
        #[arg(required = true, num_args = 1..)]
        family: Vec<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Solve many instances; CSV rows plus a JSON summary.
    Bench {
        /// Directory of graph files.
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        dir: Option<PathBuf>,
        /// Family spec such as "gnm 10 14" (seed taken from --seed) or "torus 3 4".
        #[arg(long)]
        family: Option<String>,
        /// Number of gnm instances.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "ds,wcvxds,cvxds"
        )]
        problems: Vec<Problem>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "full")]
        formulations: Vec<CvxForm>,
        /// Also emit rows that hold for every 0/1 vector.
        #[arg(long)]
        keep_trivial: bool,
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Compare every optimum with the oracle (graphs up to --oracle-limit).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
        /// CSV destination (default stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON summary destination (default stderr).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn timeout(secs: f64) -> anyhow::Result<Duration> {
    Duration::try_from_secs_f64(secs).context("timeout must be a non-negative number of seconds")
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Graph> {
    Ok(read_graph(path)?)
}

fn parse_set(g: &Graph, text: &str) -> anyhow::Result<VertexSet> {
    let labels = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .with_context(|| format!("invalid vertex id `{t}`"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(VertexSet::from_labels(g, labels)?)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Solve {
            args,
            timeout: secs,
            node_limit,
            oracle,
            oracle_limit,
        } => {
            let g = load(&args.graph)?;
            let dm = all_pairs_distances(&g);
            let limits = Limits {
                timeout: Some(timeout(secs)?),
                node_limit,
            };
            let opts = BuildOptions {
                keep_trivial: args.keep_trivial,
            };
            let o = solve_model(&g, &dm, args.problem, args.formulation, opts, limits)?;
            let ov = if oracle {
                if g.n() > oracle_limit {
                    bail!(
                        "graph has {} vertices, oracle limit is {oracle_limit}",
                        g.n()
                    );
                }
                oracle_value(&g, &dm, args.problem, oracle_limit).and_then(|r| r.value)
            } else {
                None
            };
            let report =
                RunReport::from_outcome(&instance_name(&args.graph), &g, args.problem, &o, ov);
            print_json(&report)?;
            if report.discrepancy || o.result.status == SolveStatus::Infeasible {
                eprintln!("inconsistent result for {}", args.graph.display());
                return Ok(EXIT_INCONSISTENT);
            }
            Ok(if o.result.status == SolveStatus::Timeout {
                EXIT_TIMEOUT
            } else {
                EXIT_OK
            })
        }
        Command::Export {
            args,
            format,
            output,
        } => {
            let format: ExportFormat = format.parse()?;
            let g = load(&args.graph)?;
            let dm = all_pairs_distances(&g);
            let opts = BuildOptions {
                keep_trivial: args.keep_trivial,
            };
            let m = build_model(&g, &dm, args.problem.formulation(args.formulation), opts);
            write_output(output.as_deref(), &export_model(&m, format))?;
            Ok(EXIT_OK)
        }
        Command::Verify { args, set } => {
            let g = load(&args.graph)?;
            let dm = all_pairs_distances(&g);
            let s = parse_set(&g, &set)?;
            let dominating = is_dominating(&g, &s);
            let (weakly_convex, convex) = match args.problem {
                Problem::Ds => (None, None),
                Problem::Wcvxds => (Some(is_weakly_convex(&g, &dm, &s)), None),
                Problem::Cvxds => (None, Some(is_convex(&g, &dm, &s))),
            };
            let feasible = dominating && weakly_convex.unwrap_or(true) && convex.unwrap_or(true);
            let opts = BuildOptions {
                keep_trivial: args.keep_trivial,
            };
            let m = build_model(&g, &dm, args.problem.formulation(args.formulation), opts);
            let verdict = Verdict {
                problem: args.problem,
                set: s.labels(&g),
                dominating,
                weakly_convex,
                convex,
                feasible,
                model_feasible: verify_witness(&m, &s),
            };
            print_json(&verdict)?;
            if verdict.model_feasible != verdict.feasible {
                eprintln!("model and set predicates disagree");
                return Ok(EXIT_INCONSISTENT);
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            graph,
            problem,
            limit,
        } => {
            let g = load(&graph)?;
            let dm = all_pairs_distances(&g);
            let start = Instant::now();
            let r = convexdom_core::oracle_minimum(&g, &dm, problem.kind(), limit)?;
            let millis = start.elapsed().as_millis() as u64;
            print_json(&RunReport::from_oracle(
                &instance_name(&graph),
                &g,
                problem,
                &r,
                millis,
            ))?;
            Ok(if r.is_optimal() {
                EXIT_OK
            } else {
                EXIT_INCONSISTENT
            })
        }
        Command::Gen { family, output } => {
            let words: Vec<&str> = family.iter().map(String::as_str).collect();
            let f = Family::parse(&words)?;
            let g = f.generate()?;
            write_output(output.as_deref(), &write_dimacs(&g, &f.name()))?;
            Ok(EXIT_OK)
        }
        Command::Bench {
            dir,
            family,
            count,
            seed,
            problems,
            formulations,
            keep_trivial,
            timeout: secs,
            jobs,
            oracle,
            oracle_limit,
            csv,
            summary,
        } => {
            let instances = match (&dir, &family) {
                (Some(d), _) => load_dir(d)?,
                (None, Some(spec)) => {
                    let words: Vec<&str> = spec.split_whitespace().collect();
                    family_instances(&words, count, seed)?
                }
                (None, None) => bail!("either --dir or --family is required"),
            };
            let mut problems = problems;
            problems.sort();
            problems.dedup();
            let mut forms = formulations;
            forms.sort();
            forms.dedup();
            let cfg = BenchConfig {
                problems,
                forms,
                opts: BuildOptions { keep_trivial },
                limits: Limits {
                    timeout: Some(timeout(secs)?),
                    node_limit: None,
                },
                jobs,
                oracle_limit: oracle.then_some(oracle_limit),
            };
            let (rows, s) = run_bench(&instances, &cfg)?;
            match &csv {
                Some(p) => write_csv(
                    &rows,
                    fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
                )?,
                None => write_csv(&rows, std::io::stdout().lock())?,
            }
            let mut text = serde_json::to_string_pretty(&s)?;
            text.push('\n');
            match &summary {
                Some(p) => {
                    fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?
                }
                None => eprint!("{text}"),
            }
            Ok(s.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
