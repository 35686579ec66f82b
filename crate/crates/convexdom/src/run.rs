//! One instance end to end: build, clausify, solve under a wall-clock
//! budget, check the witness, optionally compare with the oracle.

use std::time::{Duration, Instant};

use convexdom_core::{
    build_model, clausify, oracle_minimum, solve, verify_witness, Budget, BuildOptions,
    ConstraintTag, DistanceMatrix, DominationKind, Formulation, Graph, LinearModel, SolveResult,
    SolveStatus,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// Minimum dominating set.
    Ds,
    /// Minimum weakly convex dominating set.
    Wcvxds,
    /// Minimum convex dominating set.
    Cvxds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CvxForm {
    /// Every interior vertex of every geodesic interval.
    Full,
    /// Only interval vertices adjacent to an endpoint.
    Reduced,
}

impl Problem {
    pub const ALL: [Problem; 3] = [Problem::Ds, Problem::Wcvxds, Problem::Cvxds];

    pub fn kind(self) -> DominationKind {
        match self {
            Problem::Ds => DominationKind::Plain,
            Problem::Wcvxds => DominationKind::WeaklyConvex,
            Problem::Cvxds => DominationKind::Convex,
        }
    }

    /// The model for this problem; `form` only matters for `cvxds`.
    pub fn formulation(self, form: CvxForm) -> Formulation {
        match (self, form) {
            (Problem::Ds, _) => Formulation::DsOnly,
            (Problem::Wcvxds, _) => Formulation::Wcvx,
            (Problem::Cvxds, CvxForm::Full) => Formulation::CvxFull,
            (Problem::Cvxds, CvxForm::Reduced) => Formulation::CvxReduced,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Ds => "ds",
            Problem::Wcvxds => "wcvxds",
            Problem::Cvxds => "cvxds",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub timeout: Option<Duration>,
    pub node_limit: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintCounts {
    pub domination: usize,
    pub convexity: usize,
    pub weak_convexity: usize,
    /// Rows every 0/1 vector satisfies (present only with keep-trivial).
    pub tautologies: usize,
}

impl ConstraintCounts {
    pub fn of(m: &LinearModel) -> Self {
        ConstraintCounts {
            domination: m.count(ConstraintTag::Domination),
            convexity: m.count(ConstraintTag::Convexity),
            weak_convexity: m.count(ConstraintTag::WeakConvexity),
            tautologies: m.constraints.iter().filter(|c| c.is_tautology()).count(),
        }
    }

    pub fn side(&self) -> usize {
        self.convexity + self.weak_convexity
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub formulation: Formulation,
    pub counts: ConstraintCounts,
    pub result: SolveResult,
    pub millis: u64,
    /// The witness satisfies every model row and the set predicates.
    pub witness_ok: bool,
}

/// Builds and solves one model. Only a model that is not clausal can fail,
/// which the builders never produce.
pub fn solve_model(
    g: &Graph,
    dm: &DistanceMatrix,
    problem: Problem,
    form: CvxForm,
    opts: BuildOptions,
    limits: Limits,
) -> anyhow::Result<Outcome> {
    let formulation = problem.formulation(form);
    let start = Instant::now();
    let model = build_model(g, dm, formulation, opts);
    let clauses = clausify(&model)?;
    let deadline = limits.timeout.map(|t| start + t);
    let expired = move || deadline.is_some_and(|d| Instant::now() >= d);
    let budget = Budget {
        node_limit: limits.node_limit,
        interrupt: Some(&expired),
    };
    let result = solve(&clauses, budget);
    let millis = start.elapsed().as_millis() as u64;
    let witness_ok = result.value.is_none()
        || (verify_witness(&model, &result.witness)
            && problem.kind().accepts(g, dm, &result.witness));
    Ok(Outcome {
        formulation,
        counts: ConstraintCounts::of(&model),
        result,
        millis,
        witness_ok,
    })
}

/// Brute-force optimum, or `None` when the graph is above `limit`.
pub fn oracle_value(
    g: &Graph,
    dm: &DistanceMatrix,
    problem: Problem,
    limit: usize,
) -> Option<SolveResult> {
    oracle_minimum(g, dm, problem.kind(), limit).ok()
}

pub fn status_str(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Timeout => "timeout",
    }
}
