use convexdom_core::{Graph, SolveResult};
use serde::Serialize;

use crate::run::{status_str, ConstraintCounts, Outcome, Problem};

/// JSON document printed by `solve` and `oracle`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub problem: Problem,
    /// Model tag, or `oracle` for brute-force runs.
    pub formulation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraints: Option<ConstraintCounts>,
    pub status: &'static str,
    pub value: Option<usize>,
    /// Original vertex ids.
    pub witness: Vec<u32>,
    pub nodes: u64,
    pub propagations: u64,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<usize>,
    pub witness_ok: bool,
    /// Solver and oracle disagree, or the witness failed verification.
    pub discrepancy: bool,
}

impl RunReport {
    fn base(instance: &str, g: &Graph, problem: Problem, r: &SolveResult) -> Self {
        RunReport {
            instance: instance.to_string(),
            n: g.n(),
            m: g.m(),
            problem,
            formulation: "oracle",
            constraints: None,
            status: status_str(r.status),
            value: r.value,
            witness: r.witness.labels(g),
            nodes: r.stats.nodes,
            propagations: r.stats.propagations,
            millis: 0,
            oracle_value: None,
            witness_ok: true,
            discrepancy: false,
        }
    }

    pub fn from_outcome(
        instance: &str,
        g: &Graph,
        problem: Problem,
        o: &Outcome,
        oracle_value: Option<usize>,
    ) -> Self {
        let mut r = Self::base(instance, g, problem, &o.result);
        r.formulation = o.formulation.as_str();
        r.constraints = Some(o.counts);
        r.millis = o.millis;
        r.oracle_value = oracle_value;
        r.witness_ok = o.witness_ok;
        let disagree = match (oracle_value, o.result.is_optimal()) {
            (Some(ov), true) => o.result.value != Some(ov),
            _ => false,
        };
        r.discrepancy = disagree || !o.witness_ok;
        r
    }

    pub fn from_oracle(
        instance: &str,
        g: &Graph,
        problem: Problem,
        r: &SolveResult,
        millis: u64,
    ) -> Self {
        let mut report = Self::base(instance, g, problem, r);
        report.millis = millis;
        report
    }
}

/// JSON document printed by `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub problem: Problem,
    pub set: Vec<u32>,
    pub dominating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weakly_convex: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convex: Option<bool>,
    /// Conjunction of the predicates above.
    pub feasible: bool,
    /// The indicator vector satisfies every row of the problem's model.
    pub model_feasible: bool,
}
