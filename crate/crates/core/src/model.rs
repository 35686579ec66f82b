//! Integer linear models for the three domination problems.
//!
//! Every model has one binary variable per vertex and minimizes their sum.
//! All constraints have the shape `Σ ±x ≥ rhs` with unit coefficients:
//!
//! * domination, per vertex `i`: `x_i + Σ_{j∈N(i)} x_j ≥ 1`
//! * convexity, per pair `i<j` and `k` on a shortest `i`-`j` path:
//!   `x_k - x_i - x_j ≥ -1` (the reduced family keeps only `k ∈ N(i) ∪ N(j)`)
//! * weak convexity, per pair `i<j` at distance ≥ 2:
//!   `-x_i - x_j + Σ x_k ≥ -1` over neighbours `k` of `j` on shortest `i`-`j` paths

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{DistanceMatrix, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Formulation {
    DsOnly,
    CvxFull,
    CvxReduced,
    Wcvx,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::DsOnly => "ds_only",
            Formulation::CvxFull => "cvx_full",
            Formulation::CvxReduced => "cvx_reduced",
            Formulation::Wcvx => "wcvx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConstraintTag {
    Domination,
    Convexity,
    WeakConvexity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sense {
    #[cfg_attr(feature = "serde", serde(rename = ">="))]
    Ge,
}

/// The vertex tuple a constraint was generated from, as external labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Provenance {
    Vertex { i: u32 },
    Pair { i: u32, j: u32 },
    Triple { i: u32, j: u32, k: u32 },
}

/// `coef * x_var`, `var` being the variable (= vertex) index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Term {
    pub var: u32,
    pub coef: i8,
}

impl Term {
    fn pos(var: usize) -> Self {
        Term {
            var: var as u32,
            coef: 1,
        }
    }

    fn neg(var: usize) -> Self {
        Term {
            var: var as u32,
            coef: -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Constraint {
    pub terms: Vec<Term>,
    pub sense: Sense,
    pub rhs: i32,
    pub tag: ConstraintTag,
    pub provenance: Provenance,
}

impl Constraint {
    /// Row name: `dom_<i>`, `cvx_<i>_<j>_<k>` or `wcvx_<i>_<j>`.
    pub fn name(&self) -> String {
        match self.provenance {
            Provenance::Vertex { i } => format!("dom_{i}"),
            Provenance::Triple { i, j, k } => format!("cvx_{i}_{j}_{k}"),
            Provenance::Pair { i, j } => format!("wcvx_{i}_{j}"),
        }
    }

    pub fn lhs(&self, mask: &[bool]) -> i32 {
        self.terms
            .iter()
            .filter(|t| mask[t.var as usize])
            .map(|t| i32::from(t.coef))
            .sum()
    }

    pub fn is_satisfied(&self, mask: &[bool]) -> bool {
        match self.sense {
            Sense::Ge => self.lhs(mask) >= self.rhs,
        }
    }

    pub fn negative_count(&self) -> usize {
        self.terms.iter().filter(|t| t.coef < 0).count()
    }

    /// Holds for every binary assignment.
    pub fn is_tautology(&self) -> bool {
        -(self.negative_count() as i32) >= self.rhs
    }

    /// Order-independent key used for deduplication.
    fn signature(&self) -> (Vec<Term>, i32) {
        let mut terms = self.terms.clone();
        terms.sort_unstable();
        (terms, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Variable {
    pub name: String,
    /// External label of the vertex this variable indicates.
    pub vertex: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ObjectiveSense {
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Objective {
    pub sense: ObjectiveSense,
    /// One per variable, all 1.
    pub coefficients: Vec<i32>,
}

/// A 0/1 minimization model over one variable per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearModel {
    pub formulation: Formulation,
    pub fingerprint: u64,
    pub vars: Vec<Variable>,
    pub objective: Objective,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    ObjectiveLength {
        expected: usize,
        found: usize,
    },
    ObjectiveCoefficient {
        var: usize,
        coef: i32,
    },
    UnknownVariable {
        row: usize,
        var: u32,
    },
    Coefficient {
        row: usize,
        coef: i8,
    },
    RepeatedVariable {
        row: usize,
        var: u32,
    },
    /// The row does not have the shape its tag requires.
    Shape {
        row: usize,
    },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::ObjectiveLength { expected, found } => {
                write!(f, "objective has {found} coefficients, expected {expected}")
            }
            ModelError::ObjectiveCoefficient { var, coef } => {
                write!(
                    f,
                    "objective coefficient of variable {var} is {coef}, expected 1"
                )
            }
            ModelError::UnknownVariable { row, var } => {
                write!(f, "constraint {row} references undeclared variable {var}")
            }
            ModelError::Coefficient { row, coef } => {
                write!(
                    f,
                    "constraint {row} has coefficient {coef}, expected +1 or -1"
                )
            }
            ModelError::RepeatedVariable { row, var } => {
                write!(f, "constraint {row} mentions variable {var} twice")
            }
            ModelError::Shape { row } => {
                write!(f, "constraint {row} does not match the shape of its tag")
            }
        }
    }
}

impl core::error::Error for ModelError {}

impl LinearModel {
    fn new(g: &Graph, formulation: Formulation) -> Self {
        let vars = g
            .labels()
            .iter()
            .map(|&l| Variable {
                name: format!("x_{l}"),
                vertex: l,
            })
            .collect();
        LinearModel {
            formulation,
            fingerprint: g.fingerprint(),
            vars,
            objective: Objective {
                sense: ObjectiveSense::Minimize,
                coefficients: vec![1; g.n()],
            },
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn count(&self, tag: ConstraintTag) -> usize {
        self.constraints.iter().filter(|c| c.tag == tag).count()
    }

    /// Constraints other than domination rows.
    pub fn side_count(&self) -> usize {
        self.constraints.len() - self.count(ConstraintTag::Domination)
    }

    /// Whether the 0/1 vector `mask` satisfies every constraint.
    pub fn is_feasible(&self, mask: &[bool]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(mask))
    }

    /// Indices of constraints violated by `mask`.
    pub fn violated(&self, mask: &[bool]) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&r| !self.constraints[r].is_satisfied(mask))
            .collect()
    }

    pub fn objective_value(&self, mask: &[bool]) -> i64 {
        self.objective
            .coefficients
            .iter()
            .zip(mask)
            .filter(|(_, &b)| b)
            .map(|(&c, _)| i64::from(c))
            .sum()
    }

    /// Checks the structural invariants of every row.
    ///
    /// Rows that hold for every binary assignment (only emitted with
    /// [`BuildOptions::keep_trivial`]) are exempt from the per-tag shape.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.vars.len();
        if self.objective.coefficients.len() != n {
            return Err(ModelError::ObjectiveLength {
                expected: n,
                found: self.objective.coefficients.len(),
            });
        }
        if let Some((var, &coef)) = self
            .objective
            .coefficients
            .iter()
            .enumerate()
            .find(|(_, &c)| c != 1)
        {
            return Err(ModelError::ObjectiveCoefficient { var, coef });
        }
        for (row, c) in self.constraints.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for t in &c.terms {
                if t.var as usize >= n {
                    return Err(ModelError::UnknownVariable { row, var: t.var });
                }
                if t.coef != 1 && t.coef != -1 {
                    return Err(ModelError::Coefficient { row, coef: t.coef });
                }
                if !seen.insert(t.var) {
                    return Err(ModelError::RepeatedVariable { row, var: t.var });
                }
            }
            let neg = c.negative_count();
            let pos = c.terms.len() - neg;
            let shaped = match c.tag {
                ConstraintTag::Domination => neg == 0 && pos >= 1 && c.rhs == 1,
                ConstraintTag::Convexity => {
                    (neg == 2 && pos == 1 && c.rhs == -1) || c.is_tautology()
                }
                ConstraintTag::WeakConvexity => {
                    (neg == 2 && pos >= 1 && c.rhs == -1) || c.is_tautology()
                }
            };
            if !shaped {
                return Err(ModelError::Shape { row });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Also emit the rows that reduce to `-x ≥ -1`: triples with `k ∈ {i, j}`
    /// and weak-convexity rows for adjacent pairs.
    pub keep_trivial: bool,
}

/// Collects rows, dropping side rows that repeat an earlier one (same terms
/// and rhs). Domination rows are always kept: there is one per vertex even
/// when closed neighbourhoods coincide.
struct RowSink {
    rows: Vec<Constraint>,
    seen: BTreeSet<(Vec<Term>, i32)>,
}

impl RowSink {
    fn new() -> Self {
        RowSink {
            rows: Vec::new(),
            seen: BTreeSet::new(),
        }
    }

    fn push(&mut self, c: Constraint) {
        if c.tag == ConstraintTag::Domination || self.seen.insert(c.signature()) {
            self.rows.push(c);
        }
    }
}

/// Terms of `coef_a * x_a + coef_b * x_b + ...` with like terms combined and
/// zero coefficients removed; first-occurrence order is kept.
fn combine(terms: &[Term]) -> Vec<Term> {
    let mut out: Vec<(u32, i32)> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|(v, _)| *v == t.var) {
            Some((_, c)) => *c += i32::from(t.coef),
            None => out.push((t.var, i32::from(t.coef))),
        }
    }
    out.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(var, c)| Term { var, coef: c as i8 })
        .collect()
}

fn domination_rows(g: &Graph, sink: &mut RowSink) {
    for i in 0..g.n() {
        let mut terms = vec![Term::pos(i)];
        terms.extend(g.neighbors(i).iter().map(|&j| Term::pos(j as usize)));
        terms.sort_unstable();
        sink.push(Constraint {
            terms,
            sense: Sense::Ge,
            rhs: 1,
            tag: ConstraintTag::Domination,
            provenance: Provenance::Vertex { i: g.label(i) },
        });
    }
}

fn convexity_rows(
    g: &Graph,
    dm: &DistanceMatrix,
    reduced: bool,
    opts: BuildOptions,
    sink: &mut RowSink,
) {
    let n = g.n();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let trivial = k == i || k == j;
                if trivial && !opts.keep_trivial {
                    continue;
                }
                if !dm.on_shortest_path(i, k, j) {
                    continue;
                }
                if reduced && !(g.is_adjacent(k, i) || g.is_adjacent(k, j)) {
                    continue;
                }
                sink.push(Constraint {
                    terms: combine(&[Term::pos(k), Term::neg(i), Term::neg(j)]),
                    sense: Sense::Ge,
                    rhs: -1,
                    tag: ConstraintTag::Convexity,
                    provenance: Provenance::Triple {
                        i: g.label(i),
                        j: g.label(j),
                        k: g.label(k),
                    },
                });
            }
        }
    }
}

fn weak_convexity_rows(g: &Graph, dm: &DistanceMatrix, opts: BuildOptions, sink: &mut RowSink) {
    let n = g.n();
    for i in 0..n {
        for j in i + 1..n {
            if dm.get(i, j) < 2 && !opts.keep_trivial {
                continue;
            }
            let mut terms = vec![Term::neg(i), Term::neg(j)];
            terms.extend(
                g.neighbors(j)
                    .iter()
                    .map(|&k| k as usize)
                    .filter(|&k| dm.on_shortest_path(i, k, j))
                    .map(Term::pos),
            );
            sink.push(Constraint {
                terms: combine(&terms),
                sense: Sense::Ge,
                rhs: -1,
                tag: ConstraintTag::WeakConvexity,
                provenance: Provenance::Pair {
                    i: g.label(i),
                    j: g.label(j),
                },
            });
        }
    }
}

fn finish(g: &Graph, formulation: Formulation, sink: RowSink) -> LinearModel {
    let mut model = LinearModel::new(g, formulation);
    model.constraints = sink.rows;
    debug_assert_eq!(model.validate(), Ok(()));
    model
}

/// Domination rows only.
pub fn build_domination(g: &Graph) -> LinearModel {
    let mut sink = RowSink::new();
    domination_rows(g, &mut sink);
    finish(g, Formulation::DsOnly, sink)
}

/// Domination plus a convexity row for every interior vertex of every
/// geodesic interval.
pub fn build_cvx_full(g: &Graph, dm: &DistanceMatrix, opts: BuildOptions) -> LinearModel {
    let mut sink = RowSink::new();
    domination_rows(g, &mut sink);
    convexity_rows(g, dm, false, opts, &mut sink);
    finish(g, Formulation::CvxFull, sink)
}

/// Like [`build_cvx_full`] but only for interval vertices adjacent to one of
/// the two endpoints. Same 0/1 feasible set, fewer rows.
pub fn build_cvx_reduced(g: &Graph, dm: &DistanceMatrix, opts: BuildOptions) -> LinearModel {
    let mut sink = RowSink::new();
    domination_rows(g, &mut sink);
    convexity_rows(g, dm, true, opts, &mut sink);
    finish(g, Formulation::CvxReduced, sink)
}

/// Domination plus one weak-convexity row per non-adjacent pair.
pub fn build_wcvx(g: &Graph, dm: &DistanceMatrix, opts: BuildOptions) -> LinearModel {
    let mut sink = RowSink::new();
    domination_rows(g, &mut sink);
    weak_convexity_rows(g, dm, opts, &mut sink);
    finish(g, Formulation::Wcvx, sink)
}

pub fn build_model(
    g: &Graph,
    dm: &DistanceMatrix,
    formulation: Formulation,
    opts: BuildOptions,
) -> LinearModel {
    match formulation {
        Formulation::DsOnly => build_domination(g),
        Formulation::CvxFull => build_cvx_full(g, dm, opts),
        Formulation::CvxReduced => build_cvx_reduced(g, dm, opts),
        Formulation::Wcvx => build_wcvx(g, dm, opts),
    }
}
