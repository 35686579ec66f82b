//! MinOnes branch-and-bound over the clausal form of a [`LinearModel`].
//!
//! A unit-coefficient row `Σ_{p∈P} x_p - Σ_{q∈Q} x_q ≥ 1 - |Q|` is the
//! clause `⋁_{p∈P} x_p ∨ ⋁_{q∈Q} ¬x_q`; every row the builders emit is either
//! of that form or a tautology. The search assigns variables false first,
//! propagates units after every decision and prunes with a packing bound:
//! unsatisfied clauses whose open literals are all positive, chosen pairwise
//! variable-disjoint, each need their own new true variable.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::domination::VertexSet;
use crate::model::LinearModel;
use crate::result::{SolveResult, SolveStats, SolveStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: u32,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: u32) -> Self {
        Lit {
            var,
            positive: false,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub lits: Vec<Lit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSet {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    /// `origin[c]` is the model row clause `c` came from.
    pub origin: Vec<usize>,
    /// Model rows dropped because every 0/1 assignment satisfies them.
    pub tautologies: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseError {
    /// Row is not `Σ ±x ≥ 1 - (#negative)` with unit coefficients.
    NonClausal { row: usize },
    /// Row can never be satisfied.
    Empty { row: usize },
}

impl fmt::Display for ClauseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClauseError::NonClausal { row } => write!(f, "constraint {row} is not a clause"),
            ClauseError::Empty { row } => write!(f, "constraint {row} is an empty clause"),
        }
    }
}

impl core::error::Error for ClauseError {}

/// One clause per non-tautological row.
pub fn clausify(m: &LinearModel) -> Result<ClauseSet, ClauseError> {
    let mut cs = ClauseSet {
        num_vars: m.num_vars(),
        clauses: Vec::with_capacity(m.constraints.len()),
        origin: Vec::with_capacity(m.constraints.len()),
        tautologies: Vec::new(),
    };
    for (row, c) in m.constraints.iter().enumerate() {
        if c.terms.iter().any(|t| t.coef != 1 && t.coef != -1) {
            return Err(ClauseError::NonClausal { row });
        }
        if c.is_tautology() {
            cs.tautologies.push(row);
            continue;
        }
        if c.rhs != 1 - c.negative_count() as i32 {
            return Err(ClauseError::NonClausal { row });
        }
        if c.terms.is_empty() {
            return Err(ClauseError::Empty { row });
        }
        let lits = c
            .terms
            .iter()
            .map(|t| Lit {
                var: t.var,
                positive: t.coef > 0,
            })
            .collect();
        cs.clauses.push(Clause { lits });
        cs.origin.push(row);
    }
    Ok(cs)
}

/// Search limits. The interrupt hook is polled every few hundred nodes; the
/// std side uses it for wall-clock deadlines.
#[derive(Clone, Copy, Default)]
pub struct Budget<'a> {
    pub node_limit: Option<u64>,
    pub interrupt: Option<&'a dyn Fn() -> bool>,
}

impl fmt::Debug for Budget<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Budget")
            .field("node_limit", &self.node_limit)
            .field("interrupt", &self.interrupt.is_some())
            .finish()
    }
}

impl<'a> Budget<'a> {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(limit: u64) -> Self {
        Budget {
            node_limit: Some(limit),
            interrupt: None,
        }
    }
}

const INTERRUPT_POLL: u64 = 256;
const UNASSIGNED: i8 = -1;

struct Conflict;

struct Search<'c, 'b> {
    cs: &'c ClauseSet,
    budget: Budget<'b>,
    /// `(clause, literal is positive)` for every occurrence of a variable.
    occurs: Vec<Vec<(u32, bool)>>,
    value: Vec<i8>,
    trail: Vec<u32>,
    sat: Vec<u32>,
    open: Vec<u32>,
    unsat: usize,
    trues: usize,
    units: Vec<u32>,
    best: Option<Vec<bool>>,
    best_value: usize,
    stats: SolveStats,
    timed_out: bool,
    // scratch
    stamp: Vec<u64>,
    epoch: u64,
    score: Vec<u32>,
    candidates: Vec<(u32, u32)>,
}

impl<'c, 'b> Search<'c, 'b> {
    fn new(cs: &'c ClauseSet, budget: Budget<'b>) -> Self {
        let n = cs.num_vars;
        let mut occurs = vec![Vec::new(); n];
        for (c, clause) in cs.clauses.iter().enumerate() {
            for lit in &clause.lits {
                occurs[lit.var as usize].push((c as u32, lit.positive));
            }
        }
        Search {
            cs,
            budget,
            occurs,
            value: vec![UNASSIGNED; n],
            trail: Vec::with_capacity(n),
            sat: vec![0; cs.clauses.len()],
            open: cs.clauses.iter().map(|c| c.lits.len() as u32).collect(),
            unsat: cs.clauses.len(),
            trues: 0,
            units: Vec::new(),
            best: None,
            best_value: n + 1,
            stats: SolveStats::default(),
            timed_out: false,
            stamp: vec![0; n],
            epoch: 0,
            score: vec![0; n],
            candidates: Vec::new(),
        }
    }

    fn assign(&mut self, var: u32, val: bool) -> Result<(), Conflict> {
        debug_assert_eq!(self.value[var as usize], UNASSIGNED);
        self.value[var as usize] = val as i8;
        self.trail.push(var);
        if val {
            self.trues += 1;
        }
        let mut conflict = false;
        for &(c, positive) in &self.occurs[var as usize] {
            let c = c as usize;
            self.open[c] -= 1;
            if positive == val {
                self.sat[c] += 1;
                if self.sat[c] == 1 {
                    self.unsat -= 1;
                }
            } else if self.sat[c] == 0 {
                match self.open[c] {
                    0 => conflict = true,
                    1 => self.units.push(c as u32),
                    _ => {}
                }
            }
        }
        if conflict {
            Err(Conflict)
        } else {
            Ok(())
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().expect("trail longer than mark");
            let val = self.value[var as usize] == 1;
            if val {
                self.trues -= 1;
            }
            for &(c, positive) in &self.occurs[var as usize] {
                let c = c as usize;
                self.open[c] += 1;
                if positive == val {
                    self.sat[c] -= 1;
                    if self.sat[c] == 0 {
                        self.unsat += 1;
                    }
                }
            }
            self.value[var as usize] = UNASSIGNED;
        }
    }

    fn propagate(&mut self) -> Result<(), Conflict> {
        while let Some(c) = self.units.pop() {
            let c = c as usize;
            if self.sat[c] > 0 {
                continue;
            }
            if self.open[c] == 0 {
                self.units.clear();
                return Err(Conflict);
            }
            let lit = *self.cs.clauses[c]
                .lits
                .iter()
                .find(|l| self.value[l.var as usize] == UNASSIGNED)
                .expect("open count says one literal is unassigned");
            self.stats.propagations += 1;
            if self.assign(lit.var, lit.positive).is_err() {
                self.units.clear();
                return Err(Conflict);
            }
        }
        Ok(())
    }

    fn decide(&mut self, var: u32, val: bool) -> Result<(), Conflict> {
        self.units.clear();
        self.assign(var, val)?;
        self.propagate()
    }

    fn record(&mut self) {
        if self.trues < self.best_value {
            self.best_value = self.trues;
            self.best = Some(self.value.iter().map(|&v| v == 1).collect());
        }
    }

    fn lit_is_open(&self, lit: &Lit) -> bool {
        self.value[lit.var as usize] == UNASSIGNED
    }

    /// Size of a greedy variable-disjoint packing of unsatisfied clauses
    /// whose open literals are all positive; shorter clauses first.
    fn packing_bound(&mut self) -> usize {
        self.candidates.clear();
        for (c, clause) in self.cs.clauses.iter().enumerate() {
            if self.sat[c] > 0 {
                continue;
            }
            if clause
                .lits
                .iter()
                .any(|l| !l.positive && self.lit_is_open(l))
            {
                continue;
            }
            self.candidates.push((self.open[c], c as u32));
        }
        self.candidates.sort_unstable();
        self.epoch += 1;
        let mut bound = 0;
        for &(_, c) in &self.candidates {
            let lits = &self.cs.clauses[c as usize].lits;
            let open = || {
                lits.iter()
                    .filter(|l| self.value[l.var as usize] == UNASSIGNED)
            };
            if open().all(|l| self.stamp[l.var as usize] != self.epoch) {
                for l in lits
                    .iter()
                    .filter(|l| self.value[l.var as usize] == UNASSIGNED)
                {
                    self.stamp[l.var as usize] = self.epoch;
                }
                bound += 1;
            }
        }
        bound
    }

    /// Unassigned variable occurring most often in unsatisfied clauses;
    /// ties go to the lowest id.
    fn branch_var(&mut self) -> Option<u32> {
        self.score.iter_mut().for_each(|s| *s = 0);
        for (c, clause) in self.cs.clauses.iter().enumerate() {
            if self.sat[c] > 0 {
                continue;
            }
            for l in &clause.lits {
                if self.value[l.var as usize] == UNASSIGNED {
                    self.score[l.var as usize] += 1;
                }
            }
        }
        let mut pick: Option<(u32, u32)> = None;
        for (v, &s) in self.score.iter().enumerate() {
            if s > 0 && pick.is_none_or(|(_, best)| s > best) {
                pick = Some((v as u32, s));
            }
        }
        pick.map(|(v, _)| v)
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(limit) = self.budget.node_limit {
            if self.stats.nodes >= limit {
                return true;
            }
        }
        if let Some(stop) = self.budget.interrupt {
            if self.stats.nodes.is_multiple_of(INTERRUPT_POLL) && stop() {
                return true;
            }
        }
        false
    }

    fn search(&mut self) {
        if self.out_of_budget() {
            self.timed_out = true;
            return;
        }
        self.stats.nodes += 1;
        if self.unsat == 0 {
            self.record();
            return;
        }
        if self.trues + self.packing_bound() >= self.best_value {
            return;
        }
        let Some(var) = self.branch_var() else {
            // every unsatisfied clause has an open literal after propagation
            unreachable!("unsatisfied clause without open literals");
        };
        for val in [false, true] {
            let mark = self.trail.len();
            if self.decide(var, val).is_ok() {
                self.search();
            }
            self.undo_to(mark);
            if self.timed_out {
                return;
            }
        }
    }

    /// Root-level units. `Err` means the clause set is unsatisfiable.
    fn root(&mut self) -> Result<(), Conflict> {
        if self.open.contains(&0) {
            return Err(Conflict);
        }
        self.units = (0..self.cs.clauses.len() as u32)
            .filter(|&c| self.open[c as usize] == 1)
            .collect();
        self.propagate()
    }

    /// Greedy cover: repeatedly set true the variable that satisfies the most
    /// unsatisfied clauses as a positive literal, then propagate.
    fn greedy(&mut self) -> Option<Vec<bool>> {
        let mark = self.trail.len();
        let result = loop {
            if self.unsat == 0 {
                break Some(self.value.iter().map(|&v| v == 1).collect());
            }
            self.score.iter_mut().for_each(|s| *s = 0);
            for (c, clause) in self.cs.clauses.iter().enumerate() {
                if self.sat[c] > 0 {
                    continue;
                }
                for l in clause.lits.iter().filter(|l| l.positive) {
                    if self.value[l.var as usize] == UNASSIGNED {
                        self.score[l.var as usize] += 1;
                    }
                }
            }
            let mut pick: Option<(u32, u32)> = None;
            for (v, &s) in self.score.iter().enumerate() {
                if s > 0 && pick.is_none_or(|(_, best)| s > best) {
                    pick = Some((v as u32, s));
                }
            }
            let Some((var, _)) = pick else { break None };
            if self.decide(var, true).is_err() {
                break None;
            }
        };
        self.units.clear();
        self.undo_to(mark);
        result
    }
}

/// Minimizes the number of true variables subject to `cs`.
///
/// With an unlimited budget the result is `Optimal` (or `Infeasible`) and
/// the reported value is proven minimal. Identical inputs give identical
/// witnesses.
pub fn solve(cs: &ClauseSet, budget: Budget<'_>) -> SolveResult {
    let mut s = Search::new(cs, budget);
    let n = cs.num_vars;
    if s.root().is_err() {
        return SolveResult {
            status: SolveStatus::Infeasible,
            value: None,
            witness: VertexSet::empty(n),
            stats: s.stats,
        };
    }
    let incumbent = s.greedy().or_else(|| {
        let all = vec![true; n];
        let ok = cs.clauses.iter().all(|c| c.lits.iter().any(|l| l.positive));
        ok.then_some(all)
    });
    if let Some(mask) = incumbent {
        s.best_value = mask.iter().filter(|&&b| b).count();
        s.best = Some(mask);
    }
    s.search();

    let status = if s.timed_out {
        SolveStatus::Timeout
    } else if s.best.is_some() {
        SolveStatus::Optimal
    } else {
        SolveStatus::Infeasible
    };
    let (value, witness) = match s.best {
        Some(mask) => (Some(s.best_value), VertexSet::from_mask(&mask)),
        None => (None, VertexSet::empty(n)),
    };
    SolveResult {
        status,
        value,
        witness,
        stats: s.stats,
    }
}

/// Evaluates every row of `m` at the indicator vector of `s`.
pub fn verify_witness(m: &LinearModel, s: &VertexSet) -> bool {
    s.universe() == m.num_vars() && m.is_feasible(&s.mask())
}
