use crate::domination::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SolveStatus {
    /// The search (or enumeration) finished; `value` is proven minimal.
    Optimal,
    /// No assignment satisfies the model.
    Infeasible,
    /// The budget ran out; `value`/`witness` hold the best incumbent, if any.
    Timeout,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveStats {
    /// Search nodes (decisions) for the solver, subsets checked for the oracle.
    pub nodes: u64,
    pub propagations: u64,
}

/// Outcome of a minimization: the solver and the oracle both report this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub value: Option<usize>,
    /// Vertex indices set to 1; empty when there is no incumbent.
    pub witness: VertexSet,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}
