//! Dominating, weakly convex and convex vertex sets, and the brute-force
//! minimum oracle used as ground truth for the model/solver path.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{DistanceMatrix, Graph};
use crate::result::{SolveResult, SolveStats, SolveStatus};

/// Default vertex-count ceiling for [`oracle_minimum`].
pub const DEFAULT_ORACLE_LIMIT: usize = 20;

/// A set of vertex indices over a universe `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    members: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexSetError {
    /// An index is not below the universe size.
    OutOfRange(usize),
    /// An external label is not a vertex of the graph.
    UnknownLabel(u32),
}

impl fmt::Display for VertexSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexSetError::OutOfRange(i) => write!(f, "vertex index {i} is out of range"),
            VertexSetError::UnknownLabel(l) => write!(f, "vertex {l} is not in the graph"),
        }
    }
}

impl core::error::Error for VertexSetError {}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            members: Vec::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet {
            universe,
            members: (0..universe as u32).collect(),
        }
    }

    /// Duplicates are merged.
    pub fn from_indices(
        universe: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self, VertexSetError> {
        let mut members = Vec::new();
        for i in indices {
            if i >= universe {
                return Err(VertexSetError::OutOfRange(i));
            }
            members.push(i as u32);
        }
        members.sort_unstable();
        members.dedup();
        Ok(VertexSet { universe, members })
    }

    /// Builds a set from external vertex labels of `g`.
    pub fn from_labels(
        g: &Graph,
        labels: impl IntoIterator<Item = u32>,
    ) -> Result<Self, VertexSetError> {
        let indices = labels
            .into_iter()
            .map(|l| g.index_of(l).ok_or(VertexSetError::UnknownLabel(l)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(g.n(), indices)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u32);
        VertexSet {
            universe: mask.len(),
            members: members.collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&(v as u32)).is_ok()
    }

    /// Member indices, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&v| v as usize)
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &v in &self.members {
            mask[v as usize] = true;
        }
        mask
    }

    /// Members as external labels of `g`, ascending.
    pub fn labels(&self, g: &Graph) -> Vec<u32> {
        self.iter().map(|v| g.label(v)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DominationKind {
    Plain,
    WeaklyConvex,
    Convex,
}

impl DominationKind {
    pub const ALL: [DominationKind; 3] = [
        DominationKind::Plain,
        DominationKind::WeaklyConvex,
        DominationKind::Convex,
    ];

    /// Whether `s` is a dominating set with this kind's extra property.
    pub fn accepts(self, g: &Graph, dm: &DistanceMatrix, s: &VertexSet) -> bool {
        let mask = s.mask();
        let members: Vec<usize> = s.iter().collect();
        Checker::new(g, dm).accepts(self, &members, &mask)
    }
}

/// True iff every vertex is in `s` or adjacent to a member of `s`.
pub fn is_dominating(g: &Graph, s: &VertexSet) -> bool {
    dominating_mask(g, &s.mask())
}

/// True iff every pair of members is joined by a shortest path of `g` that
/// stays inside `s`, checked by comparing BFS distances in the induced
/// subgraph against `dm`.
pub fn is_weakly_convex(g: &Graph, dm: &DistanceMatrix, s: &VertexSet) -> bool {
    let members: Vec<usize> = s.iter().collect();
    Checker::new(g, dm).weakly_convex(&members, &s.mask())
}

/// True iff `s` contains the geodesic interval of every pair of its members.
pub fn is_convex(_g: &Graph, dm: &DistanceMatrix, s: &VertexSet) -> bool {
    let members: Vec<usize> = s.iter().collect();
    convex_mask(dm, &members, &s.mask())
}

fn dominating_mask(g: &Graph, mask: &[bool]) -> bool {
    (0..g.n()).all(|v| mask[v] || g.neighbors(v).iter().any(|&u| mask[u as usize]))
}

fn convex_mask(dm: &DistanceMatrix, members: &[usize], mask: &[bool]) -> bool {
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            if dm.get(i, j) < 2 {
                continue;
            }
            if (0..dm.n()).any(|k| !mask[k] && dm.on_shortest_path(i, k, j)) {
                return false;
            }
        }
    }
    true
}

/// Scratch buffers for repeated predicate evaluation.
struct Checker<'a> {
    g: &'a Graph,
    dm: &'a DistanceMatrix,
    dist: Vec<u16>,
    queue: VecDeque<usize>,
}

impl<'a> Checker<'a> {
    fn new(g: &'a Graph, dm: &'a DistanceMatrix) -> Self {
        Checker {
            g,
            dm,
            dist: vec![u16::MAX; g.n()],
            queue: VecDeque::new(),
        }
    }

    fn accepts(&mut self, kind: DominationKind, members: &[usize], mask: &[bool]) -> bool {
        if !dominating_mask(self.g, mask) {
            return false;
        }
        match kind {
            DominationKind::Plain => true,
            DominationKind::WeaklyConvex => self.weakly_convex(members, mask),
            DominationKind::Convex => convex_mask(self.dm, members, mask),
        }
    }

    fn weakly_convex(&mut self, members: &[usize], mask: &[bool]) -> bool {
        // the last member has every pair covered by earlier sources
        for (a, &source) in members
            .iter()
            .enumerate()
            .take(members.len().saturating_sub(1))
        {
            for &v in members {
                self.dist[v] = u16::MAX;
            }
            self.dist[source] = 0;
            self.queue.clear();
            self.queue.push_back(source);
            while let Some(u) = self.queue.pop_front() {
                let next = self.dist[u] + 1;
                for &w in self.g.neighbors(u) {
                    let w = w as usize;
                    if mask[w] && self.dist[w] == u16::MAX {
                        self.dist[w] = next;
                        self.queue.push_back(w);
                    }
                }
            }
            if members[a + 1..]
                .iter()
                .any(|&t| self.dist[t] != self.dm.get(source, t))
            {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooLarge { n: usize, limit: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { n, limit } => write!(
                f,
                "graph has {n} vertices, brute-force oracle is limited to {limit}"
            ),
        }
    }
}

impl core::error::Error for OracleError {}

/// Minimum-cardinality set of the given kind by exhaustive enumeration.
///
/// Subsets are visited by nondecreasing size and lexicographically within a
/// size, so the first accepted subset is optimal and the witness is
/// deterministic.
pub fn oracle_minimum(
    g: &Graph,
    dm: &DistanceMatrix,
    kind: DominationKind,
    limit: usize,
) -> Result<SolveResult, OracleError> {
    let n = g.n();
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    let mut checker = Checker::new(g, dm);
    let mut mask = vec![false; n];
    let mut stats = SolveStats::default();
    for size in 1..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            for &v in &combo {
                mask[v] = true;
            }
            stats.nodes += 1;
            let accepted = checker.accepts(kind, &combo, &mask);
            for &v in &combo {
                mask[v] = false;
            }
            if accepted {
                let witness = VertexSet::from_indices(n, combo.iter().copied())
                    .expect("combination indices are below n");
                return Ok(SolveResult {
                    status: SolveStatus::Optimal,
                    value: Some(size),
                    witness,
                    stats,
                });
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    // unreachable for a connected graph: V itself is convex and dominating
    Ok(SolveResult {
        status: SolveStatus::Infeasible,
        value: None,
        witness: VertexSet::empty(n),
        stats,
    })
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(pos) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[pos] += 1;
    for i in pos + 1..k {
        combo[i] = combo[i - 1] + 1;
    }
    true
}
