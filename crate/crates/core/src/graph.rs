//! Simple connected undirected graphs and their shortest-path structure.
//!
//! Vertices carry an external label (a positive integer taken from the input)
//! and an internal index `0..n`. Labels are kept in ascending order so the
//! internal index order agrees with the label order; every `i < j` loop over
//! indices is therefore an `i < j` loop over labels as well.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest vertex count supported; hop counts are stored as `u16`.
pub const MAX_VERTICES: usize = u16::MAX as usize;

const UNREACHED: u16 = u16::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// No vertices at all.
    Empty,
    TooManyVertices(usize),
    /// Vertex labels are positive integers.
    ZeroLabel,
    /// Edge number `edge` (0-based, in input order) is a loop.
    Loop {
        edge: usize,
        vertex: u32,
    },
    /// Edge number `edge` repeats an earlier edge.
    DuplicateEdge {
        edge: usize,
        u: u32,
        v: u32,
    },
    /// Edge number `edge` names a vertex that was not declared.
    UnknownVertex {
        edge: usize,
        vertex: u32,
    },
    /// `vertex` cannot be reached from the smallest label.
    Disconnected {
        vertex: u32,
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Empty => write!(f, "graph has no vertices"),
            GraphError::TooManyVertices(n) => {
                write!(
                    f,
                    "graph has {n} vertices, at most {MAX_VERTICES} are supported"
                )
            }
            GraphError::ZeroLabel => write!(f, "vertex ids must be positive"),
            GraphError::Loop { vertex, .. } => write!(f, "loop on vertex {vertex}"),
            GraphError::DuplicateEdge { u, v, .. } => write!(f, "duplicate edge ({u},{v})"),
            GraphError::UnknownVertex { vertex, .. } => {
                write!(f, "vertex id {vertex} is out of range")
            }
            GraphError::Disconnected { vertex } => {
                write!(f, "graph is disconnected: vertex {vertex} is unreachable")
            }
        }
    }
}

impl core::error::Error for GraphError {}

impl GraphError {
    /// Input position of the offending edge, when the error is tied to one.
    pub fn edge_index(&self) -> Option<usize> {
        match self {
            GraphError::Loop { edge, .. }
            | GraphError::DuplicateEdge { edge, .. }
            | GraphError::UnknownVertex { edge, .. } => Some(*edge),
            _ => None,
        }
    }
}

/// A simple connected undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<u32>,
    adj: Vec<Vec<u32>>,
    num_edges: usize,
}

impl Graph {
    /// Builds a graph on the given vertex labels. Labels may be sparse; they
    /// are compacted to indices `0..n` in ascending label order.
    pub fn new(
        vertices: impl IntoIterator<Item = u32>,
        edges: &[(u32, u32)],
    ) -> Result<Self, GraphError> {
        let mut labels: Vec<u32> = vertices.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(GraphError::Empty);
        }
        if labels[0] == 0 {
            return Err(GraphError::ZeroLabel);
        }
        if labels.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(labels.len()));
        }

        let n = labels.len();
        let index_of = |edge: usize, label: u32| {
            labels
                .binary_search(&label)
                .map(|i| i as u32)
                .map_err(|_| GraphError::UnknownVertex {
                    edge,
                    vertex: label,
                })
        };
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (edge, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::Loop { edge, vertex: u });
            }
            let a = index_of(edge, u)?;
            let b = index_of(edge, v)?;
            // duplicates are reported against the later occurrence
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::DuplicateEdge { edge, u, v });
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let graph = Graph {
            labels,
            adj,
            num_edges: edges.len(),
        };
        graph.check_connected()?;
        Ok(graph)
    }

    /// Builds a graph on labels `1..=n`.
    pub fn with_vertex_count(n: u32, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        Self::new(1..=n, edges)
    }

    /// Builds a graph whose vertex set is exactly the labels used by `edges`.
    pub fn from_edges(edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let labels = edges.iter().flat_map(|&(u, v)| [u, v]);
        Self::new(labels, edges)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(i) => Err(GraphError::Disconnected {
                vertex: self.labels[i],
            }),
            None => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.num_edges
    }

    /// Sorted neighbour indices of vertex index `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// External label of vertex index `v`.
    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    /// All labels, ascending (index order).
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Internal index of an external label.
    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// A 64-bit FNV-1a digest of the labelled edge set.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut hash = OFFSET;
        let mut feed = |word: u32| {
            for byte in word.to_le_bytes() {
                hash ^= u64::from(byte);
                hash = hash.wrapping_mul(PRIME);
            }
        };
        feed(self.n() as u32);
        for &label in &self.labels {
            feed(label);
        }
        for (u, v) in self.edges() {
            feed(self.labels[u]);
            feed(self.labels[v]);
        }
        hash
    }
}

/// All-pairs hop distances of a connected graph, indexed by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u16>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.d[i * self.n + j]
    }

    /// Row `i`: distances from `i` to every vertex.
    pub fn row(&self, i: usize) -> &[u16] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// True iff `k` lies on some shortest `i`-`j` path, i.e.
    /// `d(i,k) + d(k,j) == d(i,j)`.
    #[inline]
    pub fn on_shortest_path(&self, i: usize, k: usize, j: usize) -> bool {
        u32::from(self.get(i, k)) + u32::from(self.get(k, j)) == u32::from(self.get(i, j))
    }

    /// The geodesic interval `I(i,j)` in ascending index order.
    pub fn interval(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&k| self.on_shortest_path(i, k, j))
    }
}

/// Breadth-first search from every vertex; `O(n·m)` overall.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut d = vec![UNREACHED; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for source in 0..n {
        let row = &mut d[source * n..(source + 1) * n];
        row[source] = 0;
        queue.clear();
        queue.push_back(source as u32);
        while let Some(u) = queue.pop_front() {
            let next = row[u as usize] + 1;
            for &v in g.neighbors(u as usize) {
                if row[v as usize] == UNREACHED {
                    row[v as usize] = next;
                    queue.push_back(v);
                }
            }
        }
    }
    debug_assert!(!d.contains(&UNREACHED), "graph was validated as connected");
    DistanceMatrix { n, d }
}
