//! Directed side-information graphs over at most 64 vertices, with the
//! subset operations the covering schemes are built from.
//!
//! Vertex `i` carries an arc to `j` when client `i` already knows message
//! `j`. Undirected graphs are stored as bidirected digraphs. All vertex
//! sets are `u64` bitsets, so everything here is cheap and allocation-free.

use std::fmt;

/// Hard cap on the vertex count; bitsets are single `u64` words.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    TooLarge { n: usize },
    ZeroVertices,
    VertexOutOfRange { v: usize, n: usize },
    SelfLoop { v: usize },
    EmptyVertexSet,
    DirectedInput { op: &'static str },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::TooLarge { n } => {
                write!(f, "graph has {n} vertices, the supported maximum is {MAX_VERTICES}")
            }
            GraphError::ZeroVertices => write!(f, "graph must have at least one vertex"),
            GraphError::VertexOutOfRange { v, n } => {
                write!(f, "vertex index {v} out of range for graph on {n} vertices")
            }
            GraphError::SelfLoop { v } => write!(f, "self-loop at vertex {v}"),
            GraphError::EmptyVertexSet => write!(f, "operation requires a nonempty vertex set"),
            GraphError::DirectedInput { op } => {
                write!(f, "{op} requires an undirected (bidirected) graph")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Set of vertex indices, stored as a bitmask. Iteration is in increasing
/// index order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet {
    bits: u64,
}

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet { bits: 0 };

    pub fn from_bits(bits: u64) -> Self {
        VertexSet { bits }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet { bits: 1u64 << v }
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet { bits: u64::MAX }
        } else {
            VertexSet { bits: (1u64 << n) - 1 }
        }
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.bits |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.bits &= !(1u64 << v);
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.bits >> v & 1 == 1
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet { bits: self.bits | other.bits }
    }

    pub fn intersect(self, other: VertexSet) -> VertexSet {
        VertexSet { bits: self.bits & other.bits }
    }

    pub fn minus(self, other: VertexSet) -> VertexSet {
        VertexSet { bits: self.bits & !other.bits }
    }

    pub fn min_elem(self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// Directed side-information graph. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct SideInfoGraph {
    n: usize,
    out: Vec<VertexSet>,
    undirected: bool,
}

impl fmt::Debug for SideInfoGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SideInfoGraph(n={}, arcs={:?})", self.n, self.arcs().collect::<Vec<_>>())
    }
}

impl SideInfoGraph {
    /// Builds a graph from 0-based arcs. Rejects self-loops, out-of-range
    /// indices and graphs over [`MAX_VERTICES`] vertices.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::ZeroVertices);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge { n });
        }
        let mut out = vec![VertexSet::EMPTY; n];
        for &(i, j) in arcs {
            if i >= n {
                return Err(GraphError::VertexOutOfRange { v: i, n });
            }
            if j >= n {
                return Err(GraphError::VertexOutOfRange { v: j, n });
            }
            if i == j {
                return Err(GraphError::SelfLoop { v: i });
            }
            out[i].insert(j);
        }
        Ok(Self::from_adj(n, out))
    }

    pub(crate) fn from_adj(n: usize, out: Vec<VertexSet>) -> Self {
        debug_assert_eq!(out.len(), n);
        let undirected = (0..n).all(|i| out[i].iter().all(|j| out[j].contains(i)));
        SideInfoGraph { n, out, undirected }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// True iff the arc set is symmetric.
    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        i < self.n && self.out[i].contains(j)
    }

    /// Number of arcs (an undirected edge counts twice).
    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Number of undirected edges; only meaningful when `is_undirected()`.
    pub fn edge_count(&self) -> usize {
        debug_assert!(self.undirected);
        self.arc_count() / 2
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.out[i].iter().map(move |j| (i, j)))
    }

    /// Undirected edges as `i < j` pairs; requires a bidirected graph.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        debug_assert!(self.undirected);
        self.arcs().filter(|&(i, j)| i < j)
    }

    /// Out-neighbors of `v` (the messages client `v` knows).
    pub fn out_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        Ok(self.out[v])
    }

    /// Unchecked out-neighborhood, for internal hot paths.
    pub fn out(&self, v: usize) -> VertexSet {
        self.out[v]
    }

    /// Vertices unknown to `v`: the closed non-neighborhood `V \ N(v)`,
    /// which always contains `v` itself.
    pub fn unknown_set(&self, v: usize) -> VertexSet {
        self.vertices().minus(self.out[v])
    }

    /// Directed complement: arc (i,j), i != j, present iff missing here.
    pub fn complement(&self) -> SideInfoGraph {
        let full = self.vertices();
        let out = (0..self.n)
            .map(|i| {
                let mut s = full.minus(self.out[i]);
                s.remove(i);
                s
            })
            .collect();
        SideInfoGraph::from_adj(self.n, out)
    }

    /// Subgraph induced on `s`, vertices relabeled `0..|s|` preserving order.
    pub fn induced(&self, s: VertexSet) -> Result<SideInfoGraph, GraphError> {
        if !s.is_subset_of(self.vertices()) {
            let v = s.minus(self.vertices()).min_elem().unwrap();
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        if s.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        let verts = s.to_vec();
        let out = verts
            .iter()
            .map(|&v| VertexSet::from_iter(
                verts.iter().enumerate().filter(|&(_, &w)| self.out[v].contains(w)).map(|(k, _)| k),
            ))
            .collect();
        Ok(SideInfoGraph::from_adj(verts.len(), out))
    }

    /// Partial-clique deficiency of `s`:
    /// `k_S = |s| - 1 - min_{v in s} |N(v) ∩ s|`. A bidirected clique has
    /// deficiency 0; a singleton has deficiency 0 vacuously.
    pub fn partial_clique_deficiency(&self, s: VertexSet) -> Result<usize, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        if !s.is_subset_of(self.vertices()) {
            let v = s.minus(self.vertices()).min_elem().unwrap();
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        let min_deg = s.iter().map(|v| self.out[v].intersect(s).len()).min().unwrap();
        Ok(s.len() - 1 - min_deg)
    }

    /// True iff `s` induces a bidirected clique.
    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| {
            let mut need = s;
            need.remove(v);
            need.is_subset_of(self.out[v])
        })
    }

    /// Symmetrized adjacency: `u ~ v` iff an arc exists in either direction.
    /// This is the adjacency under which independent sets are defined.
    pub fn symmetric_adj(&self) -> Vec<VertexSet> {
        let mut adj = self.out.clone();
        for i in 0..self.n {
            for j in self.out[i].iter() {
                adj[j].insert(i);
            }
        }
        adj
    }
}
