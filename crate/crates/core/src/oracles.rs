//! Exact combinatorial oracles on small graphs: independence number, MAIS,
//! chromatic and clique numbers, clique enumeration, triangle packing and
//! GF(2) minrank.
//!
//! Everything here is exact; when an instance exceeds the configured limit
//! the oracle refuses with an error instead of approximating.

use crate::graph::{GraphError, SideInfoGraph, VertexSet};
use std::collections::HashMap;
use std::fmt;

/// Size limits for the exhaustive oracles. Exceeding a limit is an error,
/// never a silent approximation.
#[derive(Debug, Clone)]
pub struct OracleLimits {
    pub independence: usize,
    pub mais: usize,
    pub coloring: usize,
    /// Maximum number of free matrix entries for the minrank search.
    pub minrank_entries: usize,
    /// Maximum number of cliques an enumeration may produce.
    pub clique_budget: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            independence: 24,
            mais: 20,
            coloring: 24,
            minrank_entries: 22,
            clique_budget: 2_000_000,
        }
    }
}

impl OracleLimits {
    /// Uniform override used by the CLI's `ICX_ORACLE_LIMIT`.
    pub fn with_uniform_limit(n: usize) -> Self {
        OracleLimits {
            independence: n,
            mais: n,
            coloring: n,
            ..OracleLimits::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    SizeLimit { op: &'static str, n: usize, limit: usize },
    Budget { op: &'static str, budget: usize },
    Graph(GraphError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::SizeLimit { op, n, limit } => {
                write!(f, "{op}: instance size {n} exceeds the exact-oracle limit {limit}")
            }
            OracleError::Budget { op, budget } => {
                write!(f, "{op}: enumeration budget of {budget} exceeded")
            }
            OracleError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<GraphError> for OracleError {
    fn from(e: GraphError) -> Self {
        OracleError::Graph(e)
    }
}

fn require_undirected(g: &SideInfoGraph, op: &'static str) -> Result<(), OracleError> {
    if !g.is_undirected() {
        return Err(OracleError::Graph(GraphError::DirectedInput { op }));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Independence number
// ---------------------------------------------------------------------------

/// Exact maximum independent set size. Independence means no arc in either
/// direction between members, so a directed graph is symmetrized first.
pub fn independence_number(g: &SideInfoGraph, limits: &OracleLimits) -> Result<usize, OracleError> {
    if g.n() > limits.independence {
        return Err(OracleError::SizeLimit {
            op: "independence_number",
            n: g.n(),
            limit: limits.independence,
        });
    }
    let adj = g.symmetric_adj();
    let mut best = 0;
    mis_branch(&adj, g.vertices(), 0, &mut best);
    Ok(best)
}

fn mis_branch(adj: &[VertexSet], cand: VertexSet, cur: usize, best: &mut usize) {
    if cur + cand.len() <= *best {
        return;
    }
    let Some(v) = cand.iter().max_by_key(|&v| adj[v].intersect(cand).len()) else {
        *best = (*best).max(cur);
        return;
    };
    // Branch: take v (dropping its closed neighborhood) or discard it.
    let mut with_v = cand.minus(adj[v]);
    with_v.remove(v);
    mis_branch(adj, with_v, cur + 1, best);
    let mut without = cand;
    without.remove(v);
    mis_branch(adj, without, cur, best);
}

// ---------------------------------------------------------------------------
// Maximum acyclic induced subgraph
// ---------------------------------------------------------------------------

/// Exact MAIS: the largest vertex set inducing no directed cycle.
/// Bidirected edges count as 2-cycles. Always >= the independence number.
pub fn mais(g: &SideInfoGraph, limits: &OracleLimits) -> Result<usize, OracleError> {
    if g.n() > limits.mais {
        return Err(OracleError::SizeLimit { op: "mais", n: g.n(), limit: limits.mais });
    }
    let mut best = 0;
    let mut seen: HashMap<u64, ()> = HashMap::new();
    mais_branch(g, g.vertices(), &mut best, &mut seen);
    Ok(best)
}

fn mais_branch(g: &SideInfoGraph, s: VertexSet, best: &mut usize, seen: &mut HashMap<u64, ()>) {
    if s.len() <= *best {
        return;
    }
    if seen.insert(s.bits(), ()).is_some() {
        return;
    }
    match find_cycle(g, s) {
        None => *best = (*best).max(s.len()),
        Some(cycle) => {
            // Every acyclic subset of s omits at least one cycle vertex.
            for v in cycle {
                let mut t = s;
                t.remove(v);
                mais_branch(g, t, best, seen);
            }
        }
    }
}

/// Finds some directed cycle inside the induced subgraph on `s`.
fn find_cycle(g: &SideInfoGraph, s: VertexSet) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    let n = g.n();
    let mut mark = vec![Mark::White; n];
    let mut parent = vec![usize::MAX; n];

    fn dfs(
        g: &SideInfoGraph,
        s: VertexSet,
        v: usize,
        mark: &mut [Mark],
        parent: &mut [usize],
    ) -> Option<(usize, usize)> {
        mark[v] = Mark::Gray;
        for w in g.out(v).intersect(s).iter() {
            match mark[w] {
                Mark::Gray => return Some((v, w)),
                Mark::White => {
                    parent[w] = v;
                    if let Some(hit) = dfs(g, s, w, mark, parent) {
                        return Some(hit);
                    }
                }
                Mark::Black => {}
            }
        }
        mark[v] = Mark::Black;
        None
    }

    for start in s.iter() {
        if mark[start] == Mark::White {
            if let Some((v, w)) = dfs(g, s, start, &mut mark, &mut parent) {
                // Back edge v -> w closes the cycle w -> ... -> v.
                let mut cycle = vec![v];
                let mut cur = v;
                while cur != w {
                    cur = parent[cur];
                    cycle.push(cur);
                }
                return Some(cycle);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Coloring
// ---------------------------------------------------------------------------

/// Exact chromatic number of an undirected graph.
pub fn chromatic_number(g: &SideInfoGraph, limits: &OracleLimits) -> Result<usize, OracleError> {
    Ok(chromatic_coloring(g, limits)?.0)
}

/// Exact chromatic number together with a witnessing proper coloring.
pub fn chromatic_coloring(
    g: &SideInfoGraph,
    limits: &OracleLimits,
) -> Result<(usize, Vec<usize>), OracleError> {
    require_undirected(g, "chromatic_number")?;
    if g.n() > limits.coloring {
        return Err(OracleError::SizeLimit {
            op: "chromatic_number",
            n: g.n(),
            limit: limits.coloring,
        });
    }
    let n = g.n();
    if g.arc_count() == 0 {
        return Ok((usize::from(n > 0), vec![0; n]));
    }
    let adj = g.symmetric_adj();
    // Iterative deepening from a greedy clique lower bound.
    let lb = greedy_clique(&adj, n).len().max(2);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    for k in lb..=n {
        let mut colors = vec![usize::MAX; n];
        if try_color(&adj, &order, 0, k, 0, &mut colors) {
            return Ok((k, colors));
        }
    }
    unreachable!("n colors always suffice");
}

fn try_color(
    adj: &[VertexSet],
    order: &[usize],
    pos: usize,
    k: usize,
    used: usize,
    colors: &mut [usize],
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    let forbidden: u64 = adj[v]
        .iter()
        .filter(|&w| colors[w] != usize::MAX)
        .fold(0, |acc, w| acc | 1u64 << colors[w]);
    // Allowing at most one fresh color per step breaks color symmetry.
    let cap = k.min(used + 1);
    for c in 0..cap {
        if forbidden >> c & 1 == 0 {
            colors[v] = c;
            if try_color(adj, order, pos + 1, k, used.max(c + 1), colors) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}

fn greedy_clique(adj: &[VertexSet], n: usize) -> VertexSet {
    let mut best = VertexSet::EMPTY;
    for start in 0..n {
        let mut clique = VertexSet::singleton(start);
        let mut cand = adj[start];
        while let Some(v) = cand.iter().max_by_key(|&v| adj[v].intersect(cand).len()) {
            clique.insert(v);
            cand = cand.intersect(adj[v]);
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// Greedy proper coloring in descending-degree order. Not optimal, but a
/// valid coloring whose class count can stand in for the chromatic number
/// in the rounding guarantees when the exact oracle is out of reach.
pub fn greedy_coloring(g: &SideInfoGraph) -> (usize, Vec<usize>) {
    let n = g.n();
    let adj = g.symmetric_adj();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    let mut colors = vec![usize::MAX; n];
    let mut used = 0;
    for &v in &order {
        let forbidden: u64 = adj[v]
            .iter()
            .filter(|&w| colors[w] != usize::MAX)
            .fold(0, |acc, w| acc | 1u64 << colors[w]);
        let c = (0..).find(|&c| forbidden >> c & 1 == 0).unwrap();
        colors[v] = c;
        used = used.max(c + 1);
    }
    (used.max(usize::from(n > 0)), colors)
}

/// Exact clique number of an undirected graph.
pub fn clique_number(g: &SideInfoGraph, limits: &OracleLimits) -> Result<usize, OracleError> {
    require_undirected(g, "clique_number")?;
    if g.n() > limits.independence {
        return Err(OracleError::SizeLimit {
            op: "clique_number",
            n: g.n(),
            limit: limits.independence,
        });
    }
    independence_number(&g.complement(), limits)
}

// ---------------------------------------------------------------------------
// Clique enumeration
// ---------------------------------------------------------------------------

/// What a [`CliqueFamily`] enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueKind {
    /// Every clique, all sizes (singletons included).
    All,
    /// Every clique of size at most the cap (singletons included).
    UpTo(usize),
    /// Maximal cliques only.
    MaximalOnly,
}

/// A duplicate-free list of bidirected cliques of a fixed graph.
#[derive(Debug, Clone)]
pub struct CliqueFamily {
    pub cliques: Vec<VertexSet>,
    pub kind: CliqueKind,
}

impl CliqueFamily {
    /// True when the family is rich enough that covering LPs over it give
    /// exact optima: either exhaustive, or all maximal cliques (any cover
    /// weight on a clique can be moved to a maximal superset).
    pub fn exact_for_covering(&self) -> bool {
        matches!(self.kind, CliqueKind::All | CliqueKind::MaximalOnly)
    }

    /// True when packing LPs over the family are exact (needs all cliques).
    pub fn exact_for_packing(&self) -> bool {
        matches!(self.kind, CliqueKind::All)
    }
}

/// Bidirected adjacency: w is listed iff both arcs are present.
fn bidirected_adj(g: &SideInfoGraph) -> Vec<VertexSet> {
    (0..g.n())
        .map(|v| VertexSet::from_iter(g.out(v).iter().filter(|&w| g.has_arc(w, v))))
        .collect()
}

/// Enumerates every clique of size <= `cap` (`None` = unbounded), singletons
/// included. On a directed graph, cliques mean bidirected complete subgraphs.
pub fn enumerate_cliques(
    g: &SideInfoGraph,
    cap: Option<usize>,
    limits: &OracleLimits,
) -> Result<CliqueFamily, OracleError> {
    let adj = bidirected_adj(g);
    let mut cliques = Vec::new();
    let budget = limits.clique_budget;

    fn extend(
        adj: &[VertexSet],
        cur: VertexSet,
        cand: VertexSet,
        cap: Option<usize>,
        out: &mut Vec<VertexSet>,
        budget: usize,
    ) -> Result<(), OracleError> {
        if out.len() >= budget {
            return Err(OracleError::Budget { op: "enumerate_cliques", budget });
        }
        out.push(cur);
        if cap == Some(cur.len()) {
            return Ok(());
        }
        for w in cand.iter() {
            let mut next = cur;
            next.insert(w);
            let above = VertexSet::full(crate::graph::MAX_VERTICES).minus(VertexSet::full(w + 1));
            extend(adj, next, cand.intersect(adj[w]).intersect(above), cap, out, budget)?;
        }
        Ok(())
    }

    for v in 0..g.n() {
        let above = VertexSet::full(g.n()).minus(VertexSet::full(v + 1));
        extend(&adj, VertexSet::singleton(v), adj[v].intersect(above), cap, &mut cliques, budget)?;
    }
    let kind = match cap {
        None => CliqueKind::All,
        Some(k) => CliqueKind::UpTo(k),
    };
    Ok(CliqueFamily { cliques, kind })
}

/// Maximal cliques via Bron-Kerbosch with pivoting.
pub fn maximal_cliques(g: &SideInfoGraph, limits: &OracleLimits) -> Result<CliqueFamily, OracleError> {
    let adj = bidirected_adj(g);
    let mut out = Vec::new();

    fn bk(
        adj: &[VertexSet],
        r: VertexSet,
        mut p: VertexSet,
        mut x: VertexSet,
        out: &mut Vec<VertexSet>,
        budget: usize,
    ) -> Result<(), OracleError> {
        if p.is_empty() && x.is_empty() {
            if out.len() >= budget {
                return Err(OracleError::Budget { op: "maximal_cliques", budget });
            }
            out.push(r);
            return Ok(());
        }
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&u| adj[u].intersect(p).len())
            .unwrap();
        for v in p.minus(adj[pivot]).to_vec() {
            let mut r2 = r;
            r2.insert(v);
            bk(adj, r2, p.intersect(adj[v]), x.intersect(adj[v]), out, budget)?;
            p.remove(v);
            x.insert(v);
        }
        Ok(())
    }

    bk(&adj, VertexSet::EMPTY, g.vertices(), VertexSet::EMPTY, &mut out, limits.clique_budget)?;
    Ok(CliqueFamily { cliques: out, kind: CliqueKind::MaximalOnly })
}

// ---------------------------------------------------------------------------
// Triangle packing
// ---------------------------------------------------------------------------

/// Greedy maximal collection of vertex-disjoint triangles, deterministic in
/// lexicographic vertex order. Maximality (no triangle among the unused
/// vertices) is re-verified before returning.
pub fn maximal_triangle_packing(g: &SideInfoGraph) -> Result<Vec<VertexSet>, OracleError> {
    require_undirected(g, "maximal_triangle_packing")?;
    let n = g.n();
    let adj = g.symmetric_adj();
    let mut used = VertexSet::EMPTY;
    let mut packing = Vec::new();
    for a in 0..n {
        if used.contains(a) {
            continue;
        }
        'seek: for b in adj[a].minus(used).iter() {
            if b <= a {
                continue;
            }
            for c in adj[a].intersect(adj[b]).minus(used).iter() {
                if c <= b {
                    continue;
                }
                packing.push(VertexSet::from_iter([a, b, c]));
                used.insert(a);
                used.insert(b);
                used.insert(c);
                break 'seek;
            }
        }
    }
    debug_assert!(triangle_free(&adj, g.vertices().minus(used)));
    Ok(packing)
}

/// True iff the induced subgraph on `s` has no triangle.
pub fn triangle_free(adj: &[VertexSet], s: VertexSet) -> bool {
    for a in s.iter() {
        for b in adj[a].intersect(s).iter() {
            if b > a && !adj[a].intersect(adj[b]).intersect(s).minus(VertexSet::full(b + 1)).is_empty()
            {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Minrank over GF(2)
// ---------------------------------------------------------------------------

/// Minimum rank over GF(2) of a matrix fitting the graph: ones on the
/// diagonal, free entries exactly at the arcs, zero elsewhere. Equals the
/// best scalar-linear index coding rate over GF(2).
pub fn minrank_gf2(g: &SideInfoGraph, limits: &OracleLimits) -> Result<usize, OracleError> {
    let free = g.arc_count();
    if free > limits.minrank_entries {
        return Err(OracleError::Budget { op: "minrank_gf2", budget: limits.minrank_entries });
    }
    let n = g.n();
    let mut best = n;
    let mut basis: Vec<u64> = Vec::new();
    minrank_branch(g, 0, &mut basis, &mut best);
    Ok(best)
}

/// Reduces `row` against the current echelon basis.
fn reduce_row(row: u64, basis: &[u64]) -> u64 {
    let mut r = row;
    for &b in basis {
        let lead = 63 - b.leading_zeros();
        if r >> lead & 1 == 1 {
            r ^= b;
        }
    }
    r
}

fn minrank_branch(g: &SideInfoGraph, i: usize, basis: &mut Vec<u64>, best: &mut usize) {
    if basis.len() >= *best {
        return;
    }
    let n = g.n();
    if i == n {
        *best = basis.len();
        return;
    }
    let fixed = 1u64 << i;
    let free_bits: Vec<usize> = g.out(i).to_vec();
    // Gray-code sweep over the free entries of row i; rows that fall in the
    // current span first (they cannot increase the rank).
    for want_dependent in [true, false] {
        let mut row = fixed;
        for step in 0u64..(1u64 << free_bits.len()) {
            if step > 0 {
                let flip = step.trailing_zeros() as usize;
                row ^= 1u64 << free_bits[flip];
            }
            let residual = reduce_row(row, basis);
            if (residual == 0) == want_dependent {
                if residual == 0 {
                    minrank_branch(g, i + 1, basis, best);
                } else {
                    basis.push(residual);
                    minrank_branch(g, i + 1, basis, best);
                    basis.pop();
                }
            }
        }
    }
}
