//! Generalized interlinked cycle structures: validation of the
//! (k, n1)-GIC properties, the tree-based vector selection, and the
//! matching encoder/decoder.
//!
//! An inner set V_I is valid when each inner vertex reaches at least
//! `n1 - k - 1` other inner vertices along paths that avoid the rest of
//! V_I, and the union D of the per-root path trees has two properties:
//! every cycle of D meets V_I at least twice, and each ordered inner pair
//! has a unique inner-avoiding path in D. Those two properties are what
//! make the shared non-inner vertices consistent across trees, so the
//! telescoped subtree sums cancel during decoding.

use crate::gf::{self, FieldMatrix, Gf, GfError};
use crate::graph::{SideInfoGraph, VertexSet};
use crate::lps::{BoundValue, BoundsError};
use crate::rat::{rint, rone};
use crate::simplex::{self, Direction, LpProblem, LpStatus, Sense};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Per-pair search budget for path enumeration.
const PATH_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GicViolation {
    EmptyInner,
    /// Root reaches too few inner targets through inner-avoiding paths.
    LeafCount { root: usize, found: usize, required: usize },
    /// Property (a): a cycle of D with fewer than two inner vertices.
    CycleThroughFewInner { witness: Vec<usize> },
    /// Property (b): two distinct inner-avoiding paths between a pair.
    DuplicatePath { from: usize, to: usize },
    /// A chosen tree is not actually a tree (a vertex with two parents).
    TreeShape { root: usize, vertex: usize },
    /// A supplied tree uses an edge missing from the graph.
    NotAnEdge { from: usize, to: usize },
    /// A supplied tree has an inner vertex as an internal node.
    InnerInternal { root: usize, vertex: usize },
    PathBudgetExceeded { from: usize, to: usize },
}

impl fmt::Display for GicViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GicViolation::EmptyInner => write!(f, "inner vertex set is empty"),
            GicViolation::LeafCount { root, found, required } => write!(
                f,
                "inner vertex {root} reaches only {found} inner targets, needs {required}"
            ),
            GicViolation::CycleThroughFewInner { witness } => {
                write!(f, "cycle {witness:?} in D has fewer than two inner vertices")
            }
            GicViolation::DuplicatePath { from, to } => {
                write!(f, "two inner-avoiding paths from {from} to {to} in D")
            }
            GicViolation::TreeShape { root, vertex } => {
                write!(f, "tree rooted at {root} gives vertex {vertex} two parents")
            }
            GicViolation::NotAnEdge { from, to } => {
                write!(f, "tree edge {from} -> {to} is not an arc of the graph")
            }
            GicViolation::InnerInternal { root, vertex } => {
                write!(f, "inner vertex {vertex} is internal in the tree rooted at {root}")
            }
            GicViolation::PathBudgetExceeded { from, to } => {
                write!(f, "path enumeration budget exceeded between {from} and {to}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum GicError {
    Violation(GicViolation),
    Gf(GfError),
    MessageLength { expected: usize, found: usize },
    /// A broadcast vertex's mixing vector vanished, so its symbol carries
    /// no information about its own message.
    DegenerateVector { vertex: usize },
    Uncovered { vertex: usize },
    Bounds(Box<BoundsError>),
    Json(String),
}

impl fmt::Display for GicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GicError::Violation(v) => write!(f, "invalid GIC structure: {v}"),
            GicError::Gf(e) => write!(f, "{e}"),
            GicError::MessageLength { expected, found } => {
                write!(f, "expected {expected} messages, found {found}")
            }
            GicError::DegenerateVector { vertex } => {
                write!(f, "vertex {vertex} has a zero mixing vector; structure not decodable")
            }
            GicError::Uncovered { vertex } => {
                write!(f, "vertex {vertex} is not covered by the structure")
            }
            GicError::Bounds(e) => write!(f, "{e}"),
            GicError::Json(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for GicError {}

impl From<GicViolation> for GicError {
    fn from(v: GicViolation) -> Self {
        GicError::Violation(v)
    }
}

impl From<GfError> for GicError {
    fn from(e: GfError) -> Self {
        GicError::Gf(e)
    }
}

/// A rooted out-tree within the host graph, as a parent map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    pub root: usize,
    /// `parent[v] = Some(u)` iff the tree has edge u -> v.
    pub parent: Vec<Option<usize>>,
    pub members: VertexSet,
    /// Inner vertices reached (the leaves that matter).
    pub targets: VertexSet,
}

impl Tree {
    fn children(&self, v: usize) -> Vec<usize> {
        (0..self.parent.len()).filter(|&w| self.parent[w] == Some(v)).collect()
    }

    /// Members of the subtree rooted at `v` (including `v`).
    pub fn subtree(&self, v: usize) -> VertexSet {
        let mut out = VertexSet::singleton(v);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for c in self.children(x) {
                if !out.contains(c) {
                    out.insert(c);
                    stack.push(c);
                }
            }
        }
        out
    }
}

/// A validated (k, n1)-GIC structure over a host graph.
#[derive(Debug, Clone)]
pub struct GicStructure {
    pub n: usize,
    pub inner: VertexSet,
    pub k: usize,
    /// One tree per inner vertex, in ascending root order.
    pub trees: Vec<Tree>,
    /// Union digraph D of all trees.
    pub d_adj: Vec<VertexSet>,
    /// Vertices served by this structure: V(D), always including inner.
    pub covered: VertexSet,
}

impl GicStructure {
    pub fn n_inner(&self) -> usize {
        self.inner.len()
    }

    /// Broadcast symbols this structure costs:
    /// `(k+1) + sum over covered non-inner of min(|N(v,D)|, k+1)`.
    pub fn rate(&self) -> usize {
        let mut total = self.k + 1;
        for v in self.covered.minus(self.inner).iter() {
            total += self.d_adj[v].len().min(self.k + 1);
        }
        total
    }

    fn tree_of(&self, root: usize) -> &Tree {
        let idx = self.inner.iter().position(|v| v == root).unwrap();
        &self.trees[idx]
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Lexicographically smallest path from `from` to `to` whose internal
/// vertices avoid `forbidden`, if any; respects the search budget.
fn lex_min_path(
    g: &SideInfoGraph,
    from: usize,
    to: usize,
    forbidden: VertexSet,
    budget: &mut usize,
) -> Result<Option<Vec<usize>>, GicViolation> {
    fn dfs(
        g: &SideInfoGraph,
        cur: usize,
        to: usize,
        forbidden: VertexSet,
        path: &mut Vec<usize>,
        budget: &mut usize,
    ) -> Result<Option<Vec<usize>>, ()> {
        if *budget == 0 {
            return Err(());
        }
        *budget -= 1;
        for next in g.out(cur).iter() {
            if next == to {
                let mut done = path.clone();
                done.push(to);
                return Ok(Some(done));
            }
            if forbidden.contains(next) || path.contains(&next) {
                continue;
            }
            path.push(next);
            if let Some(found) = dfs(g, next, to, forbidden, path, budget)? {
                return Ok(Some(found));
            }
            path.pop();
        }
        Ok(None)
    }
    let mut path = vec![from];
    dfs(g, from, to, forbidden, &mut path, budget)
        .map_err(|_| GicViolation::PathBudgetExceeded { from, to })
}

/// Counts inner-avoiding paths between two inner vertices inside the
/// digraph `adj`, stopping at 2.
fn count_paths_in_d(
    adj: &[VertexSet],
    from: usize,
    to: usize,
    inner: VertexSet,
    budget: &mut usize,
) -> Result<usize, GicViolation> {
    fn dfs(
        adj: &[VertexSet],
        cur: usize,
        to: usize,
        inner: VertexSet,
        seen: &mut VertexSet,
        count: &mut usize,
        budget: &mut usize,
    ) -> Result<(), ()> {
        if *budget == 0 {
            return Err(());
        }
        *budget -= 1;
        for next in adj[cur].iter() {
            if next == to {
                *count += 1;
                if *count >= 2 {
                    return Ok(());
                }
                continue;
            }
            if inner.contains(next) || seen.contains(next) {
                continue;
            }
            seen.insert(next);
            dfs(adj, next, to, inner, seen, count, budget)?;
            seen.remove(next);
            if *count >= 2 {
                return Ok(());
            }
        }
        Ok(())
    }
    let mut count = 0;
    let mut seen = VertexSet::singleton(from);
    dfs(adj, from, to, inner, &mut seen, &mut count, budget)
        .map_err(|_| GicViolation::PathBudgetExceeded { from, to })?;
    Ok(count)
}

/// Validates a candidate inner set: builds per-root trees as unions of the
/// lexicographically smallest inner-avoiding paths, then machine-checks
/// the leaf-count requirement and Digraph Properties (a) and (b) on the
/// tree union.
pub fn validate_gic(
    g: &SideInfoGraph,
    inner: VertexSet,
    k: usize,
) -> Result<GicStructure, GicViolation> {
    if inner.is_empty() {
        return Err(GicViolation::EmptyInner);
    }
    let n1 = inner.len();
    let required = (n1 as i64 - k as i64 - 1).max(0) as usize;

    let mut trees = Vec::new();
    for root in inner.iter() {
        let forbidden = inner; // internal vertices must avoid all of V_I
        let mut parent: Vec<Option<usize>> = vec![None; g.n()];
        let mut members = VertexSet::singleton(root);
        let mut targets = VertexSet::EMPTY;
        for target in inner.iter() {
            if target == root {
                continue;
            }
            let mut budget = PATH_BUDGET;
            if let Some(path) = lex_min_path(g, root, target, forbidden, &mut budget)? {
                targets.insert(target);
                for w in path.windows(2) {
                    let (u, v) = (w[0], w[1]);
                    match parent[v] {
                        None => parent[v] = Some(u),
                        Some(prev) if prev == u => {}
                        Some(_) => return Err(GicViolation::TreeShape { root, vertex: v }),
                    }
                    members.insert(v);
                }
            }
        }
        if targets.len() < required {
            return Err(GicViolation::LeafCount { root, found: targets.len(), required });
        }
        trees.push(Tree { root, parent, members, targets });
    }
    check_structure(g, inner, k, trees)
}

/// Shared property checks over explicit trees (from construction or JSON).
fn check_structure(
    g: &SideInfoGraph,
    inner: VertexSet,
    k: usize,
    trees: Vec<Tree>,
) -> Result<GicStructure, GicViolation> {
    let n = g.n();
    let n1 = inner.len();
    let required = (n1 as i64 - k as i64 - 1).max(0) as usize;

    let mut d_adj: Vec<VertexSet> = vec![VertexSet::EMPTY; n];
    let mut covered = inner;
    for tree in &trees {
        if tree.targets.len() < required {
            return Err(GicViolation::LeafCount {
                root: tree.root,
                found: tree.targets.len(),
                required,
            });
        }
        for v in 0..n {
            if let Some(u) = tree.parent[v] {
                if !g.has_arc(u, v) {
                    return Err(GicViolation::NotAnEdge { from: u, to: v });
                }
                if inner.contains(v) && v != tree.root && !tree.children(v).is_empty() {
                    return Err(GicViolation::InnerInternal { root: tree.root, vertex: v });
                }
                d_adj[u].insert(v);
                covered.insert(u);
                covered.insert(v);
            }
        }
    }

    // Property (b): unique inner-avoiding path per ordered inner pair.
    for from in inner.iter() {
        for to in inner.iter() {
            if from == to {
                continue;
            }
            let mut budget = PATH_BUDGET;
            if count_paths_in_d(&d_adj, from, to, inner, &mut budget)? >= 2 {
                return Err(GicViolation::DuplicatePath { from, to });
            }
        }
    }

    // Property (a), split into its two checkable parts: D restricted to the
    // non-inner vertices is acyclic, and no cycle returns to a single
    // inner vertex while avoiding the rest of V_I.
    if let Some(cycle) = directed_cycle_in(&d_adj, covered.minus(inner)) {
        return Err(GicViolation::CycleThroughFewInner { witness: cycle });
    }
    for v in inner.iter() {
        let mut budget = PATH_BUDGET;
        let mut others = inner;
        others.remove(v);
        // A cycle through v avoiding other inner vertices is an
        // inner-avoiding path from v to itself.
        if count_paths_in_d(&d_adj, v, v, others, &mut budget)? >= 1 {
            return Err(GicViolation::CycleThroughFewInner { witness: vec![v] });
        }
    }

    Ok(GicStructure { n, inner, k, trees, d_adj, covered })
}

/// Some directed cycle within the induced vertex set, if any.
fn directed_cycle_in(adj: &[VertexSet], s: VertexSet) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut state = vec![0u8; n]; // 0 white, 1 gray, 2 black
    let mut parent = vec![usize::MAX; n];
    fn dfs(
        adj: &[VertexSet],
        s: VertexSet,
        v: usize,
        state: &mut [u8],
        parent: &mut [usize],
    ) -> Option<(usize, usize)> {
        state[v] = 1;
        for w in adj[v].intersect(s).iter() {
            match state[w] {
                1 => return Some((v, w)),
                0 => {
                    parent[w] = v;
                    if let Some(hit) = dfs(adj, s, w, state, parent) {
                        return Some(hit);
                    }
                }
                _ => {}
            }
        }
        state[v] = 2;
        None
    }
    for start in s.iter() {
        if state[start] == 0 {
            if let Some((v, w)) = dfs(adj, s, start, &mut state, &mut parent) {
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
// Vector selection and the codec
// ---------------------------------------------------------------------------

/// Per-vertex mixing vectors: inner vertices take the columns of an
/// `[n1, k+1]`-MDS matrix; non-inner vertices of D accumulate the negative
/// sum of their D-out-neighbors in reverse topological order.
pub fn select_mixing_vectors(
    s: &GicStructure,
    p: u64,
    seed: u64,
) -> Result<Vec<Option<Vec<u64>>>, GicError> {
    let field = Gf::new(p)?;
    let n1 = s.n_inner();
    let rows = s.k + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mds = if rows == n1 {
        FieldMatrix::identity(field, n1)
    } else if rows == 1 {
        FieldMatrix::from_rows(field, &[vec![1; n1]])
    } else {
        gf::mds_matrix(n1, rows, p, &mut rng)?
    };
    let mut vectors: Vec<Option<Vec<u64>>> = vec![None; s.n];
    for (idx, v) in s.inner.iter().enumerate() {
        vectors[v] = Some(mds.col(idx));
    }
    // Reverse topological order over D without inner vertices.
    let mut pending: Vec<usize> = s.covered.minus(s.inner).to_vec();
    while !pending.is_empty() {
        let pos = pending
            .iter()
            .position(|&v| s.d_adj[v].iter().all(|w| vectors[w].is_some()))
            .expect("D minus inner is acyclic, so some vertex is ready");
        let v = pending.swap_remove(pos);
        let mut acc = vec![0u64; rows];
        for w in s.d_adj[v].iter() {
            let uw = vectors[w].as_ref().unwrap();
            for (r, &x) in uw.iter().enumerate() {
                acc[r] = field.add(acc[r], x);
            }
        }
        vectors[v] = Some(acc.iter().map(|&x| field.neg(x)).collect());
    }
    Ok(vectors)
}

/// The broadcast of one encoding round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GicBroadcast {
    /// The inner mix, k+1 symbols.
    pub w_inner: Vec<u64>,
    /// Per covered non-inner vertex, its symbols (ascending vertex order).
    pub w_relay: Vec<(usize, Vec<u64>)>,
}

impl GicBroadcast {
    pub fn symbol_count(&self) -> usize {
        self.w_inner.len() + self.w_relay.iter().map(|(_, w)| w.len()).sum::<usize>()
    }
}

/// Encodes one message per vertex (full-length slice; only covered entries
/// are read).
pub fn gic_encode(
    s: &GicStructure,
    vectors: &[Option<Vec<u64>>],
    messages: &[u64],
    p: u64,
) -> Result<GicBroadcast, GicError> {
    let field = Gf::new(p)?;
    if messages.len() != s.n {
        return Err(GicError::MessageLength { expected: s.n, found: messages.len() });
    }
    let rows = s.k + 1;
    let mut w_inner = vec![0u64; rows];
    for v in s.inner.iter() {
        let uv = vectors[v].as_ref().ok_or(GicError::Uncovered { vertex: v })?;
        for (r, &c) in uv.iter().enumerate() {
            w_inner[r] = field.add(w_inner[r], field.mul(c, messages[v]));
        }
    }
    let mut w_relay = Vec::new();
    for v in s.covered.minus(s.inner).iter() {
        let neigh = s.d_adj[v];
        let deg = neigh.len();
        let w = if deg >= rows {
            // Mixed form: sum of u_c (x_v + x_c) over D-neighbors.
            let mut acc = vec![0u64; rows];
            for c in neigh.iter() {
                let uc = vectors[c].as_ref().ok_or(GicError::Uncovered { vertex: c })?;
                let m = field.add(messages[v], messages[c]);
                for (r, &x) in uc.iter().enumerate() {
                    acc[r] = field.add(acc[r], field.mul(x, m));
                }
            }
            acc
        } else {
            // Plain form: x_v + x_c per D-neighbor.
            neigh.iter().map(|c| field.add(messages[v], messages[c])).collect()
        };
        w_relay.push((v, w));
    }
    Ok(GicBroadcast { w_inner, w_relay })
}

/// Decodes every covered vertex's own message using only the broadcast,
/// the public vectors, and that vertex's side information.
pub fn gic_decode(
    s: &GicStructure,
    g: &SideInfoGraph,
    vectors: &[Option<Vec<u64>>],
    broadcast: &GicBroadcast,
    messages: &[u64],
    p: u64,
) -> Result<Vec<Option<u64>>, GicError> {
    let field = Gf::new(p)?;
    let rows = s.k + 1;
    let relay_w: std::collections::HashMap<usize, &Vec<u64>> =
        broadcast.w_relay.iter().map(|(v, w)| (*v, w)).collect();

    // Side information view: x_w readable only when w in N(v, g).
    let side = |v: usize, w: usize| -> Option<u64> {
        if g.out(v).contains(w) {
            Some(messages[w])
        } else {
            None
        }
    };

    // w'_l in F^{k+1} for every covered non-inner l, computable by anyone.
    let mut w_prime_map: std::collections::HashMap<usize, Vec<u64>> = Default::default();
    for v in s.covered.minus(s.inner).iter() {
        let w = relay_w[&v];
        let deg = s.d_adj[v].len();
        let wp = if deg >= rows {
            w.clone()
        } else {
            // [u_{c1} ... u_{cr}] * w
            let mut acc = vec![0u64; rows];
            for (j, c) in s.d_adj[v].iter().enumerate() {
                let uc = vectors[c].as_ref().ok_or(GicError::Uncovered { vertex: c })?;
                for (r, &x) in uc.iter().enumerate() {
                    acc[r] = field.add(acc[r], field.mul(x, w[j]));
                }
            }
            acc
        };
        w_prime_map.insert(v, wp);
    }

    let mut recovered: Vec<Option<u64>> = vec![None; s.n];

    // Non-inner vertices: strip their D-neighborhood side information.
    for v in s.covered.minus(s.inner).iter() {
        let w = relay_w[&v];
        let deg = s.d_adj[v].len();
        if deg < rows {
            let first = s.d_adj[v].min_elem().ok_or(GicError::DegenerateVector { vertex: v })?;
            let known = side(v, first).ok_or(GicError::Uncovered { vertex: v })?;
            recovered[v] = Some(field.sub(w[0], known));
        } else {
            // w - sum u_c x_c = (-u_v) x_v.
            let mut residual = w.clone();
            for c in s.d_adj[v].iter() {
                let uc = vectors[c].as_ref().unwrap();
                let xc = side(v, c).ok_or(GicError::Uncovered { vertex: v })?;
                for (r, &x) in uc.iter().enumerate() {
                    residual[r] = field.sub(residual[r], field.mul(x, xc));
                }
            }
            let uv = vectors[v].as_ref().unwrap();
            let coord = uv.iter().position(|&x| x != 0).ok_or(GicError::DegenerateVector {
                vertex: v,
            })?;
            let inv = field.inv(field.neg(uv[coord]));
            recovered[v] = Some(field.mul(residual[coord], inv));
        }
    }

    // Inner vertices: telescoped subtree sums cancel the far leaves.
    for v in s.inner.iter() {
        let tree = s.tree_of(v);
        let mut y = broadcast.w_inner.clone();
        for child in tree.children(v) {
            if s.inner.contains(child) {
                // Direct inner target: side information.
                let xc = side(v, child).ok_or(GicError::Uncovered { vertex: v })?;
                let uc = vectors[child].as_ref().unwrap();
                for (r, &x) in uc.iter().enumerate() {
                    y[r] = field.sub(y[r], field.mul(x, xc));
                }
            } else {
                // Subtract w(child), the telescoped sum of w' over the
                // subtree's non-inner part; this cancels every far-leaf
                // term of w_inner and leaves +u_child x_child behind.
                for l in tree.subtree(child).minus(s.inner).iter() {
                    let wp = &w_prime_map[&l];
                    for r in 0..rows {
                        y[r] = field.sub(y[r], wp[r]);
                    }
                }
                // Strip that known +u_child x_child term.
                let xc = side(v, child).ok_or(GicError::Uncovered { vertex: v })?;
                let uc = vectors[child].as_ref().unwrap();
                for (r, &x) in uc.iter().enumerate() {
                    y[r] = field.sub(y[r], field.mul(x, xc));
                }
            }
        }
        // Remaining unknowns: v itself plus the non-target inner vertices.
        let mut unknowns = vec![v];
        let mut rest = s.inner;
        rest.remove(v);
        for f in rest.minus(tree.targets).iter() {
            unknowns.push(f);
        }
        let cols: Vec<Vec<u64>> =
            unknowns.iter().map(|&u| vectors[u].as_ref().unwrap().clone()).collect();
        let mat = FieldMatrix::from_cols(field, rows, &cols);
        let sol = mat.solve(&y).ok_or(GicError::DegenerateVector { vertex: v })?;
        recovered[v] = Some(sol[0]);
    }
    Ok(recovered)
}

// ---------------------------------------------------------------------------
// Cover bound and candidates
// ---------------------------------------------------------------------------

/// Fractional cover of the host graph by candidate structures: minimizes
/// total weighted rate subject to covering every vertex. Rate-1 singleton
/// structures are added automatically so the cover is always feasible.
pub fn gic_cover_bound(
    g: &SideInfoGraph,
    candidates: &[GicStructure],
) -> Result<BoundValue, GicError> {
    let n = g.n();
    let mut p = LpProblem::new(Direction::Min);
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in candidates.iter().enumerate() {
        let var = p.add_unit_var(format!("s{i}"));
        p.set_objective_coeff(var, rint(s.rate() as i64)).map_err(bounds_err)?;
        for v in s.covered.iter() {
            per_vertex[v].push(var);
        }
    }
    for v in 0..n {
        let var = p.add_unit_var(format!("v{v}"));
        p.set_objective_coeff(var, rone()).map_err(bounds_err)?;
        per_vertex[v].push(var);
    }
    for vars in &per_vertex {
        p.add_constraint(vars.iter().map(|&c| (c, rone())).collect(), Sense::Ge, rone())
            .map_err(bounds_err)?;
    }
    let sol = simplex::solve(&p).map_err(bounds_err)?;
    if sol.status != LpStatus::Optimal {
        return Err(GicError::Bounds(Box::new(BoundsError::NotOptimal {
            what: "gic_cover_bound",
            status: sol.status,
        })));
    }
    Ok(BoundValue::new("gic", sol.value.clone(), true, Some(sol)))
}

fn bounds_err(e: crate::simplex::LpError) -> GicError {
    GicError::Bounds(Box::new(e.into()))
}

/// Whole-graph candidate with inner = all vertices: the smallest k whose
/// structure validates, if any.
pub fn whole_graph_gic(g: &SideInfoGraph) -> Option<GicStructure> {
    (0..g.n()).find_map(|k| validate_gic(g, g.vertices(), k).ok())
}

/// Expresses a whole-graph GIC scheme as a standard code certificate: the
/// broadcast is linear in the messages, so each vertex gets the column of
/// its message's coefficients across w_inner and every relay block. The
/// certificate then goes through the ordinary rank/decode verifier.
pub fn gic_certificate(
    g: &SideInfoGraph,
    s: &GicStructure,
    p: u64,
    seed: u64,
) -> Result<crate::code::CodeCertificate, GicError> {
    if s.covered != g.vertices() {
        let vertex = g.vertices().minus(s.covered).min_elem().unwrap();
        return Err(GicError::Uncovered { vertex });
    }
    let field = Gf::new(p)?;
    let vectors = select_mixing_vectors(s, p, seed)?;
    let rows = s.k + 1;
    let relays: Vec<usize> = s.covered.minus(s.inner).to_vec();
    let height = s.rate();

    let mut cols: Vec<Vec<u64>> = vec![vec![0u64; height]; s.n];
    // w_inner block: inner vertex v contributes its own vector.
    for v in s.inner.iter() {
        let uv = vectors[v].as_ref().unwrap();
        cols[v][..rows].copy_from_slice(uv);
    }
    let mut offset = rows;
    for &j in &relays {
        let neigh = s.d_adj[j];
        let deg = neigh.len();
        if deg >= rows {
            // Mixed block: x_j enters with sum of u_c = -u_j, x_c with u_c.
            let uj = vectors[j].as_ref().unwrap();
            for (r, &x) in uj.iter().enumerate() {
                cols[j][offset + r] = field.neg(x);
            }
            for c in neigh.iter() {
                let uc = vectors[c].as_ref().unwrap();
                for (r, &x) in uc.iter().enumerate() {
                    cols[c][offset + r] = field.add(cols[c][offset + r], x);
                }
            }
            offset += rows;
        } else {
            // Plain block: one symbol x_j + x_c per D-neighbor.
            for (idx, c) in neigh.iter().enumerate() {
                cols[j][offset + idx] = 1;
                cols[c][offset + idx] = field.add(cols[c][offset + idx], 1);
            }
            offset += deg;
        }
    }
    debug_assert_eq!(offset, height);

    let cert = crate::code::CodeCertificate {
        modulus: p,
        n: s.n,
        vectors_per_vertex: 1,
        height,
        vectors: cols.into_iter().map(|c| vec![c]).collect(),
        rate: rint(height as i64),
        scheme: "gic".to_string(),
        seed,
        verified: false,
    };
    Ok(cert)
}

/// Seeded generator of small mixed instances: an inner set wired by direct
/// edges plus one or two relay vertices with disjoint in/out inner sets,
/// each ordered inner pair connected at most once. Returns a validated
/// structure covering the whole graph, or None when the draw is unusable.
pub fn random_relay_instance(seed: u64) -> Option<(SideInfoGraph, GicStructure)> {
    use rand::rngs::StdRng;
    use rand::Rng;
    let mut rng = StdRng::seed_from_u64(seed);
    let n1 = rng.random_range(3..=5usize);
    let relays = rng.random_range(1..=2usize);
    let n = n1 + relays;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut pair_used = std::collections::HashSet::new();
    for r in 0..relays {
        let rv = n1 + r;
        let a = rng.random_range(0..n1);
        let mut b = rng.random_range(0..n1);
        while b == a {
            b = rng.random_range(0..n1);
        }
        let mut outs = vec![b];
        if n1 >= 4 && rng.random_bool(0.6) {
            let mut c = rng.random_range(0..n1);
            while c == a || c == b {
                c = rng.random_range(0..n1);
            }
            outs.push(c);
        }
        let mut ins = vec![a];
        if rng.random_bool(0.5) {
            if let Some(x) = (0..n1).find(|x| !outs.contains(x) && !ins.contains(x)) {
                ins.push(x);
            }
        }
        if ins.iter().any(|&i| outs.iter().any(|&o| pair_used.contains(&(i, o)))) {
            continue;
        }
        for &i in &ins {
            arcs.push((i, rv));
            for &o in &outs {
                pair_used.insert((i, o));
            }
        }
        for &o in &outs {
            arcs.push((rv, o));
        }
    }
    for i in 0..n1 {
        for j in 0..n1 {
            if i != j && !pair_used.contains(&(i, j)) && rng.random_bool(0.5) {
                arcs.push((i, j));
                pair_used.insert((i, j));
            }
        }
    }
    let g = SideInfoGraph::new(n, &arcs).ok()?;
    let inner = VertexSet::full(n1);
    for r in n1..n {
        if g.out(r).is_empty() || !(0..n).any(|v| g.has_arc(v, r)) {
            return None;
        }
    }
    let targets_min = (0..n1)
        .map(|i| {
            let direct = g.out(i).intersect(inner).len();
            let via: usize = (n1..n)
                .filter(|&r| g.has_arc(i, r))
                .map(|r| g.out(r).intersect(inner).minus(VertexSet::singleton(i)).len())
                .sum();
            direct + via
        })
        .min()
        .unwrap();
    if targets_min == 0 {
        return None;
    }
    let k = n1 - 1 - targets_min;
    let s = validate_gic(&g, inner, k).ok()?;
    if s.covered != g.vertices() {
        return None;
    }
    Some((g, s))
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// JSON form, 1-based like the `.sig` format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GicJson {
    pub inner: Vec<usize>,
    pub k: usize,
    pub trees: Vec<TreeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeJson {
    pub root: usize,
    /// (vertex, parent) pairs, 1-based.
    pub parents: Vec<(usize, usize)>,
}

impl GicStructure {
    pub fn to_json(&self) -> GicJson {
        GicJson {
            inner: self.inner.iter().map(|v| v + 1).collect(),
            k: self.k,
            trees: self
                .trees
                .iter()
                .map(|t| TreeJson {
                    root: t.root + 1,
                    parents: (0..t.parent.len())
                        .filter_map(|v| t.parent[v].map(|u| (v + 1, u + 1)))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds and re-validates a structure from its JSON form.
    pub fn from_json(g: &SideInfoGraph, json: &GicJson) -> Result<GicStructure, GicError> {
        let n = g.n();
        let to_idx = |v: usize| -> Result<usize, GicError> {
            if v == 0 || v > n {
                return Err(GicError::Json(format!("vertex {v} out of range 1..={n}")));
            }
            Ok(v - 1)
        };
        let mut inner = VertexSet::EMPTY;
        for &v in &json.inner {
            inner.insert(to_idx(v)?);
        }
        if json.trees.len() != inner.len() {
            return Err(GicError::Json(format!(
                "expected {} trees (one per inner vertex), found {}",
                inner.len(),
                json.trees.len()
            )));
        }
        let mut trees = Vec::new();
        let mut roots_seen = VertexSet::EMPTY;
        for tj in &json.trees {
            let root = to_idx(tj.root)?;
            if !inner.contains(root) || roots_seen.contains(root) {
                return Err(GicError::Json(format!("bad or duplicate tree root {}", tj.root)));
            }
            roots_seen.insert(root);
            let mut parent: Vec<Option<usize>> = vec![None; n];
            let mut members = VertexSet::singleton(root);
            for &(v, u) in &tj.parents {
                let v = to_idx(v)?;
                let u = to_idx(u)?;
                if parent[v].is_some() {
                    return Err(GicError::Violation(GicViolation::TreeShape { root, vertex: v }));
                }
                parent[v] = Some(u);
                members.insert(v);
                members.insert(u);
            }
            if parent[root].is_some() {
                return Err(GicError::Json(format!("tree root {} has a parent", tj.root)));
            }
            // Reachability from the root along parent edges.
            let mut targets = VertexSet::EMPTY;
            for v in members.iter() {
                if v == root {
                    continue;
                }
                let mut cur = v;
                let mut hops = 0;
                loop {
                    match parent[cur] {
                        Some(u) => {
                            cur = u;
                            hops += 1;
                            if cur == root {
                                break;
                            }
                            if hops > n {
                                return Err(GicError::Json(format!(
                                    "tree rooted at {} has a parent cycle at vertex {}",
                                    root + 1,
                                    v + 1
                                )));
                            }
                        }
                        None => {
                            return Err(GicError::Json(format!(
                                "vertex {} is not connected to root {}",
                                v + 1,
                                root + 1
                            )))
                        }
                    }
                }
                if inner.contains(v) {
                    targets.insert(v);
                }
            }
            trees.push(Tree { root, parent, members, targets });
        }
        trees.sort_by_key(|t| t.root);
        check_structure(g, inner, json.k, trees).map_err(GicError::Violation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn roundtrip(g: &SideInfoGraph, s: &GicStructure, p: u64, tuples: usize, seed: u64) {
        let vectors = select_mixing_vectors(s, p, seed).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..tuples {
            let messages: Vec<u64> = (0..g.n()).map(|_| rng.random_range(0..p)).collect();
            let broadcast = gic_encode(s, &vectors, &messages, p).unwrap();
            assert_eq!(broadcast.symbol_count(), s.rate());
            let rec = gic_decode(s, g, &vectors, &broadcast, &messages, p).unwrap();
            for v in s.covered.iter() {
                assert_eq!(rec[v], Some(messages[v]), "vertex {v} failed to decode");
            }
        }
    }

    #[test]
    fn directed_cycles_validate_with_k_n_minus_2() {
        for n in 3..=7 {
            let g = gen::directed_cycle(n);
            let s = validate_gic(&g, g.vertices(), n - 2).unwrap();
            assert_eq!(s.rate(), n - 1);
            roundtrip(&g, &s, 11, 20, 42);
        }
    }

    #[test]
    fn cliques_validate_with_k_0() {
        for n in 2..=6 {
            let g = gen::clique(n);
            let s = validate_gic(&g, g.vertices(), 0).unwrap();
            assert_eq!(s.rate(), 1);
            roundtrip(&g, &s, 13, 20, 7);
        }
    }

    #[test]
    fn clique_scheme_works_over_gf2() {
        // Negation is the identity over GF(2); the k = 0 construction only
        // needs a single all-ones row, so p = 2 is admissible there.
        for n in 2..=6 {
            let g = gen::clique(n);
            let s = validate_gic(&g, g.vertices(), 0).unwrap();
            roundtrip(&g, &s, 2, 20, 21);
        }
    }

    #[test]
    fn directed_3_cycle_with_k_0_fails_leaf_count() {
        let g = gen::directed_cycle(3);
        match validate_gic(&g, g.vertices(), 0) {
            Err(GicViolation::LeafCount { found: 1, required: 2, .. }) => {}
            other => panic!("expected leaf-count violation, got {other:?}"),
        }
    }

    #[test]
    fn relay_structure_with_shared_non_inner() {
        // Inner {0,1,2,3}; relay 4 carries 0,1 -> 4 -> 2,3; plus direct
        // edges among the remaining inner pairs.
        let arcs = vec![
            (0, 4),
            (1, 4),
            (4, 2),
            (4, 3),
            (2, 0),
            (2, 1),
            (3, 0),
            (3, 1),
            (0, 1),
            (1, 0),
            (2, 3),
            (3, 2),
        ];
        let g = SideInfoGraph::new(5, &arcs).unwrap();
        let inner = VertexSet::from_iter([0, 1, 2, 3]);
        let s = validate_gic(&g, inner, 0).unwrap();
        assert_eq!(s.covered, g.vertices());
        // u_4 = -(u_2 + u_3) per the selection rule.
        let vectors = select_mixing_vectors(&s, 11, 3).unwrap();
        let f = Gf::new(11).unwrap();
        let u2 = vectors[2].as_ref().unwrap();
        let u3 = vectors[3].as_ref().unwrap();
        let u4 = vectors[4].as_ref().unwrap();
        for r in 0..u4.len() {
            assert_eq!(u4[r], f.neg(f.add(u2[r], u3[r])));
        }
        roundtrip(&g, &s, 11, 30, 5);
    }

    #[test]
    fn duplicate_path_is_a_property_b_violation() {
        // T_0 routes 0->4->2 for target 2, and T_2 routes 2->4->1; the
        // union then carries a second 0 -> 1 path (0->4->1) next to the
        // chosen 0->3->1, violating path uniqueness in D.
        let arcs =
            vec![(0, 3), (3, 1), (0, 4), (4, 2), (2, 4), (4, 1), (2, 0), (1, 0), (1, 2)];
        let g = SideInfoGraph::new(5, &arcs).unwrap();
        let inner = VertexSet::from_iter([0, 1, 2]);
        match validate_gic(&g, inner, 0) {
            Err(GicViolation::DuplicatePath { .. }) => {}
            other => panic!("expected duplicate-path violation, got {other:?}"),
        }
    }

    #[test]
    fn parallel_relays_in_g_are_fine_when_one_is_chosen() {
        let arcs = vec![(0, 2), (2, 1), (0, 3), (3, 1), (1, 0)];
        let g = SideInfoGraph::new(4, &arcs).unwrap();
        let inner = VertexSet::from_iter([0, 1]);
        let s = validate_gic(&g, inner, 0).unwrap();
        // Lex-min path goes through relay 2; relay 3 stays uncovered.
        assert!(s.covered.contains(2) && !s.covered.contains(3));
        roundtrip(&g, &s, 11, 20, 9);
    }

    #[test]
    fn relay_cycle_violates_property_a() {
        // The trees are forced to be 0 -> 2 -> 3 -> 1 and 1 -> 3 -> 2 -> 0,
        // whose union has the all-relay cycle 2 -> 3 -> 2.
        let arcs = vec![(0, 2), (2, 3), (3, 1), (1, 3), (3, 2), (2, 0)];
        let g = SideInfoGraph::new(4, &arcs).unwrap();
        let inner = VertexSet::from_iter([0, 1]);
        match validate_gic(&g, inner, 0) {
            Err(GicViolation::CycleThroughFewInner { .. }) => {}
            other => panic!("expected property (a) violation, got {other:?}"),
        }
    }

    #[test]
    fn cover_bound_examples() {
        let k4 = gen::clique(4);
        let s = whole_graph_gic(&k4).unwrap();
        assert_eq!(s.k, 0);
        let bound = gic_cover_bound(&k4, &[s]).unwrap();
        assert_eq!(bound.value, rone());

        // Two disjoint directed 3-cycles: candidates are the two cycles.
        let mut arcs = Vec::new();
        for i in 0..3 {
            arcs.push((i, (i + 1) % 3));
            arcs.push((3 + i, 3 + (i + 1) % 3));
        }
        let g = SideInfoGraph::new(6, &arcs).unwrap();
        let left = validate_gic(&g, VertexSet::from_iter([0, 1, 2]), 1).unwrap();
        let right = validate_gic(&g, VertexSet::from_iter([3, 4, 5]), 1).unwrap();
        let bound = gic_cover_bound(&g, &[left, right]).unwrap();
        assert_eq!(bound.value, rint(4));

        let empty = gen::empty(3);
        let bound = gic_cover_bound(&empty, &[]).unwrap();
        assert_eq!(bound.value, rint(3));
    }

    #[test]
    fn gic_certificates_verify_under_the_standard_checker() {
        for n in 3..=6 {
            let g = gen::directed_cycle(n);
            let s = validate_gic(&g, g.vertices(), n - 2).unwrap();
            let mut cert = gic_certificate(&g, &s, 11, 4).unwrap();
            let verdict = crate::code::verify_certificate(&g, &cert, 20, 4).unwrap();
            assert!(verdict.passed(), "C_{n}: {verdict}");
            cert.verified = true;
            assert_eq!(cert.rate, rint(n as i64 - 1));
        }
        let k4 = gen::clique(4);
        let s = validate_gic(&k4, k4.vertices(), 0).unwrap();
        let cert = gic_certificate(&k4, &s, 7, 1).unwrap();
        assert!(crate::code::verify_certificate(&k4, &cert, 20, 1).unwrap().passed());
        assert_eq!(cert.rate, rone());

        let mut rng = StdRng::seed_from_u64(88);
        let mut checked = 0;
        for _ in 0..30 {
            if let Some((g, s)) = random_relay_instance(rng.random()) {
                let cert = gic_certificate(&g, &s, 13, rng.random()).unwrap();
                let verdict = crate::code::verify_certificate(&g, &cert, 20, 3).unwrap();
                assert!(verdict.passed(), "{verdict}");
                checked += 1;
            }
        }
        assert!(checked >= 15);
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let g = gen::directed_cycle(5);
        let s = validate_gic(&g, g.vertices(), 3).unwrap();
        let json = s.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: GicJson = serde_json::from_str(&text).unwrap();
        let s2 = GicStructure::from_json(&g, &parsed).unwrap();
        assert_eq!(s2.inner, s.inner);
        assert_eq!(s2.k, s.k);
        assert_eq!(s2.rate(), s.rate());

        // Tampered JSON: broken tree edge.
        let mut bad = json.clone();
        bad.trees[0].parents[0].1 = 3; // 1-based vertex 3 is not the parent
        assert!(GicStructure::from_json(&g, &bad).is_err());
    }

    #[test]
    fn subtree_consistency_across_trees() {
        // Lemma check: a shared non-inner vertex has the same D-out-set and
        // the same subtree leaves in every tree containing it.
        let mut rng = StdRng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..50 {
            if let Some((g, s)) = random_relay_instance(rng.random()) {
                for v in s.covered.minus(s.inner).iter() {
                    let holding: Vec<&Tree> =
                        s.trees.iter().filter(|t| t.members.contains(v)).collect();
                    for pair in holding.windows(2) {
                        let leaves_a = pair[0].subtree(v).intersect(s.inner);
                        let leaves_b = pair[1].subtree(v).intersect(s.inner);
                        assert_eq!(leaves_a, leaves_b, "leaf sets differ for shared vertex {v}");
                        let ch_a: Vec<usize> = pair[0].children(v);
                        let ch_b: Vec<usize> = pair[1].children(v);
                        assert_eq!(ch_a, ch_b, "out-neighborhoods differ for shared vertex {v}");
                        checked += 1;
                    }
                }
                let _ = g;
            }
        }
        assert!(checked > 0, "no shared non-inner vertices were generated");
    }

    #[test]
    fn random_relay_instances_roundtrip() {
        let mut rng = StdRng::seed_from_u64(2);
        let mut built = 0;
        for _ in 0..40 {
            if let Some((g, s)) = random_relay_instance(rng.random()) {
                roundtrip(&g, &s, 13, 10, rng.random());
                built += 1;
            }
        }
        assert!(built >= 20, "only {built} instances generated");
    }

}
