//! The index-coding linear programs: fractional vertex cover and matching,
//! fractional clique packing/cover, the clique-constrained independent-set
//! relaxations, fractional partial-clique cover, fractional local chromatic
//! number, the combined local–partial LP and its recursive strengthening.
//!
//! Every optimum is an exact rational. Upper-bound programs stay valid
//! achievable rates when the subset family is restricted (restriction can
//! only weaken a covering LP), and such values carry a `family_restricted`
//! flag.

use crate::graph::{GraphError, SideInfoGraph, VertexSet};
use crate::oracles::{enumerate_cliques, maximal_cliques, CliqueFamily, OracleError, OracleLimits};
use crate::rat::{rint, rone, rzero, Rat};
use crate::simplex::{self, Direction, LpError, LpProblem, LpSolution, LpStatus, Sense};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone)]
pub enum BoundsError {
    Graph(GraphError),
    Oracle(OracleError),
    Lp(LpError),
    NotOptimal { what: &'static str, status: LpStatus },
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::Graph(e) => write!(f, "{e}"),
            BoundsError::Oracle(e) => write!(f, "{e}"),
            BoundsError::Lp(e) => write!(f, "{e}"),
            BoundsError::NotOptimal { what, status } => {
                write!(f, "{what}: expected an optimal LP, got {status:?}")
            }
        }
    }
}

impl std::error::Error for BoundsError {}

impl From<GraphError> for BoundsError {
    fn from(e: GraphError) -> Self {
        BoundsError::Graph(e)
    }
}

impl From<OracleError> for BoundsError {
    fn from(e: OracleError) -> Self {
        BoundsError::Oracle(e)
    }
}

impl From<LpError> for BoundsError {
    fn from(e: LpError) -> Self {
        BoundsError::Lp(e)
    }
}

/// A named exact bound with its optional LP certificate.
#[derive(Debug, Clone)]
pub struct BoundValue {
    pub name: String,
    pub value: Rat,
    /// True when the generating family was not rich enough for the value
    /// to be the exact LP optimum over the full family. The value is still
    /// a valid bound (upper bounds stay achievable).
    pub family_restricted: bool,
    pub solution: Option<LpSolution>,
}

impl BoundValue {
    pub(crate) fn new(
        name: &str,
        value: Rat,
        family_restricted: bool,
        solution: Option<LpSolution>,
    ) -> Self {
        BoundValue { name: name.to_string(), value, family_restricted, solution }
    }
}

fn require_optimal(what: &'static str, sol: LpSolution) -> Result<LpSolution, BoundsError> {
    if sol.status != LpStatus::Optimal {
        return Err(BoundsError::NotOptimal { what, status: sol.status });
    }
    Ok(sol)
}

fn require_undirected(g: &SideInfoGraph, op: &'static str) -> Result<(), BoundsError> {
    if !g.is_undirected() {
        return Err(BoundsError::Graph(GraphError::DirectedInput { op }));
    }
    Ok(())
}

/// Variable name for the weight of a vertex subset, e.g. `r1f` for bits 0x1f.
pub fn subset_var_name(s: VertexSet) -> String {
    format!("r{:x}", s.bits())
}

/// Inverse of [`subset_var_name`].
pub fn parse_subset_var(name: &str) -> Option<VertexSet> {
    let hex = name.strip_prefix('r')?;
    u64::from_str_radix(hex, 16).ok().map(VertexSet::from_bits)
}

// ---------------------------------------------------------------------------
// Subset families
// ---------------------------------------------------------------------------

/// The partial-clique candidate sets a covering LP ranges over, with their
/// cached deficiencies. Singletons are always present, which keeps every
/// cover feasible.
#[derive(Debug, Clone)]
pub struct SubsetFamily {
    subsets: Vec<(VertexSet, usize)>,
    restricted: bool,
}

impl SubsetFamily {
    /// Every nonempty subset of the vertices. Exponential; callers keep n
    /// small (the default policy switches away above 10 vertices).
    pub fn all_subsets(g: &SideInfoGraph) -> Self {
        let n = g.n();
        assert!(n <= 20, "all-subsets family is limited to 20 vertices");
        let subsets = (1u64..(1u64 << n))
            .map(|bits| {
                let s = VertexSet::from_bits(bits);
                (s, g.partial_clique_deficiency(s).unwrap())
            })
            .collect();
        SubsetFamily { subsets, restricted: false }
    }

    /// All subsets of size <= `s_max`, all maximal cliques, all singletons.
    pub fn with_max_size(
        g: &SideInfoGraph,
        s_max: usize,
        limits: &OracleLimits,
    ) -> Result<Self, BoundsError> {
        let n = g.n();
        let mut dedup: HashMap<u64, ()> = HashMap::new();
        let mut seen: Vec<VertexSet> = Vec::new();
        let mut push = |s: VertexSet, seen: &mut Vec<VertexSet>| {
            if dedup.insert(s.bits(), ()).is_none() {
                seen.push(s);
            }
        };
        // Size-bounded subsets by recursive extension.
        fn extend(n: usize, cur: VertexSet, start: usize, left: usize, out: &mut Vec<VertexSet>) {
            if !cur.is_empty() {
                out.push(cur);
            }
            if left == 0 {
                return;
            }
            for v in start..n {
                let mut next = cur;
                next.insert(v);
                extend(n, next, v + 1, left - 1, out);
            }
        }
        let mut sized = Vec::new();
        extend(n, VertexSet::EMPTY, 0, s_max.min(n), &mut sized);
        for s in sized {
            push(s, &mut seen);
        }
        for c in maximal_cliques(g, limits)?.cliques {
            push(c, &mut seen);
        }
        for v in 0..n {
            push(VertexSet::singleton(v), &mut seen);
        }
        let subsets = seen
            .into_iter()
            .map(|s| (s, g.partial_clique_deficiency(s).unwrap()))
            .collect();
        Ok(SubsetFamily { subsets, restricted: s_max < n })
    }

    /// Default policy: all subsets up to 10 vertices, otherwise subsets of
    /// size <= 5 plus maximal cliques plus singletons.
    pub fn default_for(g: &SideInfoGraph, limits: &OracleLimits) -> Result<Self, BoundsError> {
        if g.n() <= 10 {
            Ok(Self::all_subsets(g))
        } else {
            Self::with_max_size(g, 5, limits)
        }
    }

    /// A hand-picked family; deficiencies are computed here. Singletons are
    /// added if missing.
    pub fn from_sets(g: &SideInfoGraph, sets: &[VertexSet]) -> Result<Self, BoundsError> {
        let mut all: Vec<VertexSet> = Vec::new();
        for &s in sets {
            if s.is_empty() {
                return Err(BoundsError::Graph(GraphError::EmptyVertexSet));
            }
            if !all.contains(&s) {
                all.push(s);
            }
        }
        for v in 0..g.n() {
            let s = VertexSet::singleton(v);
            if !all.contains(&s) {
                all.push(s);
            }
        }
        let full_count = if g.n() >= 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
        let restricted = (all.len() as u64) < full_count;
        let subsets = all
            .into_iter()
            .map(|s| Ok((s, g.partial_clique_deficiency(s)?)))
            .collect::<Result<_, GraphError>>()?;
        Ok(SubsetFamily { subsets, restricted })
    }

    pub fn subsets(&self) -> &[(VertexSet, usize)] {
        &self.subsets
    }

    pub fn restricted(&self) -> bool {
        self.restricted
    }
}

// ---------------------------------------------------------------------------
// FVC / FMM
// ---------------------------------------------------------------------------

/// The minimum fractional vertex cover LP, tagged for the half-integral
/// vertex check.
pub fn fvc_problem(g: &SideInfoGraph) -> Result<LpProblem, BoundsError> {
    require_undirected(g, "fvc")?;
    let mut p = LpProblem::new(Direction::Min);
    let vars: Vec<usize> = (0..g.n()).map(|v| p.add_unit_var(format!("x{v}"))).collect();
    for &v in &vars {
        p.set_objective_coeff(v, rone())?;
    }
    for (i, j) in g.edges() {
        p.add_constraint(vec![(vars[i], rone()), (vars[j], rone())], Sense::Ge, rone())?;
    }
    p.expect_half_integral_vertex = true;
    Ok(p)
}

/// The maximum fractional matching LP, the dual of [`fvc_problem`].
pub fn fmm_problem(g: &SideInfoGraph) -> Result<LpProblem, BoundsError> {
    require_undirected(g, "fmm")?;
    let mut p = LpProblem::new(Direction::Max);
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, j) in g.edges() {
        let var = p.add_unit_var(format!("y{i}_{j}"));
        p.set_objective_coeff(var, rone())?;
        per_vertex[i].push(var);
        per_vertex[j].push(var);
    }
    for vars in per_vertex.iter().filter(|v| !v.is_empty()) {
        p.add_constraint(vars.iter().map(|&v| (v, rone())).collect(), Sense::Le, rone())?;
    }
    Ok(p)
}

/// Minimum fractional vertex cover. The LP polytope has half-integral
/// vertices, which the solver verifies on the returned optimum.
pub fn fvc(g: &SideInfoGraph) -> Result<BoundValue, BoundsError> {
    let sol = require_optimal("fvc", simplex::solve(&fvc_problem(g)?)?)?;
    Ok(BoundValue::new("fvc", sol.value.clone(), false, Some(sol)))
}

/// Maximum fractional matching; the LP dual of [`fvc`], so the two agree
/// exactly on every graph.
pub fn fmm(g: &SideInfoGraph) -> Result<BoundValue, BoundsError> {
    let sol = require_optimal("fmm", simplex::solve(&fmm_problem(g)?)?)?;
    Ok(BoundValue::new("fmm", sol.value.clone(), false, Some(sol)))
}

// ---------------------------------------------------------------------------
// Clique packing / cover
// ---------------------------------------------------------------------------

// Clique weights share the subset naming so certificate builders can read
// any covering solution's support uniformly.
fn clique_var_name(s: VertexSet) -> String {
    subset_var_name(s)
}

/// Maximum fractional clique packing: max sum of `x_C (|C|-1)` under unit
/// vertex loads. Exact when the family is exhaustive; otherwise a valid
/// lower bound on FCP, flagged.
pub fn fcp(g: &SideInfoGraph, cliques: &CliqueFamily) -> Result<BoundValue, BoundsError> {
    let mut p = LpProblem::new(Direction::Max);
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for c in &cliques.cliques {
        let var = p.add_unit_var(clique_var_name(*c));
        p.set_objective_coeff(var, rint(c.len() as i64 - 1))?;
        for v in c.iter() {
            per_vertex[v].push(var);
        }
    }
    for vars in per_vertex.iter().filter(|v| !v.is_empty()) {
        p.add_constraint(vars.iter().map(|&v| (v, rone())).collect(), Sense::Le, rone())?;
    }
    let sol = require_optimal("fcp", simplex::solve(&p)?)?;
    Ok(BoundValue::new("fcp", sol.value.clone(), !cliques.exact_for_packing(), Some(sol)))
}

/// Minimum fractional clique cover. With an exhaustive (or all-maximal)
/// family this is the exact FCC, and `fcc == n - fcp` holds with
/// exhaustive cliques.
pub fn fcc(g: &SideInfoGraph, cliques: &CliqueFamily) -> Result<BoundValue, BoundsError> {
    let mut p = LpProblem::new(Direction::Min);
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for c in &cliques.cliques {
        let var = p.add_unit_var(clique_var_name(*c));
        p.set_objective_coeff(var, rone())?;
        for v in c.iter() {
            per_vertex[v].push(var);
        }
    }
    for vars in &per_vertex {
        // Cover constraints must exist for every vertex; singletons (or the
        // maximal cliques containing the vertex) keep them feasible.
        p.add_constraint(vars.iter().map(|&v| (v, rone())).collect(), Sense::Ge, rone())?;
    }
    let sol = require_optimal("fcc", simplex::solve(&p)?)?;
    Ok(BoundValue::new("fcc", sol.value.clone(), !cliques.exact_for_covering(), Some(sol)))
}

/// The clique-constrained independent set relaxation with cliques of size
/// at most `k` (`alpha_F_k`). Nonincreasing in k; with all clique sizes it
/// equals FCC by LP duality.
pub fn alpha_fk(
    g: &SideInfoGraph,
    k: usize,
    limits: &OracleLimits,
) -> Result<BoundValue, BoundsError> {
    require_undirected(g, "alpha_fk")?;
    assert!(k >= 2, "alpha_fk needs clique constraints of size at least 2");
    let cliques = enumerate_cliques(g, Some(k), limits)?;
    let mut p = LpProblem::new(Direction::Max);
    let vars: Vec<usize> = (0..g.n()).map(|v| p.add_unit_var(format!("x{v}"))).collect();
    for &v in &vars {
        p.set_objective_coeff(v, rone())?;
    }
    for c in cliques.cliques.iter().filter(|c| c.len() >= 2) {
        p.add_constraint(c.iter().map(|v| (vars[v], rone())).collect(), Sense::Le, rone())?;
    }
    // With edge constraints only, the polytope is the half-integral
    // independent-set polytope.
    p.expect_half_integral_vertex = k == 2;
    let sol = require_optimal("alpha_fk", simplex::solve(&p)?)?;
    Ok(BoundValue::new(&format!("alphaf{k}"), sol.value.clone(), false, Some(sol)))
}

// ---------------------------------------------------------------------------
// Partial-clique and local-chromatic programs
// ---------------------------------------------------------------------------

/// Fractional partial clique cover: min sum `(k_S + 1) rho_S` subject to
/// covering every vertex.
pub fn fractional_partial_clique_cover(
    g: &SideInfoGraph,
    fam: &SubsetFamily,
) -> Result<BoundValue, BoundsError> {
    let mut p = LpProblem::new(Direction::Min);
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (s, k) in fam.subsets() {
        let var = p.add_unit_var(subset_var_name(*s));
        p.set_objective_coeff(var, rint(*k as i64 + 1))?;
        for v in s.iter() {
            per_vertex[v].push(var);
        }
    }
    for vars in &per_vertex {
        p.add_constraint(vars.iter().map(|&v| (v, rone())).collect(), Sense::Ge, rone())?;
    }
    let sol = require_optimal("fpcc", simplex::solve(&p)?)?;
    Ok(BoundValue::new("fpcc", sol.value.clone(), fam.restricted(), Some(sol)))
}

/// Fractional local chromatic number of the complement, expressed through
/// cliques of `g`: minimize the worst total clique weight touching any
/// closed unknown set, subject to covering.
pub fn fractional_local_chromatic(
    g: &SideInfoGraph,
    cliques: &CliqueFamily,
) -> Result<BoundValue, BoundsError> {
    let n = g.n();
    let mut p = LpProblem::new(Direction::Min);
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in &cliques.cliques {
        let var = p.add_unit_var(subset_var_name(*c));
        for v in c.iter() {
            per_vertex[v].push(var);
        }
        for v in 0..n {
            if !c.intersect(g.unknown_set(v)).is_empty() {
                touching[v].push(var);
            }
        }
    }
    let t = p.add_var("t", rzero(), rint((n as i64 + 1) * (cliques.cliques.len() as i64 + 1)));
    p.set_objective_coeff(t, rone())?;
    for v in 0..n {
        let mut coeffs: Vec<(usize, Rat)> = touching[v].iter().map(|&c| (c, rone())).collect();
        coeffs.push((t, -rone()));
        p.add_constraint(coeffs, Sense::Le, rzero())?;
        p.add_constraint(per_vertex[v].iter().map(|&c| (c, rone())).collect(), Sense::Ge, rone())?;
    }
    let sol = require_optimal("flc", simplex::solve(&p)?)?;
    let restricted = !matches!(cliques.kind, crate::oracles::CliqueKind::All);
    Ok(BoundValue::new("flc", sol.value.clone(), restricted, Some(sol)))
}

/// The combined local–partial LP: per vertex, each selected partial clique
/// S contributes `min(|S ∩ (V \ N(v))|, k_S + 1)`, and the worst vertex
/// total is minimized subject to covering.
///
/// The intersection uses the closed unknown set `V \ N(v)` (which contains
/// `v`); the open reading would drop below MAIS on directed cycles.
pub fn local_partial_lp(
    g: &SideInfoGraph,
    fam: &SubsetFamily,
) -> Result<BoundValue, BoundsError> {
    let sol = local_partial_solution(g, fam)?;
    Ok(BoundValue::new("lp", sol.value.clone(), fam.restricted(), Some(sol)))
}

/// The raw LP solution behind [`local_partial_lp`], used by the code
/// builder, which needs the subset weights.
pub fn local_partial_solution(
    g: &SideInfoGraph,
    fam: &SubsetFamily,
) -> Result<LpSolution, BoundsError> {
    let n = g.n();
    let mut p = LpProblem::new(Direction::Min);
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut align: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); n];
    for (s, k) in fam.subsets() {
        let var = p.add_unit_var(subset_var_name(*s));
        for v in s.iter() {
            per_vertex[v].push(var);
        }
        for v in 0..n {
            let overlap = s.intersect(g.unknown_set(v)).len();
            let coeff = overlap.min(k + 1);
            if coeff > 0 {
                align[v].push((var, rint(coeff as i64)));
            }
        }
    }
    let t = p.add_var("t", rzero(), rint((n as i64 + 1) * (fam.subsets().len() as i64 + 1)));
    p.set_objective_coeff(t, rone())?;
    for v in 0..n {
        let mut coeffs = align[v].clone();
        coeffs.push((t, -rone()));
        p.add_constraint(coeffs, Sense::Le, rzero())?;
        p.add_constraint(per_vertex[v].iter().map(|&c| (c, rone())).collect(), Sense::Ge, rone())?;
    }
    require_optimal("local_partial_lp", simplex::solve(&p)?)
}

// ---------------------------------------------------------------------------
// Recursive LP
// ---------------------------------------------------------------------------

/// How subset families are generated for subgraphs inside the recursion.
#[derive(Debug, Clone, Copy)]
pub enum FamilyPolicy {
    /// Full power set of each (sub)graph.
    AllSubsets,
    /// The default size-adaptive policy.
    Auto,
    /// Subsets up to a fixed size, plus maximal cliques and singletons.
    MaxSize(usize),
}

impl FamilyPolicy {
    fn family_for(
        &self,
        g: &SideInfoGraph,
        limits: &OracleLimits,
    ) -> Result<SubsetFamily, BoundsError> {
        match self {
            FamilyPolicy::AllSubsets => Ok(SubsetFamily::all_subsets(g)),
            FamilyPolicy::Auto => SubsetFamily::default_for(g, limits),
            FamilyPolicy::MaxSize(s) => SubsetFamily::with_max_size(g, *s, limits),
        }
    }

    fn restricted_for(&self, n: usize) -> bool {
        match self {
            FamilyPolicy::AllSubsets => false,
            FamilyPolicy::Auto => n > 10,
            FamilyPolicy::MaxSize(s) => *s < n,
        }
    }
}

/// Memoized evaluation of the recursive local–partial LP. The running value
/// of a subset is the optimum of the local–partial LP whose per-subset caps
/// are the recursive values of the induced subgraphs; below `depth_cap`
/// recursion stops and the plain local–partial LP is used (still a valid
/// upper bound). Single vertices have value 1.
pub struct RecursiveLp<'a> {
    g: &'a SideInfoGraph,
    policy: FamilyPolicy,
    limits: &'a OracleLimits,
    memo: HashMap<(u64, usize), Rat>,
    lp_memo: HashMap<u64, LpSolution>,
}

impl<'a> RecursiveLp<'a> {
    pub fn new(g: &'a SideInfoGraph, policy: FamilyPolicy, limits: &'a OracleLimits) -> Self {
        RecursiveLp { g, policy, limits, memo: HashMap::new(), lp_memo: HashMap::new() }
    }

    /// Value of the whole graph at recursion depth `depth_cap >= 1`.
    pub fn value(&mut self, depth_cap: usize) -> Result<Rat, BoundsError> {
        assert!(depth_cap >= 1);
        self.subset_value(self.g.vertices(), depth_cap)
    }

    /// The LP solution at the top level (for code construction): subset
    /// weights over the family of the whole graph with recursive inner caps.
    pub fn top_solution(&mut self, depth_cap: usize) -> Result<LpSolution, BoundsError> {
        assert!(depth_cap >= 1);
        let (sol, _) = self.level_lp(self.g.vertices(), depth_cap)?;
        Ok(sol)
    }

    /// The memoized leaf-level (plain local–partial) solution for a subset;
    /// used when composing recursive certificates.
    pub fn leaf_solution(&mut self, s: VertexSet) -> Result<LpSolution, BoundsError> {
        self.local_partial_value(s)?;
        Ok(self.lp_memo.get(&s.bits()).cloned().expect("just computed"))
    }

    /// One level of the recursion as a full LP solution (subset weights over
    /// the subgraph family with recursive inner caps).
    pub fn level_solution(&mut self, s: VertexSet, depth: usize) -> Result<LpSolution, BoundsError> {
        Ok(self.level_lp(s, depth)?.0)
    }

    pub fn subset_value(&mut self, s: VertexSet, depth: usize) -> Result<Rat, BoundsError> {
        if s.len() == 1 {
            return Ok(rone());
        }
        if let Some(v) = self.memo.get(&(s.bits(), depth)) {
            return Ok(v.clone());
        }
        let value = if depth == 0 {
            self.local_partial_value(s)?
        } else {
            let (sol, _) = self.level_lp(s, depth)?;
            sol.value
        };
        self.memo.insert((s.bits(), depth), value.clone());
        Ok(value)
    }

    fn local_partial_value(&mut self, s: VertexSet) -> Result<Rat, BoundsError> {
        if let Some(sol) = self.lp_memo.get(&s.bits()) {
            return Ok(sol.value.clone());
        }
        let h = self.g.induced(s)?;
        let fam = self.policy.family_for(&h, self.limits)?;
        let sol = local_partial_solution(&h, &fam)?;
        let value = sol.value.clone();
        self.lp_memo.insert(s.bits(), sol);
        Ok(value)
    }

    /// Builds and solves one level of the recursive LP on the subgraph
    /// induced by `s`, with inner caps at `depth - 1`.
    fn level_lp(
        &mut self,
        s: VertexSet,
        depth: usize,
    ) -> Result<(LpSolution, SubsetFamily), BoundsError> {
        let verts = s.to_vec();
        let h = self.g.induced(s)?;
        let fam = self.policy.family_for(&h, self.limits)?;
        let lift = |local: VertexSet| VertexSet::from_iter(local.iter().map(|i| verts[i]));

        let n = h.n();
        let mut p = LpProblem::new(Direction::Min);
        let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut align: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); n];
        for (sub, _) in fam.subsets() {
            let inner = if sub.len() == 1 {
                rone()
            } else {
                self.subset_value(lift(*sub), depth - 1)?
            };
            let var = p.add_unit_var(subset_var_name(*sub));
            for v in sub.iter() {
                per_vertex[v].push(var);
            }
            for v in 0..n {
                let overlap = rint(sub.intersect(h.unknown_set(v)).len() as i64);
                let coeff = overlap.min(inner.clone());
                if coeff > rzero() {
                    align[v].push((var, coeff));
                }
            }
        }
        let t = p.add_var("t", rzero(), rint((n as i64 + 1) * (fam.subsets().len() as i64 + 1)));
        p.set_objective_coeff(t, rone())?;
        for v in 0..n {
            let mut coeffs = align[v].clone();
            coeffs.push((t, -rone()));
            p.add_constraint(coeffs, Sense::Le, rzero())?;
            p.add_constraint(
                per_vertex[v].iter().map(|&c| (c, rone())).collect(),
                Sense::Ge,
                rone(),
            )?;
        }
        let sol = require_optimal("recursive_lp", simplex::solve(&p)?)?;
        Ok((sol, fam))
    }
}

/// The recursive LP bound with the given family policy and
/// recursion depth.
pub fn recursive_lp(
    g: &SideInfoGraph,
    policy: FamilyPolicy,
    depth_cap: usize,
    limits: &OracleLimits,
) -> Result<BoundValue, BoundsError> {
    let mut rec = RecursiveLp::new(g, policy, limits);
    let sol = rec.top_solution(depth_cap)?;
    Ok(BoundValue::new("recursive", sol.value.clone(), policy.restricted_for(g.n()), Some(sol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracles;
    use crate::rat::rfrac;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    #[test]
    fn fvc_fmm_examples() {
        let c5 = gen::cycle(5);
        assert_eq!(fvc(&c5).unwrap().value, rfrac(5, 2));
        assert_eq!(fmm(&c5).unwrap().value, rfrac(5, 2));
        let k2 = gen::clique(2);
        assert_eq!(fvc(&k2).unwrap().value, rone());
        assert_eq!(fmm(&k2).unwrap().value, rone());
        let e = gen::empty(4);
        assert_eq!(fvc(&e).unwrap().value, rzero());
        assert_eq!(fmm(&e).unwrap().value, rzero());
        assert!(fvc(&gen::directed_cycle(3)).is_err());
    }

    #[test]
    fn fvc_equals_fmm_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(101);
        for _ in 0..60 {
            let n = rng.random_range(1..=10);
            let g = gen::random_undirected(n, 0.5, rng.random());
            let (a, b) =
                simplex::solve_dual_pair(&fvc_problem(&g).unwrap(), &fmm_problem(&g).unwrap())
                    .unwrap();
            assert_eq!(a.status, LpStatus::Optimal);
            assert_eq!(a.value, b.value, "strong duality must hold exactly");
        }
    }

    #[test]
    fn fcp_fcc_examples() {
        let k4 = gen::clique(4);
        let fam = oracles::enumerate_cliques(&k4, None, &lim()).unwrap();
        assert_eq!(fcp(&k4, &fam).unwrap().value, rint(3));
        assert_eq!(fcc(&k4, &fam).unwrap().value, rone());

        let c5 = gen::cycle(5);
        let fam = oracles::enumerate_cliques(&c5, None, &lim()).unwrap();
        assert_eq!(fcp(&c5, &fam).unwrap().value, rfrac(5, 2));
        assert_eq!(fcc(&c5, &fam).unwrap().value, rfrac(5, 2));

        let e3 = gen::empty(3);
        let fam = oracles::enumerate_cliques(&e3, None, &lim()).unwrap();
        assert_eq!(fcp(&e3, &fam).unwrap().value, rzero());
        assert_eq!(fcc(&e3, &fam).unwrap().value, rint(3));
    }

    #[test]
    fn fcc_complementarity_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(55);
        for _ in 0..40 {
            let n = rng.random_range(1..=9);
            let g = gen::random_undirected(n, 0.5, rng.random());
            let fam = oracles::enumerate_cliques(&g, None, &lim()).unwrap();
            let cover = fcc(&g, &fam).unwrap().value;
            let pack = fcp(&g, &fam).unwrap().value;
            assert_eq!(cover, rint(n as i64) - pack);
        }
    }

    #[test]
    fn fcc_with_maximal_cliques_matches_exhaustive() {
        let mut rng = StdRng::seed_from_u64(56);
        for _ in 0..25 {
            let n = rng.random_range(1..=9);
            let g = gen::random_undirected(n, 0.5, rng.random());
            let all = oracles::enumerate_cliques(&g, None, &lim()).unwrap();
            let maximal = oracles::maximal_cliques(&g, &lim()).unwrap();
            let a = fcc(&g, &all).unwrap();
            let b = fcc(&g, &maximal).unwrap();
            assert_eq!(a.value, b.value);
            assert!(!a.family_restricted && !b.family_restricted);
        }
    }

    #[test]
    fn alpha_fk_examples_and_monotonicity() {
        let k3 = gen::clique(3);
        assert_eq!(alpha_fk(&k3, 2, &lim()).unwrap().value, rfrac(3, 2));
        assert_eq!(alpha_fk(&k3, 3, &lim()).unwrap().value, rone());
        let c5 = gen::cycle(5);
        assert_eq!(alpha_fk(&c5, 2, &lim()).unwrap().value, rfrac(5, 2));

        let mut rng = StdRng::seed_from_u64(57);
        for _ in 0..15 {
            let n = rng.random_range(2..=8);
            let g = gen::random_undirected(n, 0.5, rng.random());
            let fam = oracles::enumerate_cliques(&g, None, &lim()).unwrap();
            let cover = fcc(&g, &fam).unwrap().value;
            let mut prev: Option<Rat> = None;
            for k in 2..=n.max(2) {
                let v = alpha_fk(&g, k, &lim()).unwrap().value;
                if let Some(p) = prev {
                    assert!(v <= p, "alpha_fk must be nonincreasing in k");
                }
                prev = Some(v);
            }
            assert_eq!(alpha_fk(&g, n.max(2), &lim()).unwrap().value, cover);
        }
    }

    #[test]
    fn fpcc_examples() {
        let c5 = gen::directed_cycle(5);
        let fam =
            SubsetFamily::from_sets(&c5, &[c5.vertices()]).unwrap();
        assert_eq!(fractional_partial_clique_cover(&c5, &fam).unwrap().value, rint(4));

        let k4 = gen::clique(4);
        let fam = SubsetFamily::all_subsets(&k4);
        assert_eq!(fractional_partial_clique_cover(&k4, &fam).unwrap().value, rone());

        let e3 = gen::empty(3);
        let fam = SubsetFamily::all_subsets(&e3);
        assert_eq!(fractional_partial_clique_cover(&e3, &fam).unwrap().value, rint(3));
    }

    #[test]
    fn flc_examples() {
        let k4 = gen::clique(4);
        let fam = oracles::enumerate_cliques(&k4, None, &lim()).unwrap();
        assert_eq!(fractional_local_chromatic(&k4, &fam).unwrap().value, rone());

        let e4 = gen::empty(4);
        let fam = oracles::enumerate_cliques(&e4, None, &lim()).unwrap();
        assert_eq!(fractional_local_chromatic(&e4, &fam).unwrap().value, rint(4));

        let c5 = gen::cycle(5);
        let fam = oracles::enumerate_cliques(&c5, None, &lim()).unwrap();
        assert_eq!(fractional_local_chromatic(&c5, &fam).unwrap().value, rfrac(5, 2));
    }

    #[test]
    fn local_partial_examples() {
        let c3 = gen::directed_cycle(3);
        let fam = SubsetFamily::from_sets(&c3, &[c3.vertices()]).unwrap();
        assert_eq!(local_partial_lp(&c3, &fam).unwrap().value, rint(2));

        for n in [3usize, 5] {
            let kn = gen::clique(n);
            let fam = SubsetFamily::all_subsets(&kn);
            assert_eq!(local_partial_lp(&kn, &fam).unwrap().value, rone());
        }

        let c5 = gen::cycle(5);
        let fam = SubsetFamily::all_subsets(&c5);
        assert_eq!(local_partial_lp(&c5, &fam).unwrap().value, rfrac(5, 2));

        for n in 3..=7 {
            let cn = gen::directed_cycle(n);
            let fam = SubsetFamily::all_subsets(&cn);
            assert_eq!(local_partial_lp(&cn, &fam).unwrap().value, rint(n as i64 - 1));
        }
    }

    #[test]
    fn recursive_examples() {
        for n in [3usize, 4, 6] {
            let kn = gen::clique(n);
            let v = recursive_lp(&kn, FamilyPolicy::AllSubsets, 2, &lim()).unwrap().value;
            assert_eq!(v, rone());
        }
        let c5 = gen::directed_cycle(5);
        assert_eq!(recursive_lp(&c5, FamilyPolicy::AllSubsets, 2, &lim()).unwrap().value, rint(4));
        let c5u = gen::cycle(5);
        assert_eq!(
            recursive_lp(&c5u, FamilyPolicy::AllSubsets, 2, &lim()).unwrap().value,
            rfrac(5, 2)
        );
    }

    #[test]
    fn recursion_strictly_improves_somewhere() {
        // Found by seeded search: one recursion level drops the bound from
        // 7/2 to 3 on this 5-vertex instance.
        let g = SideInfoGraph::new(
            5,
            &[(0, 1), (0, 2), (0, 4), (1, 3), (3, 0), (3, 4), (4, 0), (4, 1), (4, 3)],
        )
        .unwrap();
        let fam = SubsetFamily::all_subsets(&g);
        let lp = local_partial_lp(&g, &fam).unwrap().value;
        let rec = recursive_lp(&g, FamilyPolicy::AllSubsets, 1, &lim()).unwrap().value;
        assert_eq!(lp, rfrac(7, 2));
        assert_eq!(rec, rint(3));
        assert!(rec < lp);
        assert!(rint(oracles::mais(&g, &lim()).unwrap() as i64) <= rec);
    }

    #[test]
    fn bound_chain_on_random_digraphs() {
        let mut rng = StdRng::seed_from_u64(606);
        for _ in 0..12 {
            let n = rng.random_range(2..=7);
            let g = gen::random_digraph(n, 0.4, rng.random());
            let fam = SubsetFamily::all_subsets(&g);
            let cliques = oracles::enumerate_cliques(&g, None, &lim()).unwrap();
            let mais = rint(oracles::mais(&g, &lim()).unwrap() as i64);
            let alpha = rint(oracles::independence_number(&g, &lim()).unwrap() as i64);
            let rec = recursive_lp(&g, FamilyPolicy::AllSubsets, 2, &lim()).unwrap().value;
            let lpv = local_partial_lp(&g, &fam).unwrap().value;
            let fpcc = fractional_partial_clique_cover(&g, &fam).unwrap().value;
            let flc = fractional_local_chromatic(&g, &cliques).unwrap().value;
            let cover = fcc(&g, &cliques).unwrap().value;
            assert!(alpha <= mais);
            assert!(mais <= rec, "mais {mais} > recursive {rec}");
            assert!(rec <= lpv, "recursive {rec} > local-partial {lpv}");
            assert!(lpv <= fpcc.clone().min(flc.clone()));
            assert!(fpcc <= cover || flc <= cover);
            assert!(lpv <= cover);
        }
    }

    #[test]
    fn restricting_family_never_decreases_covering_optimum() {
        let mut rng = StdRng::seed_from_u64(77);
        for _ in 0..15 {
            let n = rng.random_range(3..=7);
            let g = gen::random_digraph(n, 0.4, rng.random());
            let full = SubsetFamily::all_subsets(&g);
            let small = SubsetFamily::with_max_size(&g, 2, &lim()).unwrap();
            let a = local_partial_lp(&g, &full).unwrap();
            let b = local_partial_lp(&g, &small).unwrap();
            assert!(a.value <= b.value);
            assert!(b.family_restricted || n <= 2);
            assert!(!a.family_restricted);
            let pa = fractional_partial_clique_cover(&g, &full).unwrap().value;
            let pb = fractional_partial_clique_cover(&g, &small).unwrap().value;
            assert!(pa <= pb);
        }
    }

    #[test]
    fn single_vertex_degenerate_values() {
        let g = gen::empty(1);
        let fam = SubsetFamily::all_subsets(&g);
        let cliques = oracles::enumerate_cliques(&g, None, &lim()).unwrap();
        assert_eq!(fvc(&g).unwrap().value, rzero());
        assert_eq!(fmm(&g).unwrap().value, rzero());
        assert_eq!(fcp(&g, &cliques).unwrap().value, rzero());
        assert_eq!(fcc(&g, &cliques).unwrap().value, rone());
        assert_eq!(fractional_partial_clique_cover(&g, &fam).unwrap().value, rone());
        assert_eq!(fractional_local_chromatic(&g, &cliques).unwrap().value, rone());
        assert_eq!(local_partial_lp(&g, &fam).unwrap().value, rone());
        assert_eq!(recursive_lp(&g, FamilyPolicy::AllSubsets, 1, &lim()).unwrap().value, rone());
    }

    #[test]
    fn subset_var_names_roundtrip() {
        let s = VertexSet::from_iter([0, 2, 5]);
        assert_eq!(parse_subset_var(&subset_var_name(s)).unwrap(), s);
        assert!(parse_subset_var("t").is_none());
    }
}
