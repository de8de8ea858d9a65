//! Vector-linear index code construction and verification.
//!
//! A certificate assigns N coding vectors over GF(p) to every vertex; it is
//! valid when no vector lies in the span of the vectors of the vertex's
//! unknown set (its non-out-neighbors) together with the vertex's other
//! vectors. Builders realize integral partial-clique covers, fractional
//! local–partial LP solutions, clique covers, and the recursive scheme by
//! MDS mixing of per-block MDS matrices. Construction is randomized over
//! Vandermonde node choices and certainty comes from the verifier: every
//! returned certificate has passed the rank conditions and an end-to-end
//! decode simulation.

use crate::gf::{self, FieldMatrix, Gf, GfError};
use crate::graph::{SideInfoGraph, VertexSet};
use crate::lps::{self, BoundsError, FamilyPolicy, SubsetFamily};
use crate::oracles::OracleLimits;
use crate::rat::{rint, Rat};
use crate::simplex::LpSolution;
use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use std::fmt;

#[derive(Debug, Clone)]
pub enum CodeError {
    CoverNotDisjoint { vertex: usize },
    CoverIncomplete { vertex: usize },
    DenominatorCap { needed: BigInt, cap: u64 },
    FieldSearchExhausted { rounds: usize, last_failure: String },
    RateMismatch { claimed: Rat, actual: Rat },
    ModulusMismatch { expected: u64, found: u64 },
    DimensionMismatch { what: String },
    Gf(GfError),
    Bounds(Box<BoundsError>),
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::CoverNotDisjoint { vertex } => {
                write!(f, "vertex {vertex} is covered more than once by the partition")
            }
            CodeError::CoverIncomplete { vertex } => {
                write!(f, "vertex {vertex} is not covered enough times")
            }
            CodeError::DenominatorCap { needed, cap } => write!(
                f,
                "LP weights need common denominator {needed}, above the cap {cap}; \
                 restrict the subset family to get smaller vertices"
            ),
            CodeError::FieldSearchExhausted { rounds, last_failure } => {
                write!(f, "no verifying field found in {rounds} rounds; last failure: {last_failure}")
            }
            CodeError::RateMismatch { claimed, actual } => {
                write!(f, "certificate claims rate {claimed} but carries {actual}")
            }
            CodeError::ModulusMismatch { expected, found } => {
                write!(f, "modulus mismatch: expected {expected}, found {found}")
            }
            CodeError::DimensionMismatch { what } => write!(f, "dimension mismatch: {what}"),
            CodeError::Gf(e) => write!(f, "{e}"),
            CodeError::Bounds(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CodeError {}

impl From<GfError> for CodeError {
    fn from(e: GfError) -> Self {
        CodeError::Gf(e)
    }
}

impl From<BoundsError> for CodeError {
    fn from(e: BoundsError) -> Self {
        CodeError::Bounds(Box::new(e))
    }
}

mod rat_json {
    use super::Rat;
    use num::bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    #[derive(Serialize, Deserialize)]
    struct NumDen {
        num: String,
        den: String,
    }

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        NumDen { num: r.numer().to_string(), den: r.denom().to_string() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let nd = NumDen::deserialize(d)?;
        let num = BigInt::from_str(&nd.num).map_err(serde::de::Error::custom)?;
        let den = BigInt::from_str(&nd.den).map_err(serde::de::Error::custom)?;
        if den == BigInt::from(0) {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rat::new(num, den))
    }
}

/// A vector assignment over GF(p) witnessing an achievable broadcast rate.
/// Serializes losslessly to JSON (rate as exact num/den strings).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CodeCertificate {
    pub modulus: u64,
    pub n: usize,
    /// Vectors per vertex (N); packets per message in the vector scheme.
    pub vectors_per_vertex: usize,
    /// Stacked matrix height, i.e. broadcast symbols per N message packets.
    pub height: usize,
    /// vertex -> N column vectors of length `height`.
    pub vectors: Vec<Vec<Vec<u64>>>,
    #[serde(with = "rat_json")]
    pub rate: Rat,
    pub scheme: String,
    pub seed: u64,
    pub verified: bool,
}

/// Outcome of certificate verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Vector (vertex, index) lies in the span of its interference set.
    RankViolation { vertex: usize, vector: usize },
    /// Decode simulation failed to recover packet (vertex, index).
    DecodeFailure { vertex: usize, vector: usize },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::RankViolation { vertex, vector } => {
                write!(f, "rank violation at vertex {vertex}, vector {vector}")
            }
            Verdict::DecodeFailure { vertex, vector } => {
                write!(f, "decode failure at vertex {vertex}, packet {vector}")
            }
        }
    }
}

/// Build-time knobs. Defaults: seed 0, 8 escalation rounds, common
/// denominator cap 64, 20 decode tuples.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub seed: u64,
    pub field_hint: Option<u64>,
    pub retry_rounds: usize,
    pub denominator_cap: u64,
    pub decode_tuples: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            seed: 0,
            field_hint: None,
            retry_rounds: 8,
            denominator_cap: 64,
            decode_tuples: 20,
        }
    }
}

// ---------------------------------------------------------------------------
// Core block construction
// ---------------------------------------------------------------------------

/// One partial clique (or copy of one) in the stacked construction: its
/// member vertices in index order and its deficiency.
#[derive(Debug, Clone)]
struct Block {
    members: Vec<usize>,
    k: usize,
}

/// Smallest prime usable for the given block structure: Vandermonde blocks
/// need more field elements than their column count.
fn technical_min_prime(blocks: &[Block], height: usize) -> u64 {
    let mut need: u64 = 2;
    let ktot: usize = blocks.iter().map(|b| b.k + 1).sum();
    if height < ktot {
        need = need.max(ktot as u64 + 1);
    }
    for b in blocks {
        let rows = b.k + 1;
        if rows > 1 && rows < b.members.len() {
            need = need.max(b.members.len() as u64 + 1);
        }
    }
    need
}

/// An MDS matrix for a block: identity when square, all-ones when a single
/// row, random-node Vandermonde otherwise.
fn block_mds(field: Gf, cols: usize, rows: usize, rng: &mut ChaCha8Rng) -> Result<FieldMatrix, GfError> {
    if rows == cols {
        return Ok(FieldMatrix::identity(field, rows));
    }
    if rows == 1 {
        return Ok(FieldMatrix::from_rows(field, &[vec![1; cols]]));
    }
    gf::mds_matrix(cols, rows, field.modulus(), rng)
}

/// Stacks `[Phi_1 G_1 | Phi_2 G_2 | ...]` and assigns each vertex its first
/// `n_vectors` columns in block order, dropping over-coverage columns.
fn assemble(
    g: &SideInfoGraph,
    blocks: &[Block],
    n_vectors: usize,
    height: usize,
    p: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<Vec<u64>>>, CodeError> {
    let field = Gf::new(p)?;
    let ktot: usize = blocks.iter().map(|b| b.k + 1).sum();
    let phi = if height == ktot {
        FieldMatrix::identity(field, height)
    } else {
        gf::mds_matrix(ktot, height, p, rng)?
    };
    let mut vectors: Vec<Vec<Vec<u64>>> = vec![Vec::new(); g.n()];
    let mut offset = 0;
    for b in blocks {
        let rows = b.k + 1;
        let gmat = block_mds(field, b.members.len(), rows, rng)?;
        let phi_b = phi.select_cols(&(offset..offset + rows).collect::<Vec<_>>());
        let cols = phi_b.matmul(&gmat);
        for (j, &v) in b.members.iter().enumerate() {
            if vectors[v].len() < n_vectors {
                vectors[v].push(cols.col(j));
            }
        }
        offset += rows;
    }
    for (v, vecs) in vectors.iter().enumerate() {
        if vecs.len() != n_vectors {
            return Err(CodeError::CoverIncomplete { vertex: v });
        }
    }
    Ok(vectors)
}

/// Shared retry loop: build at escalating primes until verification passes.
fn build_with_retries(
    g: &SideInfoGraph,
    blocks: &[Block],
    n_vectors: usize,
    height: usize,
    rate: Rat,
    scheme: &str,
    opts: &BuildOptions,
) -> Result<CodeCertificate, CodeError> {
    let tech = technical_min_prime(blocks, height);
    let base = tech.max(g.n() as u64).max(opts.field_hint.unwrap_or(0));
    let mut last_failure = String::from("no attempt made");
    for round in 0..opts.retry_rounds {
        let p = gf::next_prime((base - 1).max(1) << round.min(16));
        if p < tech {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(round as u64));
        let vectors = match assemble(g, blocks, n_vectors, height, p, &mut rng) {
            Ok(v) => v,
            Err(CodeError::Gf(GfError::FieldTooSmall { .. })) => continue,
            Err(e) => return Err(e),
        };
        let mut cert = CodeCertificate {
            modulus: p,
            n: g.n(),
            vectors_per_vertex: n_vectors,
            height,
            vectors,
            rate: rate.clone(),
            scheme: scheme.to_string(),
            seed: opts.seed,
            verified: false,
        };
        let verdict = verify_certificate(g, &cert, opts.decode_tuples, opts.seed)?;
        if verdict.passed() {
            cert.verified = true;
            return Ok(cert);
        }
        last_failure = format!("p={p}: {verdict}");
    }
    Err(CodeError::FieldSearchExhausted { rounds: opts.retry_rounds, last_failure })
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Integral scheme: the partial cliques must partition the vertices. The
/// rate is the partition's own worst-vertex interference total
/// `max_v sum_j min(|S_j ∩ (V \ N(v))|, k_j + 1)`.
pub fn build_integral_code(
    g: &SideInfoGraph,
    partial_cliques: &[VertexSet],
    opts: &BuildOptions,
) -> Result<CodeCertificate, CodeError> {
    let mut covered = VertexSet::EMPTY;
    for s in partial_cliques {
        if !covered.intersect(*s).is_empty() {
            let vertex = covered.intersect(*s).min_elem().unwrap();
            return Err(CodeError::CoverNotDisjoint { vertex });
        }
        covered = covered.union(*s);
    }
    if covered != g.vertices() {
        let vertex = g.vertices().minus(covered).min_elem().unwrap();
        return Err(CodeError::CoverIncomplete { vertex });
    }
    let blocks: Vec<Block> = partial_cliques
        .iter()
        .map(|s| {
            Ok(Block { members: s.to_vec(), k: g.partial_clique_deficiency(*s)? })
        })
        .collect::<Result<_, crate::graph::GraphError>>()
        .map_err(|e| CodeError::Bounds(Box::new(e.into())))?;
    let m = integral_rate(g, &blocks);
    build_with_retries(g, &blocks, 1, m, rint(m as i64), "integral-local-partial", opts)
}

fn integral_rate(g: &SideInfoGraph, blocks: &[Block]) -> usize {
    (0..g.n())
        .map(|v| {
            let unknown = g.unknown_set(v);
            blocks
                .iter()
                .map(|b| {
                    let overlap =
                        b.members.iter().filter(|&&w| unknown.contains(w)).count();
                    overlap.min(b.k + 1)
                })
                .sum::<usize>()
        })
        .max()
        .unwrap_or(0)
}

/// Weighted subsets extracted from a covering-LP solution: every positive
/// `r{bits}` variable, in deterministic (bitmask) order.
pub fn lp_support(sol: &LpSolution) -> Vec<(VertexSet, Rat)> {
    let mut out: Vec<(VertexSet, Rat)> = sol
        .names()
        .iter()
        .zip(&sol.values)
        .filter(|(_, v)| v.is_positive())
        .filter_map(|(name, v)| lps::parse_subset_var(name).map(|s| (s, v.clone())))
        .collect();
    out.sort_by_key(|(s, _)| s.bits());
    out
}

/// Fractional scheme from a local–partial LP solution (also covers plain
/// fractional clique covers, whose blocks all have deficiency 0). The
/// common denominator N of the weights and the optimum becomes the packet
/// count per message; each selected subset contributes `rho * N` blocks.
pub fn build_fractional_code(
    g: &SideInfoGraph,
    lp: &LpSolution,
    scheme: &str,
    opts: &BuildOptions,
) -> Result<CodeCertificate, CodeError> {
    let support = lp_support(lp);
    let (blocks, n_vectors, height) = fractional_blocks(g, &support, &lp.value, opts)?;
    build_with_retries(g, &blocks, n_vectors, height, lp.value.clone(), scheme, opts)
}

fn fractional_blocks(
    g: &SideInfoGraph,
    support: &[(VertexSet, Rat)],
    value: &Rat,
    opts: &BuildOptions,
) -> Result<(Vec<Block>, usize, usize), CodeError> {
    let mut denom = value.denom().clone();
    for (_, w) in support {
        denom = crate::rat::lcm_big(&denom, w.denom());
    }
    if denom > BigInt::from(opts.denominator_cap) {
        return Err(CodeError::DenominatorCap { needed: denom, cap: opts.denominator_cap });
    }
    let n_vectors = denom.to_usize().unwrap();
    let height_rat = value * rint(n_vectors as i64);
    debug_assert!(height_rat.denom().is_one());
    let height = height_rat.numer().to_usize().ok_or_else(|| CodeError::DimensionMismatch {
        what: "stacked height does not fit usize".into(),
    })?;
    let mut blocks = Vec::new();
    for (s, w) in support {
        let copies_rat = w * rint(n_vectors as i64);
        debug_assert!(copies_rat.denom().is_one());
        let copies = copies_rat.numer().to_usize().unwrap();
        let k = g
            .partial_clique_deficiency(*s)
            .map_err(|e| CodeError::Bounds(Box::new(e.into())))?;
        for _ in 0..copies {
            blocks.push(Block { members: s.to_vec(), k });
        }
    }
    Ok((blocks, n_vectors, height))
}

/// Clique-cover scheme: fractional cover by maximal cliques (exact FCC).
pub fn build_clique_cover_code(
    g: &SideInfoGraph,
    limits: &OracleLimits,
    opts: &BuildOptions,
) -> Result<CodeCertificate, CodeError> {
    let cliques = crate::oracles::maximal_cliques(g, limits).map_err(BoundsError::from)?;
    let bound = lps::fcc(g, &cliques)?;
    let sol = bound.solution.expect("fcc always returns its LP solution");
    build_fractional_code(g, &sol, "clique-cover", opts)
}

/// Local–partial scheme end to end: solve the LP with the default family
/// policy and build the fractional certificate.
pub fn build_local_partial_code(
    g: &SideInfoGraph,
    fam: &SubsetFamily,
    opts: &BuildOptions,
) -> Result<CodeCertificate, CodeError> {
    let sol = lps::local_partial_solution(g, fam)?;
    build_fractional_code(g, &sol, "fractional-local-partial", opts)
}

// ---------------------------------------------------------------------------
// Recursive composition
// ---------------------------------------------------------------------------

/// Per-subgraph vector assignment used while composing recursive codes,
/// in the local indexing of the subgraph.
struct Assignment {
    height: usize,
    n_vectors: usize,
    vectors: Vec<Vec<Vec<u64>>>,
}

/// Recursive scheme: per-subset assignments are composed level by level,
/// replicated to a common packet count, and mixed through an outer MDS
/// matrix, exactly mirroring how the recursive LP nests its inner values.
pub fn build_recursive_code(
    g: &SideInfoGraph,
    policy: FamilyPolicy,
    depth_cap: usize,
    limits: &OracleLimits,
    opts: &BuildOptions,
) -> Result<CodeCertificate, CodeError> {
    assert!(depth_cap >= 1);
    let mut rec = lps::RecursiveLp::new(g, policy, limits);
    let rate = rec.value(depth_cap)?;
    let mut last_failure = String::from("no attempt made");
    let base = (g.n() as u64).max(opts.field_hint.unwrap_or(0)).max(2);
    for round in 0..opts.retry_rounds {
        let p = gf::next_prime((base - 1).max(1) << round.min(16));
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(0x5eed ^ round as u64));
        match compose_recursive(g, &mut rec, g.vertices(), depth_cap, p, opts, &mut rng) {
            Err(CodeError::Gf(GfError::FieldTooSmall { .. })) => continue,
            Err(e) => return Err(e),
            Ok(asg) => {
                let mut cert = CodeCertificate {
                    modulus: p,
                    n: g.n(),
                    vectors_per_vertex: asg.n_vectors,
                    height: asg.height,
                    vectors: asg.vectors,
                    rate: rate.clone(),
                    scheme: "recursive".to_string(),
                    seed: opts.seed,
                    verified: false,
                };
                let verdict = verify_certificate(g, &cert, opts.decode_tuples, opts.seed)?;
                if verdict.passed() {
                    cert.verified = true;
                    return Ok(cert);
                }
                last_failure = format!("p={p}: {verdict}");
            }
        }
    }
    Err(CodeError::FieldSearchExhausted { rounds: opts.retry_rounds, last_failure })
}

fn compose_recursive(
    g: &SideInfoGraph,
    rec: &mut lps::RecursiveLp,
    s: VertexSet,
    depth: usize,
    p: u64,
    opts: &BuildOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Assignment, CodeError> {
    if s.len() == 1 {
        return Ok(Assignment { height: 1, n_vectors: 1, vectors: vec![vec![vec![1]]] });
    }
    let h = g.induced(s).map_err(|e| CodeError::Bounds(Box::new(e.into())))?;
    if depth == 0 {
        // Leaf level: plain fractional local–partial assignment at prime p.
        let sol = rec.leaf_solution(s)?;
        let support = lp_support(&sol);
        let (blocks, n_vectors, height) = fractional_blocks(&h, &support, &sol.value, opts)?;
        let vectors = assemble(&h, &blocks, n_vectors, height, p, rng)?;
        return Ok(Assignment { height, n_vectors, vectors });
    }

    let verts = s.to_vec();
    let sol = rec.level_solution(s, depth)?;
    let support = lp_support(&sol);
    // Common denominator of this level's weights and value.
    let mut denom = sol.value.denom().clone();
    for (_, w) in &support {
        denom = crate::rat::lcm_big(&denom, w.denom());
    }
    if denom > BigInt::from(opts.denominator_cap) {
        return Err(CodeError::DenominatorCap { needed: denom, cap: opts.denominator_cap });
    }
    let level_n = denom.to_usize().unwrap();

    // Sub-assignments (local subsets lifted to global for recursion).
    let lift = |local: VertexSet| VertexSet::from_iter(local.iter().map(|i| verts[i]));
    let mut subs: Vec<(VertexSet, usize, Assignment)> = Vec::new();
    for (sub, w) in &support {
        let copies = (w * rint(level_n as i64)).numer().to_usize().unwrap();
        let asg = compose_recursive(g, rec, lift(*sub), depth - 1, p, opts, rng)?;
        subs.push((*sub, copies, asg));
    }
    // Replicate every sub-assignment to a common packet count L.
    let l_common = subs.iter().fold(1usize, |acc, (_, _, a)| num::integer::lcm(acc, a.n_vectors));
    let n_vectors = level_n * l_common;
    let height_rat = &sol.value * rint(n_vectors as i64);
    debug_assert!(height_rat.denom().is_one());
    let height = height_rat.numer().to_usize().ok_or_else(|| CodeError::DimensionMismatch {
        what: "recursive stacked height overflow".into(),
    })?;

    // Outer MDS over the concatenated sub-block heights.
    let field = Gf::new(p)?;
    let ktot: usize = subs
        .iter()
        .map(|(_, copies, a)| copies * a.height * (l_common / a.n_vectors))
        .sum();
    if height > ktot {
        return Err(CodeError::DimensionMismatch {
            what: format!("outer height {height} exceeds stacked sub-heights {ktot}"),
        });
    }
    let phi = if height == ktot {
        FieldMatrix::identity(field, height)
    } else {
        gf::mds_matrix(ktot, height, p, rng)?
    };

    let mut vectors: Vec<Vec<Vec<u64>>> = vec![Vec::new(); h.n()];
    let mut offset = 0;
    for (sub, copies, asg) in &subs {
        let members = sub.to_vec();
        let reps = l_common / asg.n_vectors;
        for _copy in 0..*copies {
            for _rep in 0..reps {
                let phi_b =
                    phi.select_cols(&(offset..offset + asg.height).collect::<Vec<_>>());
                for (local, &v) in members.iter().enumerate() {
                    for vec in &asg.vectors[local] {
                        if vectors[v].len() < n_vectors {
                            vectors[v].push(phi_b.mul_vec(vec));
                        }
                    }
                }
                offset += asg.height;
            }
        }
    }
    for (v, vecs) in vectors.iter().enumerate() {
        if vecs.len() != n_vectors {
            return Err(CodeError::CoverIncomplete { vertex: v });
        }
    }
    Ok(Assignment { height, n_vectors, vectors })
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Checks the interference-alignment rank condition for every vector of
/// every vertex, the claimed rate, and runs `tuples` random end-to-end
/// decode simulations. Structural problems (modulus, dimensions) are
/// errors; condition failures return a failing [`Verdict`].
pub fn verify_certificate(
    g: &SideInfoGraph,
    cert: &CodeCertificate,
    tuples: usize,
    seed: u64,
) -> Result<Verdict, CodeError> {
    let field = Gf::new(cert.modulus)?;
    if cert.n != g.n() {
        return Err(CodeError::DimensionMismatch {
            what: format!("certificate is for {} vertices, graph has {}", cert.n, g.n()),
        });
    }
    if cert.vectors.len() != g.n() {
        return Err(CodeError::DimensionMismatch {
            what: "per-vertex vector list length".to_string(),
        });
    }
    let nv = cert.vectors_per_vertex;
    for (v, vecs) in cert.vectors.iter().enumerate() {
        if vecs.len() != nv {
            return Err(CodeError::DimensionMismatch {
                what: format!("vertex {v} has {} vectors, expected {nv}", vecs.len()),
            });
        }
        for vec in vecs {
            if vec.len() != cert.height {
                return Err(CodeError::DimensionMismatch {
                    what: format!("vertex {v} vector height {} != {}", vec.len(), cert.height),
                });
            }
            if vec.iter().any(|&x| x >= cert.modulus) {
                return Err(CodeError::ModulusMismatch {
                    expected: cert.modulus,
                    found: *vec.iter().find(|&&x| x >= cert.modulus).unwrap(),
                });
            }
        }
    }
    let actual_rate = rint(cert.height as i64) / rint(nv as i64);
    if actual_rate != cert.rate {
        return Err(CodeError::RateMismatch { claimed: cert.rate.clone(), actual: actual_rate });
    }

    // Rank conditions, and decode functionals for the simulation.
    let mut functionals: Vec<Vec<Vec<u64>>> = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let unknown_others: Vec<usize> =
            g.unknown_set(v).iter().filter(|&w| w != v).collect();
        let mut funcs = Vec::with_capacity(nv);
        for idx in 0..nv {
            let mut cols: Vec<Vec<u64>> = Vec::new();
            for &w in &unknown_others {
                cols.extend(cert.vectors[w].iter().cloned());
            }
            for (q, vec) in cert.vectors[v].iter().enumerate() {
                if q != idx {
                    cols.push(vec.clone());
                }
            }
            let basis = FieldMatrix::from_cols(field, cert.height, &cols);
            match gf::separating_functional(&cert.vectors[v][idx], &basis)? {
                Some(w) => funcs.push(w),
                None => return Ok(Verdict::RankViolation { vertex: v, vector: idx }),
            }
        }
        functionals.push(funcs);
    }

    // End-to-end decode simulation on random message tuples.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdec0de);
    use rand::Rng;
    for _ in 0..tuples {
        let x: Vec<Vec<u64>> = (0..g.n())
            .map(|_| (0..nv).map(|_| rng.random_range(0..cert.modulus)).collect())
            .collect();
        // Broadcast y = sum of u_{j,q} x_{j,q}.
        let mut y = vec![0u64; cert.height];
        for v in 0..g.n() {
            for q in 0..nv {
                let xval = x[v][q];
                if xval == 0 {
                    continue;
                }
                for (r, &u) in cert.vectors[v][q].iter().enumerate() {
                    y[r] = field.add(y[r], field.mul(u, xval));
                }
            }
        }
        for v in 0..g.n() {
            // Client v strips its side information.
            let mut reduced = y.clone();
            for w in g.out(v).iter() {
                for q in 0..nv {
                    let xval = x[w][q];
                    if xval == 0 {
                        continue;
                    }
                    for (r, &u) in cert.vectors[w][q].iter().enumerate() {
                        reduced[r] = field.sub(reduced[r], field.mul(u, xval));
                    }
                }
            }
            for q in 0..nv {
                let w = &functionals[v][q];
                let mut acc = 0;
                for (r, &wr) in w.iter().enumerate() {
                    acc = field.add(acc, field.mul(wr, reduced[r]));
                }
                if acc != x[v][q] {
                    return Ok(Verdict::DecodeFailure { vertex: v, vector: q });
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// A loose sufficient field-size bound for a block structure at
/// stacked height `m` in a graph on `n` vertices:
/// `max_j sum_r k_j C(n - n_j, m - r) C(n_j, r - 1) + n_j`.
pub fn field_size_cap(n: usize, blocks: &[(usize, usize)], m: usize) -> BigInt {
    fn binom(a: i64, b: i64) -> BigInt {
        if b < 0 || a < 0 || b > a {
            return BigInt::zero();
        }
        let mut acc = BigInt::one();
        for i in 0..b {
            acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
        }
        acc
    }
    blocks
        .iter()
        .map(|&(nj, kj)| {
            let mut total = BigInt::zero();
            for r in 1..=(kj as i64 + 1) {
                total += BigInt::from(kj)
                    * binom(n as i64 - nj as i64, m as i64 - r)
                    * binom(nj as i64, r - 1);
            }
            total + BigInt::from(nj)
        })
        .max()
        .unwrap_or_else(|| BigInt::from(2))
}

/// Identity certificate (every vertex its own unit vector): rate n, always
/// valid; useful as a baseline and in tests.
pub fn identity_certificate(g: &SideInfoGraph, p: u64) -> Result<CodeCertificate, CodeError> {
    let field = Gf::new(p)?;
    let n = g.n();
    let eye = FieldMatrix::identity(field, n);
    let vectors = (0..n).map(|v| vec![eye.col(v)]).collect();
    let mut cert = CodeCertificate {
        modulus: p,
        n,
        vectors_per_vertex: 1,
        height: n,
        vectors,
        rate: rint(n as i64),
        scheme: "identity".to_string(),
        seed: 0,
        verified: false,
    };
    let verdict = verify_certificate(g, &cert, 5, 0)?;
    debug_assert!(verdict.passed());
    cert.verified = verdict.passed();
    Ok(cert)
}
