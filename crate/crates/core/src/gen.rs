//! Deterministic graph and point-cloud generators used by the CLI and the
//! test corpora. Everything is seeded; identical seeds give identical output.

use crate::geom::PointCloud;
use crate::graph::{SideInfoGraph, VertexSet};
use crate::rat::{rfrac, Rat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bidirected clique on `n` vertices.
pub fn clique(n: usize) -> SideInfoGraph {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                arcs.push((i, j));
            }
        }
    }
    SideInfoGraph::new(n, &arcs).unwrap()
}

/// Graph on `n` vertices with no arcs.
pub fn empty(n: usize) -> SideInfoGraph {
    SideInfoGraph::new(n, &[]).unwrap()
}

/// Undirected cycle `C_n` (stored bidirected).
pub fn cycle(n: usize) -> SideInfoGraph {
    assert!(n >= 3);
    let mut arcs = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        arcs.push((i, j));
        arcs.push((j, i));
    }
    SideInfoGraph::new(n, &arcs).unwrap()
}

/// Directed cycle with arcs `i -> i+1 (mod n)`.
pub fn directed_cycle(n: usize) -> SideInfoGraph {
    assert!(n >= 2);
    let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SideInfoGraph::new(n, &arcs).unwrap()
}

/// Each ordered pair carries an arc independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> SideInfoGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(p) {
                arcs.push((i, j));
            }
        }
    }
    SideInfoGraph::new(n, &arcs).unwrap()
}

/// Each unordered pair becomes a bidirected edge with probability `p`.
pub fn random_undirected(n: usize, p: f64, seed: u64) -> SideInfoGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                arcs.push((i, j));
                arcs.push((j, i));
            }
        }
    }
    SideInfoGraph::new(n, &arcs).unwrap()
}

/// Random graph whose complement is bipartite: the complement of a random
/// bipartite graph. These have perfect complements, so FCC = alpha = MAIS.
pub fn random_cobipartite_complement(n: usize, p: f64, seed: u64) -> SideInfoGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    // Random side assignment, edges only across sides.
    let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if side[i] != side[j] && rng.random_bool(p) {
                arcs.push((i, j));
                arcs.push((j, i));
            }
        }
    }
    SideInfoGraph::new(n, &arcs).unwrap().complement()
}

/// Random point cloud with coordinates on a 0.01 grid inside
/// `[0, extent] x [0, extent]`. Coordinates are exact rationals.
pub fn random_cloud(n: usize, extent: u32, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = i64::from(extent) * 100;
    let points = (0..n)
        .map(|_| {
            let x = rfrac(rng.random_range(0..=cells), 100);
            let y = rfrac(rng.random_range(0..=cells), 100);
            (x, y)
        })
        .collect();
    PointCloud::new(points)
}

/// Random point cloud whose pairwise distances are all >= `lambda`
/// (rejection sampling on the same 0.01 grid).
pub fn random_lambda_cloud(n: usize, lambda: &Rat, extent: u32, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = i64::from(extent) * 100;
    let lambda_sq = lambda * lambda;
    let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while pts.len() < n {
        attempts += 1;
        assert!(attempts < 200_000, "lambda-precision cloud sampling did not converge");
        let x = rfrac(rng.random_range(0..=cells), 100);
        let y = rfrac(rng.random_range(0..=cells), 100);
        let ok = pts.iter().all(|(px, py)| {
            let dx = &x - px;
            let dy = &y - py;
            &dx * &dx + &dy * &dy >= lambda_sq
        });
        if ok {
            pts.push((x, y));
        }
    }
    PointCloud::new(pts)
}

/// Seeded corpus of directed graphs with a rejection cap on the arc count,
/// so the exhaustive minrank oracle stays within its budget.
pub fn digraph_corpus(count: usize, max_n: usize, max_arcs: usize, seed: u64) -> Vec<SideInfoGraph> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(2..=max_n);
        let g = random_digraph(n, 0.35, rng.random());
        if g.arc_count() <= max_arcs {
            out.push(g);
        }
    }
    out
}

/// Seeded corpus of undirected graphs.
pub fn undirected_corpus(count: usize, max_n: usize, seed: u64) -> Vec<SideInfoGraph> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_n);
            random_undirected(n, 0.45, rng.random())
        })
        .collect()
}

/// All nonempty subsets of `0..n`, for small exhaustive sweeps.
pub fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    debug_assert!(n <= 20);
    (1u64..(1u64 << n)).map(VertexSet::from_bits)
}
