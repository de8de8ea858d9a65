//! Constructive LP roundings: half-integral fractional vertex covers
//! rounded to integral covers via a proper coloring, and half-integral
//! independent-set relaxations rounded to independent sets. Both come with
//! the exact rational guarantees from the corresponding integrality-gap
//! proofs, and both are machine-checked before returning.

use crate::graph::{SideInfoGraph, VertexSet};
use crate::rat::{is_half_integral, rfrac, rint, Rat};
use crate::simplex::LpSolution;
use num::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum RoundingError {
    NotHalfIntegral { vertex: usize, value: Rat },
    ImproperColoring { u: usize, v: usize },
    ColoringLength { expected: usize, found: usize },
    /// The rounded set failed its own machine check; indicates a bug.
    InternalCheck { what: String },
}

impl fmt::Display for RoundingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundingError::NotHalfIntegral { vertex, value } => {
                write!(f, "value {value} at vertex {vertex} is not in {{0, 1/2, 1}}")
            }
            RoundingError::ImproperColoring { u, v } => {
                write!(f, "coloring gives adjacent vertices {u} and {v} the same color")
            }
            RoundingError::ColoringLength { expected, found } => {
                write!(f, "coloring covers {found} vertices, graph has {expected}")
            }
            RoundingError::InternalCheck { what } => {
                write!(f, "internal invariant violated: {what}")
            }
        }
    }
}

impl std::error::Error for RoundingError {}

fn split_half_integral(
    g: &SideInfoGraph,
    frac: &LpSolution,
) -> Result<(VertexSet, VertexSet), RoundingError> {
    let mut ones = VertexSet::EMPTY;
    let mut halves = VertexSet::EMPTY;
    for v in 0..g.n() {
        let x = &frac.values[v];
        if !is_half_integral(x) {
            return Err(RoundingError::NotHalfIntegral { vertex: v, value: x.clone() });
        }
        if x.is_one() {
            ones.insert(v);
        } else if !x.is_zero() {
            halves.insert(v);
        }
    }
    Ok((ones, halves))
}

fn check_coloring(g: &SideInfoGraph, coloring: &[usize]) -> Result<usize, RoundingError> {
    if coloring.len() != g.n() {
        return Err(RoundingError::ColoringLength { expected: g.n(), found: coloring.len() });
    }
    for (u, v) in g.edges() {
        if coloring[u] == coloring[v] {
            return Err(RoundingError::ImproperColoring { u, v });
        }
    }
    Ok(coloring.iter().map(|&c| c + 1).max().unwrap_or(1))
}

/// Color classes restricted to the half-valued vertices, largest first.
fn half_classes(halves: VertexSet, coloring: &[usize], l: usize) -> Vec<VertexSet> {
    let mut classes = vec![VertexSet::EMPTY; l];
    for v in halves.iter() {
        classes[coloring[v]].insert(v);
    }
    classes.sort_by_key(|c| std::cmp::Reverse(c.len()));
    classes
}

/// Rounds a half-integral fractional vertex cover to an integral cover:
/// the largest half-valued color class goes down, the rest go up. The
/// result is a valid cover of size at most `(2l-2)/l` times the fractional
/// value (for `l >= 2`; an edgeless graph rounds to the empty cover).
pub fn round_half_integral_vc(
    g: &SideInfoGraph,
    frac: &LpSolution,
    coloring: &[usize],
) -> Result<VertexSet, RoundingError> {
    let (ones, halves) = split_half_integral(g, frac)?;
    let l = check_coloring(g, coloring)?;
    let classes = half_classes(halves, coloring, l);
    let mut cover = ones;
    for class in classes.iter().skip(1) {
        cover = cover.union(*class);
    }

    for (u, v) in g.edges() {
        if !cover.contains(u) && !cover.contains(v) {
            return Err(RoundingError::InternalCheck {
                what: format!("rounded set misses edge ({u}, {v})"),
            });
        }
    }
    if l >= 2 {
        let bound = rfrac(2 * l as i64 - 2, l as i64) * &frac.value;
        if rint(cover.len() as i64) > bound {
            return Err(RoundingError::InternalCheck {
                what: format!("cover size {} exceeds guarantee {bound}", cover.len()),
            });
        }
    }
    Ok(cover)
}

/// Rounds a half-integral independent-set relaxation (edge constraints
/// only) to an independent set: value-1 vertices stay, the largest
/// half-valued color class rounds up. The result is independent and has
/// size at least `2/k` times the fractional value.
pub fn round_independent_set(
    g: &SideInfoGraph,
    frac: &LpSolution,
    coloring: &[usize],
) -> Result<VertexSet, RoundingError> {
    let (ones, halves) = split_half_integral(g, frac)?;
    let k = check_coloring(g, coloring)?;
    let classes = half_classes(halves, coloring, k);
    let set = ones.union(classes.first().copied().unwrap_or(VertexSet::EMPTY));

    for (u, v) in g.edges() {
        if set.contains(u) && set.contains(v) {
            return Err(RoundingError::InternalCheck {
                what: format!("rounded set contains edge ({u}, {v})"),
            });
        }
    }
    if k >= 2 {
        let bound = rfrac(2, k as i64) * &frac.value;
        if rint(set.len() as i64) < bound {
            return Err(RoundingError::InternalCheck {
                what: format!("set size {} below guarantee {bound}", set.len()),
            });
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::lps;
    use crate::oracles::{self, OracleLimits};
    use crate::rat::rone;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    #[test]
    fn vc_rounding_on_c5() {
        let g = gen::cycle(5);
        let frac = lps::fvc(&g).unwrap().solution.unwrap();
        assert_eq!(frac.value, rfrac(5, 2));
        let (_, coloring) = oracles::chromatic_coloring(&g, &lim()).unwrap();
        let cover = round_half_integral_vc(&g, &frac, &coloring).unwrap();
        assert!(cover.len() <= 3, "VC(C5) = 3 and the 10/3 guarantee rounds to 3");
    }

    #[test]
    fn vc_rounding_on_k2_and_edgeless() {
        let g = gen::clique(2);
        let frac = lps::fvc(&g).unwrap().solution.unwrap();
        let cover = round_half_integral_vc(&g, &frac, &[0, 1]).unwrap();
        assert_eq!(cover.len(), 1);

        let e = gen::empty(4);
        let frac = lps::fvc(&e).unwrap().solution.unwrap();
        let cover = round_half_integral_vc(&e, &frac, &[0, 0, 0, 0]).unwrap();
        assert!(cover.is_empty());
    }

    #[test]
    fn is_rounding_on_k3_and_c5() {
        let g = gen::clique(3);
        let frac = lps::alpha_fk(&g, 2, &lim()).unwrap().solution.unwrap();
        assert_eq!(frac.value, rfrac(3, 2));
        let (_, coloring) = oracles::chromatic_coloring(&g, &lim()).unwrap();
        let set = round_independent_set(&g, &frac, &coloring).unwrap();
        assert_eq!(set.len(), 1);

        let c5 = gen::cycle(5);
        let frac = lps::alpha_fk(&c5, 2, &lim()).unwrap().solution.unwrap();
        let (_, coloring) = oracles::chromatic_coloring(&c5, &lim()).unwrap();
        let set = round_independent_set(&c5, &frac, &coloring).unwrap();
        assert!(set.len() >= 2, "guarantee (2/3)(5/2) = 5/3 rounds up to 2");
    }

    #[test]
    fn is_rounding_keeps_whole_edgeless_graph() {
        let e = gen::empty(5);
        let frac = lps::alpha_fk(&e, 2, &lim()).unwrap().solution.unwrap();
        assert_eq!(frac.value, rint(5));
        let set = round_independent_set(&e, &frac, &[0; 5]).unwrap();
        assert_eq!(set.len(), 5);
    }

    #[test]
    fn improper_coloring_rejected() {
        let g = gen::clique(2);
        let frac = lps::fvc(&g).unwrap().solution.unwrap();
        assert!(matches!(
            round_half_integral_vc(&g, &frac, &[0, 0]),
            Err(RoundingError::ImproperColoring { .. })
        ));
        let mut fake = frac;
        fake.values[0] = rfrac(1, 3);
        assert!(matches!(
            round_half_integral_vc(&g, &fake, &[0, 1]),
            Err(RoundingError::NotHalfIntegral { vertex: 0, .. })
        ));
    }

    #[test]
    fn guarantees_hold_exactly_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(404);
        for _ in 0..60 {
            let n = rng.random_range(2..=10);
            let g = gen::random_undirected(n, 0.45, rng.random());
            let (chi, coloring) = oracles::chromatic_coloring(&g, &lim()).unwrap();
            let k = chi.max(2);
            let coloring = if chi >= 2 {
                coloring
            } else {
                // Edgeless: any 2-coloring is proper.
                (0..n).map(|v| v % 2).collect()
            };

            let vc_frac = lps::fvc(&g).unwrap().solution.unwrap();
            let cover = round_half_integral_vc(&g, &vc_frac, &coloring).unwrap();
            assert!(
                rint(cover.len() as i64) <= rfrac(2 * k as i64 - 2, k as i64) * &vc_frac.value
            );

            let is_frac = lps::alpha_fk(&g, 2, &lim()).unwrap().solution.unwrap();
            let set = round_independent_set(&g, &is_frac, &coloring).unwrap();
            assert!(rint(set.len() as i64) >= rfrac(2, k as i64) * &is_frac.value);

            // Consequence: alpha >= (2/k) alpha_F2 >= (2/k) fcc, so
            // fcc <= (k/2) alpha, exactly.
            let alpha = rint(oracles::independence_number(&g, &lim()).unwrap() as i64);
            let cliques = oracles::maximal_cliques(&g, &lim()).unwrap();
            let fcc = lps::fcc(&g, &cliques).unwrap().value;
            assert!(fcc <= rfrac(k as i64, 2) * &alpha);
            assert!(rint(set.len() as i64) <= alpha);
            let one = rone();
            assert!(is_frac.value >= one);
        }
    }
}
