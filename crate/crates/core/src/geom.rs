//! Point clouds and unit-disk graphs. All geometry is done on squared
//! distances with exact rationals, so no square roots ever appear.

use crate::graph::SideInfoGraph;
use crate::rat::{parse_rat, Rat};
use std::fmt;

/// Planar points with exact rational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<(Rat, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointsError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for PointsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for PointsError {}

impl PointCloud {
    pub fn new(points: Vec<(Rat, Rat)>) -> Self {
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    pub fn distance_squared(&self, i: usize, j: usize) -> Rat {
        let (xi, yi) = &self.points[i];
        let (xj, yj) = &self.points[j];
        let dx = xi - xj;
        let dy = yi - yj;
        &dx * &dx + &dy * &dy
    }

    /// Minimum squared pairwise distance and the closest pair attaining it.
    /// Needs at least two points.
    pub fn min_pairwise_distance_squared(&self) -> Option<(Rat, (usize, usize))> {
        let n = self.points.len();
        if n < 2 {
            return None;
        }
        let mut best: Option<(Rat, (usize, usize))> = None;
        for i in 0..n {
            for j in i + 1..n {
                let d = self.distance_squared(i, j);
                if best.as_ref().map_or(true, |(b, _)| d < *b) {
                    best = Some((d, (i, j)));
                }
            }
        }
        best
    }

    /// True iff the cloud is valid for lambda-precision: every pair of
    /// centers at distance >= lambda.
    pub fn is_lambda_precision(&self, lambda: &Rat) -> bool {
        match self.min_pairwise_distance_squared() {
            Some((min_sq, _)) => min_sq >= lambda * lambda,
            None => true,
        }
    }

    /// Parses the point file format: lines `p <x> <y>`, `#` comments.
    /// Coordinates may be decimals or fractions; stored exactly.
    pub fn parse(text: &str) -> Result<Self, PointsError> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            if tok.next() != Some("p") {
                return Err(PointsError {
                    line: lineno,
                    message: format!("expected 'p <x> <y>', got '{line}'"),
                });
            }
            let mut coord = |what: &str| -> Result<Rat, PointsError> {
                let t = tok.next().ok_or_else(|| PointsError {
                    line: lineno,
                    message: format!("missing {what} coordinate"),
                })?;
                parse_rat(t).ok_or_else(|| PointsError {
                    line: lineno,
                    message: format!("invalid {what} coordinate '{t}'"),
                })
            };
            let x = coord("x")?;
            let y = coord("y")?;
            points.push((x, y));
        }
        Ok(PointCloud { points })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, y) in &self.points {
            out.push_str(&format!("p {x} {y}\n"));
        }
        out
    }
}

/// Unit-disk graph of the cloud: edge iff the squared center distance is
/// at most `(2 * radius)^2`, i.e. the two disks intersect or touch.
pub fn generate_udg(cloud: &PointCloud, radius: &Rat) -> SideInfoGraph {
    let n = cloud.len();
    let threshold = {
        let d = radius + radius;
        &d * &d
    };
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if cloud.distance_squared(i, j) <= threshold {
                arcs.push((i, j));
                arcs.push((j, i));
            }
        }
    }
    SideInfoGraph::new(n, &arcs).expect("point cloud too large for graph cap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rfrac, rint, rone};

    fn cloud_of(coords: &[(i64, i64)]) -> PointCloud {
        PointCloud::new(coords.iter().map(|&(x, y)| (rint(x), rint(y))).collect())
    }

    #[test]
    fn collinear_points_give_a_path() {
        let cloud = PointCloud::new(vec![
            (rint(0), rint(0)),
            (rfrac(3, 2), rint(0)),
            (rint(3), rint(0)),
        ]);
        let g = generate_udg(&cloud, &rone());
        assert!(g.has_arc(0, 1) && g.has_arc(1, 2) && !g.has_arc(0, 2));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn tight_cluster_is_a_clique_and_far_points_disconnected() {
        let tight = PointCloud::parse("p 0 0\np 0.1 0\np 0 0.1\np 0.1 0.1\n").unwrap();
        assert_eq!(generate_udg(&tight, &rone()).edge_count(), 6);
        let far = cloud_of(&[(0, 0), (5, 0)]);
        assert_eq!(generate_udg(&far, &rone()).edge_count(), 0);
    }

    #[test]
    fn lambda_precision_examples() {
        let grid = cloud_of(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let (min_sq, _) = grid.min_pairwise_distance_squared().unwrap();
        assert_eq!(min_sq, rint(1));

        let dup = cloud_of(&[(2, 2), (2, 2)]);
        assert_eq!(dup.min_pairwise_distance_squared().unwrap().0, rint(0));
        assert!(!dup.is_lambda_precision(&rfrac(1, 10)));

        let two = cloud_of(&[(0, 0), (3, 4)]);
        assert_eq!(two.min_pairwise_distance_squared().unwrap().0, rint(25));
        assert!(cloud_of(&[(0, 0)]).min_pairwise_distance_squared().is_none());
    }

    #[test]
    fn translation_invariance() {
        let a = cloud_of(&[(0, 0), (1, 1), (4, 0)]);
        let b = cloud_of(&[(10, 7), (11, 8), (14, 7)]);
        let r = rfrac(9, 10);
        assert_eq!(generate_udg(&a, &r), generate_udg(&b, &r));
    }

    #[test]
    fn permutation_relabels_consistently() {
        let pts = [(0i64, 0i64), (1, 1), (4, 0), (2, 2), (0, 3)];
        let perm = [3usize, 0, 4, 1, 2];
        let a = cloud_of(&pts);
        let permuted: Vec<(i64, i64)> = perm.iter().map(|&i| pts[i]).collect();
        let b = cloud_of(&permuted);
        let r = rfrac(3, 2);
        let (ga, gb) = (generate_udg(&a, &r), generate_udg(&b, &r));
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                assert_eq!(gb.has_arc(i, j), ga.has_arc(perm[i], perm[j]));
            }
        }
    }

    #[test]
    fn point_file_errors() {
        assert_eq!(PointCloud::parse("p 1 2\nq 3 4\n").unwrap_err().line, 2);
        assert_eq!(PointCloud::parse("p 1\n").unwrap_err().line, 1);
        assert_eq!(PointCloud::parse("p x 2\n").unwrap_err().line, 1);
    }
}
