//! Prime-field arithmetic, exact rank/solve, and MDS matrix construction.
//!
//! Elements are `u64` values reduced mod a prime `p`; a [`Gf`] carries the
//! modulus and the arithmetic. Matrices are dense; every instance in this
//! crate is tiny (at most a few hundred columns).

use rand::Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GfError {
    NotPrime { p: u64 },
    FieldTooSmall { p: u64, needed: u64 },
    DimensionMismatch { what: &'static str },
    BadShape { rows: usize, cols: usize },
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::NotPrime { p } => write!(f, "{p} is not prime"),
            GfError::FieldTooSmall { p, needed } => {
                write!(f, "field GF({p}) too small, need at least {needed} elements")
            }
            GfError::DimensionMismatch { what } => write!(f, "dimension mismatch: {what}"),
            GfError::BadShape { rows, cols } => write!(f, "invalid matrix shape {rows}x{cols}"),
        }
    }
}

impl std::error::Error for GfError {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// A prime field GF(p). Elements are canonical `u64` values in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf {
    p: u64,
}

impl Gf {
    pub fn new(p: u64) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime { p });
        }
        Ok(Gf { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        // Moduli here stay far below 2^32, so the product fits u64.
        debug_assert!(self.p < (1 << 31));
        (a % self.p) * (b % self.p) % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.p;
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }
}

/// Dense matrix over GF(p), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Gf,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} mod {}", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: Gf, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Gf, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Gf, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_cols(field: Gf, height: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, height, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), height, "column height mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Columns selected by index, as a new matrix.
    pub fn select_cols(&self, idx: &[usize]) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(self.field, self.rows, idx.len());
        for (j, &c) in idx.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        let mut m = FieldMatrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    pub fn matmul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        assert_eq!(self.field, other.field);
        let f = self.field;
        let mut m = FieldMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = m.get(i, j);
                    m.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for (k, &x) in v.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.get(i, k), x));
                }
                acc
            })
            .collect()
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().0
    }

    /// Reduces in place to row echelon form; returns (rank, pivot columns).
    fn echelonize(&mut self) -> (usize, Vec<usize>) {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(src) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if src != row {
                for c in 0..self.cols {
                    let tmp = self.get(row, c);
                    let v = self.get(src, c);
                    self.set(row, c, v);
                    self.set(src, c, tmp);
                }
            }
            let inv = f.inv(self.get(row, col));
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for c in col..self.cols {
                        let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (row, pivots)
    }

    /// Any particular solution of `self * x = b`, or None if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = FieldMatrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let (_, pivots) = aug.echelonize();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![0u64; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// True iff `v` lies in the span of the columns of `basis`.
pub fn in_span(v: &[u64], basis: &FieldMatrix) -> Result<bool, GfError> {
    if v.len() != basis.rows() {
        return Err(GfError::DimensionMismatch { what: "vector height vs basis height" });
    }
    if basis.cols() == 0 {
        return Ok(v.iter().all(|&x| x == 0));
    }
    let r0 = basis.rank();
    let aug = basis.hstack(&FieldMatrix::from_cols(basis.field(), v.len(), &[v.to_vec()]));
    Ok(aug.rank() == r0)
}

/// A linear functional that annihilates every column of `others` but maps
/// `target` to 1; exists exactly when `target` is outside their span.
pub fn separating_functional(
    target: &[u64],
    others: &FieldMatrix,
) -> Result<Option<Vec<u64>>, GfError> {
    if target.len() != others.rows() {
        return Err(GfError::DimensionMismatch { what: "target height vs matrix height" });
    }
    // Solve [others | target]^T w = (0,...,0,1).
    let f = others.field();
    let mut rows: Vec<Vec<u64>> = (0..others.cols()).map(|j| others.col(j)).collect();
    rows.push(target.to_vec());
    let system = FieldMatrix::from_rows(f, &rows);
    let mut rhs = vec![0u64; rows.len()];
    *rhs.last_mut().unwrap() = 1;
    Ok(system.solve(&rhs))
}

/// Vandermonde matrix: row `r`, column `c` is `nodes[c]^r`.
pub fn vandermonde(field: Gf, nodes: &[u64], k: usize) -> FieldMatrix {
    let mut m = FieldMatrix::zeros(field, k, nodes.len());
    for (c, &x) in nodes.iter().enumerate() {
        let mut acc = 1 % field.modulus();
        for r in 0..k {
            m.set(r, c, acc);
            acc = field.mul(acc, x);
        }
    }
    m
}

/// A `k x n` matrix over GF(p) whose every `k` columns are independent,
/// built as a Vandermonde on distinct nonzero nodes drawn from `rng`.
/// Requires `p > n` so that enough distinct nonzero nodes exist.
pub fn mds_matrix<R: Rng>(
    n: usize,
    k: usize,
    p: u64,
    rng: &mut R,
) -> Result<FieldMatrix, GfError> {
    if k > n {
        return Err(GfError::BadShape { rows: k, cols: n });
    }
    let field = Gf::new(p)?;
    if p <= n as u64 {
        return Err(GfError::FieldTooSmall { p, needed: n as u64 + 1 });
    }
    let nodes = distinct_nonzero_nodes(field, n, rng);
    let m = vandermonde(field, &nodes, k);
    debug_assert!(verify_mds(&m, rng));
    Ok(m)
}

/// `count` distinct nonzero field elements in random order.
pub fn distinct_nonzero_nodes<R: Rng>(field: Gf, count: usize, rng: &mut R) -> Vec<u64> {
    let p = field.modulus();
    assert!((count as u64) < p, "not enough nonzero elements");
    let mut pool: Vec<u64> = (1..p).collect();
    for i in 0..count {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool
}

/// Checks the MDS property: exhaustively for n <= 12, by 50 random column
/// subsets otherwise.
pub fn verify_mds<R: Rng>(m: &FieldMatrix, rng: &mut R) -> bool {
    let (k, n) = (m.rows(), m.cols());
    if k == 0 {
        return true;
    }
    if n <= 12 {
        subsets_of_size(n, k).all(|idx| m.select_cols(&idx).rank() == k)
    } else {
        (0..50).all(|_| {
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = rng.random_range(i..n);
                idx.swap(i, j);
            }
            idx.truncate(k);
            m.select_cols(&idx).rank() == k
        })
    }
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - (k - i) {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
