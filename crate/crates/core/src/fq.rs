//! Dense linear algebra over a prime field and canonical subspace enumeration.

use crate::error::{Error, Result};

/// Default number of candidate visits an exhaustive loop may make.
pub const DEFAULT_MAX_ENUM: u64 = 10_000_000;

/// Reads `HALLFORGE_MAX_ENUM`, falling back to [`DEFAULT_MAX_ENUM`].
pub fn max_enum_from_env() -> u64 {
    std::env::var("HALLFORGE_MAX_ENUM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM)
}

/// Per-operation counter of enumeration candidates.
#[derive(Debug, Clone)]
pub struct Budget {
    op: &'static str,
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(op: &'static str, limit: u64) -> Self {
        Budget { op, limit, used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.charge(1)
    }

    pub fn charge(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            return Err(Error::CapExceeded { op: self.op, limit: self.limit });
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }

    /// Fails up front when a loop of `n` visits would not fit.
    pub fn reserve(&self, n: u64) -> Result<()> {
        if n > self.remaining() {
            return Err(Error::CapExceeded { op: self.op, limit: self.limit });
        }
        Ok(())
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    // Fermat; p is small.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row vectors; entries are reduced mod p (negative values allowed).
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Param("ragged matrix rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(p as i64) as u64)
            .collect();
        Ok(FpMatrix { p, rows: r, cols: c, data })
    }

    pub fn from_flat(p: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FpMatrix { p, rows, cols, data: data.into_iter().map(|x| x % p).collect() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = x % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % p;
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).fold(0, |acc, (a, b)| (acc + a * b) % self.p))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Stacks row blocks vertically.
    pub fn vstack(p: u64, cols: usize, blocks: &[&FpMatrix]) -> FpMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        FpMatrix { p, rows, cols, data }
    }
}

/// Gauss-Jordan reduction. Returns the reduced matrix, its rank and pivot columns.
pub fn rref(m: &FpMatrix) -> (FpMatrix, usize, Vec<usize>) {
    let p = m.p;
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(piv) = (row..a.rows).find(|&r| a.get(r, col) != 0) else {
            continue;
        };
        if piv != row {
            for c in 0..a.cols {
                a.data.swap(piv * a.cols + c, row * a.cols + c);
            }
        }
        let inv = inv_mod(a.get(row, col), p);
        for c in 0..a.cols {
            let x = a.get(row, c) * inv % p;
            a.set(row, c, x);
        }
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let f = a.get(r, col);
            if f == 0 {
                continue;
            }
            for c in 0..a.cols {
                let x = (a.get(r, c) + p * p - f * a.get(row, c)) % p;
                a.set(r, c, x);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, row, pivots)
}

/// A subspace of `F_p^n`, held by its canonical RREF basis (no zero rows).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubspaceRep {
    ambient: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl SubspaceRep {
    /// Span of the given rows.
    pub fn span(p: u64, ambient: usize, rows: &FpMatrix) -> Self {
        assert_eq!(rows.cols, ambient);
        let (r, rank, pivots) = rref(rows);
        let basis = FpMatrix::from_flat(p, rank, ambient, r.data[..rank * ambient].to_vec());
        SubspaceRep { ambient, basis, pivots }
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        SubspaceRep { ambient, basis: FpMatrix::zeros(p, 0, ambient), pivots: vec![] }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        SubspaceRep { ambient, basis: FpMatrix::identity(p, ambient), pivots: (0..ambient).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot columns, which index a complement and hence quotient coordinates.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Subtracts the basis multiples that clear the pivot entries of `x`.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let p = self.basis.p;
        let mut y = x.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            let f = y[c];
            if f == 0 {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                *yj = (*yj + p * p - f * self.basis.get(r, j)) % p;
            }
        }
        y
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.reduce(x).iter().all(|&e| e == 0)
    }

    /// Coordinates of `x` (assumed to lie in the subspace) in the RREF basis.
    pub fn coords(&self, x: &[u64]) -> Vec<u64> {
        self.pivots.iter().map(|&c| x[c]).collect()
    }

    /// Quotient coordinates of `x`: reduce, then read off the free columns.
    pub fn quotient_coords(&self, x: &[u64]) -> Vec<u64> {
        let y = self.reduce(x);
        self.free_columns().into_iter().map(|c| y[c]).collect()
    }
}

/// Canonical basis of `{x : m x = 0}`.
pub fn solve_nullspace(m: &FpMatrix) -> SubspaceRep {
    let p = m.p;
    let n = m.cols;
    let (r, rank, pivots) = rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut rows = Vec::with_capacity(free.len() * n);
    for &f in &free {
        let mut v = vec![0u64; n];
        v[f] = 1;
        for (row, &pc) in pivots.iter().enumerate().take(rank) {
            v[pc] = (p - r.get(row, f)) % p;
        }
        rows.extend(v);
    }
    let gens = FpMatrix::from_flat(p, free.len(), n, rows);
    SubspaceRep::span(p, n, &gens)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All k-dimensional subspaces of `F_p^n`, each exactly once.
///
/// Order: pivot-column patterns in lexicographic order, then free entries
/// lexicographically (first free entry most significant).
pub fn enumerate_subspaces(n: usize, k: usize, p: u64, budget: &mut Budget) -> Result<Vec<SubspaceRep>> {
    if k > n {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free positions: row r, column c > pivots[r], c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = &pivots;
                ((pivots[r] + 1)..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            budget.tick()?;
            let mut m = FpMatrix::zeros(p, k, n);
            for (r, &c) in pivots.iter().enumerate() {
                m.set(r, c, 1);
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m.set(r, c, d);
            }
            out.push(SubspaceRep { ambient: n, basis: m, pivots: pivots.clone() });
            if !odometer_step(&mut digits, p) {
                break;
            }
        }
    }
    Ok(out)
}

/// Advances a base-p counter (last digit fastest). Returns false after wrapping to all zeros.
pub fn odometer_step(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Gaussian binomial `[n choose k]_p` by the product formula.
pub fn gaussian_binomial(n: u64, k: u64, p: u64) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    use num_traits::One;
    if k > n {
        return BigUint::default();
    }
    let pb = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pb.pow((n - i) as u32) - BigUint::one();
        den *= pb.pow((i + 1) as u32) - BigUint::one();
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64, rows: &[&[i64]]) -> FpMatrix {
        FpMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let (r, rank, piv) = rref(&m(2, &[&[1, 1], &[1, 1]]));
        assert_eq!(r, m(2, &[&[1, 1], &[0, 0]]));
        assert_eq!((rank, piv), (1, vec![0]));

        let id = FpMatrix::identity(5, 3);
        assert_eq!(rref(&id), (id.clone(), 3, vec![0, 1, 2]));

        let (r, rank, piv) = rref(&m(3, &[&[2, 4], &[1, 2]]));
        assert_eq!(r, m(3, &[&[1, 2], &[0, 0]]));
        assert_eq!((rank, piv), (1, vec![0]));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(solve_nullspace(&FpMatrix::zeros(2, 2, 3)).dim(), 3);
        assert_eq!(solve_nullspace(&FpMatrix::identity(2, 3)).dim(), 0);
        let ns = solve_nullspace(&m(2, &[&[1, 1]]));
        assert_eq!(ns.dim(), 1);
        assert_eq!(ns.basis().row(0), &[1, 1]);
        // brute force over F_2^2
        let brute: Vec<[u64; 2]> = (0..4u64)
            .map(|x| [x & 1, x >> 1])
            .filter(|v| (v[0] + v[1]) % 2 == 0)
            .collect();
        assert_eq!(brute.len(), 2usize.pow(ns.dim() as u32));
        assert!(brute.iter().all(|v| ns.contains(v)));
    }

    #[test]
    fn subspace_counts() {
        let mut b = Budget::new("test", 1_000_000);
        assert_eq!(enumerate_subspaces(2, 1, 2, &mut b).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(4, 2, 2, &mut b).unwrap().len(), 35);
        let zero = enumerate_subspaces(3, 0, 5, &mut b).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].dim(), 0);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for p in [2u64, 3] {
            for n in 0..=4usize {
                for k in 0..=n {
                    let mut b = Budget::new("test", 10_000_000);
                    let subs = enumerate_subspaces(n, k, p, &mut b).unwrap();
                    assert_eq!(num_bigint::BigUint::from(subs.len()), gaussian_binomial(n as u64, k as u64, p));
                    for s in &subs {
                        assert_eq!(&SubspaceRep::span(p, n, s.basis()), s);
                    }
                    let mut uniq = subs.clone();
                    uniq.dedup();
                    assert_eq!(uniq.len(), subs.len());
                }
            }
        }
    }

    #[test]
    fn cap_is_reported() {
        let mut b = Budget::new("enumerate_subspaces", 10);
        assert!(matches!(
            enumerate_subspaces(4, 2, 2, &mut b),
            Err(Error::CapExceeded { limit: 10, .. })
        ));
    }

    #[test]
    fn quotient_coordinates() {
        let s = SubspaceRep::span(2, 2, &m(2, &[&[1, 1]]));
        assert_eq!(s.free_columns(), vec![1]);
        assert_eq!(s.quotient_coords(&[1, 1]), vec![0]);
        assert_eq!(s.quotient_coords(&[1, 0]), vec![1]);
    }

    proptest! {
        #[test]
        fn rref_invariants(entries in proptest::collection::vec(0u64..3, 12), rows in 1usize..4) {
            let cols = 12 / rows.max(1);
            let mm = FpMatrix::from_flat(3, rows, cols, entries[..rows * cols].to_vec());
            let (r, rank, _) = rref(&mm);
            let (r2, rank2, _) = rref(&r);
            prop_assert_eq!(&r, &r2);
            prop_assert_eq!(rank, rank2);
            prop_assert_eq!(rank, mm.transpose().rank());
        }
    }
}
