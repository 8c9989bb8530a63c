//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) and
//! reduced rationals ([`Rational`]). No floating point is used anywhere.

mod halfspace;
mod snf;
mod solve;

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use halfspace::{extreme_rays, vertices, Halfspace};
pub(crate) use halfspace::{for_each_subset as halfspace_subsets, integral_direction};
pub use snf::{smith_normal_form, SmithForm};
pub use solve::{rank, rational_kernel, solve_integer_linear, solve_rational_linear, LinearSolution};

/// Reduced rational with positive denominator.
pub type Rational = num_rational::BigRational;

/// A vector of rationals, as returned by exact solves.
pub type RationalVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("entries length {len} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
}

/// Element of `Z^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a rational covector.
    pub fn dot_rational(&self, other: &[Rational]) -> Rational {
        debug_assert_eq!(self.dim(), other.len());
        self.0.iter().zip(other).map(|(a, b)| b * Rational::from_integer(a.clone())).sum()
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    pub fn to_rational(&self) -> RationalVector {
        self.0.iter().map(|a| Rational::from_integer(a.clone())).collect()
    }

    /// Small-integer view, when every coordinate fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;

    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive(v: &IntVector) -> Result<IntVector, LatticeError> {
    let g = v.content();
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(IntVector(v.0.iter().map(|a| a / &g).collect()))
}

pub fn is_primitive(v: &IntVector) -> bool {
    v.content().is_one()
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LatticeError> {
        if entries.len() != rows * cols {
            return Err(LatticeError::BadShape { rows, cols, len: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, BigInt::from(*d));
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors.
    ///
    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[IntVector]) -> Self {
        let cols = rows.first().map_or(0, IntVector::dim);
        assert!(rows.iter().all(|r| r.dim() == cols), "ragged rows");
        IntMatrix { rows: rows.len(), cols, entries: rows.iter().flat_map(|r| r.0.iter().cloned()).collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<IntVector> = rows.iter().map(|r| IntVector::from_i64(r)).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> IntVector {
        IntVector(self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn column(&self, c: usize) -> IntVector {
        IntVector((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: BigInt = (0..self.cols).map(|k| self.get(r, k) * other.get(k, c)).sum();
                out.set(r, c, s);
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &IntVector) -> Result<IntVector, LatticeError> {
        if v.dim() != self.cols {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, found: v.dim() });
        }
        Ok(IntVector((0..self.rows).map(|r| self.row(r).dot(v)).collect()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).0).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(src, c) * k;
            self.entries[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, src) * k;
            self.entries[r * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Index of a sublattice, possibly infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(k) => Some(k),
            LatticeIndex::Infinite => None,
        }
    }
}

/// Index `[Z^n : span_Z(rows)]` of the lattice spanned by the rows of a square basis.
pub fn sublattice_index(basis: &IntMatrix) -> Result<LatticeIndex, LatticeError> {
    if !basis.is_square() {
        return Err(LatticeError::NotSquare { rows: basis.rows(), cols: basis.cols() });
    }
    let snf = smith_normal_form(basis);
    let factors = snf.invariant_factors();
    if factors.len() < basis.rows() {
        return Ok(LatticeIndex::Infinite);
    }
    Ok(LatticeIndex::Finite(factors.iter().product()))
}

/// Index of the lattice spanned by linearly independent `rows` inside its saturation
/// `span_R(rows) ∩ Z^n`. Returns `None` when the rows are dependent.
pub fn saturation_index(rows: &IntMatrix) -> Option<BigInt> {
    let factors = smith_normal_form(rows).invariant_factors();
    (factors.len() == rows.rows()).then(|| factors.iter().product())
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Floor of a rational, as an integer.
pub(crate) fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub(crate) fn ceil(q: &Rational) -> BigInt {
    -(-q.numer()).div_floor(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&IntVector::from_i64(&[2, 4, 6])).unwrap(), IntVector::from_i64(&[1, 2, 3]));
        assert_eq!(primitive(&IntVector::from_i64(&[3, -2])).unwrap(), IntVector::from_i64(&[3, -2]));
        assert_eq!(primitive(&IntVector::from_i64(&[0, 0])), Err(LatticeError::ZeroVector));
        assert_eq!(primitive(&IntVector::from_i64(&[0, -4])).unwrap(), IntVector::from_i64(&[0, -1]));
    }

    #[test]
    fn sublattice_index_examples() {
        assert_eq!(sublattice_index(&IntMatrix::identity(3)).unwrap(), LatticeIndex::Finite(1.into()));
        for n in 2..=6i64 {
            let mut diag = vec![1; n as usize];
            diag[0] = n + 1;
            let b = IntMatrix::diagonal(&diag);
            assert_eq!(sublattice_index(&b).unwrap(), LatticeIndex::Finite((n + 1).into()));
        }
        let degenerate = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 0]]);
        assert_eq!(sublattice_index(&degenerate).unwrap(), LatticeIndex::Infinite);
        let rect = IntMatrix::from_i64_rows(&[&[1, 0, 0]]);
        assert!(matches!(sublattice_index(&rect), Err(LatticeError::NotSquare { .. })));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64_rows(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0
        assert_eq!(m.det().unwrap(), BigInt::from(2 * (-6 - 20) + (-2)));
        let singular = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(singular.det().unwrap().is_zero());
        let needs_pivot = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(needs_pivot.det().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn saturation_index_of_lower_rank_rows() {
        let rows = IntMatrix::from_i64_rows(&[&[2, 0, 0]]);
        assert_eq!(saturation_index(&rows), Some(BigInt::from(2)));
        let rows = IntMatrix::from_i64_rows(&[&[1, 1, 0], &[1, -1, 0]]);
        assert_eq!(saturation_index(&rows), Some(BigInt::from(2)));
        let dependent = IntMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert_eq!(saturation_index(&dependent), None);
    }

    #[test]
    fn floor_and_ceil() {
        let q = Rational::new(BigInt::from(-7), BigInt::from(2));
        assert_eq!(floor(&q), BigInt::from(-4));
        assert_eq!(ceil(&q), BigInt::from(-3));
        assert_eq!(floor(&rat(5)), BigInt::from(5));
        assert_eq!(ceil(&rat(5)), BigInt::from(5));
    }
}
