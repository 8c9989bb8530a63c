use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{rat_big, smith_normal_form, IntMatrix, IntVector, LatticeError, Rational, RationalVector};

/// An exact solution of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub x: RationalVector,
    /// `A` has full column rank, so `x` is the only solution.
    pub unique: bool,
}

/// Reduced row echelon form over the rationals; returns pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let k = m[r][col].clone();
                for c in 0..m[r].len() {
                    let d = &k * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn to_rational_rows(a: &IntMatrix) -> Vec<Vec<Rational>> {
    (0..a.rows()).map(|r| (0..a.cols()).map(|c| rat_big(a.get(r, c))).collect()).collect()
}

pub fn rank(a: &IntMatrix) -> usize {
    let mut m = to_rational_rows(a);
    rref(&mut m, a.cols()).len()
}

/// Solves `A x = b` exactly over the rationals. Free variables are set to zero.
pub fn solve_rational_linear(a: &IntMatrix, b: &IntVector) -> Result<LinearSolution, LatticeError> {
    if b.dim() != a.rows() {
        return Err(LatticeError::DimensionMismatch { expected: a.rows(), found: b.dim() });
    }
    let mut m = to_rational_rows(a);
    for (row, bi) in m.iter_mut().zip(b.coords()) {
        row.push(rat_big(bi));
    }
    let n = a.cols();
    let pivots = rref(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return Err(LatticeError::NoSolution);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = m[row][n].clone();
    }
    Ok(LinearSolution { x, unique: pivots.len() == n })
}

/// A basis of `{x : A x = 0}` over the rationals.
pub fn rational_kernel(a: &IntMatrix) -> Vec<RationalVector> {
    let n = a.cols();
    let mut m = to_rational_rows(a);
    let pivots = rref(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` over the integers, via the Smith form of `A`.
pub fn solve_integer_linear(a: &IntMatrix, b: &IntVector) -> Result<Option<IntVector>, LatticeError> {
    if b.dim() != a.rows() {
        return Err(LatticeError::DimensionMismatch { expected: a.rows(), found: b.dim() });
    }
    let f = smith_normal_form(a);
    let ub = f.u.apply(b)?;
    let factors = f.invariant_factors();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.coords().iter().enumerate() {
        match factors.get(i) {
            Some(d) => {
                if !c.is_multiple_of(d) {
                    return Ok(None);
                }
                y[i] = c / d;
            }
            None if !c.is_zero() => return Ok(None),
            None => {}
        }
    }
    Ok(Some(f.v.apply(&IntVector::new(y))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn identity_system() {
        let s = solve_rational_linear(&IntMatrix::identity(2), &IntVector::from_i64(&[1, 2])).unwrap();
        assert_eq!(s.x, vec![rat(1), rat(2)]);
        assert!(s.unique);
    }

    #[test]
    fn non_integral_certificate_system() {
        let a = IntMatrix::from_i64_rows(&[&[3, -2], &[0, 1]]);
        let s = solve_rational_linear(&a, &IntVector::from_i64(&[0, -1])).unwrap();
        assert_eq!(s.x, vec![q(-2, 3), rat(-1)]);
        assert!(s.unique);
        // substitute back
        assert_eq!(a.row(0).dot_rational(&s.x), rat(0));
        assert_eq!(a.row(1).dot_rational(&s.x), rat(-1));
    }

    #[test]
    fn inconsistent_system() {
        let a = IntMatrix::from_i64_rows(&[&[1, 0], &[1, 0]]);
        assert_eq!(solve_rational_linear(&a, &IntVector::from_i64(&[0, 1])), Err(LatticeError::NoSolution));
    }

    #[test]
    fn underdetermined_system_is_not_unique() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1, 0]]);
        let s = solve_rational_linear(&a, &IntVector::from_i64(&[5])).unwrap();
        assert!(!s.unique);
        assert_eq!(a.row(0).dot_rational(&s.x), rat(5));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = rational_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(a.row(0).dot_rational(v), rat(0));
        }
        assert!(rational_kernel(&IntMatrix::identity(3)).is_empty());
    }

    #[test]
    fn integer_solvability() {
        let a = IntMatrix::from_i64_rows(&[&[3, -2], &[0, 1]]);
        assert_eq!(solve_integer_linear(&a, &IntVector::from_i64(&[0, -1])).unwrap(), None);
        let x = solve_integer_linear(&a, &IntVector::from_i64(&[1, 1])).unwrap().unwrap();
        assert_eq!(a.apply(&x).unwrap(), IntVector::from_i64(&[1, 1]));
        // A primitive row can hit any integer.
        let ray = IntMatrix::from_i64_rows(&[&[3, -2]]);
        let x = solve_integer_linear(&ray, &IntVector::from_i64(&[7])).unwrap().unwrap();
        assert_eq!(ray.apply(&x).unwrap(), IntVector::from_i64(&[7]));
        let even = IntMatrix::from_i64_rows(&[&[2, 4]]);
        assert_eq!(solve_integer_linear(&even, &IntVector::from_i64(&[3])).unwrap(), None);
    }

    proptest! {
        #[test]
        fn solutions_reproduce_rhs(
            e in proptest::collection::vec(-9i64..=9, 12),
            b in proptest::collection::vec(-9i64..=9, 3),
        ) {
            let a = IntMatrix::new(3, 4, e.into_iter().map(BigInt::from).collect()).unwrap();
            let b = IntVector::from_i64(&b);
            if let Ok(s) = solve_rational_linear(&a, &b) {
                for r in 0..3 {
                    prop_assert_eq!(a.row(r).dot_rational(&s.x), rat_big(&b[r]));
                }
            }
            if let Some(x) = solve_integer_linear(&a, &b).unwrap() {
                prop_assert_eq!(a.apply(&x).unwrap(), b);
            }
        }
    }
}
