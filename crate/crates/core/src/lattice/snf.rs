use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U * A * V = S` with `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `s_1 | s_2 | ...`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of the smallest nonzero entry (by absolute value) in the block `[t.., t..]`.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let v = a.get(r, c).abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((r, c, v));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pr, pc)) = min_pivot(&s, t) else {
                return SmithForm { u, s, v };
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut dirty = false;
            let pivot = s.get(t, t).clone();
            for r in t + 1..m {
                if s.get(r, t).is_zero() {
                    continue;
                }
                let q = -s.get(r, t).div_floor(&pivot);
                s.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                dirty |= !s.get(r, t).is_zero();
            }
            for c in t + 1..n {
                if s.get(t, c).is_zero() {
                    continue;
                }
                let q = -s.get(t, c).div_floor(&pivot);
                s.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                dirty |= !s.get(t, c).is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column t are clear; enforce divisibility of the remaining block.
            let offender = (t + 1..m)
                .flat_map(|r| (t + 1..n).map(move |c| (r, c)))
                .find(|&(r, c)| !s.get(r, c).is_multiple_of(&pivot));
            match offender {
                Some((r, _)) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{solve_rational_linear, IntVector, Rational};
    use num_traits::One;
    use proptest::prelude::*;

    fn is_diagonal(s: &IntMatrix) -> bool {
        (0..s.rows()).all(|r| (0..s.cols()).all(|c| r == c || s.get(r, c).is_zero()))
    }

    fn divisibility_chain(factors: &[BigInt]) -> bool {
        factors.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }

    /// Inverse of a unimodular matrix, column by column through exact solves.
    fn inverse(m: &IntMatrix) -> IntMatrix {
        let n = m.rows();
        let mut inv = IntMatrix::zeros(n, n);
        for c in 0..n {
            let sol = solve_rational_linear(m, &IntVector::unit(n, c)).unwrap();
            for r in 0..n {
                let x: &Rational = &sol.x[r];
                assert!(x.is_integer(), "inverse of a unimodular matrix is integral");
                inv.set(r, c, x.to_integer());
            }
        }
        inv
    }

    fn check(a: &IntMatrix) {
        let f = smith_normal_form(a);
        let uav = f.u.mul(a).unwrap().mul(&f.v).unwrap();
        assert_eq!(uav, f.s);
        assert!(is_diagonal(&f.s));
        assert!(f.u.det().unwrap().abs().is_one());
        assert!(f.v.det().unwrap().abs().is_one());
        let factors = f.invariant_factors();
        assert!(factors.iter().all(|d| d.is_positive()));
        assert!(divisibility_chain(&factors));
        // Everything after the invariant factors is zero.
        for i in factors.len()..a.rows().min(a.cols()) {
            assert!(f.s.get(i, i).is_zero());
        }
        let rebuilt = inverse(&f.u).mul(&f.s).unwrap().mul(&inverse(&f.v)).unwrap();
        assert_eq!(&rebuilt, a);
    }

    #[test]
    fn identity_is_fixed() {
        let i3 = IntMatrix::identity(3);
        let f = smith_normal_form(&i3);
        assert_eq!(f.u, i3);
        assert_eq!(f.s, i3);
        assert_eq!(f.v, i3);
    }

    #[test]
    fn coprime_diagonal_merges() {
        let a = IntMatrix::diagonal(&[2, 3]);
        let f = smith_normal_form(&a);
        assert_eq!(f.s, IntMatrix::diagonal(&[1, 6]));
        check(&a);
    }

    #[test]
    fn quotient_sublattice_basis() {
        let a = IntMatrix::diagonal(&[4, 1, 1]);
        let f = smith_normal_form(&a);
        assert_eq!(f.s, IntMatrix::diagonal(&[1, 1, 4]));
        assert_eq!(f.invariant_factors().iter().product::<BigInt>(), BigInt::from(4));
    }

    #[test]
    fn rectangular_and_zero() {
        check(&IntMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12]]));
        check(&IntMatrix::from_i64_rows(&[&[0, 0], &[0, 0], &[0, 0]]));
        check(&IntMatrix::from_i64_rows(&[&[0, 6], &[4, 0], &[0, 10]]));
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c)
                .prop_map(move |e| IntMatrix::new(r, c, e.into_iter().map(BigInt::from).collect()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn random_matrices_reconstruct(a in arb_matrix()) {
            check(&a);
        }

        #[test]
        fn index_is_product_of_invariant_factors(e in proptest::collection::vec(-9i64..=9, 9)) {
            let a = IntMatrix::new(3, 3, e.into_iter().map(BigInt::from).collect()).unwrap();
            let det = a.det().unwrap().abs();
            match crate::lattice::sublattice_index(&a).unwrap() {
                crate::lattice::LatticeIndex::Finite(k) => prop_assert_eq!(k, det),
                crate::lattice::LatticeIndex::Infinite => prop_assert!(det.is_zero()),
            }
        }
    }
}
