//! Fans of `P^n` and of its quotient by the cyclic group of order `n + 1`
//! acting with weights `(0, 1, ..., n)`.

use num_bigint::BigInt;

use crate::lattice::{IntMatrix, IntVector};

use super::{Fan, FanError, LatticeHom};

/// The fan of `P^n` in the sublattice `N'`, the fan of the quotient in `N`, and
/// the inclusion `N' -> N`.
#[derive(Debug, Clone)]
pub struct QuotientFans {
    pub n: usize,
    /// Rays written in the basis `(n+1)e_1, e_2, ..., e_n` of `N'`.
    pub cover: Fan,
    /// Rays in the standard basis of `N = Z^n`.
    pub quotient: Fan,
    /// `diag(n+1, 1, ..., 1)`, mapping `N'`-coordinates to `N`-coordinates.
    pub inclusion: LatticeHom,
}

/// Rays `v_1, ..., v_{n+1}` of the quotient fan in `N`:
/// `v_1 = (n+1, -2, -3, ..., -n)`, `v_i = e_i` for `2 <= i <= n`, and
/// `v_{n+1} = (-(n+1), 1, 2, ..., n-1)`.
pub(crate) fn quotient_rays(n: usize) -> Vec<IntVector> {
    let n1 = n as i64 + 1;
    let mut rays = Vec::with_capacity(n + 1);
    let mut first = vec![n1];
    first.extend((2..=n as i64).map(|j| -j));
    rays.push(IntVector::from_i64(&first));
    for i in 1..n {
        rays.push(IntVector::unit(n, i));
    }
    let mut last = vec![-n1];
    last.extend(1..n as i64);
    rays.push(IntVector::from_i64(&last));
    rays
}

/// All `n`-element subsets of `0..=n`, lexicographically.
fn facets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    crate::lattice::halfspace_subsets(n + 1, n, |s| out.push(s.to_vec()));
    out
}

pub fn cyclic_quotient_fans(n: i64) -> Result<QuotientFans, FanError> {
    if n < 2 {
        return Err(FanError::BadDimension(n));
    }
    let n = n as usize;
    let rays = quotient_rays(n);
    let scale = BigInt::from(n + 1);
    let cover_rays: Vec<IntVector> = rays
        .iter()
        .map(|r| {
            let mut c = r.clone().into_coords();
            c[0] = &c[0] / &scale;
            IntVector::new(c)
        })
        .collect();
    let mut diag = vec![1i64; n];
    diag[0] = n as i64 + 1;
    Ok(QuotientFans {
        n,
        cover: Fan::new(n, cover_rays, facets(n))?,
        quotient: Fan::new(n, rays, facets(n))?,
        inclusion: LatticeHom::new(IntMatrix::diagonal(&diag)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{cone_multiplicity, is_smooth, is_toric_morphism, validate_fan};

    #[test]
    fn rays_for_small_n() {
        let f = cyclic_quotient_fans(2).unwrap();
        assert_eq!(
            f.quotient.rays(),
            &[IntVector::from_i64(&[3, -2]), IntVector::from_i64(&[0, 1]), IntVector::from_i64(&[-3, 1])]
        );
        let f4 = cyclic_quotient_fans(4).unwrap();
        assert_eq!(f4.quotient.ray(0), &IntVector::from_i64(&[5, -2, -3, -4]));
        assert_eq!(f4.quotient.ray(4), &IntVector::from_i64(&[-5, 1, 2, 3]));
    }

    #[test]
    fn structure_for_n_up_to_six() {
        for n in 2..=6 {
            let f = cyclic_quotient_fans(n).unwrap();
            let sum = f.quotient.rays().iter().fold(IntVector::zero(n as usize), |acc, r| acc.add(r));
            assert!(sum.is_zero());
            assert_eq!(f.quotient.cones().len(), n as usize + 1);
            assert!(validate_fan(&f.quotient).is_valid());
            assert!(validate_fan(&f.cover).is_valid());
            assert!(is_smooth(&f.cover));
            assert!(!is_smooth(&f.quotient));
            for cone in f.quotient.cones() {
                assert_eq!(cone_multiplicity(&f.quotient, cone).unwrap(), BigInt::from(n + 1));
                assert_eq!(cone_multiplicity(&f.cover, cone).unwrap(), BigInt::from(1));
            }
            assert!(is_toric_morphism(&f.inclusion, &f.cover, &f.quotient).unwrap());
            for (i, r) in f.cover.rays().iter().enumerate() {
                assert_eq!(&f.inclusion.apply(r).unwrap(), f.quotient.ray(i));
            }
        }
    }

    #[test]
    fn small_dimensions_are_rejected() {
        assert!(matches!(cyclic_quotient_fans(1), Err(FanError::BadDimension(1))));
        assert!(matches!(cyclic_quotient_fans(-3), Err(FanError::BadDimension(-3))));
    }
}
