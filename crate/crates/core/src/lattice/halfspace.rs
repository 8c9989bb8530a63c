//! Exact extreme-ray and vertex enumeration by exhaustive active-set search.
//!
//! Inputs here are small (a few dozen constraints at most), so every candidate
//! active set of the right size is tried and checked exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{primitive, rank, rat_big, rational_kernel, solve_rational_linear, IntMatrix, IntVector, RationalVector};

/// The closed halfspace `<normal, u> >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: IntVector,
    pub rhs: BigInt,
}

impl Halfspace {
    pub fn contains(&self, u: &IntVector) -> bool {
        self.normal.dot(u) >= self.rhs
    }

    pub fn contains_rational(&self, u: &[super::Rational]) -> bool {
        self.normal.dot_rational(u) >= rat_big(&self.rhs)
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Clears denominators and divides out the content.
pub(crate) fn integral_direction(v: &[super::Rational]) -> Option<IntVector> {
    let l = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let scaled = IntVector::new(v.iter().map(|q| (q * rat_big(&l)).to_integer()).collect());
    primitive(&scaled).ok()
}

/// Extreme rays of the cone `{x : <a, x> >= 0 for a in ineqs, <e, x> = 0 for e in eqs}`.
///
/// Returns `None` when the cone contains a line (it is not pointed). A pointed cone
/// with no extreme rays is `{0}`. Rays are primitive, deduplicated, and sorted.
pub fn extreme_rays(dim: usize, ineqs: &[IntVector], eqs: &[IntVector]) -> Option<Vec<IntVector>> {
    let all: Vec<IntVector> = ineqs.iter().chain(eqs).cloned().collect();
    if all.is_empty() || rank(&IntMatrix::from_rows(&all)) < dim {
        return (dim == 0).then(Vec::new);
    }
    let eq_rank = if eqs.is_empty() { 0 } else { rank(&IntMatrix::from_rows(eqs)) };
    if eq_rank + 1 > dim {
        return Some(Vec::new());
    }
    let need = dim - 1 - eq_rank;
    let mut rays: Vec<IntVector> = Vec::new();
    for_each_subset(ineqs.len(), need, |subset| {
        let mut rows: Vec<IntVector> = eqs.to_vec();
        rows.extend(subset.iter().map(|&i| ineqs[i].clone()));
        let m = if rows.is_empty() { IntMatrix::zeros(0, dim) } else { IntMatrix::from_rows(&rows) };
        let kernel = if rows.is_empty() {
            (0..dim).map(|i| IntVector::unit(dim, i).to_rational()).collect()
        } else {
            rational_kernel(&m)
        };
        if kernel.len() != 1 {
            return;
        }
        let Some(g) = integral_direction(&kernel[0]) else {
            return;
        };
        for cand in [g.clone(), g.neg()] {
            if ineqs.iter().all(|a| !a.dot(&cand).is_negative()) && !rays.contains(&cand) {
                rays.push(cand);
            }
        }
    });
    rays.sort();
    Some(rays)
}

/// Vertices of `{u : <normal, u> >= rhs}`, assuming the polyhedron is pointed.
pub fn vertices(dim: usize, halfspaces: &[Halfspace]) -> Vec<RationalVector> {
    let mut out: Vec<RationalVector> = Vec::new();
    for_each_subset(halfspaces.len(), dim, |subset| {
        let rows: Vec<IntVector> = subset.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let rhs = IntVector::new(subset.iter().map(|&i| halfspaces[i].rhs.clone()).collect());
        let a = if rows.is_empty() { IntMatrix::zeros(0, dim) } else { IntMatrix::from_rows(&rows) };
        match solve_rational_linear(&a, &rhs) {
            Ok(sol)
                if sol.unique && halfspaces.iter().all(|h| h.contains_rational(&sol.x)) && !out.contains(&sol.x) =>
            {
                out.push(sol.x);
            }
            _ => {}
        }
    });
    out.sort();
    out
}
