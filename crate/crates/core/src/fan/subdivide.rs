use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::{is_primitive, primitive, rat_big, smith_normal_form, IntVector, Rational};

use super::{Cone, Fan, FanError};

/// Star subdivision of `fan` at the primitive vector `w`.
///
/// Each maximal cone containing `w` is replaced by the joins of `w` with its
/// facets that miss `w`; other cones are kept. The new ray is appended, so every
/// existing ray keeps its index.
pub fn stellar_subdivide(fan: &Fan, w: &IntVector) -> Result<Fan, FanError> {
    if w.dim() != fan.dim() {
        return Err(crate::lattice::LatticeError::DimensionMismatch { expected: fan.dim(), found: w.dim() }.into());
    }
    if !is_primitive(w) {
        return Err(FanError::NotPrimitive(w.clone()));
    }
    if fan.position_of_ray(w).is_some() {
        return Ok(fan.clone());
    }
    let new_ray = fan.rays().len();
    let mut cones = Vec::with_capacity(fan.cones().len() + fan.dim());
    let mut hit = false;
    for cone in fan.cones() {
        let coords = fan.cone_coordinates(cone, w).filter(|x| x.iter().all(|c| !c.is_negative()));
        match coords {
            Some(lambda) => {
                hit = true;
                for (pos, l) in lambda.iter().enumerate() {
                    if l.is_positive() {
                        let mut rays = cone.rays().to_vec();
                        rays[pos] = new_ray;
                        cones.push(Cone::new(rays));
                    }
                }
            }
            None => cones.push(cone.clone()),
        }
    }
    if !hit {
        return Err(FanError::OutsideSupport(w.clone()));
    }
    let mut rays = fan.rays().to_vec();
    rays.push(w.clone());
    Ok(Fan::from_parts(fan.dim(), rays, cones))
}

/// Nonzero lattice points `sum l_i v_i` with every `l_i` in `[0, 1)`, for the
/// generators `v_i` of a simplicial cone. Each point comes with its coefficients.
///
/// Enumerated through the Smith form of the generator matrix, so exactly
/// `multiplicity - 1` points are produced.
pub fn box_points(fan: &Fan, cone: &Cone) -> Vec<(IntVector, Vec<Rational>)> {
    // Columns of `a` are the generators; x = a * l.
    let a = fan.generator_matrix(cone).transpose();
    let f = smith_normal_form(&a);
    let factors = f.invariant_factors();
    let k = cone.len();
    if factors.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut t = vec![BigInt::zero(); k];
    loop {
        // l' = t / s, l = V l' reduced mod 1.
        let lp: Vec<Rational> = t.iter().zip(&factors).map(|(ti, si)| Rational::new(ti.clone(), si.clone())).collect();
        let lambda: Vec<Rational> = (0..k)
            .map(|r| {
                let x: Rational = (0..k).map(|c| rat_big(f.v.get(r, c)) * &lp[c]).sum();
                &x - Rational::from_integer(x.floor().to_integer())
            })
            .collect();
        if lambda.iter().any(|l| !l.is_zero()) {
            let coords: Vec<BigInt> = (0..fan.dim())
                .map(|row| {
                    let s: Rational = (0..k).map(|c| rat_big(a.get(row, c)) * &lambda[c]).sum();
                    debug_assert!(s.is_integer());
                    s.to_integer()
                })
                .collect();
            out.push((IntVector::new(coords), lambda));
        }
        // odometer over t_i in [0, s_i)
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            t[i] += 1;
            if t[i] < factors[i] {
                break;
            }
            t[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Picks the subdivision point for a singular cone: the primitive box point
/// minimizing the largest child multiplicity, ties broken lexicographically.
fn best_center(fan: &Fan, cone: &Cone, mult: &BigInt) -> IntVector {
    let mut best: Option<(Rational, IntVector)> = None;
    for (x, lambda) in box_points(fan, cone) {
        let content = x.content();
        let w = primitive(&x).expect("box points are nonzero");
        let scale = Rational::from_integer(content);
        // Replacing generator i by w gives multiplicity (l_i / content) * mult.
        let worst = lambda.iter().map(|l| l / &scale).max().expect("cone has generators") * rat_big(mult);
        let better = match &best {
            None => true,
            Some((bw, bv)) => worst < *bw || (worst == *bw && w < *bv),
        };
        if better {
            best = Some((worst, w));
        }
    }
    best.expect("a singular cone has a nonzero box point").1
}

/// Resolves a simplicial fan by repeated stellar subdivision.
///
/// At each step the maximal cone of largest multiplicity (first in order on
/// ties) is subdivided at the box point from [`best_center`]. Every child of a
/// subdivided cone has multiplicity `l_i * mult < mult`, so the process ends.
pub fn desingularize(fan: &Fan) -> Fan {
    let mut current = fan.clone();
    loop {
        let worst = current
            .cones()
            .iter()
            .filter_map(|c| current.cone_index(c).map(|m| (m, c)))
            .filter(|(m, _)| !m.is_one())
            .fold(None::<(BigInt, &Cone)>, |acc, (m, c)| match acc {
                Some((bm, bc)) if bm >= m => Some((bm, bc)),
                _ => Some((m, c)),
            });
        let Some((mult, cone)) = worst else {
            return current;
        };
        let w = best_center(&current, cone, &mult);
        current = stellar_subdivide(&current, &w).expect("box point lies in the cone");
    }
}
