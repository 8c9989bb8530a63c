//! Simplicial fans: validation, multiplicities, toric morphisms, and
//! resolution by stellar subdivision.

mod morphism;
mod quotient;
mod subdivide;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    extreme_rays, integral_direction, is_primitive, rank, rational_kernel, saturation_index, solve_rational_linear,
    sublattice_index, IntMatrix, IntVector, LatticeError, LatticeIndex, Rational,
};

pub use morphism::{is_toric_morphism, LatticeHom};
pub use quotient::{cyclic_quotient_fans, QuotientFans};
pub use subdivide::{box_points, desingularize, stellar_subdivide};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {index} has dimension {found}, fan dimension is {expected}")]
    RayDimension { index: usize, expected: usize, found: usize },
    #[error("cone {cone} refers to ray {ray}, but the fan has {rays} rays")]
    RayIndexOutOfRange { cone: usize, ray: usize, rays: usize },
    #[error("cone {0} is empty")]
    EmptyCone(usize),
    #[error("cone {0} lists a ray twice")]
    RepeatedRay(usize),
    #[error("cone is not a full-dimensional maximal cone of the fan")]
    NotMaximal,
    #[error("vector {0} lies in no cone of the fan")]
    OutsideSupport(IntVector),
    #[error("vector {0} is not primitive")]
    NotPrimitive(IntVector),
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(i64),
    #[error("fan dimension must be positive")]
    ZeroDimension,
    #[error("matrix is {rows}x{cols}, fans have dimensions {src} -> {dst}")]
    HomShape { rows: usize, cols: usize, src: usize, dst: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A cone of a fan, as a sorted set of ray indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_ray(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// A fan given by primitive ray generators and its maximal cones.
///
/// Construction only checks shapes and indices; the geometric conditions
/// (primitive rays, simplicial cones, cones meeting in common faces) are
/// checked by [`validate_fan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<IntVector>,
    cones: Vec<Cone>,
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<IntVector>, cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        if dim == 0 {
            return Err(FanError::ZeroDimension);
        }
        for (index, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(FanError::RayDimension { index, expected: dim, found: r.dim() });
            }
        }
        let mut out = Vec::with_capacity(cones.len());
        for (ci, c) in cones.into_iter().enumerate() {
            if c.is_empty() {
                return Err(FanError::EmptyCone(ci));
            }
            if let Some(&ray) = c.iter().find(|&&r| r >= rays.len()) {
                return Err(FanError::RayIndexOutOfRange { cone: ci, ray, rays: rays.len() });
            }
            let cone = Cone::new(c.clone());
            if cone.len() != c.len() {
                return Err(FanError::RepeatedRay(ci));
            }
            out.push(cone);
        }
        Ok(Fan { dim, rays, cones: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &IntVector {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Rows are the generators of `cone`, in index order.
    pub fn generator_matrix(&self, cone: &Cone) -> IntMatrix {
        let rows: Vec<IntVector> = cone.rays().iter().map(|&i| self.rays[i].clone()).collect();
        IntMatrix::from_rows(&rows)
    }

    pub fn is_simplicial(&self, cone: &Cone) -> bool {
        rank(&self.generator_matrix(cone)) == cone.len()
    }

    /// Coordinates of `point` in the generators of a simplicial `cone`, if
    /// `point` lies in the linear span of the cone.
    pub fn cone_coordinates(&self, cone: &Cone, point: &IntVector) -> Option<Vec<Rational>> {
        let a = self.generator_matrix(cone).transpose();
        solve_rational_linear(&a, point).ok().map(|s| s.x)
    }

    /// Membership of `point` in a simplicial cone, by exact nonnegative solving.
    pub fn cone_contains(&self, cone: &Cone, point: &IntVector) -> bool {
        self.cone_coordinates(cone, point).is_some_and(|x| x.iter().all(|c| !c.is_negative()))
    }

    /// Index of the first maximal cone containing `point`.
    pub fn find_cone(&self, point: &IntVector) -> Option<usize> {
        self.cones.iter().position(|c| self.cone_contains(c, point))
    }

    /// Multiplicity of any simplicial cone: the index of the lattice spanned by
    /// its generators inside the lattice points of their span.
    pub fn cone_index(&self, cone: &Cone) -> Option<BigInt> {
        saturation_index(&self.generator_matrix(cone))
    }

    pub fn position_of_ray(&self, v: &IntVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    pub(crate) fn from_parts(dim: usize, rays: Vec<IntVector>, cones: Vec<Cone>) -> Fan {
        Fan { dim, rays, cones }
    }
}

/// Multiplicity of a full-dimensional maximal cone of `fan`.
pub fn cone_multiplicity(fan: &Fan, cone: &Cone) -> Result<BigInt, FanError> {
    if cone.len() != fan.dim() || !fan.cones().contains(cone) {
        return Err(FanError::NotMaximal);
    }
    match sublattice_index(&fan.generator_matrix(cone))? {
        LatticeIndex::Finite(k) => Ok(k),
        LatticeIndex::Infinite => Err(FanError::NotMaximal),
    }
}

/// True iff every maximal cone is generated by part of a lattice basis.
pub fn is_smooth(fan: &Fan) -> bool {
    fan.cones().iter().all(|c| fan.cone_index(c).is_some_and(|k| k.is_one()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroRay {
        ray: usize,
    },
    NonPrimitiveRay {
        ray: usize,
    },
    NonSimplicialCone {
        cone: usize,
    },
    UnusedRay {
        ray: usize,
    },
    /// Cone `cone` is contained in (or equal to) cone `other`.
    NotMaximal {
        cone: usize,
        other: usize,
    },
    /// The intersection of two cones is not a common face.
    ImproperIntersection {
        a: usize,
        b: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            Violation::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            Violation::NonSimplicialCone { cone } => write!(f, "cone {cone} is not simplicial"),
            Violation::UnusedRay { ray } => write!(f, "ray {ray} lies in no cone"),
            Violation::NotMaximal { cone, other } => write!(f, "cone {cone} is a face of cone {other}"),
            Violation::ImproperIntersection { a, b } => {
                write!(f, "cones {a} and {b} do not meet in a common face")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks whether two simplicial cones meet in the face spanned by their shared rays.
///
/// With `S` the shared rays and `A'`, `B'` the others, the intersection is larger
/// than `cone(S)` iff some nonzero `(l, m) >= 0` has `sum l_i a'_i - sum m_j b'_j`
/// in `span(S)`. Projecting along `span(S)` leaves a cone in `(l, m)` space that
/// must be `{0}`.
fn meet_in_common_face(fan: &Fan, a: &Cone, b: &Cone) -> bool {
    let d = fan.dim();
    let only_a: Vec<&IntVector> = a.rays().iter().filter(|r| !b.contains_ray(**r)).map(|&r| fan.ray(r)).collect();
    let only_b: Vec<&IntVector> = b.rays().iter().filter(|r| !a.contains_ray(**r)).map(|&r| fan.ray(r)).collect();
    let shared: Vec<IntVector> = a.rays().iter().filter(|r| b.contains_ray(**r)).map(|&r| fan.ray(r).clone()).collect();
    let width = only_a.len() + only_b.len();
    if width == 0 {
        return true;
    }
    // Functionals vanishing on span(S).
    let annihilators: Vec<IntVector> = if shared.is_empty() {
        (0..d).map(|i| IntVector::unit(d, i)).collect()
    } else {
        rational_kernel(&IntMatrix::from_rows(&shared)).iter().filter_map(|y| integral_direction(y)).collect()
    };
    let eqs: Vec<IntVector> = annihilators
        .iter()
        .map(|y| {
            let mut coords: Vec<BigInt> = only_a.iter().map(|v| y.dot(v)).collect();
            coords.extend(only_b.iter().map(|v| -y.dot(v)));
            IntVector::new(coords)
        })
        .collect();
    let ineqs: Vec<IntVector> = (0..width).map(|i| IntVector::unit(width, i)).collect();
    matches!(extreme_rays(width, &ineqs, &eqs), Some(rays) if rays.is_empty())
}

pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, r) in fan.rays().iter().enumerate() {
        if r.is_zero() {
            violations.push(Violation::ZeroRay { ray: i });
        } else if !is_primitive(r) {
            violations.push(Violation::NonPrimitiveRay { ray: i });
        }
    }
    let used: BTreeSet<usize> = fan.cones().iter().flat_map(|c| c.rays().iter().copied()).collect();
    for i in 0..fan.rays().len() {
        if !used.contains(&i) {
            violations.push(Violation::UnusedRay { ray: i });
        }
    }
    let simplicial: Vec<bool> = fan.cones().iter().map(|c| fan.is_simplicial(c)).collect();
    for (ci, ok) in simplicial.iter().enumerate() {
        if !ok {
            violations.push(Violation::NonSimplicialCone { cone: ci });
        }
    }
    let cones = fan.cones();
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            if cones[a].rays().iter().all(|r| cones[b].contains_ray(*r)) {
                violations.push(Violation::NotMaximal { cone: a, other: b });
                continue;
            }
            if cones[b].rays().iter().all(|r| cones[a].contains_ray(*r)) {
                violations.push(Violation::NotMaximal { cone: b, other: a });
                continue;
            }
            if simplicial[a] && simplicial[b] && !meet_in_common_face(fan, &cones[a], &cones[b]) {
                violations.push(Violation::ImproperIntersection { a, b });
            }
        }
    }
    ValidationReport { violations }
}

/// Interchange form of a fan: 0-based cone indices, primitive integer rays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDoc {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl FanDoc {
    pub fn into_fan(self) -> Result<Fan, FanError> {
        let rays = self.rays.iter().map(|r| IntVector::from_i64(r)).collect();
        Fan::new(self.dim, rays, self.cones)
    }

    /// Returns `None` if some coordinate does not fit in an `i64`.
    pub fn from_fan(fan: &Fan) -> Option<FanDoc> {
        Some(FanDoc {
            dim: fan.dim(),
            rays: fan.rays().iter().map(IntVector::to_i64).collect::<Option<_>>()?,
            cones: fan.cones().iter().map(|c| c.rays().to_vec()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    pub(crate) fn plane_fan(rays: &[&[i64]], cones: Vec<Vec<usize>>) -> Fan {
        Fan::new(2, rays.iter().map(|r| v(r)).collect(), cones).unwrap()
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(matches!(Fan::new(2, vec![v(&[1, 0, 0])], vec![vec![0]]), Err(FanError::RayDimension { .. })));
        assert!(matches!(Fan::new(2, vec![v(&[1, 0])], vec![vec![0, 1]]), Err(FanError::RayIndexOutOfRange { .. })));
        assert!(matches!(Fan::new(2, vec![v(&[1, 0])], vec![vec![]]), Err(FanError::EmptyCone(0))));
        assert!(matches!(Fan::new(2, vec![v(&[1, 0])], vec![vec![0, 0]]), Err(FanError::RepeatedRay(0))));
    }

    #[test]
    fn non_primitive_ray_is_reported() {
        let fan = plane_fan(&[&[2, 0], &[0, 1]], vec![vec![0, 1]]);
        let report = validate_fan(&fan);
        assert_eq!(report.violations, vec![Violation::NonPrimitiveRay { ray: 0 }]);
    }

    #[test]
    fn overlapping_cones_are_reported() {
        // {e1, e2} and {e1, (1,1)} overlap in the open cone between e1 and (1,1).
        let fan = plane_fan(&[&[1, 0], &[0, 1], &[1, 1]], vec![vec![0, 1], vec![0, 2]]);
        // Oracle: (2,1) is interior to both cones.
        let p = v(&[2, 1]);
        assert!(fan.cone_contains(&fan.cones()[0], &p));
        assert!(fan.cone_contains(&fan.cones()[1], &p));
        let report = validate_fan(&fan);
        assert_eq!(report.violations, vec![Violation::ImproperIntersection { a: 0, b: 1 }]);
    }

    #[test]
    fn proper_plane_fan_is_valid() {
        let p2 = plane_fan(&[&[1, 0], &[0, 1], &[-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(validate_fan(&p2).is_valid());
        assert!(is_smooth(&p2));
    }

    #[test]
    fn other_violations() {
        let fan = plane_fan(&[&[1, 0], &[0, 1], &[0, 0], &[1, 1]], vec![vec![0, 1], vec![0]]);
        let report = validate_fan(&fan);
        assert!(report.violations.contains(&Violation::ZeroRay { ray: 2 }));
        assert!(report.violations.contains(&Violation::UnusedRay { ray: 3 }));
        assert!(report.violations.contains(&Violation::NotMaximal { cone: 1, other: 0 }));
        let three = Fan::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])], vec![vec![0, 1, 2]]).unwrap();
        assert!(validate_fan(&three).violations.contains(&Violation::NonSimplicialCone { cone: 0 }));
    }

    #[test]
    fn multiplicities() {
        let std = plane_fan(&[&[1, 0], &[0, 1]], vec![vec![0, 1]]);
        assert_eq!(cone_multiplicity(&std, &Cone::new(vec![0, 1])).unwrap(), BigInt::from(1));
        let sing = plane_fan(&[&[1, 0], &[1, 3]], vec![vec![0, 1]]);
        assert_eq!(cone_multiplicity(&sing, &Cone::new(vec![0, 1])).unwrap(), BigInt::from(3));
        assert!(!is_smooth(&sing));
        let ray_only = plane_fan(&[&[1, 0], &[0, 1]], vec![vec![0], vec![1]]);
        assert_eq!(cone_multiplicity(&ray_only, &Cone::new(vec![0])), Err(FanError::NotMaximal));
        assert_eq!(cone_multiplicity(&std, &Cone::new(vec![1, 0, 0])).unwrap(), BigInt::from(1));
        assert!(is_smooth(&ray_only));
    }

    #[test]
    fn single_smooth_cone_is_smooth() {
        let fan = Fan::new(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], vec![vec![0, 1, 2]]).unwrap();
        assert!(is_smooth(&fan));
        assert!(validate_fan(&fan).is_valid());
    }

    #[test]
    fn doc_round_trip() {
        let fan = plane_fan(&[&[1, 0], &[0, 1], &[-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let doc = FanDoc::from_fan(&fan).unwrap();
        assert_eq!(doc.clone().into_fan().unwrap(), fan);
    }
}
