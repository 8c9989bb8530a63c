//! Toric divisors through their support functions: Cartier certificates,
//! pullback along toric morphisms, and sections polyhedra with exact
//! lattice-point counts.

mod extension;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fan::{is_toric_morphism, Fan, FanError, LatticeHom};
use crate::lattice::{
    ceil, extreme_rays, floor, solve_integer_linear, solve_rational_linear, vertices, Halfspace, IntVector,
    LatticeError, Rational, RationalVector,
};

pub use extension::{quotient_extension_check, sample_extensions, ExtensionReport, ExtensionSample};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("expected {expected} values, one per ray, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("the lattice map does not send cones into cones")]
    NotMorphism,
    #[error("the support function is not integral on cone {cone}")]
    NotCartier { cone: usize },
    #[error("the polyhedron is unbounded (recession direction {0})")]
    Unbounded(IntVector),
    #[error("refined fan does not contain ray {0} of the base fan")]
    NotARefinement(IntVector),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A function on the rays of a fan; `values[i]` is the value at ray `i`, so the
/// divisor `sum a_i D_i` has `values[i] = -a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    fan: Fan,
    values: Vec<BigInt>,
}

impl SupportFunction {
    pub fn new(fan: Fan, values: Vec<BigInt>) -> Result<Self, DivisorError> {
        if values.len() != fan.rays().len() {
            return Err(DivisorError::ValueCount { expected: fan.rays().len(), found: values.len() });
        }
        Ok(SupportFunction { fan, values })
    }

    pub fn from_i64(fan: Fan, values: &[i64]) -> Result<Self, DivisorError> {
        Self::new(fan, values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero(fan: Fan) -> Self {
        let values = vec![BigInt::zero(); fan.rays().len()];
        SupportFunction { fan, values }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn value(&self, ray: usize) -> &BigInt {
        &self.values[ray]
    }
}

/// The function with value `-1` on the second ray and `0` on every other ray.
///
/// On the fans of [`crate::fan::cyclic_quotient_fans`] the second ray is `e_2`,
/// so this is the hyperplane `{x_1 = 0}` of projective space read on either fan.
pub fn hyperplane_function(fan: &Fan) -> SupportFunction {
    let mut values = vec![BigInt::zero(); fan.rays().len()];
    values[1] = BigInt::from(-1);
    SupportFunction { fan: fan.clone(), values }
}

/// Outcome of the Cartier test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartierCertificate {
    /// One integral dual vector per maximal cone, reproducing the values on that cone.
    Cartier { duals: Vec<IntVector> },
    /// The first cone with no integral dual vector, and a rational one.
    NotCartier { cone: usize, witness: RationalVector },
}

impl CartierCertificate {
    pub fn is_cartier(&self) -> bool {
        matches!(self, CartierCertificate::Cartier { .. })
    }

    pub fn duals(&self) -> Option<&[IntVector]> {
        match self {
            CartierCertificate::Cartier { duals } => Some(duals),
            CartierCertificate::NotCartier { .. } => None,
        }
    }
}

/// Decides whether `psi` is integral linear on every maximal cone.
pub fn is_cartier(psi: &SupportFunction) -> CartierCertificate {
    let fan = psi.fan();
    let mut duals = Vec::with_capacity(fan.cones().len());
    for (ci, cone) in fan.cones().iter().enumerate() {
        let a = fan.generator_matrix(cone);
        let b = IntVector::new(cone.rays().iter().map(|&r| psi.value(r).clone()).collect());
        match solve_integer_linear(&a, &b).expect("shapes agree") {
            Some(m) => {
                assert!(
                    cone.rays().iter().all(|&r| &fan.ray(r).dot(&m) == psi.value(r)),
                    "dual vector must reproduce the values on its cone"
                );
                duals.push(m);
            }
            None => {
                let witness = solve_rational_linear(&a, &b).expect("simplicial cones have independent generators").x;
                return CartierCertificate::NotCartier { cone: ci, witness };
            }
        }
    }
    CartierCertificate::Cartier { duals }
}

/// Value at `point` of the piecewise linear function given by `duals`.
pub fn evaluate(fan: &Fan, duals: &[IntVector], point: &IntVector) -> Result<BigInt, DivisorError> {
    if point.is_zero() {
        return Ok(BigInt::zero());
    }
    let cone = fan.find_cone(point).ok_or_else(|| FanError::OutsideSupport(point.clone()))?;
    Ok(duals[cone].dot(point))
}

/// `psi ∘ h` on the rays of `src`.
pub fn pullback(psi: &SupportFunction, h: &LatticeHom, src: &Fan) -> Result<SupportFunction, DivisorError> {
    if !is_toric_morphism(h, src, psi.fan())? {
        return Err(DivisorError::NotMorphism);
    }
    let duals = match is_cartier(psi) {
        CartierCertificate::Cartier { duals } => duals,
        CartierCertificate::NotCartier { cone, .. } => return Err(DivisorError::NotCartier { cone }),
    };
    let values = src.rays().iter().map(|w| evaluate(psi.fan(), &duals, &h.apply(w)?)).collect::<Result<Vec<_>, _>>()?;
    SupportFunction::new(src.clone(), values)
}

/// `{u : <u, normal> >= rhs for every constraint}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionsPolyhedron {
    pub dim: usize,
    pub constraints: Vec<Halfspace>,
}

impl SectionsPolyhedron {
    pub fn new(dim: usize, constraints: Vec<Halfspace>) -> Self {
        SectionsPolyhedron { dim, constraints }
    }

    pub fn contains(&self, u: &IntVector) -> bool {
        self.constraints.iter().all(|h| h.contains(u))
    }
}

/// One constraint `<u, v_i> >= psi(v_i)` per ray, in ray order.
pub fn sections_polyhedron(psi: &SupportFunction) -> SectionsPolyhedron {
    let constraints = psi
        .fan()
        .rays()
        .iter()
        .zip(psi.values())
        .map(|(r, c)| Halfspace { normal: r.clone(), rhs: c.clone() })
        .collect();
    SectionsPolyhedron::new(psi.fan().dim(), constraints)
}

/// Integer points of a bounded polyhedron, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoints {
    pub points: Vec<IntVector>,
}

impl LatticePoints {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Exact lattice-point enumeration.
///
/// Fails with `Unbounded` when the recession cone `{u : <u, normal> >= 0}` is
/// not `{0}`. Otherwise the points are scanned over the integer hull of the
/// vertex bounding box, solving the last coordinate as an interval.
pub fn count_lattice_points(p: &SectionsPolyhedron) -> Result<LatticePoints, DivisorError> {
    let d = p.dim;
    let normals: Vec<IntVector> = p.constraints.iter().map(|h| h.normal.clone()).collect();
    match extreme_rays(d, &normals, &[]) {
        None => {
            let line = crate::lattice::rational_kernel(&crate::IntMatrix::from_rows(&normals));
            let dir = crate::lattice::integral_direction(&line[0]).expect("kernel vectors are nonzero");
            return Err(DivisorError::Unbounded(dir));
        }
        Some(rays) if !rays.is_empty() => return Err(DivisorError::Unbounded(rays[0].clone())),
        Some(_) => {}
    }
    if d == 0 {
        let feasible = p.constraints.iter().all(|h| !h.rhs.is_positive());
        return Ok(LatticePoints { points: if feasible { vec![IntVector::new(Vec::new())] } else { Vec::new() } });
    }
    let verts = vertices(d, &p.constraints);
    if verts.is_empty() {
        return Ok(LatticePoints { points: Vec::new() });
    }
    let lo: Vec<BigInt> = (0..d).map(|i| ceil(verts.iter().map(|v| &v[i]).min().unwrap())).collect();
    let hi: Vec<BigInt> = (0..d).map(|i| floor(verts.iter().map(|v| &v[i]).max().unwrap())).collect();
    let mut points = Vec::new();
    let mut prefix: Vec<BigInt> = Vec::with_capacity(d);
    scan(p, &lo, &hi, &mut prefix, &mut points);
    Ok(LatticePoints { points })
}

fn scan(p: &SectionsPolyhedron, lo: &[BigInt], hi: &[BigInt], prefix: &mut Vec<BigInt>, out: &mut Vec<IntVector>) {
    let d = lo.len();
    let k = prefix.len();
    if k + 1 < d {
        let mut x = lo[k].clone();
        while x <= hi[k] {
            prefix.push(x.clone());
            scan(p, lo, hi, prefix, out);
            prefix.pop();
            x += 1;
        }
        return;
    }
    // Last coordinate: each constraint reads c * x >= rhs - <prefix, normal>.
    let mut low = lo[k].clone();
    let mut high = hi[k].clone();
    for h in &p.constraints {
        let partial: BigInt = prefix.iter().zip(h.normal.coords()).map(|(a, b)| a * b).sum();
        let rest = &h.rhs - partial;
        let c = &h.normal[k];
        if c.is_zero() {
            if rest.is_positive() {
                return;
            }
        } else {
            let bound = Rational::new(rest, c.clone());
            if c.is_positive() {
                low = low.max(ceil(&bound));
            } else {
                high = high.min(floor(&bound));
            }
        }
    }
    let mut x = low;
    while x <= high {
        let mut coords = prefix.clone();
        coords.push(x.clone());
        out.push(IntVector::new(coords));
        x += 1;
    }
}

/// Dimension of the space of global sections: the lattice-point count of the
/// sections polyhedron.
pub fn h0(psi: &SupportFunction) -> Result<usize, DivisorError> {
    Ok(count_lattice_points(&sections_polyhedron(psi))?.count())
}
