//! Lines through a point of a cubic threefold `X ⊂ P^4`, counted exactly.
//!
//! Writing `f(p + t v) = t q1(v) + t^2 q2(v) + t^3 q3(v)`, the lines of `X`
//! through `p` are the directions with `q1 = q2 = q3 = 0`: a conic and a cubic
//! in the plane `q1 = 0`, which meet in six points for general data. Through
//! two general points of `X` the conics of the family correspond to these
//! lines, so the same count is the number of such conics.
//!
//! Only smoothness at `p` is checked, not smoothness of the whole cubic.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::lattice::Rational;
use crate::poly::{sylvester_resultant, MultiPoly, PolyError, UniPoly};
use crate::rng::{seeded, SeededRng, GENERATOR_NAME};

/// Attempts made by [`e_conic_certificate`] before giving up.
pub const MAX_ATTEMPTS: usize = 32;

pub const SMOOTHNESS_NOTE: &str = "smoothness is verified at the sampled point only, not along the whole cubic";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error("expected a homogeneous cubic in 5 variables")]
    NotCubic,
    #[error("expected a point with 5 coordinates, found {0}")]
    BadPoint(usize),
    #[error("the zero vector is not a point of projective space")]
    ZeroPoint,
    #[error("the point is not on the hypersurface: f(p) = {0}")]
    NotOnHypersurface(Rational),
    #[error("the hypersurface is singular at the point")]
    SingularPoint,
    #[error("infinitely many lines through the point")]
    Degenerate,
    #[error("no generic sample in {0} attempts")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `f(p + t v) = t q1 + t^2 q2 + t^3 q3` in the four direction coordinates.
///
/// The direction is normalized by `v[pivot] = 0`, where `pivot` is the first
/// coordinate with `p[pivot] != 0`; `directions` lists the remaining
/// coordinates in order, and the polynomial variable `i` is `v[directions[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinePencilExpansion {
    pub pivot: usize,
    pub directions: Vec<usize>,
    pub q1: MultiPoly,
    pub q2: MultiPoly,
    pub q3: MultiPoly,
}

fn check_input(f: &MultiPoly, p: &[Rational]) -> Result<usize, CubicError> {
    if f.nvars() != 5 || !f.is_homogeneous() || f.total_degree().is_some_and(|d| d != 3) {
        return Err(CubicError::NotCubic);
    }
    if p.len() != 5 {
        return Err(CubicError::BadPoint(p.len()));
    }
    let pivot = p.iter().position(|c| !c.is_zero()).ok_or(CubicError::ZeroPoint)?;
    let value = f.evaluate(p)?;
    if !value.is_zero() {
        return Err(CubicError::NotOnHypersurface(value));
    }
    Ok(pivot)
}

pub fn line_pencil_expansion(f: &MultiPoly, p: &[Rational]) -> Result<LinePencilExpansion, CubicError> {
    let pivot = check_input(f, p)?;
    let directions: Vec<usize> = (0..5).filter(|&i| i != pivot).collect();
    // Variables of the substituted polynomial: 0 is t, 1..=4 are the directions.
    let t = MultiPoly::var(5, 0);
    let images: Vec<MultiPoly> = (0..5)
        .map(|i| {
            let base = MultiPoly::constant(5, p[i].clone());
            match directions.iter().position(|&d| d == i) {
                Some(k) => &base + &(&t * &MultiPoly::var(5, k + 1)),
                None => base,
            }
        })
        .collect();
    let g = f.compose(&images)?;
    let mut coeffs = g.coefficients_in(0);
    coeffs.resize(4, MultiPoly::zero(5));
    debug_assert!(coeffs[0].is_zero());
    let q: Vec<MultiPoly> = coeffs.iter().map(|c| c.drop_var(0).expect("t was collected out")).collect();

    // Re-expand and compare with the substituted polynomial.
    let lift: Vec<MultiPoly> = (1..=4).map(|k| MultiPoly::var(5, k)).collect();
    let mut rebuilt = MultiPoly::zero(5);
    for (k, qk) in q.iter().enumerate().skip(1) {
        rebuilt = &rebuilt + &(&t.pow(k as u32) * &qk.compose(&lift)?);
    }
    assert_eq!(rebuilt, g, "line expansion must reproduce f(p + t v)");

    let mut q = q.into_iter().skip(1);
    Ok(LinePencilExpansion { pivot, directions, q1: q.next().unwrap(), q2: q.next().unwrap(), q3: q.next().unwrap() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCountReport {
    pub count: usize,
    /// The count includes repeated roots of the resultant.
    pub with_multiplicity: bool,
    pub generic: bool,
    /// Resultant of the restricted conic and cubic, in one affine coordinate.
    pub resultant: UniPoly,
    pub resultant_degree: usize,
    pub squarefree: bool,
    /// Both restricted curves keep full degree in the eliminated variable, so
    /// no intersection escapes the affine chart.
    pub leading_ok: bool,
}

pub fn count_lines_through_point(f: &MultiPoly, p: &[Rational]) -> Result<LineCountReport, CubicError> {
    let e = line_pencil_expansion(f, p)?;
    let Some(j) = (0..4).find(|&i| !e.q1.coefficient(&unit(i)).is_zero()) else {
        return Err(CubicError::SingularPoint);
    };
    // On q1 = 0: v_j = -sum_{i != j} (g_i / g_j) v_i.
    let gj = e.q1.coefficient(&unit(j));
    let mut solved = MultiPoly::zero(4);
    for i in (0..4).filter(|&i| i != j) {
        let gi = e.q1.coefficient(&unit(i));
        solved = &solved + &MultiPoly::var(4, i).scale(&(-gi / &gj));
    }
    let conic = e.q2.substitute(j, &solved)?;
    let cubic = e.q3.substitute(j, &solved)?;
    if conic.is_zero() || cubic.is_zero() {
        return Err(CubicError::Degenerate);
    }
    let rest: Vec<usize> = (0..4).filter(|&i| i != j).collect();
    let (chart, free, elim) = (rest[0], rest[1], rest[2]);
    let one = MultiPoly::one(4);
    let conic = conic.substitute(chart, &one)?;
    let cubic = cubic.substitute(chart, &one)?;
    let leading_ok = conic.degree_in(elim) == Some(2) && cubic.degree_in(elim) == Some(3);
    let res = sylvester_resultant(&conic, &cubic, elim)?;
    if res.is_zero() {
        return Err(CubicError::Degenerate);
    }
    let resultant = res.to_univariate(free).expect("only the free variable survives");
    let resultant_degree = resultant.degree().expect("nonzero");
    let squarefree = resultant.is_squarefree() || resultant_degree == 0;
    let generic = leading_ok && resultant_degree == 6 && squarefree;
    Ok(LineCountReport {
        count: resultant_degree,
        with_multiplicity: !squarefree,
        generic,
        resultant,
        resultant_degree,
        squarefree,
        leading_ok,
    })
}

fn unit(i: usize) -> Vec<u32> {
    let mut e = vec![0; 4];
    e[i] = 1;
    e
}

/// Exponent vectors of the 35 cubic monomials in 5 variables, in
/// lexicographic order starting from `x0^3`.
pub fn cubic_monomials() -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(35);
    for a in (0..=3u32).rev() {
        for b in (0..=3 - a).rev() {
            for c in (0..=3 - a - b).rev() {
                for d in (0..=3 - a - b - c).rev() {
                    out.push(vec![a, b, c, d, 3 - a - b - c - d]);
                }
            }
        }
    }
    out
}

fn rational(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// A cubic with coefficients uniform in `[-bound, bound]` and no `x0^3` term,
/// so that it passes through `(1, 0, 0, 0, 0)`.
pub fn random_cubic_through_base_point(rng: &mut SeededRng, bound: i64) -> MultiPoly {
    let terms = cubic_monomials()
        .into_iter()
        .map(|e| {
            let c = if e[0] == 3 { 0 } else { rng.gen_range(-bound..=bound) };
            (e, rational(c))
        })
        .collect::<Vec<_>>();
    MultiPoly::from_terms(5, terms)
}

/// `x1` times a random quadric with nonzero `x0^2` term: a cubic containing
/// the plane `x1 = 0` through the base point, smooth there.
pub fn reducible_cubic_through_base_point(rng: &mut SeededRng, bound: i64) -> MultiPoly {
    let mut quadric = MultiPoly::zero(5);
    for e in cubic_monomials().into_iter().filter(|e| e[4] >= 1) {
        let mut e2 = e.clone();
        e2[4] -= 1;
        let c = if e2[0] == 2 { bound.max(1) } else { rng.gen_range(-bound..=bound) };
        quadric = &quadric + &MultiPoly::monomial(5, e2, rational(c));
    }
    &MultiPoly::var(5, 1) * &quadric
}

pub fn base_point() -> Vec<Rational> {
    let mut p = vec![Rational::zero(); 5];
    p[0] = Rational::one();
    p
}

#[derive(Debug, Clone)]
pub struct ConicCertificate {
    pub seed: u64,
    pub generator: &'static str,
    pub bound: i64,
    /// Samples drawn, including the accepted one.
    pub attempts: usize,
    pub cubic: MultiPoly,
    pub point: Vec<Rational>,
    pub report: LineCountReport,
    /// Number of conics of the family through two general points.
    pub e: usize,
}

/// Samples cubics from `seed` until one is smooth at the base point with a
/// generic line count, and returns that count as the conic number.
pub fn e_conic_certificate(seed: u64, bound: i64) -> Result<ConicCertificate, CubicError> {
    let mut rng = seeded(seed);
    let point = base_point();
    for attempt in 1..=MAX_ATTEMPTS {
        let cubic = random_cubic_through_base_point(&mut rng, bound);
        match count_lines_through_point(&cubic, &point) {
            Ok(report) if report.generic => {
                return Ok(ConicCertificate {
                    seed,
                    generator: GENERATOR_NAME,
                    bound,
                    attempts: attempt,
                    e: report.count,
                    cubic,
                    point,
                    report,
                });
            }
            Ok(_) | Err(CubicError::SingularPoint) | Err(CubicError::Degenerate) | Err(CubicError::NotCubic) => {}
            Err(other) => return Err(other),
        }
    }
    Err(CubicError::RetriesExhausted(MAX_ATTEMPTS))
}
