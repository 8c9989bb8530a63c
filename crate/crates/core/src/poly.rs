//! Multivariate polynomials over the rationals, univariate gcds, and
//! Sylvester resultants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("resultant of the zero polynomial")]
    ZeroPolynomial,
    #[error("variable index {var} out of range for {nvars} variables")]
    NoSuchVariable { var: usize, nvars: usize },
    #[error("Sylvester matrix of size {0} is too large for exact expansion")]
    TooLarge(usize),
}

/// A polynomial in `nvars` variables. Exponent vectors map to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no nonconstant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    fn check(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> MultiPoly {
        MultiPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        (0..k).fold(MultiPoly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum())
    }

    /// Replaces every variable `x_i` by `images[i]`; the images share a
    /// variable count, which becomes that of the result.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let target = images.first().map_or(0, |p| p.nvars);
        for img in images {
            if img.nvars != target {
                return Err(PolyError::DimensionMismatch { expected: target, found: img.nvars });
            }
        }
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(p.nvars)]).collect();
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Replaces `x_var` by `value`, keeping the variable count.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_var(var)?;
        let images: Vec<MultiPoly> =
            (0..self.nvars).map(|i| if i == var { value.clone() } else { MultiPoly::var(self.nvars, i) }).collect();
        self.compose(&images)
    }

    fn check_var(&self, var: usize) -> Result<(), PolyError> {
        if var >= self.nvars {
            return Err(PolyError::NoSuchVariable { var, nvars: self.nvars });
        }
        Ok(())
    }

    pub fn derivative(&self, var: usize) -> Result<MultiPoly, PolyError> {
        self.check_var(var)?;
        Ok(MultiPoly::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c * Rational::from_integer(BigInt::from(e[var])))
            }),
        ))
    }

    /// Degree in `x_var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// Coefficients of `1, x_var, x_var^2, ...`, each free of `x_var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let Some(deg) = self.degree_in(var) else {
            return Vec::new();
        };
        let mut out = vec![MultiPoly::zero(self.nvars); deg as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[var] = 0;
            out[e[var] as usize].add_term(e2, c.clone());
        }
        out
    }

    /// Removes a variable the polynomial does not involve.
    pub fn drop_var(&self, var: usize) -> Option<MultiPoly> {
        if self.terms.keys().any(|e| e[var] != 0) {
            return None;
        }
        Some(MultiPoly::from_terms(
            self.nvars - 1,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                e2.remove(var);
                (e2, c.clone())
            }),
        ))
    }

    /// The polynomial as a univariate one in `x_var`, if no other variable occurs.
    pub fn to_univariate(&self, var: usize) -> Option<UniPoly> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(var).map_or(0, |d| d as usize + 1)];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            coeffs[e[var] as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{k}", names[i]) })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("variable counts agree")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("variable counts agree")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("variable counts agree")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

/// A univariate polynomial, coefficients from degree 0 upward, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => UniPoly::new(self.coeffs.iter().map(|c| c / l).collect()),
        }
    }

    /// Remainder of division by a nonzero `d`.
    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let dl = d.leading().expect("division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let q = r.last().unwrap() / dl;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    /// Monic greatest common divisor; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// No repeated factor: the gcd with the derivative is constant.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone()));
        f.write_str(&MultiPoly::from_terms(1, terms).display_with(&["t"]))
    }
}

const MAX_SYLVESTER: usize = 20;

/// Determinant of the Sylvester matrix of `p` and `q` with respect to `x_var`,
/// a polynomial in the remaining variables.
///
/// The determinant is expanded without division, by accumulating over subsets
/// of columns already used by the leading rows.
pub fn sylvester_resultant(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly, PolyError> {
    p.check(q)?;
    p.check_var(var)?;
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let a = p.coefficients_in(var);
    let b = q.coefficients_in(var);
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size > MAX_SYLVESTER {
        return Err(PolyError::TooLarge(size));
    }
    let nv = p.nvars();
    let mut matrix = vec![vec![MultiPoly::zero(nv); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            matrix[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            matrix[n + i][i + j] = c.clone();
        }
    }
    Ok(determinant(&matrix, nv))
}

fn determinant(matrix: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    let size = matrix.len();
    let full = (1usize << size) - 1;
    let mut dp: Vec<Option<MultiPoly>> = vec![None; full + 1];
    dp[0] = Some(MultiPoly::one(nvars));
    for mask in 0..full {
        let Some(acc) = dp[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        for (col, entry) in matrix[row].iter().enumerate() {
            if mask & (1 << col) != 0 || entry.is_zero() {
                continue;
            }
            // Earlier rows sitting in later columns each contribute an inversion.
            let mut term = &acc * entry;
            if (mask >> (col + 1)).count_ones() % 2 == 1 {
                term = -&term;
            }
            let next = mask | (1 << col);
            dp[next] = Some(match dp[next].take() {
                Some(prev) => &prev + &term,
                None => term,
            });
        }
    }
    dp[full].take().unwrap_or_else(|| MultiPoly::zero(nvars))
}
