//! Splitting types `O(a_1) + ... + O(a_k)` on the projective line and the
//! numerical rules for elementary transforms and blow-ups.
//!
//! Only centers in general position are modeled. A center meeting the curve in
//! special position (for instance a hyperplane through the point of the top
//! section) is outside this calculus.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("a splitting type needs at least one exponent")]
    Empty,
    #[error("operation needs at least {needed} exponents, found {found}")]
    TooShort { needed: usize, found: usize },
    #[error("invalid self-intersection data: {0}")]
    Invalid(String),
    #[error("normal bundle is not ample: exponent {0} < 1")]
    NotAmple(i64),
    #[error("hypothesis fails: {0}")]
    Inapplicable(String),
    #[error("ambient dimension {n} does not match rank {rank} (expected n = rank + 1)")]
    DimensionMismatch { n: i64, rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad splitting type at item {item} (column {column}): {reason}")]
pub struct ParseSplittingError {
    /// 1-based position of the offending item in the comma-separated list.
    pub item: usize,
    /// 1-based character column where the item starts.
    pub column: usize,
    pub reason: String,
}

/// Exponents stored in ascending order; equality is multiset equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplittingType(Vec<i64>);

impl SplittingType {
    pub fn new(mut exponents: Vec<i64>) -> Result<Self, BundleError> {
        if exponents.is_empty() {
            return Err(BundleError::Empty);
        }
        exponents.sort_unstable();
        Ok(SplittingType(exponents))
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> i64 {
        self.0[0]
    }

    pub fn max(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&a| a == 1)
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> SplittingType {
        SplittingType(self.0.iter().map(|&a| f(a)).collect())
    }

    fn lower_top(&self) -> SplittingType {
        let mut e = self.0.clone();
        let last = e.len() - 1;
        e[last] -= 1;
        e.sort_unstable();
        SplittingType(e)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for SplittingType {
    type Err = ParseSplittingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        let mut column = 1;
        for (i, item) in s.split(',').enumerate() {
            let trimmed = item.trim();
            let lead = item.len() - item.trim_start().len();
            let value = trimmed.parse::<i64>().map_err(|_| ParseSplittingError {
                item: i + 1,
                column: column + lead,
                reason: if trimmed.is_empty() { "empty item".into() } else { format!("`{trimmed}` is not an integer") },
            })?;
            out.push(value);
            column += item.chars().count() + 1;
        }
        SplittingType::new(out).map_err(|_| ParseSplittingError { item: 1, column: 1, reason: "empty list".into() })
    }
}

/// Top self-intersections of the splitting divisors of `P(V)`:
/// entry `i` is `-(a_1 + ... + a_k) + k a_i`.
pub fn self_intersections(t: &SplittingType) -> Vec<i64> {
    let k = t.len() as i64;
    let s = t.degree();
    t.exponents().iter().map(|&a| -s + k * a).collect()
}

/// Inverts [`self_intersections`]: the type with the given self-intersections
/// and total degree `anchor_sum`.
pub fn recover_splitting(targets: &[i64], anchor_sum: i64) -> Result<SplittingType, BundleError> {
    let k = targets.len() as i64;
    if k < 2 {
        return Err(BundleError::Invalid(format!("need at least two self-intersections, found {k}")));
    }
    if let Some(w) = targets.windows(2).find(|w| (w[1] - w[0]).rem_euclid(k) != 0) {
        return Err(BundleError::Invalid(format!("difference {} - {} is not divisible by {k}", w[1], w[0])));
    }
    let total: i64 = targets.iter().sum();
    if total != 0 {
        return Err(BundleError::Invalid(format!("self-intersections sum to {total}, not 0")));
    }
    if (targets[0] + anchor_sum).rem_euclid(k) != 0 {
        return Err(BundleError::Invalid(format!("degree {anchor_sum} is incompatible with the data modulo {k}")));
    }
    SplittingType::new(targets.iter().map(|&t| (t + anchor_sum) / k).collect())
}

/// Elementary transform of `P(V)` at a general hyperplane of a fibre: the
/// largest exponent drops by one.
pub fn elm_general(t: &SplittingType) -> Result<SplittingType, BundleError> {
    if t.len() < 2 {
        return Err(BundleError::TooShort { needed: 2, found: t.len() });
    }
    Ok(t.lower_top())
}

/// Normal bundle of the strict transform after blowing up a point of the
/// curve: every exponent drops by one.
pub fn blowup_point(t: &SplittingType) -> SplittingType {
    t.map(|a| a - 1)
}

/// Normal bundle of the strict transform after blowing up a general smooth
/// codimension-2 center meeting the curve once: the largest exponent drops by one.
pub fn blowup_codim2_general(t: &SplittingType) -> SplittingType {
    t.lower_top()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Codim2,
    Point,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Codim2 => "codim2",
            StepKind::Point => "point",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    pub kind: StepKind,
    pub result: SplittingType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupPlan {
    pub start: SplittingType,
    pub steps: Vec<PlanStep>,
    /// The exceptional divisor of the last blow-up meets the curve once.
    pub almost_line: bool,
}

impl BlowupPlan {
    pub fn end(&self) -> &SplittingType {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }
}

/// Codimension-2 blow-ups turning a curve with ample normal bundle into one
/// with normal bundle `O(1)^k`.
pub fn quasiline_plan(t: &SplittingType) -> Result<BlowupPlan, BundleError> {
    if t.min() < 1 {
        return Err(BundleError::NotAmple(t.min()));
    }
    let mut steps = Vec::new();
    let mut current = t.clone();
    while !current.is_all_ones() {
        current = blowup_codim2_general(&current);
        steps.push(PlanStep { kind: StepKind::Codim2, result: current.clone() });
    }
    Ok(BlowupPlan { start: t.clone(), almost_line: !steps.is_empty(), steps })
}

/// Intersection data of a divisor `D` with the curve `Y` in an `n`-fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisorData {
    /// `D . Y`
    pub d_y: i64,
    /// `dim |D|`
    pub dim_d: i64,
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedData {
    /// The `d - 1` point blow-ups, each lowering every exponent by one.
    pub plan: BlowupPlan,
    pub d_y: i64,
    pub dim_d: i64,
    /// Dimension of the projective space the reduced system maps onto.
    pub target_dim: i64,
}

/// Blowing up `d - 1` points of `Y`, where `d = D . Y`, brings `D . Y` down to 1.
///
/// Requires `a_1 >= d` and `dim |D| >= d`. The result has all exponents lowered
/// by `d - 1`, `dim |D'| = dim |D| - (d - 1)`, and maps onto a projective space
/// of dimension `dim |D| - d + 1`.
pub fn point_blowup_reduction(t: &SplittingType, dd: &DivisorData) -> Result<ReducedData, BundleError> {
    let d = dd.d_y;
    if d < 1 {
        return Err(BundleError::Inapplicable(format!("D.Y >= 1 (D.Y = {d})")));
    }
    if t.min() < d {
        return Err(BundleError::Inapplicable(format!("a_1 >= d (a_1 = {}, d = {d})", t.min())));
    }
    if dd.dim_d < d {
        return Err(BundleError::Inapplicable(format!("dim|D| >= d (dim|D| = {}, d = {d})", dd.dim_d)));
    }
    let mut steps = Vec::new();
    let mut current = t.clone();
    for _ in 1..d {
        current = blowup_point(&current);
        steps.push(PlanStep { kind: StepKind::Point, result: current.clone() });
    }
    Ok(ReducedData {
        plan: BlowupPlan { start: t.clone(), steps, almost_line: false },
        d_y: 1,
        dim_d: dd.dim_d - (d - 1),
        target_dim: dd.dim_d - d + 1,
    })
}

/// `0 < D . Y <= a_1` and `dim |D| >= n + D . Y - 1`, a numerical criterion for
/// rationality of `X`.
pub fn rationality_criterion(t: &SplittingType, dd: &DivisorData) -> Result<bool, BundleError> {
    if dd.n != t.len() as i64 + 1 {
        return Err(BundleError::DimensionMismatch { n: dd.n, rank: t.len() });
    }
    let d = dd.d_y;
    Ok(0 < d && d <= t.min() && dd.dim_d >= dd.n + d - 1)
}

/// A quasi-line together with `D . Y = 1` and `dim |D| >= n`, a numerical
/// criterion for strong rationality.
pub fn strong_rationality_criterion(dd: &DivisorData, has_quasiline: bool) -> bool {
    has_quasiline && dd.d_y == 1 && dd.dim_d >= dd.n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn st(e: &[i64]) -> SplittingType {
        SplittingType::new(e.to_vec()).unwrap()
    }

    #[test]
    fn self_intersection_examples() {
        assert_eq!(self_intersections(&st(&[0, 1])), vec![-1, 1]);
        assert_eq!(self_intersections(&st(&[0, 0, 0])), vec![0, 0, 0]);
        assert_eq!(self_intersections(&st(&[1, 2, 3])), vec![-3, 0, 3]);
    }

    #[test]
    fn recover_examples() {
        assert_eq!(recover_splitting(&[-1, 1], 1).unwrap(), st(&[0, 1]));
        assert_eq!(recover_splitting(&[0, 0], 2).unwrap(), st(&[1, 1]));
        assert!(matches!(recover_splitting(&[1, 2], 0), Err(BundleError::Invalid(_))));
        assert!(matches!(recover_splitting(&[2, 2], 0), Err(BundleError::Invalid(_))));
        assert!(matches!(recover_splitting(&[-1, 1], 0), Err(BundleError::Invalid(_))));
        assert!(matches!(recover_splitting(&[0], 0), Err(BundleError::Invalid(_))));
    }

    #[test]
    fn elm_examples() {
        for d in 1..6 {
            assert_eq!(elm_general(&st(&[0, d])).unwrap(), st(&[0, d - 1]));
        }
        assert_eq!(elm_general(&st(&[1, 1, 1])).unwrap(), st(&[0, 1, 1]));
        assert_eq!(elm_general(&st(&[0, 1, 4])).unwrap(), st(&[0, 1, 3]));
        assert_eq!(elm_general(&st(&[3])), Err(BundleError::TooShort { needed: 2, found: 1 }));
    }

    #[test]
    fn blowup_examples() {
        assert_eq!(blowup_point(&st(&[1, 1, 1])), st(&[0, 0, 0]));
        assert_eq!(blowup_point(&st(&[5])), st(&[4]));
        assert_eq!(blowup_point(&st(&[1, 3])), st(&[0, 2]));
        assert_eq!(blowup_codim2_general(&st(&[1, 2, 3])), st(&[1, 2, 2]));
        assert_eq!(blowup_codim2_general(&st(&[1, 1])), st(&[0, 1]));
        assert_eq!(blowup_codim2_general(&st(&[2, 2])), st(&[1, 2]));
    }

    #[test]
    fn plans() {
        let p = quasiline_plan(&st(&[1, 1])).unwrap();
        assert!(p.steps.is_empty() && !p.almost_line);
        let p = quasiline_plan(&st(&[2, 3])).unwrap();
        let path: Vec<SplittingType> = p.steps.iter().map(|s| s.result.clone()).collect();
        assert_eq!(path, vec![st(&[2, 2]), st(&[1, 2]), st(&[1, 1])]);
        assert!(p.almost_line);
        assert_eq!(quasiline_plan(&st(&[0, 2])), Err(BundleError::NotAmple(0)));
    }

    #[test]
    fn reduction_examples() {
        let r = point_blowup_reduction(&st(&[2, 2]), &DivisorData { d_y: 2, dim_d: 2, n: 3 }).unwrap();
        assert_eq!(r.plan.end(), &st(&[1, 1]));
        assert_eq!((r.d_y, r.dim_d, r.target_dim), (1, 1, 1));
        let id = point_blowup_reduction(&st(&[1, 4]), &DivisorData { d_y: 1, dim_d: 3, n: 3 }).unwrap();
        assert!(id.plan.steps.is_empty());
        assert_eq!((id.d_y, id.dim_d, id.target_dim), (1, 3, 3));
        let err = point_blowup_reduction(&st(&[1, 2]), &DivisorData { d_y: 2, dim_d: 5, n: 3 }).unwrap_err();
        assert!(matches!(err, BundleError::Inapplicable(ref s) if s.starts_with("a_1 >= d")));
        let err = point_blowup_reduction(&st(&[3, 3]), &DivisorData { d_y: 2, dim_d: 1, n: 3 }).unwrap_err();
        assert!(matches!(err, BundleError::Inapplicable(ref s) if s.starts_with("dim|D| >= d")));
    }

    #[test]
    fn criteria() {
        let t = st(&[2, 2]);
        assert!(rationality_criterion(&t, &DivisorData { d_y: 2, dim_d: 4, n: 3 }).unwrap());
        assert!(!rationality_criterion(&t, &DivisorData { d_y: 3, dim_d: 9, n: 3 }).unwrap());
        assert!(!rationality_criterion(&t, &DivisorData { d_y: 2, dim_d: 3, n: 3 }).unwrap());
        assert!(!rationality_criterion(&t, &DivisorData { d_y: 0, dim_d: 9, n: 3 }).unwrap());
        assert!(rationality_criterion(&t, &DivisorData { d_y: 2, dim_d: 4, n: 4 }).is_err());
        assert!(strong_rationality_criterion(&DivisorData { d_y: 1, dim_d: 3, n: 3 }, true));
        assert!(!strong_rationality_criterion(&DivisorData { d_y: 2, dim_d: 3, n: 3 }, true));
        assert!(!strong_rationality_criterion(&DivisorData { d_y: 1, dim_d: 2, n: 3 }, true));
        assert!(!strong_rationality_criterion(&DivisorData { d_y: 1, dim_d: 3, n: 3 }, false));
    }

    #[test]
    fn parsing_reports_position() {
        assert_eq!("4, 0,1".parse::<SplittingType>().unwrap(), st(&[0, 1, 4]));
        assert_eq!("-2,3".parse::<SplittingType>().unwrap(), st(&[-2, 3]));
        let e = "1,x,3".parse::<SplittingType>().unwrap_err();
        assert_eq!((e.item, e.column), (2, 3));
        let e = "1,2,".parse::<SplittingType>().unwrap_err();
        assert_eq!(e.item, 3);
        assert_eq!(st(&[3, 0, 1]).to_string(), "0,1,3");
    }

    proptest! {
        #[test]
        fn self_intersections_sum_to_zero(e in proptest::collection::vec(-10i64..=10, 1..=8)) {
            let t = SplittingType::new(e).unwrap();
            prop_assert_eq!(self_intersections(&t).iter().sum::<i64>(), 0);
        }

        #[test]
        fn degrees_drop(e in proptest::collection::vec(-10i64..=10, 2..=8)) {
            let t = SplittingType::new(e).unwrap();
            prop_assert_eq!(elm_general(&t).unwrap().degree(), t.degree() - 1);
            prop_assert_eq!(blowup_point(&t).degree(), t.degree() - t.len() as i64);
            prop_assert_eq!(blowup_codim2_general(&t).degree(), t.degree() - 1);
        }

        #[test]
        fn plans_are_legal(e in proptest::collection::vec(1i64..=6, 1..=6)) {
            let t = SplittingType::new(e).unwrap();
            let plan = quasiline_plan(&t).unwrap();
            prop_assert_eq!(plan.steps.len() as i64, t.exponents().iter().map(|a| a - 1).sum::<i64>());
            prop_assert!(plan.end().is_all_ones());
            let mut prev = t.clone();
            for s in &plan.steps {
                prop_assert_eq!(&blowup_codim2_general(&prev), &s.result);
                prop_assert!(s.result.min() >= 1);
                prev = s.result.clone();
            }
        }
    }
}
