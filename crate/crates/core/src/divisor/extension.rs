//! Sampled integral extensions of a support function to a refinement.

use num_bigint::BigInt;
use rand::Rng;

use crate::fan::{cyclic_quotient_fans, desingularize, Fan};
use crate::rng::{seeded, GENERATOR_NAME};

use super::{
    count_lattice_points, hyperplane_function, is_cartier, sections_polyhedron, DivisorError, SupportFunction,
};

/// Sampling covers finitely many extensions out of infinitely many; a clean
/// report is evidence for the bound, not a proof of it.
pub const SAMPLING_NOTE: &str =
    "finite sample: each extension is checked exactly, but the sampled set does not exhaust all extensions";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSample {
    /// Values on the rays added by the refinement, in ray order.
    pub new_values: Vec<BigInt>,
    /// Every constraint of the base polyhedron occurs among the refined ones.
    pub contains_base: bool,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub seed: u64,
    pub generator: &'static str,
    pub bound: i64,
    pub requested: usize,
    pub base_rays: usize,
    pub refined: Fan,
    pub refined_smooth: bool,
    /// Draws rejected because the extension was not integral on some cone.
    pub rejected: usize,
    pub samples: Vec<ExtensionSample>,
    pub violations: Vec<String>,
    pub note: &'static str,
}

impl ExtensionReport {
    pub fn max_count(&self) -> Option<usize> {
        self.samples.iter().map(|s| s.count).max()
    }
}

/// Draws extensions of `base` to `refined`: base values are kept on the base
/// rays, and each new ray gets a value uniform in `[-bound, bound]`. Only
/// extensions with a Cartier certificate on `refined` are kept; for each one the
/// sections polyhedron must keep every base constraint and hold at most one
/// lattice point.
pub fn sample_extensions(
    base: &SupportFunction,
    refined: &Fan,
    bound: i64,
    samples: usize,
    seed: u64,
) -> Result<ExtensionReport, DivisorError> {
    let base_fan = base.fan();
    let mut positions = Vec::with_capacity(base_fan.rays().len());
    for r in base_fan.rays() {
        positions.push(refined.position_of_ray(r).ok_or_else(|| DivisorError::NotARefinement(r.clone()))?);
    }
    let new_rays: Vec<usize> = (0..refined.rays().len()).filter(|i| !positions.contains(i)).collect();
    let base_constraints = sections_polyhedron(base).constraints;

    let mut rng = seeded(seed);
    let mut report = ExtensionReport {
        seed,
        generator: GENERATOR_NAME,
        bound,
        requested: samples,
        base_rays: base_fan.rays().len(),
        refined: refined.clone(),
        refined_smooth: crate::fan::is_smooth(refined),
        rejected: 0,
        samples: Vec::with_capacity(samples),
        violations: Vec::new(),
        note: SAMPLING_NOTE,
    };
    let max_draws = samples.saturating_mul(50).max(samples);
    let mut draws = 0;
    while report.samples.len() < samples && draws < max_draws {
        draws += 1;
        let mut values = vec![BigInt::from(0); refined.rays().len()];
        for (b, &p) in positions.iter().enumerate() {
            values[p] = base.value(b).clone();
        }
        let new_values: Vec<BigInt> = new_rays.iter().map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
        for (&i, v) in new_rays.iter().zip(&new_values) {
            values[i] = v.clone();
        }
        let psi = SupportFunction::new(refined.clone(), values)?;
        if !is_cartier(&psi).is_cartier() {
            report.rejected += 1;
            continue;
        }
        let poly = sections_polyhedron(&psi);
        let contains_base = base_constraints.iter().all(|c| poly.constraints.contains(c));
        let count = count_lattice_points(&poly)?.count();
        let index = report.samples.len();
        if !contains_base {
            report.violations.push(format!("sample {index}: a base constraint is missing"));
        }
        if count > 1 {
            report.violations.push(format!("sample {index}: {count} lattice points"));
        }
        report.samples.push(ExtensionSample { new_values, contains_base, count });
    }
    if report.samples.len() < samples {
        report.violations.push(format!(
            "only {} of {} requested extensions were integral after {draws} draws",
            report.samples.len(),
            samples
        ));
    }
    Ok(report)
}

/// Extensions of the hyperplane function on the cyclic quotient fan of
/// dimension `n` to its resolution by [`desingularize`].
pub fn quotient_extension_check(
    n: i64,
    bound: i64,
    samples: usize,
    seed: u64,
) -> Result<ExtensionReport, DivisorError> {
    let fans = cyclic_quotient_fans(n)?;
    let base = hyperplane_function(&fans.quotient);
    let refined = desingularize(&fans.quotient);
    sample_extensions(&base, &refined, bound, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::h0;
    use crate::IntVector;

    #[test]
    fn plane_quotient_extensions() {
        let r = quotient_extension_check(2, 5, 100, 0).unwrap();
        assert!(r.refined_smooth);
        assert_eq!(r.samples.len(), 100);
        assert_eq!(r.rejected, 0);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.max_count().unwrap() <= 1);
    }

    #[test]
    fn same_seed_same_samples() {
        let a = quotient_extension_check(2, 5, 10, 7).unwrap();
        let b = quotient_extension_check(2, 5, 10, 7).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = quotient_extension_check(2, 5, 10, 8).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn no_new_rays_reproduces_h0() {
        let line =
            Fan::new(1, vec![IntVector::from_i64(&[1]), IntVector::from_i64(&[-1])], vec![vec![0], vec![1]]).unwrap();
        let base = SupportFunction::from_i64(line.clone(), &[0, -2]).unwrap();
        let r = sample_extensions(&base, &line, 3, 5, 0).unwrap();
        assert_eq!(r.samples.len(), 5);
        assert!(r.samples.iter().all(|s| s.new_values.is_empty() && s.count == h0(&base).unwrap()));
        // h0 of O(2) on the projective line is 3, so the bound flags it.
        assert_eq!(r.violations.len(), 5);
    }

    #[test]
    fn zero_samples_is_empty() {
        let r = quotient_extension_check(2, 5, 0, 0).unwrap();
        assert!(r.samples.is_empty() && r.violations.is_empty());
    }

    #[test]
    fn base_rays_must_survive() {
        let fans = cyclic_quotient_fans(2).unwrap();
        let base = hyperplane_function(&fans.quotient);
        assert!(matches!(sample_extensions(&base, &fans.cover, 1, 1, 0), Err(DivisorError::NotARefinement(_))));
    }
}
