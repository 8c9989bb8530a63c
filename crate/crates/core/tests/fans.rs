//! Fan constructions checked against machine-integer oracles: Cramer-rule cone
//! membership and determinants computed independently of the library.

use num_bigint::BigInt;
use quasiline::fan::{
    cone_multiplicity, cyclic_quotient_fans, desingularize, is_smooth, stellar_subdivide, validate_fan, Cone, Fan,
};
use quasiline::IntVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_i128(v: &IntVector) -> Vec<i128> {
    v.coords().iter().map(|c| i128::try_from(c).unwrap()).collect()
}

/// Fraction-free Gaussian elimination.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn columns(gens: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let d = gens.len();
    (0..d).map(|r| (0..d).map(|c| gens[c][r]).collect()).collect()
}

/// `x` lies in the full-dimensional simplicial cone iff replacing any generator
/// by `x` never flips the sign of the determinant.
fn in_cone(gens: &[Vec<i128>], x: &[i128]) -> bool {
    let base = det(columns(gens));
    assert_ne!(base, 0);
    (0..gens.len()).all(|i| {
        let mut g = gens.to_vec();
        g[i] = x.to_vec();
        let di = det(columns(&g));
        di == 0 || (di > 0) == (base > 0)
    })
}

fn cone_gens(fan: &Fan, cone: &Cone) -> Vec<Vec<i128>> {
    cone.rays().iter().map(|&r| to_i128(fan.ray(r))).collect()
}

fn in_support(fan: &Fan, x: &[i128]) -> bool {
    fan.cones().iter().any(|c| in_cone(&cone_gens(fan, c), x))
}

/// Random interior points `sum l_i v_i` with positive integer weights; cone
/// membership is scale invariant, so this samples rational points of the cone.
fn sample(fan: &Fan, cone: &Cone, rng: &mut ChaCha8Rng) -> Vec<i128> {
    let gens = cone_gens(fan, cone);
    let d = fan.dim();
    let mut x = vec![0i128; d];
    for g in &gens {
        let w: i128 = rng.gen_range(0..=1000);
        for k in 0..d {
            x[k] += w * g[k];
        }
    }
    x
}

fn assert_same_support(a: &Fan, b: &Fan, per_cone: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (src, dst) in [(a, b), (b, a)] {
        for cone in src.cones() {
            for _ in 0..per_cone {
                let x = sample(src, cone, &mut rng);
                assert!(in_support(dst, &x), "point {x:?} of one fan is missing from the other");
            }
        }
    }
}

fn assert_refines(fine: &Fan, coarse: &Fan) {
    for cone in fine.cones() {
        let gens = cone_gens(fine, cone);
        assert!(
            coarse.cones().iter().any(|c| gens.iter().all(|g| in_cone(&cone_gens(coarse, c), g))),
            "cone {cone} lies in no coarse cone"
        );
    }
}

#[test]
fn quotient_multiplicities_match_determinants() {
    for n in 2..=6 {
        let f = cyclic_quotient_fans(n).unwrap();
        for cone in f.quotient.cones() {
            let m = det(cone_gens(&f.quotient, cone)).abs();
            assert_eq!(m, (n + 1) as i128);
            assert_eq!(cone_multiplicity(&f.quotient, cone).unwrap(), BigInt::from(m));
            assert_eq!(det(cone_gens(&f.cover, cone)).abs(), 1);
        }
        assert!(is_smooth(&f.cover));
        assert!(!is_smooth(&f.quotient));
    }
}

#[test]
fn quotient_fans_are_complete() {
    for n in 2..=4 {
        let f = cyclic_quotient_fans(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..200 {
            let x: Vec<i128> = (0..n).map(|_| rng.gen_range(-50..=50)).collect();
            assert!(in_support(&f.quotient, &x));
        }
    }
}

#[test]
fn resolution_of_the_plane_quotient() {
    let f = cyclic_quotient_fans(2).unwrap();
    let out = desingularize(&f.quotient);
    assert!(is_smooth(&out));
    assert!(validate_fan(&out).is_valid());
    assert_eq!(&out.rays()[..3], f.quotient.rays());
    for cone in out.cones() {
        assert_eq!(det(cone_gens(&out, cone)).abs(), 1);
    }
    assert_refines(&out, &f.quotient);
    assert_same_support(&f.quotient, &out, 1000, 11);
}

#[test]
fn resolution_of_the_threefold_quotient() {
    let f = cyclic_quotient_fans(3).unwrap();
    let out = desingularize(&f.quotient);
    assert!(is_smooth(&out));
    assert!(validate_fan(&out).is_valid());
    assert_eq!(&out.rays()[..4], f.quotient.rays());
    assert_refines(&out, &f.quotient);
    assert_same_support(&f.quotient, &out, 1000, 12);
}

#[test]
fn stellar_subdivision_keeps_support() {
    let f = cyclic_quotient_fans(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        // primitive lattice point in the support, not a ray
        let w = loop {
            let x: Vec<i64> = (0..3).map(|_| rng.gen_range(-4..=4)).collect();
            let v = IntVector::from_i64(&x);
            if !v.is_zero() && quasiline::lattice::is_primitive(&v) && f.quotient.position_of_ray(&v).is_none() {
                break v;
            }
        };
        let out = stellar_subdivide(&f.quotient, &w).unwrap();
        assert!(validate_fan(&out).is_valid());
        assert_eq!(out.ray(out.rays().len() - 1), &w);
        assert_refines(&out, &f.quotient);
        assert_same_support(&f.quotient, &out, 200, 6);
    }
}
