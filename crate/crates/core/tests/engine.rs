//! Propagation properties on records drawn from consistent complete models.

use quasiline::models::{check_record, propagate, FlagField, IntField, ModelRecord};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A complete assignment satisfying every rule.
fn random_truth(rng: &mut ChaCha8Rng) -> ModelRecord {
    let etilde = rng.gen_range(1..=6u64);
    let b = rng.gen_range(1..=4u64);
    let e = etilde * b;
    let e0 = rng.gen_range(1..=etilde);
    let e_x = if e == 1 { 1 } else { rng.gen_range(1..=4u64) };
    let rational = e_x == 1;
    let unirational = rational || e0 == 1 || rng.gen_bool(0.5);
    let strongly = rational && rng.gen_bool(0.5);
    ModelRecord {
        name: "random".into(),
        e: Some(e),
        e0: Some(e0),
        etilde: Some(etilde),
        b: Some(b),
        e_x: Some(e_x),
        g3: Some(b == 1),
        rational: Some(rational),
        unirational: Some(unirational),
        strongly_rational: Some(strongly),
        ..Default::default()
    }
}

/// Keeps the fields selected by `mask`, 9 bits for the 9 invariants.
fn reveal(truth: &ModelRecord, mask: u32) -> ModelRecord {
    let mut r = ModelRecord::named(&truth.name);
    for (i, f) in IntField::ALL.into_iter().enumerate() {
        if mask & (1 << i) != 0 {
            r = r.with_int(f, truth.int(f).unwrap(), "given");
        }
    }
    for (i, f) in FlagField::ALL.into_iter().enumerate() {
        if mask & (1 << (i + 5)) != 0 {
            r = r.with_flag(f, truth.flag(f).unwrap(), "given");
        }
    }
    r
}

fn assert_extends(small: &ModelRecord, big: &ModelRecord) {
    for f in IntField::ALL {
        if let Some(v) = small.int(f) {
            assert_eq!(big.int(f), Some(v));
        }
    }
    for f in FlagField::ALL {
        if let Some(v) = small.flag(f) {
            assert_eq!(big.flag(f), Some(v));
        }
    }
}

#[test]
fn propagation_is_sound_idempotent_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let truth = random_truth(&mut rng);
        let mask = rng.gen_range(0..(1u32 << 9));
        let r = reveal(&truth, mask);
        let p = propagate(&r).expect("records drawn from a consistent model");
        // Sound: every derived value agrees with the model.
        assert_extends(&p.record, &truth);
        // Idempotent.
        let again = propagate(&p.record).unwrap();
        assert_eq!(again.record, p.record);
        assert!(again.firings.is_empty());
        // Monotone: revealing one more fact keeps everything derived so far.
        let extra = rng.gen_range(0..9);
        let bigger = propagate(&reveal(&truth, mask | (1 << extra))).unwrap();
        assert_extends(&p.record, &bigger.record);
        assert!(check_record(&r).is_consistent());
    }
}

#[test]
fn every_firing_cites_one_rule_and_a_new_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let truth = random_truth(&mut rng);
        let r = reveal(&truth, rng.gen_range(0..(1u32 << 9)));
        let p = propagate(&r).unwrap();
        let given = r.known_fields();
        for f in &p.firings {
            assert!(!given.contains(&f.field));
            assert!(p.record.provenance[f.field].starts_with(&f.rule.to_string()));
        }
        let mut fields: Vec<&str> = p.firings.iter().map(|f| f.field).collect();
        fields.sort_unstable();
        fields.dedup();
        assert_eq!(fields.len(), p.firings.len());
    }
}
