//! Forward-chaining propagation of the invariants of a model `(X, Y)`.
//!
//! Integer invariants: `e` (curves of the family through two general points),
//! `e0` (through one point with a fixed general tangent direction), `etilde`
//! (the minimum of `e` over covers etale along `Y`), `b` (the degree of the
//! formal function field over the function field), and `e_x` (the minimum of
//! `e` over all models of `X`). Flags are tristate: `None` is unknown.
//!
//! The engine only derives; it never guesses an unknown.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
}

impl Rule {
    pub const ALL: [Rule; 10] =
        [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::R7, Rule::R8, Rule::R9, Rule::R10];

    pub fn statement(self) -> &'static str {
        match self {
            Rule::R1 => "e = etilde * b",
            Rule::R2 => "e0 <= etilde <= e",
            Rule::R3 => "Y is G3 iff etilde = e",
            Rule::R4 => "e = 1 implies X rational",
            Rule::R5 => "e0 = 1 implies X unirational",
            Rule::R6 => "e = 1 implies Y is G3",
            Rule::R7 => "strongly rational implies rational",
            Rule::R8 => "X rational iff e(X) = 1",
            Rule::R9 => "rational implies unirational",
            Rule::R10 => "X rational implies e(X) = 1",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Partially known invariants of a model. Unknown fields are omitted when
/// serialized.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub etilde: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_x: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g3: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unirational: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strongly_rational: Option<bool>,
    /// Where each known field came from, keyed by field name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntField {
    E,
    E0,
    Etilde,
    B,
    EX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlagField {
    G3,
    Rational,
    Unirational,
    StronglyRational,
}

impl IntField {
    pub const ALL: [IntField; 5] = [IntField::E, IntField::E0, IntField::Etilde, IntField::B, IntField::EX];

    pub fn name(self) -> &'static str {
        match self {
            IntField::E => "e",
            IntField::E0 => "e0",
            IntField::Etilde => "etilde",
            IntField::B => "b",
            IntField::EX => "e_x",
        }
    }
}

impl FlagField {
    pub const ALL: [FlagField; 4] =
        [FlagField::G3, FlagField::Rational, FlagField::Unirational, FlagField::StronglyRational];

    pub fn name(self) -> &'static str {
        match self {
            FlagField::G3 => "g3",
            FlagField::Rational => "rational",
            FlagField::Unirational => "unirational",
            FlagField::StronglyRational => "strongly_rational",
        }
    }
}

impl ModelRecord {
    pub fn named(name: &str) -> Self {
        ModelRecord { name: name.to_string(), ..Default::default() }
    }

    pub fn int(&self, f: IntField) -> Option<u64> {
        match f {
            IntField::E => self.e,
            IntField::E0 => self.e0,
            IntField::Etilde => self.etilde,
            IntField::B => self.b,
            IntField::EX => self.e_x,
        }
    }

    fn int_mut(&mut self, f: IntField) -> &mut Option<u64> {
        match f {
            IntField::E => &mut self.e,
            IntField::E0 => &mut self.e0,
            IntField::Etilde => &mut self.etilde,
            IntField::B => &mut self.b,
            IntField::EX => &mut self.e_x,
        }
    }

    pub fn flag(&self, f: FlagField) -> Option<bool> {
        match f {
            FlagField::G3 => self.g3,
            FlagField::Rational => self.rational,
            FlagField::Unirational => self.unirational,
            FlagField::StronglyRational => self.strongly_rational,
        }
    }

    fn flag_mut(&mut self, f: FlagField) -> &mut Option<bool> {
        match f {
            FlagField::G3 => &mut self.g3,
            FlagField::Rational => &mut self.rational,
            FlagField::Unirational => &mut self.unirational,
            FlagField::StronglyRational => &mut self.strongly_rational,
        }
    }

    /// Sets a given integer with a provenance note.
    pub fn with_int(mut self, f: IntField, v: u64, note: &str) -> Self {
        *self.int_mut(f) = Some(v);
        self.provenance.insert(f.name().into(), note.into());
        self
    }

    pub fn with_flag(mut self, f: FlagField, v: bool, note: &str) -> Self {
        *self.flag_mut(f) = Some(v);
        self.provenance.insert(f.name().into(), note.into());
        self
    }

    /// Names of the known invariant fields.
    pub fn known_fields(&self) -> Vec<&'static str> {
        let ints = IntField::ALL.into_iter().filter(|f| self.int(*f).is_some()).map(IntField::name);
        let flags = FlagField::ALL.into_iter().filter(|f| self.flag(*f).is_some()).map(FlagField::name);
        ints.chain(flags).collect()
    }

    /// Integers set to 0 violate the record invariants.
    pub fn zero_fields(&self) -> Vec<&'static str> {
        IntField::ALL.into_iter().filter(|f| self.int(*f) == Some(0)).map(IntField::name).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleFiring {
    pub rule: Rule,
    pub inputs: Vec<&'static str>,
    pub field: &'static str,
    pub value: String,
}

impl fmt::Display for RuleFiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {} from {}", self.rule, self.field, self.value, self.inputs.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    pub rule: Rule,
    pub fields: Vec<&'static str>,
    pub detail: String,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}) violated by {}: {}", self.rule, self.rule.statement(), self.fields.join(", "), self.detail)
    }
}

/// Result of [`propagate`] on a consistent record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    pub record: ModelRecord,
    pub firings: Vec<RuleFiring>,
}

struct Engine {
    record: ModelRecord,
    firings: Vec<RuleFiring>,
}

impl Engine {
    fn set_int(&mut self, rule: Rule, inputs: &[&'static str], f: IntField, v: u64) -> Result<(), Contradiction> {
        match self.record.int(f) {
            Some(cur) if cur == v => Ok(()),
            Some(cur) => Err(Contradiction {
                rule,
                fields: with(inputs, f.name()),
                detail: format!("{} is {cur} but {} forces {v}", f.name(), inputs.join(", ")),
            }),
            None => {
                *self.record.int_mut(f) = Some(v);
                self.note(rule, inputs, f.name(), v.to_string());
                Ok(())
            }
        }
    }

    fn set_flag(&mut self, rule: Rule, inputs: &[&'static str], f: FlagField, v: bool) -> Result<(), Contradiction> {
        match self.record.flag(f) {
            Some(cur) if cur == v => Ok(()),
            Some(cur) => Err(Contradiction {
                rule,
                fields: with(inputs, f.name()),
                detail: format!("{} is {cur} but {} forces {v}", f.name(), inputs.join(", ")),
            }),
            None => {
                *self.record.flag_mut(f) = Some(v);
                self.note(rule, inputs, f.name(), v.to_string());
                Ok(())
            }
        }
    }

    fn note(&mut self, rule: Rule, inputs: &[&'static str], field: &'static str, value: String) {
        self.record.provenance.insert(field.into(), format!("{rule} from {}", inputs.join(", ")));
        self.firings.push(RuleFiring { rule, inputs: inputs.to_vec(), field, value });
    }

    fn apply(&mut self, rule: Rule) -> Result<(), Contradiction> {
        use FlagField::*;
        use IntField::*;
        let r = self.record.clone();
        match rule {
            Rule::R1 => match (r.e, r.etilde, r.b) {
                (Some(e), Some(t), Some(b)) if e != t * b => {
                    Err(Contradiction { rule, fields: vec!["e", "etilde", "b"], detail: format!("{e} != {t} * {b}") })
                }
                (None, Some(t), Some(b)) => self.set_int(rule, &["etilde", "b"], E, t * b),
                (Some(e), Some(t), None) => {
                    if e % t != 0 {
                        return Err(Contradiction {
                            rule,
                            fields: vec!["e", "etilde"],
                            detail: format!("etilde = {t} does not divide e = {e}"),
                        });
                    }
                    self.set_int(rule, &["e", "etilde"], B, e / t)
                }
                (Some(e), None, Some(b)) => {
                    if e % b != 0 {
                        return Err(Contradiction {
                            rule,
                            fields: vec!["e", "b"],
                            detail: format!("b = {b} does not divide e = {e}"),
                        });
                    }
                    self.set_int(rule, &["e", "b"], Etilde, e / b)
                }
                _ => Ok(()),
            },
            Rule::R2 => {
                for (lo, hi) in [(E0, Etilde), (Etilde, E), (E0, E)] {
                    if let (Some(a), Some(b)) = (r.int(lo), r.int(hi)) {
                        if a > b {
                            return Err(Contradiction {
                                rule,
                                fields: vec![lo.name(), hi.name()],
                                detail: format!("{} = {a} > {} = {b}", lo.name(), hi.name()),
                            });
                        }
                    }
                }
                if let (Some(e0), Some(e)) = (r.e0, r.e) {
                    if e0 == e {
                        self.set_int(rule, &["e0", "e"], Etilde, e)?;
                    }
                }
                if r.e == Some(1) {
                    self.set_int(rule, &["e"], Etilde, 1)?;
                }
                if r.etilde == Some(1) {
                    self.set_int(rule, &["etilde"], E0, 1)?;
                }
                Ok(())
            }
            Rule::R3 => {
                if let (Some(t), Some(e)) = (r.etilde, r.e) {
                    self.set_flag(rule, &["etilde", "e"], G3, t == e)?;
                }
                if r.g3 == Some(true) {
                    if let (Some(t), None) = (r.etilde, r.e) {
                        self.set_int(rule, &["g3", "etilde"], E, t)?;
                    }
                    if let (None, Some(e)) = (r.etilde, r.e) {
                        self.set_int(rule, &["g3", "e"], Etilde, e)?;
                    }
                }
                Ok(())
            }
            Rule::R4 => {
                if r.e == Some(1) {
                    self.set_flag(rule, &["e"], Rational, true)?;
                }
                Ok(())
            }
            Rule::R5 => {
                if r.e0 == Some(1) {
                    self.set_flag(rule, &["e0"], Unirational, true)?;
                }
                Ok(())
            }
            Rule::R6 => {
                if r.e == Some(1) {
                    self.set_flag(rule, &["e"], G3, true)?;
                }
                Ok(())
            }
            Rule::R7 => {
                if r.strongly_rational == Some(true) {
                    self.set_flag(rule, &["strongly_rational"], Rational, true)?;
                }
                if r.rational == Some(false) {
                    self.set_flag(rule, &["rational"], StronglyRational, false)?;
                }
                Ok(())
            }
            Rule::R8 => {
                if let Some(ex) = r.e_x {
                    self.set_flag(rule, &["e_x"], Rational, ex == 1)?;
                }
                Ok(())
            }
            Rule::R9 => {
                if r.rational == Some(true) {
                    self.set_flag(rule, &["rational"], Unirational, true)?;
                }
                if r.unirational == Some(false) {
                    self.set_flag(rule, &["unirational"], Rational, false)?;
                }
                Ok(())
            }
            Rule::R10 => {
                if r.rational == Some(true) {
                    self.set_int(rule, &["rational"], EX, 1)?;
                }
                Ok(())
            }
        }
    }
}

fn with(inputs: &[&'static str], field: &'static str) -> Vec<&'static str> {
    let mut v = inputs.to_vec();
    if !v.contains(&field) {
        v.push(field);
    }
    v
}

/// Applies R1..R10 in order until nothing changes. Known fields are never
/// overwritten: a rule forcing a different value is a contradiction.
pub fn propagate(r: &ModelRecord) -> Result<Propagation, Contradiction> {
    let mut engine = Engine { record: r.clone(), firings: Vec::new() };
    for f in IntField::ALL {
        if engine.record.int(f).is_some() {
            engine.record.provenance.entry(f.name().into()).or_insert_with(|| "given".into());
        }
    }
    for f in FlagField::ALL {
        if engine.record.flag(f).is_some() {
            engine.record.provenance.entry(f.name().into()).or_insert_with(|| "given".into());
        }
    }
    loop {
        let before = engine.firings.len();
        for rule in Rule::ALL {
            engine.apply(rule)?;
        }
        if engine.firings.len() == before {
            return Ok(Propagation { record: engine.record, firings: engine.firings });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub derived: Vec<RuleFiring>,
    /// The first contradiction met during propagation.
    pub contradiction: Option<Contradiction>,
    /// Every rule that fails on the state where propagation stopped.
    pub violations: Vec<Contradiction>,
    /// Integer fields set to zero, which no invariant can take.
    pub invalid_fields: Vec<&'static str>,
    pub record: ModelRecord,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.contradiction.is_none() && self.invalid_fields.is_empty()
    }
}

/// Propagates and reports every violated rule, leaving `r` untouched.
pub fn check_record(r: &ModelRecord) -> ConsistencyReport {
    let invalid_fields = r.zero_fields();
    let mut engine = Engine { record: r.clone(), firings: Vec::new() };
    let mut contradiction = None;
    'outer: loop {
        let before = engine.firings.len();
        for rule in Rule::ALL {
            if let Err(c) = engine.apply(rule) {
                contradiction = Some(c);
                break 'outer;
            }
        }
        if engine.firings.len() == before {
            break;
        }
    }
    let violations = if contradiction.is_some() {
        Rule::ALL
            .into_iter()
            .filter_map(|rule| {
                let mut probe = Engine { record: engine.record.clone(), firings: Vec::new() };
                probe.apply(rule).err()
            })
            .collect()
    } else {
        Vec::new()
    };
    ConsistencyReport { derived: engine.firings, contradiction, violations, invalid_fields, record: engine.record }
}

pub const CATALOG_NAMES: [&str; 4] = ["projective-line", "cubic-conic", "toric-quotient", "cotangent-almost-line"];

/// A catalog entry; `n` is the dimension for the entries that depend on one.
pub fn builtin(name: &str, n: u64) -> Option<ModelRecord> {
    use FlagField::*;
    use IntField::*;
    let r = match name {
        "projective-line" => ModelRecord { dim: Some(n), ..ModelRecord::named("projective-line") }.with_int(
            E,
            1,
            "one line through two points of projective space",
        ),
        "cubic-conic" => ModelRecord { dim: Some(3), ..ModelRecord::named("cubic-conic") }
            .with_int(E, 6, "six conics of the family through two general points (lines through a point)")
            .with_int(E0, 6, "six conics through a general point with a general tangent direction")
            .with_flag(Rational, false, "the smooth cubic threefold is not rational"),
        "toric-quotient" => ModelRecord { dim: Some(n), ..ModelRecord::named("toric-quotient") }
            .with_int(E0, 1, "e0 is unchanged by the quotient cover from (P^n, line)")
            .with_int(E, n + 1, "e of (P^n, line) times the degree n+1 of the quotient map")
            .with_int(B, n + 1, "the cyclic cover of degree n+1 is etale along Y"),
        "cotangent-almost-line" => ModelRecord { dim: None, ..ModelRecord::named("cotangent-almost-line") }
            .with_int(E, 1, "the almost-line in P(T*P^r) has e = 1")
            .with_flag(G3, true, "e = 1 makes the almost-line G3"),
        _ => return None,
    };
    Some(r)
}

/// All catalog entries, with `n = 3` where a dimension is needed.
pub fn catalog() -> Vec<ModelRecord> {
    CATALOG_NAMES.iter().map(|name| builtin(name, 3).expect("catalog names resolve")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec() -> ModelRecord {
        ModelRecord::named("test")
    }

    #[test]
    fn toric_quotient_entry() {
        for n in 2..=6 {
            let p = propagate(&builtin("toric-quotient", n).unwrap()).unwrap();
            assert_eq!(p.record.etilde, Some(1));
            assert_eq!(p.record.g3, Some(false));
            assert!(p.record.e0 < p.record.e);
            assert_eq!((p.firings[0].rule, p.firings[0].field), (Rule::R1, "etilde"));
            assert!(p.firings.iter().any(|f| f.rule == Rule::R3 && f.field == "g3"));
        }
    }

    #[test]
    fn equal_e_and_etilde() {
        let r = ModelRecord { e: Some(6), etilde: Some(6), ..rec() };
        let p = propagate(&r).unwrap().record;
        assert_eq!((p.b, p.g3), (Some(1), Some(true)));
    }

    #[test]
    fn e0_above_e_contradicts() {
        let r = ModelRecord { e0: Some(2), e: Some(1), ..rec() };
        assert_eq!(propagate(&r).unwrap_err().rule, Rule::R2);
    }

    #[test]
    fn check_record_lists_violations() {
        let ok = check_record(&builtin("projective-line", 2).unwrap());
        assert!(ok.is_consistent() && ok.violations.is_empty());

        let r = ModelRecord { rational: Some(true), e_x: Some(2), ..rec() };
        let rules: Vec<Rule> = check_record(&r).violations.iter().map(|c| c.rule).collect();
        assert!(rules.contains(&Rule::R8) && rules.contains(&Rule::R10));

        let r = ModelRecord { g3: Some(true), etilde: Some(2), e: Some(3), ..rec() };
        let rules: Vec<Rule> = check_record(&r).violations.iter().map(|c| c.rule).collect();
        assert!(rules.contains(&Rule::R3));

        let zero = ModelRecord { e: Some(0), ..rec() };
        assert_eq!(check_record(&zero).invalid_fields, vec!["e"]);
    }

    #[test]
    fn catalog_is_consistent() {
        for r in catalog() {
            let report = check_record(&r);
            assert!(report.is_consistent(), "{}: {:?}", r.name, report.contradiction);
        }
        let cubic = propagate(&builtin("cubic-conic", 3).unwrap()).unwrap().record;
        assert_eq!(cubic.etilde, Some(6));
        assert_eq!(cubic.b, Some(1));
        assert_eq!(cubic.g3, Some(true));
        assert_eq!(cubic.rational, Some(false));
        let proj = propagate(&builtin("projective-line", 4).unwrap()).unwrap().record;
        assert_eq!((proj.e, proj.e0, proj.etilde, proj.b), (Some(1), Some(1), Some(1), Some(1)));
        assert_eq!(proj.rational, Some(true));
        assert_eq!(proj.e_x, Some(1));
        assert!(builtin("nothing", 3).is_none());
    }

    #[test]
    fn provenance_is_recorded() {
        let p = propagate(&builtin("toric-quotient", 3).unwrap()).unwrap().record;
        assert_eq!(p.provenance["etilde"], "R1 from e, b");
        assert!(p.provenance["e"].contains("degree n+1"));
    }
}
