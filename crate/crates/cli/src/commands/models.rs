use quasiline::models::{builtin, check_record, Contradiction, FlagField, IntField, ModelRecord, CATALOG_NAMES};

use crate::inputs::{load_record, save_record};
use crate::report::{Fields, Node};
use crate::{CliError, ModelsArgs, Report};

fn known(r: &ModelRecord) -> Node {
    let mut f = Fields::new();
    if let Some(d) = r.dim {
        f.put("dim", d);
    }
    for field in IntField::ALL {
        if let Some(v) = r.int(field) {
            f.put(field.name(), v);
        }
    }
    for field in FlagField::ALL {
        if let Some(v) = r.flag(field) {
            f.put(field.name(), v);
        }
    }
    f.into_node()
}

fn contradiction(c: &Contradiction) -> Node {
    let mut f = Fields::new();
    f.put("rule", c.rule).put("statement", c.rule.statement()).node("fields", Node::values(&c.fields));
    f.put("detail", &c.detail);
    f.into_node()
}

/// Propagation trace of one record; the flag is false when the record is refuted.
fn trace(r: &ModelRecord) -> (Fields, bool, Option<ModelRecord>) {
    let check = check_record(r);
    let mut f = Fields::new();
    f.put("name", &r.name).node("given", known(r));
    let firings = check
        .derived
        .iter()
        .map(|x| {
            let mut e = Fields::new();
            e.put("rule", x.rule).put("statement", x.rule.statement()).put("field", x.field).put("value", &x.value);
            e.node("from", Node::values(&x.inputs));
            e.into_node()
        })
        .collect();
    f.node("firings", Node::List(firings));
    let ok = check.is_consistent();
    f.put("status", if ok { "consistent" } else { "contradiction" });
    if !check.invalid_fields.is_empty() {
        f.node("invalid-fields", Node::values(&check.invalid_fields));
    }
    if let Some(c) = &check.contradiction {
        f.node("contradiction", contradiction(c));
        f.node("violated", Node::List(check.violations.iter().map(contradiction).collect()));
    }
    f.node("record", known(&check.record));
    (f, ok, ok.then_some(check.record))
}

pub(super) fn models(seed: u64, args: &ModelsArgs) -> Result<Report, CliError> {
    let records = match (&args.builtin, &args.record) {
        (Some(name), _) => vec![builtin(name, args.n)
            .ok_or_else(|| CliError::Usage(format!("unknown model `{name}`; known: {}", CATALOG_NAMES.join(", "))))?],
        (None, Some(path)) => vec![load_record(path)?],
        (None, None) => {
            CATALOG_NAMES.iter().map(|name| builtin(name, args.n).expect("catalog names resolve")).collect()
        }
    };
    if args.save.is_some() && records.len() != 1 {
        return Err(CliError::Usage("--save needs a single record (--builtin or --record)".into()));
    }
    let mut report = Report::new("models", seed);
    let mut refuted = Vec::new();
    let mut entries = Vec::new();
    let mut derived = None;
    for r in &records {
        let (fields, ok, out) = trace(r);
        if !ok {
            refuted.push(r.name.clone());
        }
        derived = out;
        entries.push(fields);
    }
    if entries.len() == 1 {
        report.body = entries.pop().expect("one entry");
    } else {
        report.body.node("models", Node::List(entries.into_iter().map(Fields::into_node).collect()));
    }
    if !refuted.is_empty() {
        return Err(CliError::Refuted {
            reason: format!("contradiction in {}", refuted.join(", ")),
            report: Box::new(report),
        });
    }
    if let (Some(path), Some(rec)) = (&args.save, derived) {
        save_record(path, &rec)?;
    }
    Ok(report)
}
