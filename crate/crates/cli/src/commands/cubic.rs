use quasiline::cubic::{
    base_point, count_lines_through_point, e_conic_certificate, line_pencil_expansion,
    reducible_cubic_through_base_point, CubicError, SMOOTHNESS_NOTE,
};
use quasiline::rng::seeded;

use super::{math, rationals};
use crate::report::{Fields, Node};
use crate::{CliError, Report};

/// Conics through a general point with a general tangent direction; taken as
/// known, not recomputed here.
const RECORDED_E0: usize = 6;

fn cubic_error(e: CubicError) -> CliError {
    match e {
        CubicError::NotCubic | CubicError::BadPoint(_) | CubicError::ZeroPoint => CliError::Usage(e.to_string()),
        other => math(other),
    }
}

pub(super) fn cubic(seed: u64, bound: i64, reducible: bool) -> Result<Report, CliError> {
    if bound < 1 {
        return Err(CliError::Usage(format!("bound must be at least 1, got {bound}")));
    }
    if reducible {
        let f = reducible_cubic_through_base_point(&mut seeded(seed), bound);
        let report = count_lines_through_point(&f, &base_point()).map_err(cubic_error)?;
        return Err(CliError::Internal(format!("reducible cubic gave a finite count {}", report.count)));
    }
    let c = e_conic_certificate(seed, bound).map_err(cubic_error)?;
    let e = line_pencil_expansion(&c.cubic, &c.point).map_err(cubic_error)?;
    let mut r = Report::new("cubic", seed);
    r.body.put("bound", bound).put("attempts", c.attempts).put("f", &c.cubic).node("point", rationals(&c.point));
    // Direction coordinate v_i moves x_i.
    let names: Vec<String> = e.directions.iter().map(|d| format!("v{d}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut pencil = Fields::new();
    pencil
        .put("pivot", format!("x{}", e.pivot))
        .node("directions", Node::values(&names))
        .put("q1", e.q1.display_with(&refs))
        .put("q2", e.q2.display_with(&refs))
        .put("q3", e.q3.display_with(&refs));
    r.body.node("pencil", pencil.into_node());
    let rep = &c.report;
    r.body.put("resultant", &rep.resultant);
    r.body.node("resultant-coefficients", rationals(rep.resultant.coeffs())).put("coefficient-order", "ascending");
    r.body.put("resultant-degree", rep.resultant_degree);
    let mut flags = Fields::new();
    flags
        .put("smooth-at-point", true)
        .put("squarefree", rep.squarefree)
        .put("no-loss-at-infinity", rep.leading_ok)
        .put("generic", rep.generic);
    r.body.node("genericity", flags.into_node());
    r.body.put("lines-through-point", rep.count).put("with-multiplicity", rep.with_multiplicity);
    r.body.put("e", c.e).put("e0", RECORDED_E0).put("e0-source", "recorded");
    r.body.put("note", SMOOTHNESS_NOTE);
    Ok(r)
}
