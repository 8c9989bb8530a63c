use quasiline::bundle::{
    elm_general, point_blowup_reduction, quasiline_plan, rationality_criterion, recover_splitting, self_intersections,
    strong_rationality_criterion, BlowupPlan, BundleError, DivisorData, SplittingType,
};

use super::math;
use crate::report::{Fields, Node};
use crate::{CliError, DivisorArgs, Report, TypeArg};

fn bundle_error(e: BundleError) -> CliError {
    match e {
        BundleError::Empty | BundleError::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
        other => math(other),
    }
}

fn parse_type(t: &TypeArg) -> Result<SplittingType, CliError> {
    t.splitting.parse().map_err(|e| CliError::Usage(format!("--type: {e}")))
}

/// Comma-separated integers, keeping their order.
fn parse_integers(flag: &str, s: &str) -> Result<Vec<i64>, CliError> {
    let mut column = 1;
    let mut out = Vec::new();
    for (i, item) in s.split(',').enumerate() {
        let lead = item.len() - item.trim_start().len();
        let v = item.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{flag}: item {} (column {}) `{}` is not an integer",
                i + 1,
                column + lead,
                item.trim()
            ))
        })?;
        out.push(v);
        column += item.chars().count() + 1;
    }
    Ok(out)
}

fn plan_steps(plan: &BlowupPlan) -> Node {
    Node::List(
        plan.steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut f = Fields::new();
                f.put("step", i + 1).put("kind", s.kind).put("type", &s.result);
                f.into_node()
            })
            .collect(),
    )
}

fn divisor_data(dd: &DivisorArgs, n: i64) -> DivisorData {
    DivisorData { d_y: dd.d, dim_d: dd.dim_d, n }
}

pub(super) fn elm(seed: u64, t: &TypeArg) -> Result<Report, CliError> {
    let start = parse_type(t)?;
    let out = elm_general(&start).map_err(bundle_error)?;
    let mut r = Report::new("bundle elm", seed);
    r.body.put("type", &start).put("degree", start.degree());
    r.body.node("self-intersections", Node::values(self_intersections(&start)));
    r.body.put("result", &out).put("result-degree", out.degree());
    r.body.node("result-self-intersections", Node::values(self_intersections(&out)));
    Ok(r)
}

pub(super) fn plan(seed: u64, t: &TypeArg) -> Result<Report, CliError> {
    let start = parse_type(t)?;
    let p = quasiline_plan(&start).map_err(bundle_error)?;
    let mut r = Report::new("bundle plan", seed);
    r.body.put("type", &start).put("length", p.steps.len()).node("steps", plan_steps(&p));
    r.body.put("end", p.end()).put("almost-line", p.almost_line);
    Ok(r)
}

pub(super) fn self_int(seed: u64, t: &TypeArg) -> Result<Report, CliError> {
    let start = parse_type(t)?;
    let mut r = Report::new("bundle self-int", seed);
    r.body.put("type", &start).put("degree", start.degree());
    r.body.node("self-intersections", Node::values(self_intersections(&start)));
    Ok(r)
}

pub(super) fn recover(seed: u64, targets: &str, degree: i64) -> Result<Report, CliError> {
    let targets = parse_integers("--targets", targets)?;
    let t = recover_splitting(&targets, degree).map_err(bundle_error)?;
    let mut r = Report::new("bundle recover", seed);
    r.body.node("targets", Node::values(&targets)).put("degree", degree).put("type", t);
    Ok(r)
}

pub(super) fn rational(seed: u64, t: &TypeArg, dd: &DivisorArgs, n: Option<i64>) -> Result<Report, CliError> {
    let start = parse_type(t)?;
    let n = n.unwrap_or(start.len() as i64 + 1);
    let data = divisor_data(dd, n);
    let verdict = rationality_criterion(&start, &data).map_err(bundle_error)?;
    let mut r = Report::new("bundle rational", seed);
    r.body.put("type", &start).put("n", n).put("d", dd.d).put("dim-d", dd.dim_d);
    let mut checks = Fields::new();
    checks
        .put("d-positive", dd.d > 0)
        .put("d-at-most-a1", dd.d <= start.min())
        .put("dim-d-at-least-n-plus-d-minus-1", dd.dim_d >= n + dd.d - 1);
    r.body.node("conditions", checks.into_node()).put("rational-criterion", verdict);
    Ok(r)
}

pub(super) fn strongly_rational(seed: u64, dd: &DivisorArgs, n: i64, quasiline: bool) -> Result<Report, CliError> {
    let data = divisor_data(dd, n);
    let mut r = Report::new("bundle strongly-rational", seed);
    r.body.put("n", n).put("d", dd.d).put("dim-d", dd.dim_d).put("quasi-line", quasiline);
    let mut checks = Fields::new();
    checks.put("d-is-one", dd.d == 1).put("dim-d-at-least-n", dd.dim_d >= n);
    r.body.node("conditions", checks.into_node());
    r.body.put("strongly-rational-criterion", strong_rationality_criterion(&data, quasiline));
    Ok(r)
}

pub(super) fn reduce(seed: u64, t: &TypeArg, dd: &DivisorArgs) -> Result<Report, CliError> {
    let start = parse_type(t)?;
    let red = point_blowup_reduction(&start, &divisor_data(dd, start.len() as i64 + 1)).map_err(bundle_error)?;
    let mut r = Report::new("bundle reduce", seed);
    r.body.put("type", &start).put("d", dd.d).put("dim-d", dd.dim_d);
    r.body.put("point-blowups", red.plan.steps.len()).node("steps", plan_steps(&red.plan));
    r.body.put("result", red.plan.end()).put("result-d", red.d_y).put("result-dim-d", red.dim_d);
    r.body.put("target-dim", red.target_dim);
    Ok(r)
}
