use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use quasiline::divisor::{
    count_lattice_points, hyperplane_function, is_cartier, quotient_extension_check, sections_polyhedron,
    CartierCertificate, DivisorError, SectionsPolyhedron, SupportFunction,
};
use quasiline::fan::{cyclic_quotient_fans, desingularize as resolve, is_smooth, validate_fan, Fan, FanError};
use quasiline::lattice::Halfspace;
use quasiline::Rational;

use super::{math, rationals, vector, vectors};
use crate::inputs::{load_divisor, load_fan};
use crate::report::{Fields, Node};
use crate::{CliError, Report};

fn fan_error(e: FanError) -> CliError {
    match e {
        FanError::BadDimension(_) => CliError::Usage(e.to_string()),
        other => math(other),
    }
}

fn divisor_error(e: DivisorError) -> CliError {
    match e {
        DivisorError::Fan(f) => fan_error(f),
        other => math(other),
    }
}

fn cones(fan: &Fan) -> Node {
    Node::List(
        fan.cones()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut f = Fields::new();
                f.put("index", i).node("rays", Node::values(c.rays()));
                match fan.cone_index(c) {
                    Some(m) => f.put("multiplicity", m),
                    None => f.put("multiplicity", "not simplicial"),
                };
                f.into_node()
            })
            .collect(),
    )
}

fn certificate(c: &CartierCertificate) -> Node {
    let mut f = Fields::new();
    match c {
        CartierCertificate::Cartier { duals } => {
            f.put("cartier", true).node("duals", vectors(duals));
        }
        CartierCertificate::NotCartier { cone, witness } => {
            f.put("cartier", false).put("cone", cone).node("witness", rationals(witness));
            f.put("denominator", denominator(witness));
        }
    }
    f.into_node()
}

/// Least common denominator of a rational vector.
fn denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()))
}

fn constraints(p: &SectionsPolyhedron) -> Node {
    Node::List(
        p.constraints
            .iter()
            .map(|Halfspace { normal, rhs }| {
                let mut f = Fields::new();
                f.node("normal", vector(normal)).put("rhs", rhs);
                f.into_node()
            })
            .collect(),
    )
}

fn sections(report: &mut Report, psi: &SupportFunction) -> Result<usize, CliError> {
    let p = sections_polyhedron(psi);
    report.body.node("constraints", constraints(&p));
    let pts = count_lattice_points(&p).map_err(divisor_error)?;
    report.body.node("points", vectors(&pts.points)).put("h0", pts.count());
    Ok(pts.count())
}

pub(super) fn quotient(seed: u64, n: i64, max_n: i64) -> Result<Report, CliError> {
    if n > max_n {
        return Err(CliError::Usage(format!("n = {n} exceeds the cap {max_n} (raise it with --max-n)")));
    }
    let fans = cyclic_quotient_fans(n).map_err(fan_error)?;
    let mut r = Report::new("quotient", seed);
    r.body.put("n", n).put("order", n + 1);
    r.body.node("rays", vectors(fans.quotient.rays())).node("cones", cones(&fans.quotient));
    r.body.put("cover-smooth", is_smooth(&fans.cover));
    r.body.node("cover-certificate", certificate(&is_cartier(&hyperplane_function(&fans.cover))));
    let cert = is_cartier(&hyperplane_function(&fans.quotient));
    r.body.node("quotient-certificate", certificate(&cert));
    if let CartierCertificate::NotCartier { witness, .. } = &cert {
        let d = denominator(witness);
        r.body.put("denominator-divides-order", (BigInt::from(n + 1) % d).is_zero());
    }
    sections(&mut r, &hyperplane_function(&fans.quotient))?;
    Ok(r)
}

pub(super) fn extensions(seed: u64, n: i64, bound: i64, samples: usize) -> Result<Report, CliError> {
    if !(2..=3).contains(&n) {
        return Err(CliError::Usage(format!("n must be 2 or 3, got {n}")));
    }
    if bound < 0 {
        return Err(CliError::Usage(format!("bound must be nonnegative, got {bound}")));
    }
    let rep = quotient_extension_check(n, bound, samples, seed).map_err(divisor_error)?;
    let mut r = Report::new("extensions", seed);
    r.body.put("n", n).put("bound", bound).put("requested", samples);
    let mut res = Fields::new();
    res.put("base-rays", rep.base_rays)
        .put("rays", rep.refined.rays().len())
        .put("cones", rep.refined.cones().len())
        .node("added-rays", vectors(&rep.refined.rays()[rep.base_rays..]))
        .put("smooth", rep.refined_smooth);
    r.body.node("resolution", res.into_node());
    r.body.put("accepted", rep.samples.len()).put("rejected", rep.rejected);
    match rep.max_count() {
        Some(m) => r.body.put("max-count", m),
        None => r.body.put("max-count", "none"),
    };
    r.body.node("violations", Node::values(&rep.violations));
    let list = rep
        .samples
        .iter()
        .map(|s| {
            let mut f = Fields::new();
            f.node("new-values", Node::values(&s.new_values))
                .put("contains-base", s.contains_base)
                .put("count", s.count);
            f.into_node()
        })
        .collect();
    r.body.node("samples", Node::List(list)).put("note", rep.note);
    if !rep.violations.is_empty() {
        return Err(CliError::Refuted { reason: format!("{} violations", rep.violations.len()), report: Box::new(r) });
    }
    Ok(r)
}

pub(super) fn validate(seed: u64, path: &Path) -> Result<Report, CliError> {
    let fan = load_fan(path)?;
    let v = validate_fan(&fan);
    let mut r = Report::new("fan validate", seed);
    r.body.put("dim", fan.dim()).put("rays", fan.rays().len()).node("cones", cones(&fan));
    r.body.put("valid", v.is_valid()).node("violations", Node::values(&v.violations));
    r.body.put("smooth", v.is_valid() && is_smooth(&fan));
    Ok(r)
}

fn valid_fan(path: &Path) -> Result<Fan, CliError> {
    let fan = load_fan(path)?;
    let v = validate_fan(&fan);
    match v.violations.first() {
        Some(first) => Err(CliError::input(path, format!("not a simplicial fan: {first}"))),
        None => Ok(fan),
    }
}

pub(super) fn desingularize(seed: u64, path: &Path) -> Result<Report, CliError> {
    let fan = valid_fan(path)?;
    let out = resolve(&fan);
    let mut r = Report::new("fan desingularize", seed);
    r.body.put("dim", out.dim()).put("input-rays", fan.rays().len()).put("input-cones", fan.cones().len());
    r.body.node("added-rays", vectors(&out.rays()[fan.rays().len()..]));
    r.body.node("rays", vectors(out.rays())).node("cones", cones(&out));
    r.body.put("smooth", is_smooth(&out));
    Ok(r)
}

pub(super) fn cartier(seed: u64, path: &Path) -> Result<Report, CliError> {
    let psi = load_divisor(path)?;
    let mut r = Report::new("fan cartier", seed);
    r.body.node("values", Node::values(psi.values()));
    r.body.node("certificate", certificate(&is_cartier(&psi)));
    Ok(r)
}

pub(super) fn h0(seed: u64, path: &Path) -> Result<Report, CliError> {
    let psi = load_divisor(path)?;
    let mut r = Report::new("fan h0", seed);
    r.body.node("values", Node::values(psi.values()));
    sections(&mut r, &psi)?;
    Ok(r)
}
