mod bundle;
mod cubic;
mod models;
mod toric;

use std::fmt::Display;

use quasiline::{IntVector, Rational};

use crate::report::Node;
use crate::{BundleCommand, CliError, Command, FanCommand, Report, RunConfig};

pub(crate) fn dispatch(c: &RunConfig) -> Result<Report, CliError> {
    let seed = c.seed;
    match &c.command {
        Command::Quotient { n, max_n } => toric::quotient(seed, *n, *max_n),
        Command::Extensions { n, bound, samples } => toric::extensions(seed, *n, *bound, *samples),
        Command::Bundle(b) => match b {
            BundleCommand::Elm(t) => bundle::elm(seed, t),
            BundleCommand::Plan(t) => bundle::plan(seed, t),
            BundleCommand::SelfInt(t) => bundle::self_int(seed, t),
            BundleCommand::Recover { targets, degree } => bundle::recover(seed, targets, *degree),
            BundleCommand::Rational { t, dd, n } => bundle::rational(seed, t, dd, *n),
            BundleCommand::StronglyRational { dd, n, quasiline } => bundle::strongly_rational(seed, dd, *n, *quasiline),
            BundleCommand::Reduce { t, dd } => bundle::reduce(seed, t, dd),
        },
        Command::Cubic { bound, reducible } => cubic::cubic(seed, *bound, *reducible),
        Command::Models(args) => models::models(seed, args),
        Command::Fan(f) => match f {
            FanCommand::Validate { fan } => toric::validate(seed, fan),
            FanCommand::Desingularize { fan } => toric::desingularize(seed, fan),
            FanCommand::Cartier { divisor } => toric::cartier(seed, divisor),
            FanCommand::H0 { divisor } => toric::h0(seed, divisor),
        },
    }
}

fn vector(v: &IntVector) -> Node {
    Node::values(v.coords())
}

fn vectors<'a>(vs: impl IntoIterator<Item = &'a IntVector>) -> Node {
    Node::List(vs.into_iter().map(vector).collect())
}

fn rationals(vs: &[Rational]) -> Node {
    Node::values(vs)
}

fn math(e: impl Display) -> CliError {
    CliError::Math(e.to_string())
}
