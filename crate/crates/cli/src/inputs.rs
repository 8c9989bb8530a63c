//! Fan, divisor, and record documents.
//!
//! A fan file has `dim`, `rays`, and `cones`. A divisor file has `values` and a
//! `fan`, given either as a path (relative to the divisor file) or inline.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use quasiline::divisor::SupportFunction;
use quasiline::fan::{Fan, FanDoc};
use quasiline::models::ModelRecord;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FanRef {
    Path(PathBuf),
    Inline(FanDoc),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorDoc {
    fan: FanRef,
    values: Vec<i64>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(path, e))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    toml::from_str(&read(path)?).map_err(|e| CliError::input(path, e))
}

pub fn load_fan(path: &Path) -> Result<Fan, CliError> {
    let doc: FanDoc = parse(path)?;
    doc.into_fan().map_err(|e| CliError::input(path, e))
}

pub fn load_divisor(path: &Path) -> Result<SupportFunction, CliError> {
    let doc: DivisorDoc = parse(path)?;
    let fan = match doc.fan {
        FanRef::Path(p) => load_fan(&path.parent().unwrap_or(Path::new(".")).join(p))?,
        FanRef::Inline(d) => d.into_fan().map_err(|e| CliError::input(path, e))?,
    };
    let values = doc.values.into_iter().map(BigInt::from).collect();
    SupportFunction::new(fan, values).map_err(|e| CliError::input(path, e))
}

pub fn load_record(path: &Path) -> Result<ModelRecord, CliError> {
    parse(path)
}

pub fn save_record(path: &Path, r: &ModelRecord) -> Result<(), CliError> {
    let text = toml::to_string(r).map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(path, text).map_err(|e| CliError::input(path, e))
}
