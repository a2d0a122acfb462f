//! Family spec files.
//!
//! ```json
//! {
//!   "grid": { "dim": 1, "box_level": 2, "cell_exp": -8 },
//!   "space": { "p": 2.0, "weight": { "power": 0.5 } },
//!   "members": [
//!     { "label": "g0", "shape": { "gaussian": { "center": [0.0], "sigma": 0.5, "amplitude": 1.0 } } },
//!     { "label": "t0", "csv": "values.csv" }
//!   ]
//! }
//! ```
//!
//! `weight` is one of `{"constant": c}`, `{"power": a}`, `{"table": [...]}`;
//! alternatively `weight_csv` names a CSV file of cell values. Member shapes
//! are `zero`, `constant`, `gaussian`, `bump`, `indicator`, `power` and
//! `table`; `csv` reads row-major cell values from a headerless CSV file.
//! Relative paths resolve against the spec file's directory. Unknown keys are
//! rejected.

use std::fs;
use std::path::{Path, PathBuf};

use compactnet_core::{sample, Family, Grid, Primitive, WeightSpec, WeightedSpace};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub grid: GridBlock,
    pub space: SpaceBlock,
    pub members: Vec<MemberBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub dim: usize,
    pub box_level: i32,
    pub cell_exp: i32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceBlock {
    pub p: f64,
    #[serde(default)]
    pub weight: Option<WeightSpec>,
    #[serde(default)]
    pub weight_csv: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberBlock {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub shape: Option<Primitive>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

/// A parsed spec, materialized on its grid.
pub struct Loaded {
    pub grid: Grid,
    pub weight: WeightSpec,
    pub space: WeightedSpace,
    pub family: Family,
}

fn read_csv_values(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        for field in record.iter().filter(|f| !f.is_empty()) {
            let v = field.parse::<f64>().map_err(|_| {
                CliError::Parse(format!("{}: not a number: {field:?}", path.display()))
            })?;
            values.push(v);
        }
    }
    Ok(values)
}

pub fn parse(text: &str) -> Result<SpecFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("spec: {e}")))
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let spec = parse(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    materialize(spec, base)
}

pub fn materialize(spec: SpecFile, base: &Path) -> Result<Loaded, CliError> {
    let grid = Grid::new(spec.grid.dim, spec.grid.box_level, spec.grid.cell_exp)?;
    let weight = match (spec.space.weight, spec.space.weight_csv) {
        (Some(_), Some(_)) => {
            return Err(CliError::Parse(
                "space: give either `weight` or `weight_csv`, not both".into(),
            ))
        }
        (Some(w), None) => w,
        (None, Some(p)) => WeightSpec::Table(read_csv_values(&base.join(p))?),
        (None, None) => WeightSpec::Constant(1.0),
    };
    let space = WeightedSpace::from_spec(spec.space.p, &weight, &grid)?;
    if spec.members.is_empty() {
        return Err(CliError::Parse("spec: `members` is empty".into()));
    }
    let mut members = Vec::with_capacity(spec.members.len());
    let mut labels = Vec::with_capacity(spec.members.len());
    for (k, m) in spec.members.into_iter().enumerate() {
        let f = match (m.shape, m.csv) {
            (Some(shape), None) => sample(&shape, &grid)?,
            (None, Some(p)) => sample(
                &Primitive::Table {
                    values: read_csv_values(&base.join(p))?,
                },
                &grid,
            )?,
            _ => {
                return Err(CliError::Parse(format!(
                    "members[{k}]: give exactly one of `shape` or `csv`"
                )))
            }
        };
        members.push(f);
        labels.push(m.label.unwrap_or_else(|| format!("f{k}")));
    }
    let family = Family::new(members, labels)?;
    Ok(Loaded {
        grid,
        weight,
        space,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spec() {
        let text = r#"{
            "grid": {"dim": 1, "box_level": 0, "cell_exp": -2},
            "space": {"p": 1.0},
            "members": [{"shape": "zero"}, {"label": "c", "shape": {"constant": {"value": 2.0}}}]
        }"#;
        let loaded = materialize(parse(text).unwrap(), Path::new(".")).unwrap();
        assert_eq!(loaded.family.labels(), &["f0".to_string(), "c".to_string()]);
        assert!(loaded.space.is_strict());
    }

    #[test]
    fn unknown_key_is_named() {
        let text = r#"{"grid": {"dim": 1, "box_level": 0, "cell_exp": -2, "cells": 4},
                       "space": {"p": 1.0}, "members": []}"#;
        match parse(text) {
            Err(CliError::Parse(msg)) => assert!(msg.contains("cells"), "{msg}"),
            _ => panic!("expected a parse error"),
        }
    }

    #[test]
    fn member_needs_one_source() {
        let text = r#"{"grid": {"dim": 1, "box_level": 0, "cell_exp": -2},
                       "space": {"p": 1.0}, "members": [{"label": "x"}]}"#;
        assert!(matches!(
            materialize(parse(text).unwrap(), Path::new(".")),
            Err(CliError::Parse(_))
        ));
    }
}
