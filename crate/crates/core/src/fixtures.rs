//! The shipped non-derivation examples: a manifest of `(logic, formula, world)` entries, each
//! backed by a model file.
//!
//! ```text
//! # name | logic | formula | world | conditions the frame violates
//! 7_1 | iGL | ([]#f ~> #f) -> []#f | a
//! ```
//!
//! The last column is optional. Lines starting with `#` are comments.

use std::path::Path;

use thiserror::Error;

use crate::conditions::{check_condition, parse_conditions, ConditionError, ConditionId};
use crate::formula::{parse, Formula, ParseError};
use crate::kripke::{parse_model, KripkeError, Model};
use crate::logics::{LogicError, Registry};
use crate::search::{find_countermodel, verify_witness, NonDerivationWitness, SearchError, SearchOptions, WitnessFailure};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("{name}: {source}")]
    Model { name: String, source: KripkeError },
    #[error("{name}: {source}")]
    Logic { name: String, source: LogicError },
    #[error("{name}: {source}")]
    Search { name: String, source: SearchError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone)]
pub struct ExampleEntry {
    pub name: String,
    pub logic: String,
    pub formula: Formula,
    pub world: String,
    /// Conditions the frame must fail, showing it lies outside a neighbouring class.
    pub violates: Vec<ConditionId>,
}

pub fn parse_manifest(text: &str) -> Result<Vec<ExampleEntry>, FixtureError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| FixtureError::Manifest { line: i + 1, msg };
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        if !(4..=5).contains(&cols.len()) {
            return Err(err(format!("expected 4 or 5 columns, found {}", cols.len())));
        }
        let formula = parse(cols[2]).map_err(|e: ParseError| err(e.to_string()))?;
        let violates = match cols.get(4) {
            Some(c) => parse_conditions(c).map_err(|e: ConditionError| err(e.to_string()))?,
            None => Vec::new(),
        };
        out.push(ExampleEntry {
            name: cols[0].to_string(),
            logic: cols[1].to_string(),
            formula,
            world: cols[3].to_string(),
            violates,
        });
    }
    Ok(out)
}

/// Outcome of checking one example.
#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub name: String,
    pub worlds: usize,
    pub witness: Result<(), WitnessFailure>,
    /// Conditions listed as violated that the frame in fact satisfies.
    pub unexpectedly_held: Vec<ConditionId>,
    /// Whether a fresh search over frames of at most `worlds` worlds found a refutation.
    pub rediscovered: bool,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.witness.is_ok() && self.unexpectedly_held.is_empty() && self.rediscovered
    }
}

pub fn check_example(reg: &Registry, entry: &ExampleEntry, model: &Model) -> Result<ExampleReport, FixtureError> {
    let logic = reg.logic(&entry.logic).map_err(|source| FixtureError::Logic {
        name: entry.name.clone(),
        source,
    })?;
    let mut conds = logic.class.clone().ok_or_else(|| FixtureError::Logic {
        name: entry.name.clone(),
        source: LogicError::NoClass(entry.logic.clone()),
    })?;
    conds.sort();
    conds.dedup();
    let worlds = model.frame().len();
    let witness = match model.world_named(&entry.world) {
        Some(world) => verify_witness(&NonDerivationWitness {
            logic: entry.logic.clone(),
            conditions: conds.clone(),
            formula: entry.formula.clone(),
            model: model.clone(),
            world,
        }),
        None => Err(WitnessFailure::NoSuchWorld(worlds)),
    };
    let unexpectedly_held = entry
        .violates
        .iter()
        .copied()
        .filter(|&c| check_condition(model.frame(), c))
        .collect();
    let found = find_countermodel(&entry.formula, &conds, &SearchOptions::with_max_n(worlds).reduced())
        .map_err(|source| FixtureError::Search {
            name: entry.name.clone(),
            source,
        })?;
    Ok(ExampleReport {
        name: entry.name.clone(),
        worlds,
        witness,
        unexpectedly_held,
        rediscovered: found.countermodel().is_some(),
    })
}

fn read(path: &Path) -> Result<String, FixtureError> {
    std::fs::read_to_string(path).map_err(|source| FixtureError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Checks every entry of `dir/manifest` against `dir/<name>.model`.
pub fn check_example_dir(reg: &Registry, dir: &Path) -> Result<Vec<ExampleReport>, FixtureError> {
    let entries = parse_manifest(&read(&dir.join("manifest"))?)?;
    entries
        .iter()
        .map(|e| {
            let text = read(&dir.join(format!("{}.model", e.name)))?;
            let model = parse_model(&text).map_err(|source| FixtureError::Model {
                name: e.name.clone(),
                source,
            })?;
            check_example(reg, e, &model)
        })
        .collect()
}
