//! Database, bindings and renaming files, and result printing.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use flif_core::{Constant, Instance, RelName, Renaming, Schema, Valuation, ValuationSet, VarName};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DatabaseFile {
    relations: BTreeMap<String, RelationEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    arity: usize,
    input_arity: usize,
    #[serde(default)]
    tuples: Vec<Vec<String>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))
}

/// Text given either inline (starting with `{` or `[`) or as a file path.
fn inline_or_file(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_owned())
    } else {
        read(Path::new(arg))
    }
}

fn data_error(what: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {}", what, e))
}

fn constant(s: &str, what: &str) -> Result<Constant, CliError> {
    let c = Constant::new(s);
    if c.is_reserved() {
        return Err(data_error(what, format!("reserved constant {:?}", s)));
    }
    Ok(c)
}

pub fn load_database(path: &Path) -> Result<Instance, CliError> {
    let what = path.display().to_string();
    let file: DatabaseFile = serde_json::from_str(&read(path)?).map_err(|e| data_error(&what, e))?;
    let mut schema = Schema::new();
    for (name, rel) in &file.relations {
        let name = RelName::new(name).map_err(|e| data_error(&what, e))?;
        schema
            .declare(name, rel.arity, rel.input_arity)
            .map_err(|e| data_error(&what, e))?;
    }
    let mut db = Instance::new(schema);
    for (name, rel) in &file.relations {
        let name = RelName::new(name).map_err(|e| data_error(&what, e))?;
        for t in &rel.tuples {
            let tuple = t
                .iter()
                .map(|c| constant(c, &what))
                .collect::<Result<Vec<_>, _>>()?;
            db.insert(&name, tuple).map_err(|e| data_error(&what, e))?;
        }
    }
    Ok(db)
}

fn valuation(obj: &Map<String, Value>, what: &str) -> Result<Valuation, CliError> {
    obj.iter()
        .map(|(k, v)| {
            let x = VarName::new(k).map_err(|e| data_error(what, e))?;
            let c = match v {
                Value::String(s) => constant(s, what)?,
                other => return Err(data_error(what, format!("value of `{}` must be a string, got {}", k, other))),
            };
            Ok((x, c))
        })
        .collect()
}

/// A bindings document: one object, or an array of objects on the same
/// variables.
pub fn load_bindings(arg: &str) -> Result<Vec<Valuation>, CliError> {
    let what = "bindings";
    let value: Value = serde_json::from_str(&inline_or_file(arg)?).map_err(|e| data_error(what, e))?;
    let rows = match &value {
        Value::Object(o) => vec![valuation(o, what)?],
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::Object(o) => valuation(o, what),
                other => Err(data_error(what, format!("expected an object, got {}", other))),
            })
            .collect::<Result<_, _>>()?,
        other => return Err(data_error(what, format!("expected an object or array, got {}", other))),
    };
    Ok(rows)
}

/// The `In` relation of a plan: every row must bind the same variables.
pub fn load_relation(arg: &str) -> Result<ValuationSet, CliError> {
    let rows = load_bindings(arg)?;
    let schema = rows.first().map(|r| r.domain()).unwrap_or_default();
    ValuationSet::from_rows(schema, rows).map_err(|e| data_error("bindings", e))
}

pub fn load_renaming(arg: &str) -> Result<Renaming, CliError> {
    let what = "renaming";
    let map: BTreeMap<String, String> =
        serde_json::from_str(&inline_or_file(arg)?).map_err(|e| data_error(what, e))?;
    let map = map
        .iter()
        .map(|(k, v)| Ok((VarName::new(k)?, VarName::new(v)?)))
        .collect::<flif_core::Result<BTreeMap<_, _>>>()
        .map_err(|e| data_error(what, e))?;
    Renaming::new(map).map_err(|e| data_error(what, e))
}

pub fn parse_vars(s: &str) -> Result<Vec<VarName>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| VarName::new(v).map_err(|e| data_error("--vars", e)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Ndjson,
}

pub fn row_json(row: &Valuation) -> String {
    let obj: Map<String, Value> = row
        .iter()
        .map(|(x, c)| (x.to_string(), Value::String(c.to_string())))
        .collect();
    Value::Object(obj).to_string()
}

/// Rows in the order of the set: by variable name, then value.
pub fn render(set: &ValuationSet, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Ndjson => {
            for row in set {
                out.push_str(&row_json(row));
                out.push('\n');
            }
        }
        Format::Table => {
            let cols: Vec<&VarName> = set.schema().iter().collect();
            let cells: Vec<Vec<String>> = set
                .iter()
                .map(|r| cols.iter().map(|x| r.get(x).map(|c| c.to_string()).unwrap_or_default()).collect())
                .collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, x)| cells.iter().map(|r| r[i].chars().count()).fold(x.as_str().chars().count(), usize::max))
                .collect();
            let line = |items: Vec<String>| -> String {
                let padded: Vec<String> = items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{:<w$}", s, w = w))
                    .collect();
                padded.join("  ").trim_end().to_owned()
            };
            out.push_str(&line(cols.iter().map(|x| x.to_string()).collect()));
            out.push('\n');
            for r in cells {
                out.push_str(&line(r));
                out.push('\n');
            }
            out.push_str(&format!("({} row{})\n", set.len(), if set.len() == 1 { "" } else { "s" }));
        }
    }
    out
}

pub fn var_set(vars: &[VarName]) -> BTreeSet<VarName> {
    vars.iter().cloned().collect()
}
