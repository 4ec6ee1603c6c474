#![allow(dead_code)]

use std::collections::BTreeSet;

use flif_core::eval::ValuationSet;
use flif_core::syntax::Renaming;
use flif_core::{Constant, Instance, Schema, Valuation, VarName};

pub fn v(s: &str) -> VarName {
    VarName::new(s).unwrap()
}

pub fn vars(names: &[&str]) -> BTreeSet<VarName> {
    names.iter().map(|s| v(s)).collect()
}

pub fn consts(items: &[&str]) -> BTreeSet<Constant> {
    items.iter().map(|s| Constant::new(*s)).collect()
}

pub fn val(pairs: &[(&str, &str)]) -> Valuation {
    Valuation::from_pairs(pairs.iter().copied()).unwrap()
}

pub fn rows(schema: &[&str], rs: &[&[(&str, &str)]]) -> ValuationSet {
    ValuationSet::from_rows(vars(schema), rs.iter().map(|r| val(r))).unwrap()
}

/// Bus and train connections.
pub fn bus() -> Instance {
    let schema = Schema::new().with("B", 2, 1).unwrap().with("T", 2, 1).unwrap();
    Instance::new(schema)
        .with_tuples("B", &[&["1", "2"], &["1", "3"], &["2", "3"], &["3", "5"]])
        .unwrap()
        .with_tuples("T", &[&["1", "4"], &["3", "5"]])
        .unwrap()
}

/// `y ↦ ν(ρ(y))` on the domain of `ρ`.
pub fn after_renaming(nu: &Valuation, rho: &Renaming) -> Valuation {
    rho.iter()
        .map(|(y, ry)| (y.clone(), nu.get(ry).unwrap().clone()))
        .collect()
}

/// `ν` with the values of `vars` taken from `other`.
pub fn overwrite(nu: &Valuation, other: &Valuation, vars: &BTreeSet<VarName>) -> Valuation {
    let mut out = nu.clone();
    for x in vars {
        out.set(x.clone(), other.get(x).unwrap().clone());
    }
    out
}

pub fn union_vars<'a>(sets: impl IntoIterator<Item = &'a BTreeSet<VarName>>) -> BTreeSet<VarName> {
    sets.into_iter().flat_map(|s| s.iter().cloned()).collect()
}
