//! Reference evaluators for FLIF and executable FO.

pub(crate) mod flif;
mod fo;
pub(crate) mod pairs;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{fmt_vars, Valuation, VarName};

pub use flif::{eval_flif, eval_flif_padded, eval_flif_v};
pub use fo::eval_exfo;
pub use pairs::in_sem;

/// A finite set of valuations sharing one domain, i.e. a relation in the
/// named perspective.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ValuationSet {
    schema: BTreeSet<VarName>,
    rows: BTreeSet<Valuation>,
}

impl ValuationSet {
    pub fn new(schema: BTreeSet<VarName>) -> Self {
        ValuationSet {
            schema,
            rows: BTreeSet::new(),
        }
    }

    /// Builds a set from rows, all of which must be defined on exactly `schema`.
    pub fn from_rows(
        schema: BTreeSet<VarName>,
        rows: impl IntoIterator<Item = Valuation>,
    ) -> Result<Self> {
        let mut out = ValuationSet::new(schema);
        for r in rows {
            out.insert(r)?;
        }
        Ok(out)
    }

    pub(crate) fn from_rows_unchecked(schema: BTreeSet<VarName>, rows: BTreeSet<Valuation>) -> Self {
        debug_assert!(rows.iter().all(|r| r.vars().eq(schema.iter())));
        ValuationSet { schema, rows }
    }

    pub fn insert(&mut self, row: Valuation) -> Result<bool> {
        if !row.vars().eq(self.schema.iter()) {
            return Err(Error::InputDomainMismatch {
                expected: fmt_vars(&self.schema),
                found: fmt_vars(row.vars()),
            });
        }
        Ok(self.rows.insert(row))
    }

    pub fn schema(&self) -> &BTreeSet<VarName> {
        &self.schema
    }

    pub fn rows(&self) -> &BTreeSet<Valuation> {
        &self.rows
    }

    pub fn into_rows(self) -> BTreeSet<Valuation> {
        self.rows
    }

    pub fn iter(&self) -> impl Iterator<Item = &Valuation> {
        self.rows.iter()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, row: &Valuation) -> bool {
        self.rows.contains(row)
    }

    /// `π_vars`; every variable must belong to the schema.
    pub fn project(&self, vars: &BTreeSet<VarName>) -> Result<ValuationSet> {
        if let Some(x) = vars.iter().find(|x| !self.schema.contains(*x)) {
            return Err(Error::UnboundVariable(x.clone()));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.restrict(vars))
            .collect::<Result<_>>()?;
        Ok(ValuationSet {
            schema: vars.clone(),
            rows,
        })
    }
}

impl IntoIterator for ValuationSet {
    type Item = Valuation;
    type IntoIter = alloc::collections::btree_set::IntoIter<Valuation>;
    fn into_iter(self) -> Self::IntoIter {
        self.rows.into_iter()
    }
}

impl<'a> IntoIterator for &'a ValuationSet {
    type Item = &'a Valuation;
    type IntoIter = alloc::collections::btree_set::Iter<'a, Valuation>;
    fn into_iter(self) -> Self::IntoIter {
        self.rows.iter()
    }
}

impl fmt::Debug for ValuationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.rows.iter().collect();
        write!(f, "{} {:?}", fmt_vars(&self.schema), rows)
    }
}

/// Checks that `ν` is defined on exactly `vars`.
pub(crate) fn require_domain(nu: &Valuation, vars: &BTreeSet<VarName>) -> Result<()> {
    if nu.vars().eq(vars.iter()) {
        Ok(())
    } else {
        Err(Error::InputDomainMismatch {
            expected: fmt_vars(vars),
            found: fmt_vars(nu.vars()),
        })
    }
}
