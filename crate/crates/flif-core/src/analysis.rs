//! Syntactic input/output analysis of FLIF expressions and the executability
//! check for FO formulas.

use alloc::collections::BTreeSet;
use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::model::{fmt_vars, VarName};
use crate::syntax::{FlifExpr, FoFormula};

/// Input and output variables of an expression.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IoProfile {
    pub inputs: BTreeSet<VarName>,
    pub outputs: BTreeSet<VarName>,
    pub vars: BTreeSet<VarName>,
}

impl IoProfile {
    fn new(inputs: BTreeSet<VarName>, outputs: BTreeSet<VarName>) -> Self {
        let vars = inputs.union(&outputs).cloned().collect();
        IoProfile {
            inputs,
            outputs,
            vars,
        }
    }

    pub fn is_disjoint(&self) -> bool {
        self.inputs.is_disjoint(&self.outputs)
    }
}

fn set<'a>(it: impl IntoIterator<Item = &'a VarName>) -> BTreeSet<VarName> {
    it.into_iter().cloned().collect()
}

fn symdiff(a: &BTreeSet<VarName>, b: &BTreeSet<VarName>) -> BTreeSet<VarName> {
    a.symmetric_difference(b).cloned().collect()
}

/// `I(α)` and `O(α)`.
pub fn io_profile(e: &FlifExpr) -> IoProfile {
    match e {
        FlifExpr::Rel {
            inputs, outputs, ..
        } => IoProfile::new(set(inputs), set(outputs)),
        FlifExpr::EqVar(x, y) => IoProfile::new(set([x, y]), BTreeSet::new()),
        FlifExpr::EqConst(x, _) => IoProfile::new(set([x]), BTreeSet::new()),
        FlifExpr::AssignVar(x, y) => IoProfile::new(set([y]), set([x])),
        FlifExpr::AssignConst(x, _) => IoProfile::new(BTreeSet::new(), set([x])),
        FlifExpr::Comp(l, r) => {
            let (a, b) = (io_profile(l), io_profile(r));
            let mut inputs = a.inputs;
            inputs.extend(b.inputs.difference(&a.outputs).cloned());
            let mut outputs = a.outputs;
            outputs.extend(b.outputs);
            IoProfile::new(inputs, outputs)
        }
        FlifExpr::Union(l, r) | FlifExpr::Diff(l, r) => {
            let (a, b) = (io_profile(l), io_profile(r));
            let mut inputs = a.inputs.clone();
            inputs.extend(b.inputs.iter().cloned());
            inputs.extend(symdiff(&a.outputs, &b.outputs));
            let outputs = if matches!(e, FlifExpr::Union(..)) {
                a.outputs.union(&b.outputs).cloned().collect()
            } else {
                a.outputs
            };
            IoProfile::new(inputs, outputs)
        }
    }
}

/// The first subexpression, in leftmost-innermost order, violating the
/// structural io-disjointness conditions; `None` when the expression is
/// io-disjoint.
pub fn io_disjoint_witness(e: &FlifExpr) -> Option<&FlifExpr> {
    witness_rec(e).err()
}

fn witness_rec(e: &FlifExpr) -> core::result::Result<IoProfile, &FlifExpr> {
    let Some((l, r)) = e.children() else {
        let p = io_profile(e);
        return if p.is_disjoint() { Ok(p) } else { Err(e) };
    };
    let a = witness_rec(l)?;
    let b = witness_rec(r)?;
    let ok = match e {
        FlifExpr::Comp(..) => a.inputs.is_disjoint(&b.outputs),
        FlifExpr::Union(..) => a.outputs == b.outputs,
        _ => a.outputs.is_subset(&b.outputs),
    };
    if ok {
        Ok(io_profile(e))
    } else {
        Err(e)
    }
}

pub fn is_io_disjoint(e: &FlifExpr) -> bool {
    io_disjoint_witness(e).is_none()
}

/// `Ok(())` for io-disjoint expressions, otherwise [`Error::NotIoDisjoint`].
pub fn require_io_disjoint(e: &FlifExpr) -> Result<()> {
    match io_disjoint_witness(e) {
        None => Ok(()),
        Some(w) => Err(Error::NotIoDisjoint {
            witness: w.to_string(),
        }),
    }
}

/// The first subformula, in leftmost-innermost order, that is not executable
/// for the variable set reaching it; `None` when `φ` is `V`-executable.
pub fn exec_witness<'a>(f: &'a FoFormula, v: &BTreeSet<VarName>) -> Option<&'a FoFormula> {
    match f {
        FoFormula::Rel { inputs, .. } => (!inputs.iter().all(|x| v.contains(x))).then_some(f),
        FoFormula::Eq(x, y) => (!v.contains(x) && !v.contains(y)).then_some(f),
        FoFormula::EqConst(..) => None,
        FoFormula::Not(g) => exec_witness(g, v).or_else(|| (!g.free_vars().is_subset(v)).then_some(f)),
        FoFormula::And(l, r) => exec_witness(l, v).or_else(|| {
            let mut w = v.clone();
            w.extend(l.free_vars());
            exec_witness(r, &w)
        }),
        FoFormula::Or(l, r) => exec_witness(l, v)
            .or_else(|| exec_witness(r, v))
            .or_else(|| (!symdiff(&l.free_vars(), &r.free_vars()).is_subset(v)).then_some(f)),
        FoFormula::Exists(x, g) => {
            let mut w = v.clone();
            w.remove(x);
            exec_witness(g, &w)
        }
    }
}

pub fn exec_check(f: &FoFormula, v: &BTreeSet<VarName>) -> bool {
    exec_witness(f, v).is_none()
}

/// `Ok(())` when `φ` is `V`-executable, otherwise [`Error::NotExecutable`].
pub fn require_executable(f: &FoFormula, v: &BTreeSet<VarName>) -> Result<()> {
    match exec_witness(f, v) {
        None => Ok(()),
        Some(w) => Err(Error::NotExecutable {
            vars: fmt_vars(v),
            witness: w.to_string(),
        }),
    }
}
