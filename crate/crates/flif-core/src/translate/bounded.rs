use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Constant, VarName};
use crate::syntax::{FlifExpr, FoFormula};

/// Result of [`flif_to_fo3n`]: the formula together with the two variable
/// copies it uses besides `V_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedTranslation {
    pub formula: FoFormula,
    pub x: Vec<VarName>,
    /// `y_i` holds the final value of `x_i`.
    pub y: Vec<VarName>,
    /// Quantified copy for intermediate valuations.
    pub z: Vec<VarName>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Copy {
    X,
    Y,
    Z,
}

struct Copies<'a> {
    index: BTreeMap<&'a VarName, usize>,
    x: &'a [VarName],
    y: Vec<VarName>,
    z: Vec<VarName>,
}

impl Copies<'_> {
    fn var(&self, copy: Copy, a: &VarName) -> VarName {
        let i = self.index[a];
        match copy {
            Copy::X => self.x[i].clone(),
            Copy::Y => self.y[i].clone(),
            Copy::Z => self.z[i].clone(),
        }
    }

    fn all(&self, copy: Copy) -> Vec<VarName> {
        self.x.iter().map(|a| self.var(copy, a)).collect()
    }
}

/// Translates `α` over the ordered variables `V_x` into a `V_x`-executable
/// formula over `V_x ∪ V_y` (plus the quantified copy `V_z`) such that
/// `(ν₁,ν₂) ∈ ⟦α⟧` iff `ν₁ ∪ ν₂'` satisfies it, where `ν₂'(y_i) = ν₂(x_i)`.
///
/// Copies are named `y1…yn` and `z1…zn`, suffixed with `_k` if a name is
/// already taken. Composition chains are folded to the right. The result
/// reuses variable names under nested quantifiers and is not hygienic.
pub fn flif_to_fo3n(expr: &FlifExpr, vx: &[VarName]) -> Result<BoundedTranslation> {
    let index: BTreeMap<&VarName, usize> = vx.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if index.len() != vx.len() {
        return Err(Error::BadRenaming(format!("duplicate variable in {:?}", vx)));
    }
    if let Some(a) = expr.vars().into_iter().find(|a| !index.contains_key(a)) {
        return Err(Error::UnboundVariable(a));
    }
    let mut taken: BTreeSet<VarName> = vx.iter().cloned().collect();
    let mut copy = |prefix: &str, i: usize| {
        let base = format!("{}{}", prefix, i + 1);
        let name = core::iter::once(base.clone())
            .chain((1..).map(|k| format!("{}_{}", base, k)))
            .map(|s| VarName::new(&s).expect("valid"))
            .find(|v| !taken.contains(v))
            .expect("unbounded");
        taken.insert(name.clone());
        name
    };
    let y: Vec<_> = (0..vx.len()).map(|i| copy("y", i)).collect();
    let z: Vec<_> = (0..vx.len()).map(|i| copy("z", i)).collect();
    let copies = Copies { index, x: vx, y, z };
    let formula = phi(expr, Copy::X, Copy::Y, &copies);
    Ok(BoundedTranslation {
        formula,
        x: vx.to_vec(),
        y: copies.y,
        z: copies.z,
    })
}

fn third(u: Copy, v: Copy) -> Copy {
    [Copy::X, Copy::Y, Copy::Z]
        .into_iter()
        .find(|w| *w != u && *w != v)
        .expect("three copies")
}

fn frame(c: &Copies<'_>, u: Copy, v: Copy, skip: &dyn Fn(&VarName) -> bool) -> Vec<FoFormula> {
    c.x.iter()
        .filter(|a| !skip(a))
        .map(|a| FoFormula::Eq(c.var(v, a), c.var(u, a)))
        .collect()
}

fn with_frame(head: FoFormula, rest: Vec<FoFormula>) -> FoFormula {
    FoFormula::conjoin(core::iter::once(head).chain(rest)).expect("nonempty")
}

fn flatten_comp<'e>(e: &'e FlifExpr, out: &mut Vec<&'e FlifExpr>) {
    match e {
        FlifExpr::Comp(l, r) => {
            flatten_comp(l, out);
            flatten_comp(r, out);
        }
        _ => out.push(e),
    }
}

fn phi(e: &FlifExpr, u: Copy, v: Copy, c: &Copies<'_>) -> FoFormula {
    match e {
        FlifExpr::Rel {
            rel,
            inputs,
            outputs,
        } => {
            let atom = FoFormula::rel(
                rel.clone(),
                inputs.iter().map(|a| c.var(u, a)).collect(),
                outputs.iter().map(|b| c.var(v, b)).collect(),
            );
            with_frame(atom, frame(c, u, v, &|a| outputs.contains(a)))
        }
        FlifExpr::EqVar(a, b) => {
            with_frame(FoFormula::Eq(c.var(u, a), c.var(u, b)), frame(c, u, v, &|_| false))
        }
        FlifExpr::EqConst(a, d) => with_frame(
            FoFormula::EqConst(c.var(u, a), d.clone()),
            frame(c, u, v, &|_| false),
        ),
        FlifExpr::AssignVar(a, b) => with_frame(
            FoFormula::Eq(c.var(v, a), c.var(u, b)),
            frame(c, u, v, &|x| x == a),
        ),
        FlifExpr::AssignConst(a, d) => with_frame(
            FoFormula::EqConst(c.var(v, a), Constant::clone(d)),
            frame(c, u, v, &|x| x == a),
        ),
        FlifExpr::Union(l, r) => FoFormula::or(phi(l, u, v, c), phi(r, u, v, c)),
        FlifExpr::Diff(l, r) => FoFormula::and(phi(l, u, v, c), FoFormula::not(phi(r, u, v, c))),
        FlifExpr::Comp(..) => {
            let mut chain = Vec::new();
            flatten_comp(e, &mut chain);
            phi_chain(&chain, u, v, c)
        }
    }
}

fn phi_chain(chain: &[&FlifExpr], u: Copy, v: Copy, c: &Copies<'_>) -> FoFormula {
    match chain {
        [single] => phi(single, u, v, c),
        [first, rest @ ..] => {
            let w = third(u, v);
            let body = FoFormula::and(phi(first, u, w, c), phi_chain(rest, w, v, c));
            FoFormula::exists_all(c.all(w), body)
        }
        [] => unreachable!("composition chains are nonempty"),
    }
}
