use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::model::{Constant, RelName, Schema, VarName};

/// An expression of the forward logic of information flows.
///
/// Expressions denote binary relations on valuations: an atom is a labelled
/// edge in the graph view of an instance, and the operators compose, unite and
/// subtract such relations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlifExpr {
    /// `R(x̄;ȳ)`: feed `x̄` to `R`, overwrite `ȳ` with the returned values.
    Rel {
        rel: RelName,
        inputs: Vec<VarName>,
        outputs: Vec<VarName>,
    },
    /// `(x=y)`
    EqVar(VarName, VarName),
    /// `(x="c")`
    EqConst(VarName, Constant),
    /// `(x:=y)`
    AssignVar(VarName, VarName),
    /// `(x:="c")`
    AssignConst(VarName, Constant),
    Comp(Box<FlifExpr>, Box<FlifExpr>),
    Union(Box<FlifExpr>, Box<FlifExpr>),
    Diff(Box<FlifExpr>, Box<FlifExpr>),
}

impl FlifExpr {
    pub fn rel(rel: RelName, inputs: Vec<VarName>, outputs: Vec<VarName>) -> Self {
        FlifExpr::Rel {
            rel,
            inputs,
            outputs,
        }
    }

    pub fn comp(l: FlifExpr, r: FlifExpr) -> Self {
        FlifExpr::Comp(Box::new(l), Box::new(r))
    }

    pub fn union(l: FlifExpr, r: FlifExpr) -> Self {
        FlifExpr::Union(Box::new(l), Box::new(r))
    }

    pub fn diff(l: FlifExpr, r: FlifExpr) -> Self {
        FlifExpr::Diff(Box::new(l), Box::new(r))
    }

    /// `α₁ ∩ α₂`, expressed as `α₁ − (α₁ − α₂)`.
    pub fn intersect(l: FlifExpr, r: FlifExpr) -> Self {
        FlifExpr::diff(l.clone(), FlifExpr::diff(l, r))
    }

    /// Left-nested composition of a sequence; `None` when empty.
    pub fn compose_all(parts: impl IntoIterator<Item = FlifExpr>) -> Option<FlifExpr> {
        parts.into_iter().reduce(FlifExpr::comp)
    }

    /// `α ; parts…`, or `α` itself when `parts` is empty.
    pub fn then_all(self, parts: impl IntoIterator<Item = FlifExpr>) -> FlifExpr {
        parts.into_iter().fold(self, FlifExpr::comp)
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(
            self,
            FlifExpr::Comp(..) | FlifExpr::Union(..) | FlifExpr::Diff(..)
        )
    }

    pub fn children(&self) -> Option<(&FlifExpr, &FlifExpr)> {
        match self {
            FlifExpr::Comp(l, r) | FlifExpr::Union(l, r) | FlifExpr::Diff(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Calls `f` on every variable occurrence, left to right.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a VarName)) {
        match self {
            FlifExpr::Rel {
                inputs, outputs, ..
            } => inputs.iter().chain(outputs).for_each(f),
            FlifExpr::EqVar(x, y) | FlifExpr::AssignVar(x, y) => {
                f(x);
                f(y);
            }
            FlifExpr::EqConst(x, _) | FlifExpr::AssignConst(x, _) => f(x),
            FlifExpr::Comp(l, r) | FlifExpr::Union(l, r) | FlifExpr::Diff(l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
        }
    }

    /// `vars(α)`.
    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.for_each_var(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    pub fn is_nullary(&self) -> bool {
        let mut any = false;
        self.for_each_var(&mut |_| any = true);
        !any
    }

    pub fn constants(&self) -> BTreeSet<Constant> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        match self {
            FlifExpr::EqConst(_, c) | FlifExpr::AssignConst(_, c) => {
                out.insert(c.clone());
            }
            FlifExpr::Comp(l, r) | FlifExpr::Union(l, r) | FlifExpr::Diff(l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
            _ => {}
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self.children() {
            Some((l, r)) => 1 + l.size() + r.size(),
            None => 1,
        }
    }

    /// Symbol length: AST nodes plus variable occurrences.
    pub fn len(&self) -> usize {
        let mut occ = 0;
        self.for_each_var(&mut |_| occ += 1);
        self.size() + occ
    }

    /// Subexpressions in post-order (children before parents, left before right).
    pub fn subexpressions(&self) -> Vec<&FlifExpr> {
        let mut out = Vec::new();
        self.post_order(&mut out);
        out
    }

    fn post_order<'a>(&'a self, out: &mut Vec<&'a FlifExpr>) {
        if let Some((l, r)) = self.children() {
            l.post_order(out);
            r.post_order(out);
        }
        out.push(self);
    }

    /// Checks relation names and atom arities against `schema`.
    pub fn validate(&self, schema: &Schema) -> Result<()> {
        match self {
            FlifExpr::Rel {
                rel,
                inputs,
                outputs,
            } => schema.check_atom(rel, inputs.len(), outputs.len()),
            FlifExpr::Comp(l, r) | FlifExpr::Union(l, r) | FlifExpr::Diff(l, r) => {
                l.validate(schema)?;
                r.validate(schema)
            }
            _ => Ok(()),
        }
    }

    /// Replaces every variable occurrence `x` by `f(x)`.
    pub fn map_vars(&self, f: &impl Fn(&VarName) -> VarName) -> FlifExpr {
        match self {
            FlifExpr::Rel {
                rel,
                inputs,
                outputs,
            } => FlifExpr::Rel {
                rel: rel.clone(),
                inputs: inputs.iter().map(f).collect(),
                outputs: outputs.iter().map(f).collect(),
            },
            FlifExpr::EqVar(x, y) => FlifExpr::EqVar(f(x), f(y)),
            FlifExpr::EqConst(x, c) => FlifExpr::EqConst(f(x), c.clone()),
            FlifExpr::AssignVar(x, y) => FlifExpr::AssignVar(f(x), f(y)),
            FlifExpr::AssignConst(x, c) => FlifExpr::AssignConst(f(x), c.clone()),
            FlifExpr::Comp(l, r) => FlifExpr::comp(l.map_vars(f), r.map_vars(f)),
            FlifExpr::Union(l, r) => FlifExpr::union(l.map_vars(f), r.map_vars(f)),
            FlifExpr::Diff(l, r) => FlifExpr::diff(l.map_vars(f), r.map_vars(f)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            FlifExpr::Union(..) | FlifExpr::Diff(..) => 0,
            FlifExpr::Comp(..) => 1,
            _ => 2,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            FlifExpr::Rel {
                rel,
                inputs,
                outputs,
            } => {
                write!(f, "{}(", rel)?;
                write_list(f, inputs)?;
                f.write_str(";")?;
                write_list(f, outputs)?;
                f.write_str(")")
            }
            FlifExpr::EqVar(x, y) => write!(f, "({}={})", x, y),
            FlifExpr::EqConst(x, c) => {
                write!(f, "({}=", x)?;
                write_constant(f, c)?;
                f.write_str(")")
            }
            FlifExpr::AssignVar(x, y) => write!(f, "({}:={})", x, y),
            FlifExpr::AssignConst(x, c) => {
                write!(f, "({}:=", x)?;
                write_constant(f, c)?;
                f.write_str(")")
            }
            FlifExpr::Comp(l, r) => {
                l.write_prec(f, 1)?;
                f.write_str(" ; ")?;
                r.write_prec(f, 2)
            }
            FlifExpr::Union(l, r) => {
                l.write_prec(f, 0)?;
                f.write_str(" | ")?;
                r.write_prec(f, 1)
            }
            FlifExpr::Diff(l, r) => {
                l.write_prec(f, 0)?;
                f.write_str(" - ")?;
                r.write_prec(f, 1)
            }
        }
    }
}

pub(crate) fn write_list(f: &mut fmt::Formatter<'_>, vars: &[VarName]) -> fmt::Result {
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", v)?;
    }
    Ok(())
}

pub(crate) fn write_constant(f: &mut fmt::Formatter<'_>, c: &Constant) -> fmt::Result {
    f.write_str("\"")?;
    for ch in c.as_str().chars() {
        match ch {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            _ => write!(f, "{}", ch)?,
        }
    }
    f.write_str("\"")
}

impl fmt::Display for FlifExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl fmt::Debug for FlifExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self)
    }
}
