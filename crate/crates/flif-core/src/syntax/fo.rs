use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::flif::{write_constant, write_list};
use crate::error::Result;
use crate::model::{Constant, RelName, Schema, VarName};

/// A first-order formula in the syntax of executable FO: relation atoms with
/// separated input and output positions, equalities, `∧`, `∨`, `¬` and `∃`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoFormula {
    Rel {
        rel: RelName,
        inputs: Vec<VarName>,
        outputs: Vec<VarName>,
    },
    Eq(VarName, VarName),
    EqConst(VarName, Constant),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Not(Box<FoFormula>),
    Exists(VarName, Box<FoFormula>),
}

impl FoFormula {
    pub fn rel(rel: RelName, inputs: Vec<VarName>, outputs: Vec<VarName>) -> Self {
        FoFormula::Rel {
            rel,
            inputs,
            outputs,
        }
    }

    pub fn and(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn not(f: FoFormula) -> Self {
        FoFormula::Not(Box::new(f))
    }

    pub fn exists(x: VarName, f: FoFormula) -> Self {
        FoFormula::Exists(x, Box::new(f))
    }

    /// `∃x₁ … ∃xₖ f`, outermost quantifier first.
    pub fn exists_all(vars: impl IntoIterator<Item = VarName>, f: FoFormula) -> Self {
        let vars: Vec<VarName> = vars.into_iter().collect();
        vars.into_iter().rev().fold(f, |acc, x| FoFormula::exists(x, acc))
    }

    /// Left-nested conjunction; `None` when empty.
    pub fn conjoin(parts: impl IntoIterator<Item = FoFormula>) -> Option<FoFormula> {
        parts.into_iter().reduce(FoFormula::and)
    }

    /// `FV(φ)`.
    pub fn free_vars(&self) -> BTreeSet<VarName> {
        match self {
            FoFormula::Rel {
                inputs, outputs, ..
            } => inputs.iter().chain(outputs).cloned().collect(),
            FoFormula::Eq(x, y) => [x.clone(), y.clone()].into_iter().collect(),
            FoFormula::EqConst(x, _) => [x.clone()].into_iter().collect(),
            FoFormula::And(l, r) | FoFormula::Or(l, r) => {
                let mut s = l.free_vars();
                s.extend(r.free_vars());
                s
            }
            FoFormula::Not(f) => f.free_vars(),
            FoFormula::Exists(x, f) => {
                let mut s = f.free_vars();
                s.remove(x);
                s
            }
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<VarName>) {
        match self {
            FoFormula::Rel {
                inputs, outputs, ..
            } => out.extend(inputs.iter().chain(outputs).cloned()),
            FoFormula::Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            FoFormula::EqConst(x, _) => {
                out.insert(x.clone());
            }
            FoFormula::And(l, r) | FoFormula::Or(l, r) => {
                l.collect_all_vars(out);
                r.collect_all_vars(out);
            }
            FoFormula::Not(f) => f.collect_all_vars(out),
            FoFormula::Exists(x, f) => {
                out.insert(x.clone());
                f.collect_all_vars(out);
            }
        }
    }

    /// Quantified variables, one entry per quantifier.
    pub fn bound_vars(&self) -> Vec<VarName> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut Vec<VarName>) {
        match self {
            FoFormula::And(l, r) | FoFormula::Or(l, r) => {
                l.collect_bound(out);
                r.collect_bound(out);
            }
            FoFormula::Not(f) => f.collect_bound(out),
            FoFormula::Exists(x, f) => {
                out.push(x.clone());
                f.collect_bound(out);
            }
            _ => {}
        }
    }

    /// Bound variables are pairwise distinct and disjoint from the free ones.
    pub fn is_hygienic(&self) -> bool {
        let bound = self.bound_vars();
        let set: BTreeSet<_> = bound.iter().cloned().collect();
        set.len() == bound.len() && set.is_disjoint(&self.free_vars())
    }

    pub fn constants(&self) -> BTreeSet<Constant> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        match self {
            FoFormula::EqConst(_, c) => {
                out.insert(c.clone());
            }
            FoFormula::And(l, r) | FoFormula::Or(l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
            FoFormula::Not(f) | FoFormula::Exists(_, f) => f.collect_constants(out),
            _ => {}
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            FoFormula::And(l, r) | FoFormula::Or(l, r) => 1 + l.size() + r.size(),
            FoFormula::Not(f) | FoFormula::Exists(_, f) => 1 + f.size(),
            _ => 1,
        }
    }

    /// Symbol length: AST nodes plus variable occurrences (binders included).
    pub fn len(&self) -> usize {
        match self {
            FoFormula::Rel {
                inputs, outputs, ..
            } => 1 + inputs.len() + outputs.len(),
            FoFormula::Eq(..) => 3,
            FoFormula::EqConst(..) => 2,
            FoFormula::And(l, r) | FoFormula::Or(l, r) => 1 + l.len() + r.len(),
            FoFormula::Not(f) => 1 + f.len(),
            FoFormula::Exists(_, f) => 2 + f.len(),
        }
    }

    pub fn validate(&self, schema: &Schema) -> Result<()> {
        match self {
            FoFormula::Rel {
                rel,
                inputs,
                outputs,
            } => schema.check_atom(rel, inputs.len(), outputs.len()),
            FoFormula::And(l, r) | FoFormula::Or(l, r) => {
                l.validate(schema)?;
                r.validate(schema)
            }
            FoFormula::Not(f) | FoFormula::Exists(_, f) => f.validate(schema),
            _ => Ok(()),
        }
    }

    /// Renames bound variables so that they are pairwise distinct, disjoint
    /// from the free variables, and disjoint from `avoid`. Free variables are
    /// untouched; fresh names are `x_k` with the smallest unused `k`.
    pub fn normalize_avoiding(&self, avoid: &BTreeSet<VarName>) -> FoFormula {
        let mut used: BTreeSet<VarName> = self.free_vars();
        used.extend(avoid.iter().cloned());
        let mut taken = self.all_vars();
        taken.extend(avoid.iter().cloned());
        self.rename_bound(&BTreeMap::new(), &mut used, &mut taken)
    }

    /// [`normalize_avoiding`](Self::normalize_avoiding) with nothing extra to avoid.
    pub fn normalize_hygiene(&self) -> FoFormula {
        self.normalize_avoiding(&BTreeSet::new())
    }

    fn rename_bound(
        &self,
        env: &BTreeMap<VarName, VarName>,
        used: &mut BTreeSet<VarName>,
        taken: &mut BTreeSet<VarName>,
    ) -> FoFormula {
        let m = |v: &VarName| env.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            FoFormula::Rel {
                rel,
                inputs,
                outputs,
            } => FoFormula::Rel {
                rel: rel.clone(),
                inputs: inputs.iter().map(m).collect(),
                outputs: outputs.iter().map(m).collect(),
            },
            FoFormula::Eq(x, y) => FoFormula::Eq(m(x), m(y)),
            FoFormula::EqConst(x, c) => FoFormula::EqConst(m(x), c.clone()),
            FoFormula::And(l, r) => FoFormula::and(
                l.rename_bound(env, used, taken),
                r.rename_bound(env, used, taken),
            ),
            FoFormula::Or(l, r) => FoFormula::or(
                l.rename_bound(env, used, taken),
                r.rename_bound(env, used, taken),
            ),
            FoFormula::Not(f) => FoFormula::not(f.rename_bound(env, used, taken)),
            FoFormula::Exists(x, f) => {
                let target = if used.contains(x) {
                    let fresh = fresh_name(x, taken);
                    taken.insert(fresh.clone());
                    fresh
                } else {
                    x.clone()
                };
                used.insert(target.clone());
                let mut inner = env.clone();
                inner.insert(x.clone(), target.clone());
                FoFormula::exists(target, f.rename_bound(&inner, used, taken))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            FoFormula::Exists(..) => 0,
            FoFormula::Or(..) => 1,
            FoFormula::And(..) => 2,
            _ => 3,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            FoFormula::Rel {
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
            FoFormula::Eq(x, y) => write!(f, "{} = {}", x, y),
            FoFormula::EqConst(x, c) => {
                write!(f, "{} = ", x)?;
                write_constant(f, c)
            }
            FoFormula::And(l, r) => {
                l.write_prec(f, 2)?;
                f.write_str(" & ")?;
                r.write_prec(f, 3)
            }
            FoFormula::Or(l, r) => {
                l.write_prec(f, 1)?;
                f.write_str(" | ")?;
                r.write_prec(f, 2)
            }
            FoFormula::Not(inner) => {
                f.write_str("!")?;
                match **inner {
                    FoFormula::Eq(..) | FoFormula::EqConst(..) => {
                        f.write_str("(")?;
                        inner.write_prec(f, 0)?;
                        f.write_str(")")
                    }
                    _ => inner.write_prec(f, 3),
                }
            }
            FoFormula::Exists(x, body) => {
                write!(f, "exists {}. ", x)?;
                body.write_prec(f, 0)
            }
        }
    }
}

fn fresh_name(base: &VarName, taken: &BTreeSet<VarName>) -> VarName {
    (1..)
        .map(|k| VarName::new(&format!("{}_{}", base, k)).expect("suffixing keeps identifiers valid"))
        .find(|v| !taken.contains(v))
        .expect("unbounded search")
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl fmt::Debug for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self)
    }
}
