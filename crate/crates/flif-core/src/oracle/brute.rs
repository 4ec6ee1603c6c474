use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::eval::ValuationSet;
use crate::model::{Constant, Instance, Valuation, VarName};
use crate::syntax::FlifExpr;

/// Default cap on `|dom|^(2|V|)`, the number of candidate pairs.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// `⟦α⟧` restricted to valuations on `V` over a finite candidate domain.
///
/// Valuations are encoded as mixed-radix indices: digit `i` is the position
/// of the value of `vars[i]` in `dom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrutePairs {
    vars: Vec<VarName>,
    dom: Vec<Constant>,
    succ: Vec<Vec<u32>>,
}

/// `adom(D) ∪ constants(α)` plus two constants outside both.
pub fn candidate_domain(expr: &FlifExpr, db: &Instance) -> BTreeSet<Constant> {
    let mut dom = db.adom();
    dom.extend(expr.constants());
    let extra = fresh_constants(&dom);
    dom.extend(extra);
    dom
}

/// Two distinct non-reserved constants not in `avoid`.
pub fn fresh_constants(avoid: &BTreeSet<Constant>) -> [Constant; 2] {
    let mut found = (1..)
        .map(|i| Constant::new(format!("_f{}", i)))
        .filter(|c| !avoid.contains(c));
    [found.next().expect("unbounded"), found.next().expect("unbounded")]
}

/// Enumerates every pair `(ν₁,ν₂)` over `dom^V` with `(ν₁,ν₂) ∈ ⟦α⟧`.
///
/// Atoms are decided by testing all `|dom|^(2|V|)` pairs against the
/// definition; composition joins the pair sets through every intermediate
/// valuation. Fails with `BudgetExceeded` when that count exceeds `budget`.
pub fn brute_pairs(
    expr: &FlifExpr,
    vars: &BTreeSet<VarName>,
    db: &Instance,
    dom: &BTreeSet<Constant>,
    budget: u128,
) -> Result<BrutePairs> {
    if let Some(x) = expr.vars().into_iter().find(|x| !vars.contains(x)) {
        return Err(Error::UnboundVariable(x));
    }
    expr.validate(db.schema())?;
    let needed = (dom.len() as u128)
        .checked_pow(2 * vars.len() as u32)
        .unwrap_or(u128::MAX);
    if needed > budget || needed > u32::MAX as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let space = Space::new(vars.iter().cloned().collect(), dom.iter().cloned().collect());
    let succ = space.sem(expr, db)?;
    Ok(BrutePairs {
        vars: space.vars,
        dom: space.dom,
        succ,
    })
}

struct Space {
    vars: Vec<VarName>,
    dom: Vec<Constant>,
    digits: Vec<Vec<usize>>,
}

impl Space {
    fn new(vars: Vec<VarName>, dom: Vec<Constant>) -> Space {
        let n = dom.len().pow(vars.len() as u32);
        let digits = (0..n).map(|i| decode_digits(i, vars.len(), dom.len())).collect();
        Space { vars, dom, digits }
    }

    fn pos(&self, x: &VarName) -> usize {
        self.vars.iter().position(|v| v == x).expect("checked")
    }

    fn sem(&self, e: &FlifExpr, db: &Instance) -> Result<Vec<Vec<u32>>> {
        let n = self.digits.len();
        let mut out = vec![Vec::new(); n];
        match e {
            FlifExpr::Rel {
                rel,
                inputs,
                outputs,
            } => {
                let table = db.tuples(rel)?;
                let xs: Vec<usize> = inputs.iter().map(|x| self.pos(x)).collect();
                let ys: Vec<usize> = outputs.iter().map(|y| self.pos(y)).collect();
                for (a, da) in self.digits.iter().enumerate() {
                    for (b, db_) in self.digits.iter().enumerate() {
                        let frame = (0..self.vars.len()).all(|i| ys.contains(&i) || da[i] == db_[i]);
                        if !frame {
                            continue;
                        }
                        let tuple: Vec<Constant> = xs
                            .iter()
                            .map(|&i| self.dom[da[i]].clone())
                            .chain(ys.iter().map(|&i| self.dom[db_[i]].clone()))
                            .collect();
                        if table.contains(&tuple) {
                            out[a].push(b as u32);
                        }
                    }
                }
            }
            FlifExpr::EqVar(x, y) => {
                let (i, j) = (self.pos(x), self.pos(y));
                for (a, d) in self.digits.iter().enumerate() {
                    if d[i] == d[j] {
                        out[a].push(a as u32);
                    }
                }
            }
            FlifExpr::EqConst(x, c) => {
                let i = self.pos(x);
                for (a, d) in self.digits.iter().enumerate() {
                    if self.dom[d[i]] == *c {
                        out[a].push(a as u32);
                    }
                }
            }
            FlifExpr::AssignVar(x, y) => {
                let (i, j) = (self.pos(x), self.pos(y));
                self.assign(&mut out, i, &|da: &[usize]| Some(da[j]));
            }
            FlifExpr::AssignConst(x, c) => {
                let i = self.pos(x);
                let k = self.dom.iter().position(|d| d == c);
                self.assign(&mut out, i, &|_: &[usize]| k);
            }
            FlifExpr::Comp(l, r) => {
                let left = self.sem(l, db)?;
                let right = self.sem(r, db)?;
                for (a, mids) in left.iter().enumerate() {
                    let mut seen = BTreeSet::new();
                    for &m in mids {
                        seen.extend(right[m as usize].iter().copied());
                    }
                    out[a] = seen.into_iter().collect();
                }
            }
            FlifExpr::Union(l, r) => {
                let left = self.sem(l, db)?;
                let right = self.sem(r, db)?;
                for (a, (p, q)) in left.into_iter().zip(right).enumerate() {
                    let s: BTreeSet<u32> = p.into_iter().chain(q).collect();
                    out[a] = s.into_iter().collect();
                }
            }
            FlifExpr::Diff(l, r) => {
                let left = self.sem(l, db)?;
                let right = self.sem(r, db)?;
                for (a, (p, q)) in left.into_iter().zip(right).enumerate() {
                    out[a] = p.into_iter().filter(|b| !q.contains(b)).collect();
                }
            }
        }
        Ok(out)
    }

    /// Pairs where `ν₂(x_i) = value(ν₁)` and `ν₂` agrees with `ν₁` elsewhere.
    fn assign(&self, out: &mut [Vec<u32>], i: usize, value: &dyn Fn(&[usize]) -> Option<usize>) {
        for (a, da) in self.digits.iter().enumerate() {
            let Some(v) = value(da) else { continue };
            for (b, db_) in self.digits.iter().enumerate() {
                let ok = (0..self.vars.len()).all(|k| if k == i { db_[k] == v } else { db_[k] == da[k] });
                if ok {
                    out[a].push(b as u32);
                }
            }
        }
    }
}

fn decode_digits(mut idx: usize, len: usize, base: usize) -> Vec<usize> {
    let mut d = Vec::with_capacity(len);
    for _ in 0..len {
        d.push(idx % base);
        idx /= base;
    }
    d
}

impl BrutePairs {
    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn domain(&self) -> &[Constant] {
        &self.dom
    }

    /// Number of valuations in `dom^V`.
    pub fn space_size(&self) -> usize {
        self.succ.len()
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn digits(&self, idx: usize) -> Vec<usize> {
        decode_digits(idx, self.vars.len(), self.dom.len())
    }

    pub(crate) fn encode_digits(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * self.dom.len() + d)
    }

    pub(crate) fn succ_idx(&self, a: usize) -> &[u32] {
        &self.succ[a]
    }

    pub(crate) fn contains_idx(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&(b as u32)).is_ok()
    }

    pub fn decode(&self, idx: usize) -> Valuation {
        self.vars
            .iter()
            .cloned()
            .zip(self.digits(idx).into_iter().map(|d| self.dom[d].clone()))
            .collect()
    }

    /// Index of `ν`, or `None` if it is not a valuation on `V` over the domain.
    pub fn encode(&self, nu: &Valuation) -> Option<usize> {
        if !nu.vars().eq(self.vars.iter()) {
            return None;
        }
        let digits = self
            .vars
            .iter()
            .map(|x| self.dom.iter().position(|c| Some(c) == nu.lookup(x)))
            .collect::<Option<Vec<_>>>()?;
        Some(self.encode_digits(&digits))
    }

    pub fn contains(&self, nu1: &Valuation, nu2: &Valuation) -> bool {
        match (self.encode(nu1), self.encode(nu2)) {
            (Some(a), Some(b)) => self.contains_idx(a, b),
            _ => false,
        }
    }

    /// All `ν₂` with `(ν₁,ν₂)` in the relation.
    pub fn successors(&self, nu1: &Valuation) -> Option<ValuationSet> {
        let a = self.encode(nu1)?;
        let schema = self.vars.iter().cloned().collect();
        let rows = self.succ[a].iter().map(|&b| self.decode(b as usize));
        Some(ValuationSet::from_rows(schema, rows).expect("same schema"))
    }

    /// Every valuation in `dom^V`, in index order.
    pub fn valuations(&self) -> impl Iterator<Item = Valuation> + '_ {
        (0..self.succ.len()).map(|i| self.decode(i))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Valuation, Valuation)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(move |(a, bs)| bs.iter().map(move |&b| (self.decode(a), self.decode(b as usize))))
    }
}
