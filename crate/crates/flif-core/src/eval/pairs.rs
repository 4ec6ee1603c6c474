use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::require_domain;
use crate::analysis::io_profile;
use crate::error::{Error, Result};
use crate::model::{Constant, Instance, Valuation, VarName};
use crate::syntax::FlifExpr;

/// Pair membership `(ν₁, ν₂) ∈ ⟦α⟧` over `V`, decided by recursion on the
/// definition.
///
/// Composition needs a witness `ν` with `(ν₁,ν) ∈ ⟦α₁⟧` and `(ν,ν₂) ∈ ⟦α₂⟧`.
/// By inertia `ν` equals `ν₁` outside `O(α₁)` and `ν₂` outside `O(α₂)`, so
/// only `O(α₁) ∩ O(α₂)` is open. Values written by `α₁` come from the
/// instance, from constants of `α₁`, or are copied from `ν₁`; hence
/// candidates drawn from `adom(D) ∪ range(ν₁) ∪ range(ν₂) ∪ consts(α)`
/// cover every witness.
pub fn in_sem(
    expr: &FlifExpr,
    vars: &BTreeSet<VarName>,
    db: &Instance,
    nu1: &Valuation,
    nu2: &Valuation,
) -> Result<bool> {
    if let Some(x) = expr.vars().into_iter().find(|x| !vars.contains(x)) {
        return Err(Error::UnboundVariable(x));
    }
    require_domain(nu1, vars)?;
    require_domain(nu2, vars)?;
    expr.validate(db.schema())?;
    let mut dom = db.adom();
    dom.extend(nu1.values().cloned());
    dom.extend(nu2.values().cloned());
    dom.extend(expr.constants());
    let dom: Vec<Constant> = dom.into_iter().collect();
    member(expr, db, &dom, nu1, nu2)
}

fn member(
    expr: &FlifExpr,
    db: &Instance,
    dom: &[Constant],
    nu1: &Valuation,
    nu2: &Valuation,
) -> Result<bool> {
    Ok(match expr {
        FlifExpr::Rel {
            rel,
            inputs,
            outputs,
        } => {
            let mut tuple = Vec::with_capacity(inputs.len() + outputs.len());
            for x in inputs {
                tuple.push(nu1.get(x)?.clone());
            }
            for y in outputs {
                tuple.push(nu2.get(y)?.clone());
            }
            let changed: BTreeSet<VarName> = outputs.iter().cloned().collect();
            db.tuples(rel)?.contains(&tuple) && nu1.agree_outside(nu2, &changed)?
        }
        FlifExpr::EqVar(x, y) => nu1 == nu2 && nu1.get(x)? == nu1.get(y)?,
        FlifExpr::EqConst(x, c) => nu1 == nu2 && nu1.get(x)? == c,
        FlifExpr::AssignVar(x, y) => *nu2 == nu1.extend(x, nu1.get(y)?.clone()),
        FlifExpr::AssignConst(x, c) => *nu2 == nu1.extend(x, c.clone()),
        FlifExpr::Union(l, r) => {
            member(l, db, dom, nu1, nu2)? || member(r, db, dom, nu1, nu2)?
        }
        FlifExpr::Diff(l, r) => {
            member(l, db, dom, nu1, nu2)? && !member(r, db, dom, nu1, nu2)?
        }
        FlifExpr::Comp(l, r) => {
            let o1 = io_profile(l).outputs;
            let o2 = io_profile(r).outputs;
            let mut mid = Valuation::new();
            for (x, c1) in nu1.iter() {
                let c2 = nu2.get(x)?;
                match (o1.contains(x), o2.contains(x)) {
                    (false, false) if c1 != c2 => return Ok(false),
                    (false, _) => mid.set(x.clone(), c1.clone()),
                    (true, false) => mid.set(x.clone(), c2.clone()),
                    (true, true) => {}
                }
            }
            let open: Vec<VarName> = o1.intersection(&o2).cloned().collect();
            let mut idx = alloc::vec![0usize; open.len()];
            loop {
                let mut cand = mid.clone();
                for (x, &i) in open.iter().zip(&idx) {
                    cand.set(x.clone(), dom[i].clone());
                }
                if member(l, db, dom, nu1, &cand)? && member(r, db, dom, &cand, nu2)? {
                    return Ok(true);
                }
                if !advance(&mut idx, dom.len()) {
                    return Ok(false);
                }
            }
        }
    })
}

/// Odometer increment over `base^len`; false once every index wrapped.
pub(crate) fn advance(idx: &mut [usize], base: usize) -> bool {
    for i in idx.iter_mut().rev() {
        *i += 1;
        if *i < base {
            return true;
        }
        *i = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Schema;
    use crate::syntax::parse_flif;

    fn bus() -> Instance {
        let schema = Schema::new().with("B", 2, 1).unwrap().with("T", 2, 1).unwrap();
        Instance::new(schema)
            .with_tuples("B", &[&["1", "2"], &["1", "3"], &["2", "3"], &["3", "5"]])
            .unwrap()
            .with_tuples("T", &[&["1", "4"], &["3", "5"]])
            .unwrap()
    }

    fn xyz(x: &str, y: &str, z: &str) -> Valuation {
        Valuation::from_pairs([("x", x), ("y", y), ("z", z)]).unwrap()
    }

    fn vars() -> BTreeSet<VarName> {
        ["x", "y", "z"].iter().map(|s| VarName::new(s).unwrap()).collect()
    }

    #[test]
    fn atom_pairs() {
        let e = parse_flif("B(x;y)").unwrap();
        for (a, b) in [("1", "2"), ("1", "3"), ("2", "3"), ("3", "5")] {
            assert!(in_sem(&e, &vars(), &bus(), &xyz(a, "4", "7"), &xyz(a, b, "7")).unwrap());
        }
        assert!(!in_sem(&e, &vars(), &bus(), &xyz("1", "4", "7"), &xyz("1", "2", "8")).unwrap());
        let t = parse_flif("(x=y)").unwrap();
        assert!(in_sem(&t, &vars(), &bus(), &xyz("1", "1", "7"), &xyz("1", "1", "7")).unwrap());
        assert!(!in_sem(&t, &vars(), &bus(), &xyz("1", "2", "7"), &xyz("1", "2", "7")).unwrap());
    }

    #[test]
    fn composition_witness() {
        let e = parse_flif("B(x;y) ; T(y;x)").unwrap();
        assert!(in_sem(&e, &vars(), &bus(), &xyz("1", "9", "0"), &xyz("5", "3", "0")).unwrap());
        assert!(in_sem(&e, &vars(), &bus(), &xyz("2", "9", "0"), &xyz("5", "3", "0")).unwrap());
        assert!(!in_sem(&e, &vars(), &bus(), &xyz("3", "9", "0"), &xyz("5", "3", "0")).unwrap());
        let twice = parse_flif("B(x;x) ; B(x;x)").unwrap();
        assert!(in_sem(&twice, &vars(), &bus(), &xyz("1", "0", "0"), &xyz("5", "0", "0")).unwrap());
        assert!(!in_sem(&twice, &vars(), &bus(), &xyz("1", "0", "0"), &xyz("2", "0", "0")).unwrap());
    }
}
