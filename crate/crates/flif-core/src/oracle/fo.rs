use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::eval::ValuationSet;
use crate::model::{Constant, Instance, Valuation, VarName};
use crate::syntax::FoFormula;

/// `D, ν ⊨ φ` with quantifiers ranging over `dom`.
///
/// `ν` must be defined on the free variables of `φ`.
pub fn satisfies(phi: &FoFormula, db: &Instance, nu: &Valuation, dom: &[Constant]) -> Result<bool> {
    Ok(match phi {
        FoFormula::Rel {
            rel,
            inputs,
            outputs,
        } => {
            let tuple = inputs
                .iter()
                .chain(outputs)
                .map(|x| nu.get(x).cloned())
                .collect::<Result<Vec<_>>>()?;
            db.tuples(rel)?.contains(&tuple)
        }
        FoFormula::Eq(x, y) => nu.get(x)? == nu.get(y)?,
        FoFormula::EqConst(x, c) => nu.get(x)? == c,
        FoFormula::And(l, r) => satisfies(l, db, nu, dom)? && satisfies(r, db, nu, dom)?,
        FoFormula::Or(l, r) => satisfies(l, db, nu, dom)? || satisfies(r, db, nu, dom)?,
        FoFormula::Not(f) => !satisfies(f, db, nu, dom)?,
        FoFormula::Exists(x, f) => {
            for c in dom {
                if satisfies(f, db, &nu.extend(x, c.clone()), dom)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// `adom(D) ∪ range(ν) ∪ constants(φ)` plus one constant outside all of
/// them, so that vacuous quantifiers never range over an empty set.
pub fn fo_domain(phi: &FoFormula, db: &Instance, nu_in: &Valuation) -> BTreeSet<Constant> {
    let mut dom = db.adom();
    dom.extend(nu_in.values().cloned());
    dom.extend(phi.constants());
    let [extra, _] = super::fresh_constants(&dom);
    dom.insert(extra);
    dom
}

/// All extensions of `ν_in` (defined on `V`) to `V ∪ FV(φ)` over `dom` that
/// satisfy `φ`, found by enumeration.
pub fn brute_exfo(
    phi: &FoFormula,
    vars: &BTreeSet<VarName>,
    db: &Instance,
    nu_in: &Valuation,
    dom: &BTreeSet<Constant>,
    budget: u128,
) -> Result<ValuationSet> {
    if !nu_in.vars().eq(vars.iter()) {
        return Err(Error::DomainMismatch);
    }
    phi.validate(db.schema())?;
    let open: Vec<VarName> = phi.free_vars().difference(vars).cloned().collect();
    let dom: Vec<Constant> = dom.iter().cloned().collect();
    let depth = phi.bound_vars().len() as u32 + open.len() as u32;
    let needed = (dom.len() as u128).checked_pow(depth).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut schema = vars.clone();
    schema.extend(open.iter().cloned());
    let mut out = ValuationSet::new(schema);
    let mut idx = alloc::vec![0usize; open.len()];
    loop {
        if dom.is_empty() && !open.is_empty() {
            break;
        }
        let mut nu = nu_in.clone();
        for (x, &i) in open.iter().zip(&idx) {
            nu.set(x.clone(), dom[i].clone());
        }
        if satisfies(phi, db, &nu, &dom)? {
            out.insert(nu)?;
        }
        if !crate::eval::pairs::advance(&mut idx, dom.len()) {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Schema;
    use crate::syntax::parse_fo;

    #[test]
    fn enumerates_extensions() {
        let db = Instance::new(Schema::new().with("R", 2, 1).unwrap())
            .with_tuples("R", &[&["1", "2"], &["1", "3"]])
            .unwrap();
        let phi = parse_fo("R(x;y) & !(y = \"3\")").unwrap();
        let v: BTreeSet<VarName> = [VarName::new("x").unwrap()].into_iter().collect();
        let nu = Valuation::from_pairs([("x", "1")]).unwrap();
        let dom = fo_domain(&phi, &db, &nu);
        let got = brute_exfo(&phi, &v, &db, &nu, &dom, 1_000_000).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got.contains(&Valuation::from_pairs([("x", "1"), ("y", "2")]).unwrap()));
    }

    #[test]
    fn vacuous_quantifier_over_empty_instance() {
        let db = Instance::new(Schema::new().with("R", 0, 0).unwrap());
        let phi = parse_fo("exists u. !R(;)").unwrap();
        let nu = Valuation::new();
        let dom = fo_domain(&phi, &db, &nu);
        let got = brute_exfo(&phi, &BTreeSet::new(), &db, &nu, &dom, 100).unwrap();
        assert_eq!(got.len(), 1);
    }
}
