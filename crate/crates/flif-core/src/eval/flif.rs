use alloc::collections::BTreeSet;

use super::{require_domain, ValuationSet};
use crate::analysis::io_profile;
use crate::error::{Error, Result};
use crate::model::{Constant, Instance, Valuation, VarName};
use crate::syntax::FlifExpr;

/// All `ν_out` with `(ν_in, ν_out) ∈ ⟦α⟧` over the variable set `V`.
///
/// `V` must contain `vars(α)` and `ν_in` must be defined on exactly `V`.
pub fn eval_flif_v(
    expr: &FlifExpr,
    vars: &BTreeSet<VarName>,
    db: &Instance,
    nu_in: &Valuation,
) -> Result<ValuationSet> {
    if let Some(x) = expr.vars().into_iter().find(|x| !vars.contains(x)) {
        return Err(Error::UnboundVariable(x));
    }
    require_domain(nu_in, vars)?;
    expr.validate(db.schema())?;
    let rows = step(expr, db, nu_in)?;
    Ok(ValuationSet::from_rows_unchecked(vars.clone(), rows))
}

/// The evaluation problem with input variables: `ν_in` is defined on exactly
/// `I(α)` and the result lives on `vars(α)`.
pub fn eval_flif(expr: &FlifExpr, db: &Instance, nu_in: &Valuation) -> Result<ValuationSet> {
    eval_flif_padded(expr, db, nu_in, &Constant::padding())
}

/// [`eval_flif`] with an explicit filler for the non-input variables. The
/// result does not depend on the filler; this entry point exists so that the
/// claim can be tested.
pub fn eval_flif_padded(
    expr: &FlifExpr,
    db: &Instance,
    nu_in: &Valuation,
    pad: &Constant,
) -> Result<ValuationSet> {
    let io = io_profile(expr);
    require_domain(nu_in, &io.inputs)?;
    let mut start = nu_in.clone();
    for y in io.outputs.difference(&io.inputs) {
        start.set(y.clone(), pad.clone());
    }
    eval_flif_v(expr, &io.vars, db, &start)
}

fn step(expr: &FlifExpr, db: &Instance, nu: &Valuation) -> Result<BTreeSet<Valuation>> {
    let mut out = BTreeSet::new();
    match expr {
        FlifExpr::Rel {
            rel,
            inputs,
            outputs,
        } => {
            let key = inputs
                .iter()
                .map(|x| nu.get(x).cloned())
                .collect::<Result<alloc::vec::Vec<_>>>()?;
            for tuple in db.access(rel, &key)? {
                if let Some(next) = overwrite(nu, outputs, &tuple) {
                    out.insert(next);
                }
            }
        }
        FlifExpr::EqVar(x, y) => {
            if nu.get(x)? == nu.get(y)? {
                out.insert(nu.clone());
            }
        }
        FlifExpr::EqConst(x, c) => {
            if nu.get(x)? == c {
                out.insert(nu.clone());
            }
        }
        FlifExpr::AssignVar(x, y) => {
            let v = nu.get(y)?.clone();
            out.insert(nu.extend(x, v));
        }
        FlifExpr::AssignConst(x, c) => {
            out.insert(nu.extend(x, c.clone()));
        }
        FlifExpr::Comp(l, r) => {
            for mid in step(l, db, nu)? {
                out.extend(step(r, db, &mid)?);
            }
        }
        FlifExpr::Union(l, r) => {
            out = step(l, db, nu)?;
            out.extend(step(r, db, nu)?);
        }
        FlifExpr::Diff(l, r) => {
            let minus = step(r, db, nu)?;
            out = step(l, db, nu)?
                .into_iter()
                .filter(|v| !minus.contains(v))
                .collect();
        }
    }
    Ok(out)
}

/// `ν` with `ȳ` overwritten by `values`, or `None` when a repeated output
/// variable would receive two different values.
pub(crate) fn overwrite(nu: &Valuation, outputs: &[VarName], values: &[Constant]) -> Option<Valuation> {
    let mut next = nu.clone();
    for (i, (y, c)) in outputs.iter().zip(values).enumerate() {
        if outputs[..i].contains(y) && next.lookup(y) != Some(c) {
            return None;
        }
        next.set(y.clone(), c.clone());
    }
    Some(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_flif;
    use alloc::vec::Vec;

    fn bus() -> Instance {
        let schema = crate::Schema::new()
            .with("B", 2, 1)
            .unwrap()
            .with("T", 2, 1)
            .unwrap();
        Instance::new(schema)
            .with_tuples("B", &[&["1", "2"], &["1", "3"], &["2", "3"], &["3", "5"]])
            .unwrap()
            .with_tuples("T", &[&["1", "4"], &["3", "5"]])
            .unwrap()
    }

    fn val(pairs: &[(&str, &str)]) -> Valuation {
        Valuation::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn xyz() -> BTreeSet<VarName> {
        ["x", "y", "z"].iter().map(|s| VarName::new(s).unwrap()).collect()
    }

    #[test]
    fn bus_then_train() {
        let e = parse_flif("B(x;y) ; T(y;x)").unwrap();
        let got = eval_flif_v(&e, &xyz(), &bus(), &val(&[("x", "1"), ("y", "9"), ("z", "9")])).unwrap();
        let rows: Vec<_> = got.into_iter().collect();
        assert_eq!(rows, [val(&[("x", "5"), ("y", "3"), ("z", "9")])]);

        let got = eval_flif(&e, &bus(), &val(&[("x", "2")])).unwrap();
        assert_eq!(got.rows().iter().collect::<Vec<_>>(), [&val(&[("x", "5"), ("y", "3")])]);
        assert!(eval_flif(&e, &bus(), &val(&[("x", "3")])).unwrap().is_empty());
    }

    #[test]
    fn atoms_over_bus_instance() {
        let e = parse_flif("B(x;x)").unwrap();
        let got = eval_flif_v(&e, &xyz(), &bus(), &val(&[("x", "3"), ("y", "7"), ("z", "8")])).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got.contains(&val(&[("x", "5"), ("y", "7"), ("z", "8")])));

        let e = parse_flif("(x:=z)").unwrap();
        let got = eval_flif_v(&e, &xyz(), &bus(), &val(&[("x", "9"), ("y", "1"), ("z", "4")])).unwrap();
        assert!(got.contains(&val(&[("x", "4"), ("y", "1"), ("z", "4")])));
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn swap_and_repeated_outputs() {
        let schema = crate::Schema::new().with("Swap", 4, 2).unwrap().with("P", 3, 1).unwrap();
        let db = Instance::new(schema)
            .with_tuples("Swap", &[&["a", "b", "b", "a"]])
            .unwrap()
            .with_tuples("P", &[&["1", "2", "2"], &["1", "2", "3"]])
            .unwrap();
        let e = parse_flif("Swap(x,y;x,y)").unwrap();
        let got = eval_flif(&e, &db, &val(&[("x", "a"), ("y", "b")])).unwrap();
        assert_eq!(got.rows().iter().collect::<Vec<_>>(), [&val(&[("x", "b"), ("y", "a")])]);

        let e = parse_flif("P(x;y,y)").unwrap();
        let got = eval_flif(&e, &db, &val(&[("x", "1")])).unwrap();
        assert_eq!(got.rows().iter().collect::<Vec<_>>(), [&val(&[("x", "1"), ("y", "2")])]);
    }

    #[test]
    fn difference_is_per_input() {
        let e = parse_flif("B(x;y) - (B(x;y) ; T(y;z))").unwrap();
        let got = eval_flif(&e, &bus(), &val(&[("x", "1"), ("z", "4")])).unwrap();
        // the subtrahend only reaches z=5, so both bus hops survive
        assert_eq!(got.len(), 2);
        let got = eval_flif(&e, &bus(), &val(&[("x", "1"), ("z", "5")])).unwrap();
        assert_eq!(got.rows().iter().collect::<Vec<_>>(), [&val(&[("x", "1"), ("y", "2"), ("z", "5")])]);
    }

    #[test]
    fn input_domain_is_checked() {
        let e = parse_flif("B(x;y)").unwrap();
        assert!(matches!(
            eval_flif(&e, &bus(), &val(&[("y", "1")])),
            Err(Error::InputDomainMismatch { .. })
        ));
        assert!(matches!(
            eval_flif_v(&e, &BTreeSet::new(), &bus(), &Valuation::new()),
            Err(Error::UnboundVariable(_))
        ));
        let bad = parse_flif("Q(x;y)").unwrap();
        assert!(eval_flif(&bad, &bus(), &val(&[("x", "1")])).is_err());
    }

    #[test]
    fn padding_does_not_matter() {
        let e = parse_flif("B(x;y) ; T(y;z) | (z:=x) ; B(z;y)").unwrap();
        let nu = val(&[("x", "1")]);
        let a = eval_flif_padded(&e, &bus(), &nu, &Constant::from("p")).unwrap();
        let b = eval_flif_padded(&e, &bus(), &nu, &Constant::from("q")).unwrap();
        assert_eq!(a, b);
    }
}
