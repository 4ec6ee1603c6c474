use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::fresh::FreshVarSource;
use crate::analysis::require_executable;
use crate::error::Result;
use crate::model::{Constant, VarName};
use crate::syntax::{FlifExpr, FoFormula};

/// Translates a `V`-executable formula into an FLIF expression with the same
/// answers: for any starting valuation extending `ν_in` on `V`, the reachable
/// valuations restricted to `FV(φ) ∪ V` are exactly the satisfying extensions
/// of `ν_in`. The expression never changes variables of `V`.
///
/// Auxiliary variables are named `y_k` after the variable they stand for, or
/// `u_k` for the filler used under negation.
pub fn exfo_to_flif(formula: &FoFormula, vars: &BTreeSet<VarName>) -> Result<FlifExpr> {
    require_executable(formula, vars)?;
    let formula = formula.normalize_avoiding(vars);
    let mut fresh = FreshVarSource::new(formula.all_vars().into_iter().chain(vars.iter().cloned()));
    Ok(translate(&formula, vars, &mut fresh))
}

fn translate(f: &FoFormula, v: &BTreeSet<VarName>, fresh: &mut FreshVarSource) -> FlifExpr {
    match f {
        FoFormula::Rel {
            rel,
            inputs,
            outputs,
        } => {
            let mut tests = Vec::new();
            let renamed = outputs
                .iter()
                .map(|y| {
                    if v.contains(y) {
                        let z = fresh.fresh(y);
                        tests.push(FlifExpr::EqVar(z.clone(), y.clone()));
                        z
                    } else {
                        y.clone()
                    }
                })
                .collect();
            FlifExpr::rel(rel.clone(), inputs.clone(), renamed).then_all(tests)
        }
        // An equality with one unbound side binds it, which in FLIF is an
        // assignment from the bound side.
        FoFormula::Eq(x, y) => match (v.contains(x), v.contains(y)) {
            (true, false) => FlifExpr::AssignVar(y.clone(), x.clone()),
            (false, true) => FlifExpr::AssignVar(x.clone(), y.clone()),
            _ => FlifExpr::EqVar(x.clone(), y.clone()),
        },
        FoFormula::EqConst(x, c) => {
            if v.contains(x) {
                FlifExpr::EqConst(x.clone(), c.clone())
            } else {
                FlifExpr::AssignConst(x.clone(), c.clone())
            }
        }
        FoFormula::And(l, r) => {
            let fl = l.free_vars();
            let v1: BTreeSet<_> = v.intersection(&fl).cloned().collect();
            let mut v2 = v.clone();
            v2.extend(fl);
            let fr = r.free_vars();
            v2.retain(|x| fr.contains(x));
            FlifExpr::comp(translate(l, &v1, fresh), translate(r, &v2, fresh))
        }
        FoFormula::Or(l, r) => FlifExpr::union(translate(l, v, fresh), translate(r, v, fresh)),
        FoFormula::Exists(_, g) => translate(g, v, fresh),
        FoFormula::Not(g) => {
            let inner = translate(g, v, fresh);
            let mut reset: Vec<VarName> = inner.vars().into_iter().filter(|z| !v.contains(z)).collect();
            if reset.is_empty() {
                reset.push(fresh.fresh(&VarName::new("u").expect("valid")));
            }
            let xi = FlifExpr::compose_all(
                reset
                    .into_iter()
                    .map(|z| FlifExpr::AssignConst(z, Constant::negation_filler())),
            )
            .expect("nonempty");
            FlifExpr::diff(xi.clone(), FlifExpr::comp(inner, xi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::syntax::parse_fo;
    use alloc::string::ToString;

    fn vs(names: &[&str]) -> BTreeSet<VarName> {
        names.iter().map(|s| VarName::new(s).unwrap()).collect()
    }

    fn tr(f: &str, v: &[&str]) -> alloc::string::String {
        exfo_to_flif(&parse_fo(f).unwrap(), &vs(v)).unwrap().to_string()
    }

    #[test]
    fn atoms() {
        assert_eq!(tr("R(x;y)", &["x"]), "R(x;y)");
        assert_eq!(tr("R(x;y)", &["x", "y"]), "R(x;y_1) ; (y_1=y)");
        assert_eq!(tr("T(x;x,y)", &["x"]), "T(x;x_1,y) ; (x_1=x)");
    }

    #[test]
    fn connectives() {
        assert_eq!(tr("R(x;y) & S(y;z)", &["x"]), "R(x;y) ; S(y;z)");
        assert_eq!(tr("exists y. R(x;y) & S(y;z)", &["x"]), "R(x;y) ; S(y;z)");
        assert_eq!(tr("R(x;x) | S(y;)", &["x", "y"]), "R(x;x_1) ; (x_1=x) | S(y;)");
        assert_eq!(
            tr("!R(x;y)", &["x", "y"]),
            "(y_1:=\"⊥c\") - R(x;y_1) ; (y_1=y) ; (y_1:=\"⊥c\")"
        );
        assert_eq!(tr("!(x = y)", &["x", "y"]), "(u_1:=\"⊥c\") - (x=y) ; (u_1:=\"⊥c\")");
    }

    #[test]
    fn equalities_bind_unbound_side() {
        assert_eq!(tr("R(x;y) & z = y", &["x"]), "R(x;y) ; (z:=y)");
        assert_eq!(tr("z = \"1\" & R(z;y)", &[]), "(z:=\"1\") ; R(z;y)");
    }

    #[test]
    fn bound_variables_clashing_with_inputs_are_renamed() {
        assert_eq!(tr("exists x. R(y;x)", &["x", "y"]), "R(y;x_1)");
    }

    #[test]
    fn rejects_non_executable() {
        assert!(matches!(
            exfo_to_flif(&parse_fo("R(x;y)").unwrap(), &vs(&["y"])),
            Err(Error::NotExecutable { .. })
        ));
    }
}
