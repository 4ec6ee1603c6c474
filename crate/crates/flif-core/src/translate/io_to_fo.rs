use alloc::vec::Vec;

use crate::analysis::{io_profile, require_io_disjoint};
use crate::error::Result;
use crate::syntax::{FlifExpr, FoFormula};

/// Translates an io-disjoint expression into an `I(α)`-executable formula
/// with free variables `vars(α)` and the same evaluation results.
///
/// Composition hides the outputs shared by both sides inside the left
/// conjunct; the output is linear in the size of `α`.
pub fn flifio_to_exfo(expr: &FlifExpr) -> Result<FoFormula> {
    require_io_disjoint(expr)?;
    Ok(translate(expr))
}

fn translate(e: &FlifExpr) -> FoFormula {
    match e {
        FlifExpr::Rel {
            rel,
            inputs,
            outputs,
        } => FoFormula::rel(rel.clone(), inputs.clone(), outputs.clone()),
        FlifExpr::EqVar(x, y) | FlifExpr::AssignVar(x, y) => FoFormula::Eq(x.clone(), y.clone()),
        FlifExpr::EqConst(x, c) | FlifExpr::AssignConst(x, c) => {
            FoFormula::EqConst(x.clone(), c.clone())
        }
        FlifExpr::Comp(l, r) => {
            let shared: Vec<_> = io_profile(l)
                .outputs
                .intersection(&io_profile(r).outputs)
                .cloned()
                .collect();
            FoFormula::and(FoFormula::exists_all(shared, translate(l)), translate(r))
        }
        FlifExpr::Union(l, r) => FoFormula::or(translate(l), translate(r)),
        FlifExpr::Diff(l, r) => FoFormula::and(translate(l), FoFormula::not(translate(r))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::syntax::parse_flif;
    use alloc::string::ToString;

    fn tr(s: &str) -> alloc::string::String {
        flifio_to_exfo(&parse_flif(s).unwrap()).unwrap().to_string()
    }

    #[test]
    fn table_rows() {
        assert_eq!(tr("R(x;y,u) ; S(x;z,u)"), "(exists u. R(x;y,u)) & S(x;z,u)");
        assert_eq!(tr("(x:=y)"), "x = y");
        assert_eq!(tr("(x:=\"1\")"), "x = \"1\"");
        assert_eq!(tr("R(x;y) - S(x;y)"), "R(x;y) & !S(x;y)");
        assert_eq!(tr("R(x;y) | S(x;y)"), "R(x;y) | S(x;y)");
        assert_eq!(tr("R(x;y) ; S(y;z)"), "R(x;y) & S(y;z)");
    }

    #[test]
    fn rejects_non_io_disjoint() {
        assert_eq!(
            flifio_to_exfo(&parse_flif("F(x;x)").unwrap()),
            Err(Error::NotIoDisjoint {
                witness: "F(x;x)".into()
            })
        );
    }
}
