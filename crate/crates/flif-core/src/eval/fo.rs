use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{require_domain, ValuationSet};
use crate::analysis::require_executable;
use crate::error::Result;
use crate::model::{Instance, Valuation, VarName};
use crate::syntax::FoFormula;

/// All valuations `ν` on `V ∪ FV(φ)` extending `ν_in` with `D, ν ⊨ φ`.
///
/// `φ` must be `V`-executable; evaluation follows the executability
/// clauses, so relations are only reached through bound inputs.
pub fn eval_exfo(
    formula: &FoFormula,
    vars: &BTreeSet<VarName>,
    db: &Instance,
    nu_in: &Valuation,
) -> Result<ValuationSet> {
    require_executable(formula, vars)?;
    require_domain(nu_in, vars)?;
    formula.validate(db.schema())?;
    let mut schema = vars.clone();
    schema.extend(formula.free_vars());
    let rows = solve(formula, db, nu_in)?;
    Ok(ValuationSet::from_rows_unchecked(schema, rows))
}

/// Extensions of `row` to `dom(row) ∪ FV(φ)` satisfying `φ`. Executability
/// guarantees every lookup below hits a bound variable.
fn solve(f: &FoFormula, db: &Instance, row: &Valuation) -> Result<BTreeSet<Valuation>> {
    let mut out = BTreeSet::new();
    match f {
        FoFormula::Rel {
            rel,
            inputs,
            outputs,
        } => {
            let key = inputs
                .iter()
                .map(|x| row.get(x).cloned())
                .collect::<Result<Vec<_>>>()?;
            'tuples: for tuple in db.access(rel, &key)? {
                let mut next = row.clone();
                for (y, c) in outputs.iter().zip(&tuple) {
                    match next.lookup(y) {
                        Some(d) if d != c => continue 'tuples,
                        Some(_) => {}
                        None => next.set(y.clone(), c.clone()),
                    }
                }
                out.insert(next);
            }
        }
        FoFormula::Eq(x, y) => match (row.lookup(x), row.lookup(y)) {
            (Some(a), Some(b)) => {
                if a == b {
                    out.insert(row.clone());
                }
            }
            (Some(a), None) => {
                out.insert(row.extend(y, a.clone()));
            }
            (None, Some(b)) => {
                out.insert(row.extend(x, b.clone()));
            }
            (None, None) => {
                row.get(x)?;
            }
        },
        FoFormula::EqConst(x, c) => match row.lookup(x) {
            Some(a) => {
                if a == c {
                    out.insert(row.clone());
                }
            }
            None => {
                out.insert(row.extend(x, c.clone()));
            }
        },
        FoFormula::And(l, r) => {
            for mid in solve(l, db, row)? {
                out.extend(solve(r, db, &mid)?);
            }
        }
        FoFormula::Or(l, r) => {
            out = solve(l, db, row)?;
            out.extend(solve(r, db, row)?);
        }
        FoFormula::Not(g) => {
            if solve(g, db, row)?.is_empty() {
                out.insert(row.clone());
            }
        }
        FoFormula::Exists(x, g) => {
            let mut inner = row.clone();
            let saved = inner.remove(x);
            for mut r in solve(g, db, &inner)? {
                r.remove(x);
                if let Some(c) = &saved {
                    r.set(x.clone(), c.clone());
                }
                out.insert(r);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::model::Schema;
    use crate::syntax::{parse_fo, parse_fo_raw};

    fn vs(names: &[&str]) -> BTreeSet<VarName> {
        names.iter().map(|s| VarName::new(s).unwrap()).collect()
    }

    fn val(pairs: &[(&str, &str)]) -> Valuation {
        Valuation::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn db() -> Instance {
        let schema = Schema::new().with("R", 2, 1).unwrap().with("S", 1, 0).unwrap();
        Instance::new(schema)
            .with_tuples("R", &[&["1", "2"], &["1", "3"], &["2", "2"]])
            .unwrap()
            .with_tuples("S", &[&["3"]])
            .unwrap()
    }

    #[test]
    fn atom() {
        let got = eval_exfo(&parse_fo("R(x;y)").unwrap(), &vs(&["x"]), &db(), &val(&[("x", "1")])).unwrap();
        let rows: Vec<_> = got.into_iter().collect();
        assert_eq!(rows, [val(&[("x", "1"), ("y", "2")]), val(&[("x", "1"), ("y", "3")])]);
    }

    #[test]
    fn negation_needs_bound_vars() {
        let f = parse_fo("!(x = y)").unwrap();
        assert!(matches!(
            eval_exfo(&f, &vs(&["x"]), &db(), &val(&[("x", "1")])),
            Err(Error::NotExecutable { .. })
        ));
        let g = parse_fo("R(x;y) & !S(;y)").unwrap();
        let got = eval_exfo(&g, &vs(&["x"]), &db(), &val(&[("x", "1")])).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got.contains(&val(&[("x", "1"), ("y", "2")])));
    }

    #[test]
    fn exists_restores_shadowed_binding() {
        let f = parse_fo_raw("exists x. R(y;x) & x = \"2\"").unwrap();
        let got = eval_exfo(&f, &vs(&["x", "y"]), &db(), &val(&[("x", "9"), ("y", "1")])).unwrap();
        assert_eq!(got.rows().iter().collect::<Vec<_>>(), [&val(&[("x", "9"), ("y", "1")])]);
    }

    #[test]
    fn disjunction_and_equalities() {
        let f = parse_fo("y = x | R(x;y) & y = \"3\"").unwrap();
        let got = eval_exfo(&f, &vs(&["x", "y"]), &db(), &val(&[("x", "1"), ("y", "3")])).unwrap();
        assert_eq!(got.len(), 1);
        let f = parse_fo("z = x & S(;z)").unwrap();
        assert!(eval_exfo(&f, &vs(&["x"]), &db(), &val(&[("x", "1")])).unwrap().is_empty());
        let got = eval_exfo(&f, &vs(&["x"]), &db(), &val(&[("x", "3")])).unwrap();
        assert_eq!(got.schema(), &vs(&["x", "z"]));
        assert_eq!(got.len(), 1);
    }
}
