use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{plan_schema, Plan, Term};
use crate::error::Result;
use crate::eval::flif::overwrite;
use crate::eval::ValuationSet;
use crate::model::{Instance, Valuation};

/// Evaluates `plan` on the input relation `input` over `db`.
///
/// The plan is type-checked against `input.schema()` first. The database is
/// reached only through [`Instance::access`]; each `Let` is evaluated once.
pub fn eval_plan(plan: &Plan, db: &Instance, input: &ValuationSet) -> Result<ValuationSet> {
    plan_schema(plan, input.schema())?;
    let mut env = Vec::new();
    run(plan, db, input, &mut env)
}

fn run(
    p: &Plan,
    db: &Instance,
    input: &ValuationSet,
    env: &mut Vec<(String, ValuationSet)>,
) -> Result<ValuationSet> {
    Ok(match p {
        Plan::In => input.clone(),
        Plan::Ref(n) => env
            .iter()
            .rev()
            .find(|(m, _)| m == n)
            .map(|(_, s)| s.clone())
            .expect("checked by plan_schema"),
        Plan::Let { name, bound, body } => {
            let b = run(bound, db, input, env)?;
            env.push((name.clone(), b));
            let r = run(body, db, input, env);
            env.pop();
            r?
        }
        Plan::AccessJoin {
            child,
            rel,
            inputs,
            outputs,
        } => {
            let n = run(child, db, input, env)?;
            let mut schema = n.schema().clone();
            schema.extend(outputs.iter().cloned());
            let mut rows = BTreeSet::new();
            for row in n.iter() {
                let key = inputs
                    .iter()
                    .map(|x| row.get(x).cloned())
                    .collect::<Result<Vec<_>>>()?;
                for tuple in db.access(rel, &key)? {
                    if let Some(next) = overwrite(row, outputs, &tuple) {
                        rows.insert(next);
                    }
                }
            }
            ValuationSet::from_rows_unchecked(schema, rows)
        }
        Plan::Union(l, r) => {
            let a = run(l, db, input, env)?;
            let b = run(r, db, input, env)?;
            let schema = a.schema().clone();
            let mut rows = a.into_rows();
            rows.extend(b);
            ValuationSet::from_rows_unchecked(schema, rows)
        }
        Plan::Difference(l, r) => {
            let a = run(l, db, input, env)?;
            let b = run(r, db, input, env)?;
            let schema = a.schema().clone();
            let rows = a.into_rows().into_iter().filter(|v| !b.contains(v)).collect();
            ValuationSet::from_rows_unchecked(schema, rows)
        }
        Plan::Join(l, r) => {
            let a = run(l, db, input, env)?;
            let b = run(r, db, input, env)?;
            let mut schema = a.schema().clone();
            schema.extend(b.schema().iter().cloned());
            let rows = a
                .iter()
                .flat_map(|u| b.iter().filter_map(move |v| u.merge(v)))
                .collect();
            ValuationSet::from_rows_unchecked(schema, rows)
        }
        Plan::Project { child, keep } => run(child, db, input, env)?.project(keep)?,
        Plan::ProjectAway { child, drop } => {
            let n = run(child, db, input, env)?;
            let keep = n.schema().difference(drop).cloned().collect();
            n.project(&keep)?
        }
        Plan::Extend {
            child,
            target,
            source,
        } => {
            let n = run(child, db, input, env)?;
            let mut schema = n.schema().clone();
            schema.insert(target.clone());
            let rows = n
                .iter()
                .map(|row| {
                    let c = term_value(row, source)?;
                    Ok(row.extend(target, c))
                })
                .collect::<Result<_>>()?;
            ValuationSet::from_rows_unchecked(schema, rows)
        }
        Plan::Select { child, var, rhs } => {
            let n = run(child, db, input, env)?;
            let schema = n.schema().clone();
            let mut rows = BTreeSet::new();
            for row in n {
                if *row.get(var)? == term_value(&row, rhs)? {
                    rows.insert(row);
                }
            }
            ValuationSet::from_rows_unchecked(schema, rows)
        }
    })
}

fn term_value(row: &Valuation, t: &Term) -> Result<crate::model::Constant> {
    match t {
        Term::Var(y) => row.get(y).cloned(),
        Term::Const(c) => Ok(c.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::io_profile;
    use crate::error::Error;
    use crate::eval::eval_flif;
    use crate::model::{Schema, VarName};
    use crate::plan::{compile_plan, parse_plan};
    use crate::syntax::parse_flif;

    fn db() -> Instance {
        let schema = Schema::new()
            .with("R", 2, 1)
            .unwrap()
            .with("S", 2, 1)
            .unwrap()
            .with("F", 2, 1)
            .unwrap();
        Instance::new(schema)
            .with_tuples("R", &[&["1", "2"], &["1", "3"], &["2", "3"]])
            .unwrap()
            .with_tuples("S", &[&["1", "5"], &["3", "4"], &["2", "2"]])
            .unwrap()
            .with_tuples(
                "F",
                &[
                    &["a", "b"],
                    &["a", "c"],
                    &["b", "d"],
                    &["c", "d"],
                    &["b", "e"],
                ],
            )
            .unwrap()
    }

    fn row(pairs: &[(&str, &str)]) -> Valuation {
        Valuation::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn one(pairs: &[(&str, &str)]) -> ValuationSet {
        let r = row(pairs);
        ValuationSet::from_rows(r.domain(), [r]).unwrap()
    }

    fn agrees(src: &str, nu: &[(&str, &str)]) {
        let e = parse_flif(src).unwrap();
        let d = db();
        let nu = row(nu);
        let out = eval_flif(&e, &d, &nu).unwrap();
        let io = io_profile(&e);
        let p = compile_plan(&e).unwrap();
        let got = eval_plan(&p, &d, &one_from(&nu)).unwrap();
        let mut keep = io.inputs.clone();
        keep.extend(io.outputs.iter().cloned());
        assert_eq!(got, out.project(&keep).unwrap(), "{}", src);
    }

    fn one_from(nu: &Valuation) -> ValuationSet {
        ValuationSet::from_rows(nu.domain(), [nu.clone()]).unwrap()
    }

    #[test]
    fn compiled_plans_match_reference() {
        agrees("R(x;y) ; S(y;z)", &[("x", "1")]);
        agrees("R(x;y) - S(x;y)", &[("x", "2")]);
        agrees("R(x;y) | S(x;y)", &[("x", "1")]);
        agrees("(y:=x) ; R(y;z)", &[("x", "1")]);
        agrees("R(x;y) ; (y=\"3\")", &[("x", "1")]);
        agrees("R(x;y) ; (z:=\"c\")", &[("x", "1")]);
    }

    #[test]
    fn friends_of_friends() {
        // two distinct friends of x with a common friend z
        let src = "F(x;y1) ; F(x;y2) ; (F(y1;z) & F(y2;z)) ; ((y1=y1) - (y1=y2))";
        let e = parse_flif(src).unwrap();
        let p = compile_plan(&e).unwrap();
        let got = eval_plan(&p, &db(), &one(&[("x", "a")])).unwrap();
        let zs: BTreeSet<_> = got
            .iter()
            .map(|r| r.get(&VarName::new("z").unwrap()).unwrap().as_str().into())
            .collect::<BTreeSet<String>>();
        assert_eq!(zs, ["d".into()].into_iter().collect());
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn union_plan_is_per_row() {
        let p = parse_plan("Union(Join(AccessJoin(Project(In, {x}), R(x;y)), In), Join(AccessJoin(Project(In, {x}), S(x;y)), In))")
            .unwrap();
        let r1 = row(&[("x", "1"), ("w", "a")]);
        let r2 = row(&[("x", "2"), ("w", "b")]);
        let n = ValuationSet::from_rows(r1.domain(), [r1, r2]).unwrap();
        let got = eval_plan(&p, &db(), &n).unwrap();
        let expect = [
            [("x", "1"), ("w", "a"), ("y", "2")],
            [("x", "1"), ("w", "a"), ("y", "3")],
            [("x", "1"), ("w", "a"), ("y", "5")],
            [("x", "2"), ("w", "b"), ("y", "3")],
            [("x", "2"), ("w", "b"), ("y", "2")],
        ];
        let expect = ValuationSet::from_rows(got.schema().clone(), expect.iter().map(|r| row(r))).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn extra_input_columns_pass_through() {
        let e = parse_flif("R(x;y) ; S(y;z)").unwrap();
        let p = compile_plan(&e).unwrap();
        let got = eval_plan(&p, &db(), &one(&[("x", "1"), ("w", "q")])).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.iter().all(|r| r.get(&VarName::new("w").unwrap()).unwrap().as_str() == "q"));
    }

    #[test]
    fn type_errors_name_the_node() {
        let p = parse_plan("AccessJoin(In, R(x;y))").unwrap();
        let err = eval_plan(&p, &db(), &one(&[("y", "1")])).unwrap_err();
        assert!(matches!(err, Error::PlanType { ref node, .. } if node == "AccessJoin(.., R)"), "{}", err);
    }
}
