use alloc::format;

use super::{Plan, Term};
use crate::analysis::{io_profile, require_io_disjoint};
use crate::error::Result;
use crate::syntax::FlifExpr;

/// Compiles an io-disjoint expression into a plan `E` such that for every
/// input relation `N` over a schema `Z ⊇ I(α)` with `Z ∩ O(α) = ∅`,
/// `E(N)` is the set of all `ν ∪ ν'|O(α)` with `ν ∈ N` and `ν'` an output
/// of `α` on `ν`.
///
/// Subplans that would be substituted for `In` are bound with `Let`, so the
/// plan has at most `6·|α|` nodes. Names are `n0`, `n1`, ... in the order
/// they are introduced.
pub fn compile_plan(expr: &FlifExpr) -> Result<Plan> {
    require_io_disjoint(expr)?;
    let mut next = 0usize;
    Ok(go(expr, &mut next))
}

fn fresh(next: &mut usize) -> alloc::string::String {
    let n = format!("n{}", next);
    *next += 1;
    n
}

fn go(e: &FlifExpr, next: &mut usize) -> Plan {
    match e {
        FlifExpr::Rel {
            rel,
            inputs,
            outputs,
        } => Plan::access_join(Plan::In, rel.clone(), inputs.clone(), outputs.clone()),
        FlifExpr::EqVar(x, y) => Plan::Select {
            child: Plan::In.into(),
            var: x.clone(),
            rhs: Term::Var(y.clone()),
        },
        FlifExpr::EqConst(x, c) => Plan::Select {
            child: Plan::In.into(),
            var: x.clone(),
            rhs: Term::Const(c.clone()),
        },
        FlifExpr::AssignVar(x, y) => Plan::Extend {
            child: Plan::In.into(),
            target: x.clone(),
            source: Term::Var(y.clone()),
        },
        FlifExpr::AssignConst(x, c) => Plan::Extend {
            child: Plan::In.into(),
            target: x.clone(),
            source: Term::Const(c.clone()),
        },
        FlifExpr::Comp(l, r) => {
            let e1 = go(l, next);
            let e2 = go(r, next);
            let name = fresh(next);
            let bound = Plan::project_away(e1, io_profile(r).outputs);
            let body = e2.substitute_in(&Plan::Ref(name.clone()));
            Plan::let_in(name, bound, body)
        }
        FlifExpr::Union(l, r) => Plan::union(go(l, next), go(r, next)),
        FlifExpr::Diff(l, r) => {
            let e1 = go(l, next);
            let e2 = go(r, next);
            let name = fresh(next);
            let bound = Plan::project_away(Plan::In, io_profile(r).outputs);
            let body = e2.substitute_in(&Plan::Ref(name.clone()));
            Plan::difference(e1, Plan::join(Plan::let_in(name, bound, body), Plan::In))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::model::VarName;
    use crate::syntax::parse_flif;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;

    fn vars(s: &[&str]) -> BTreeSet<VarName> {
        s.iter().map(|v| VarName::new(v).unwrap()).collect()
    }

    fn golden(src: &str) -> alloc::string::String {
        let e = parse_flif(src).unwrap();
        let p = compile_plan(&e).unwrap();
        let i = io_profile(&e).inputs;
        p.inline_lets()
            .specialize(&i)
            .unwrap()
            .simplify(&i)
            .unwrap()
            .to_string()
    }

    #[test]
    fn chain_of_access_joins() {
        assert_eq!(
            golden("R(x;y) ; S(y;z)"),
            "AccessJoin(AccessJoin(In, R(x;y)), S(y;z))"
        );
    }

    #[test]
    fn projection_hides_overwritten_output() {
        assert_eq!(
            golden("R(x1;y,u) ; S(x2,y;z,u)"),
            "AccessJoin(Project(AccessJoin(In, R(x1;y,u)), {x1,x2,y}), S(x2,y;z,u))"
        );
    }

    #[test]
    fn raw_plan_uses_lets() {
        let e = parse_flif("R(x;y) ; S(y;z)").unwrap();
        assert_eq!(
            compile_plan(&e).unwrap().to_string(),
            "Let(n0 = ProjectAway(AccessJoin(In, R(x;y)), {z}), AccessJoin(Ref(n0), S(y;z)))"
        );
    }

    #[test]
    fn difference_joins_back_input() {
        let e = parse_flif("R(x;y) - S(x;y)").unwrap();
        assert_eq!(
            compile_plan(&e).unwrap().to_string(),
            "Difference(AccessJoin(In, R(x;y)), Join(Let(n0 = ProjectAway(In, {y}), AccessJoin(Ref(n0), S(x;y))), In))"
        );
        let p = compile_plan(&e).unwrap();
        assert_eq!(super::super::plan_schema(&p, &vars(&["x"])).unwrap().output, vars(&["x", "y"]));
    }

    #[test]
    fn rejects_non_io_disjoint() {
        let e = parse_flif("R(x;x)").unwrap();
        assert!(matches!(compile_plan(&e), Err(Error::NotIoDisjoint { .. })));
    }

    #[test]
    fn size_is_linear() {
        for src in [
            "R(x;y) ; S(y;z) ; T(z;w)",
            "((R(x;y) ; S(y;z)) - (R(x;y) ; S(y;z))) ; T(z;w) | R(x;y) ; S(y;z) ; T(z;w)",
        ] {
            let e = parse_flif(src).unwrap();
            assert!(compile_plan(&e).unwrap().node_count() <= 6 * e.size(), "{}", src);
        }
    }
}
