use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{node_label, Plan, Term};
use crate::error::{Error, Result};
use crate::model::{fmt_vars, VarName};

/// Output schema of a plan for a given input schema, plus the schema of every
/// node in post-order (children before parents, `Let` bound before body).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanSchemaReport {
    pub input: BTreeSet<VarName>,
    pub output: BTreeSet<VarName>,
    pub nodes: Vec<(String, BTreeSet<VarName>)>,
}

/// Type-checks `plan` against the input schema. The error names the first
/// ill-typed node in post-order.
pub fn plan_schema(plan: &Plan, input: &BTreeSet<VarName>) -> Result<PlanSchemaReport> {
    let mut nodes = Vec::new();
    let mut env = Vec::new();
    let output = check(plan, input, &mut env, &mut |p, s| nodes.push((node_label(p), s.clone())))?;
    Ok(PlanSchemaReport {
        input: input.clone(),
        output,
        nodes,
    })
}

fn fail(p: &Plan, reason: String) -> Error {
    Error::PlanType {
        node: node_label(p),
        reason,
    }
}

type Env = Vec<(String, BTreeSet<VarName>)>;

fn check(
    p: &Plan,
    input: &BTreeSet<VarName>,
    env: &mut Env,
    visit: &mut dyn FnMut(&Plan, &BTreeSet<VarName>),
) -> Result<BTreeSet<VarName>> {
    let out = match p {
        Plan::In => input.clone(),
        Plan::Ref(n) => match env.iter().rev().find(|(m, _)| m == n) {
            Some((_, s)) => s.clone(),
            None => return Err(fail(p, format!("unbound name `{}`", n))),
        },
        Plan::Let { name, bound, body } => {
            let s = check(bound, input, env, visit)?;
            env.push((name.clone(), s));
            let r = check(body, input, env, visit);
            env.pop();
            r?
        }
        Plan::Union(l, r) | Plan::Difference(l, r) => {
            let a = check(l, input, env, visit)?;
            let b = check(r, input, env, visit)?;
            if a != b {
                return Err(fail(
                    p,
                    format!("operand schemas differ: {} vs {}", fmt_vars(&a), fmt_vars(&b)),
                ));
            }
            a
        }
        Plan::Join(l, r) => {
            let mut a = check(l, input, env, visit)?;
            a.extend(check(r, input, env, visit)?);
            a
        }
        Plan::AccessJoin {
            child,
            inputs,
            outputs,
            ..
        } => {
            let mut z = check(child, input, env, visit)?;
            if let Some(x) = inputs.iter().find(|x| !z.contains(*x)) {
                return Err(fail(p, format!("input variable `{}` not in child schema {}", x, fmt_vars(&z))));
            }
            if let Some(y) = outputs.iter().find(|y| z.contains(*y)) {
                return Err(fail(p, format!("output variable `{}` already in child schema {}", y, fmt_vars(&z))));
            }
            z.extend(outputs.iter().cloned());
            z
        }
        Plan::Project { child, keep } => {
            let z = check(child, input, env, visit)?;
            if let Some(x) = keep.iter().find(|x| !z.contains(*x)) {
                return Err(fail(p, format!("`{}` not in child schema {}", x, fmt_vars(&z))));
            }
            keep.clone()
        }
        Plan::ProjectAway { child, drop } => {
            let z = check(child, input, env, visit)?;
            z.difference(drop).cloned().collect()
        }
        Plan::Extend {
            child,
            target,
            source,
        } => {
            let mut z = check(child, input, env, visit)?;
            if let Term::Var(y) = source {
                if !z.contains(y) {
                    return Err(fail(p, format!("`{}` not in child schema {}", y, fmt_vars(&z))));
                }
            }
            if z.contains(target) {
                return Err(fail(p, format!("`{}` already in child schema {}", target, fmt_vars(&z))));
            }
            z.insert(target.clone());
            z
        }
        Plan::Select { child, var, rhs } => {
            let z = check(child, input, env, visit)?;
            let mut needed = alloc::vec![var];
            if let Term::Var(y) = rhs {
                needed.push(y);
            }
            if let Some(x) = needed.into_iter().find(|x| !z.contains(*x)) {
                return Err(fail(p, format!("`{}` not in child schema {}", x, fmt_vars(&z))));
            }
            z
        }
    };
    visit(p, &out);
    Ok(out)
}

/// Bottom-up rewrite: `f` receives each node with already rewritten
/// children, together with the schemas of those children. Rewrites must
/// preserve schemas.
pub(crate) fn rewrite_bottom_up(
    p: &Plan,
    input: &BTreeSet<VarName>,
    f: &mut dyn FnMut(&Plan, &[BTreeSet<VarName>]) -> Plan,
) -> Result<Plan> {
    let mut env = Vec::new();
    rewrite(p, input, &mut env, f).map(|(q, _)| q)
}

fn rewrite(
    p: &Plan,
    input: &BTreeSet<VarName>,
    env: &mut Env,
    f: &mut dyn FnMut(&Plan, &[BTreeSet<VarName>]) -> Plan,
) -> Result<(Plan, BTreeSet<VarName>)> {
    let (node, schemas) = match p {
        Plan::Let { name, bound, body } => {
            let (b, bs) = rewrite(bound, input, env, f)?;
            env.push((name.clone(), bs.clone()));
            let r = rewrite(body, input, env, f);
            env.pop();
            let (d, ds) = r?;
            (Plan::let_in(name.clone(), b, d), alloc::vec![bs, ds])
        }
        _ => {
            let mut schemas = Vec::new();
            let mut err = None;
            let node = p.map_children(&mut |c| match rewrite(c, input, env, f) {
                Ok((q, s)) => {
                    schemas.push(s);
                    q
                }
                Err(e) => {
                    err.get_or_insert(e);
                    c.clone()
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            (node, schemas)
        }
    };
    let out = f(&node, &schemas);
    // Re-checking the rewritten subtree is quadratic in depth, which is fine
    // for plans of this size.
    let schema = check(&out, input, env, &mut |_, _| {})?;
    Ok((out, schema))
}
