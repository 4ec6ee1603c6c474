//! Relational-algebra plans with access joins, compiled from io-disjoint FLIF.
//!
//! Plans use the named perspective: every node produces a relation whose
//! schema is a set of variables. `In` stands for the input relation; `Let`
//! names a subplan so that substitutions keep plans linear in size.

mod compile;
mod exec;
mod schema;
mod text;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{fmt_vars, Constant, RelName, VarName};
use crate::syntax::{write_constant, write_list};

pub use compile::compile_plan;
pub use exec::eval_plan;
pub use schema::{plan_schema, PlanSchemaReport};
pub use text::parse_plan;

/// Right-hand side of a generalized projection or selection.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(VarName),
    Const(Constant),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Plan {
    In,
    /// A name bound by an enclosing [`Plan::Let`].
    Ref(String),
    /// `child ⋈acc R(x̄;ȳ)`
    AccessJoin {
        child: Box<Plan>,
        rel: RelName,
        inputs: Vec<VarName>,
        outputs: Vec<VarName>,
    },
    Union(Box<Plan>, Box<Plan>),
    Difference(Box<Plan>, Box<Plan>),
    /// Natural join.
    Join(Box<Plan>, Box<Plan>),
    Project {
        child: Box<Plan>,
        keep: BTreeSet<VarName>,
    },
    /// Projection onto the child schema minus `drop`; lets a plan stay
    /// agnostic about extra input columns.
    ProjectAway {
        child: Box<Plan>,
        drop: BTreeSet<VarName>,
    },
    /// Generalized projection `π_{Z, target := source}`.
    Extend {
        child: Box<Plan>,
        target: VarName,
        source: Term,
    },
    /// `σ_{var = rhs}`
    Select {
        child: Box<Plan>,
        var: VarName,
        rhs: Term,
    },
    Let {
        name: String,
        bound: Box<Plan>,
        body: Box<Plan>,
    },
}

impl Plan {
    pub fn access_join(child: Plan, rel: RelName, inputs: Vec<VarName>, outputs: Vec<VarName>) -> Plan {
        Plan::AccessJoin {
            child: Box::new(child),
            rel,
            inputs,
            outputs,
        }
    }

    pub fn project(child: Plan, keep: BTreeSet<VarName>) -> Plan {
        Plan::Project {
            child: Box::new(child),
            keep,
        }
    }

    pub fn project_away(child: Plan, drop: BTreeSet<VarName>) -> Plan {
        Plan::ProjectAway {
            child: Box::new(child),
            drop,
        }
    }

    pub fn union(l: Plan, r: Plan) -> Plan {
        Plan::Union(Box::new(l), Box::new(r))
    }

    pub fn difference(l: Plan, r: Plan) -> Plan {
        Plan::Difference(Box::new(l), Box::new(r))
    }

    pub fn join(l: Plan, r: Plan) -> Plan {
        Plan::Join(Box::new(l), Box::new(r))
    }

    pub fn let_in(name: String, bound: Plan, body: Plan) -> Plan {
        Plan::Let {
            name,
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Plan> {
        match self {
            Plan::In | Plan::Ref(_) => Vec::new(),
            Plan::AccessJoin { child, .. }
            | Plan::Project { child, .. }
            | Plan::ProjectAway { child, .. }
            | Plan::Extend { child, .. }
            | Plan::Select { child, .. } => alloc::vec![&**child],
            Plan::Union(l, r) | Plan::Difference(l, r) | Plan::Join(l, r) => alloc::vec![&**l, &**r],
            Plan::Let { bound, body, .. } => alloc::vec![&**bound, &**body],
        }
    }

    /// Rebuilds the node with each child replaced by `f(child)`.
    pub fn map_children(&self, f: &mut impl FnMut(&Plan) -> Plan) -> Plan {
        match self {
            Plan::In | Plan::Ref(_) => self.clone(),
            Plan::AccessJoin {
                child,
                rel,
                inputs,
                outputs,
            } => Plan::AccessJoin {
                child: Box::new(f(child)),
                rel: rel.clone(),
                inputs: inputs.clone(),
                outputs: outputs.clone(),
            },
            Plan::Project { child, keep } => Plan::Project {
                child: Box::new(f(child)),
                keep: keep.clone(),
            },
            Plan::ProjectAway { child, drop } => Plan::ProjectAway {
                child: Box::new(f(child)),
                drop: drop.clone(),
            },
            Plan::Extend {
                child,
                target,
                source,
            } => Plan::Extend {
                child: Box::new(f(child)),
                target: target.clone(),
                source: source.clone(),
            },
            Plan::Select { child, var, rhs } => Plan::Select {
                child: Box::new(f(child)),
                var: var.clone(),
                rhs: rhs.clone(),
            },
            Plan::Union(l, r) => Plan::union(f(l), f(r)),
            Plan::Difference(l, r) => Plan::difference(f(l), f(r)),
            Plan::Join(l, r) => Plan::join(f(l), f(r)),
            Plan::Let { name, bound, body } => Plan::let_in(name.clone(), f(bound), f(body)),
        }
    }

    /// `Q(P)`: every occurrence of `In` replaced by `p`.
    pub fn substitute_in(&self, p: &Plan) -> Plan {
        match self {
            Plan::In => p.clone(),
            _ => self.map_children(&mut |c| c.substitute_in(p)),
        }
    }

    /// Replaces every `Let` by substituting its bound plan for the name.
    pub fn inline_lets(&self) -> Plan {
        self.inline_with(&mut Vec::new())
    }

    fn inline_with(&self, env: &mut Vec<(String, Plan)>) -> Plan {
        match self {
            Plan::Ref(n) => env
                .iter()
                .rev()
                .find(|(m, _)| m == n)
                .map(|(_, p)| p.clone())
                .unwrap_or_else(|| self.clone()),
            Plan::Let { name, bound, body } => {
                let b = bound.inline_with(env);
                env.push((name.clone(), b));
                let out = body.inline_with(env);
                env.pop();
                out
            }
            _ => self.map_children(&mut |c| c.inline_with(env)),
        }
    }

    /// Replaces every `ProjectAway` by the equivalent `Project` for input
    /// schema `input`.
    pub fn specialize(&self, input: &BTreeSet<VarName>) -> crate::Result<Plan> {
        schema::rewrite_bottom_up(self, input, &mut |node, child_schemas| match node {
            Plan::ProjectAway { child, drop } => {
                let keep = child_schemas[0].difference(drop).cloned().collect();
                Plan::Project {
                    child: child.clone(),
                    keep,
                }
            }
            _ => node.clone(),
        })
    }

    /// Drops projections that keep their whole child schema.
    pub fn simplify(&self, input: &BTreeSet<VarName>) -> crate::Result<Plan> {
        schema::rewrite_bottom_up(self, input, &mut |node, child_schemas| match node {
            Plan::Project { child, keep } if *keep == child_schemas[0] => (**child).clone(),
            Plan::ProjectAway { child, drop } if drop.is_disjoint(&child_schemas[0]) => (**child).clone(),
            _ => node.clone(),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::Const(c) => write_constant(f, c),
        }
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::In => f.write_str("In"),
            Plan::Ref(n) => write!(f, "Ref({})", n),
            Plan::AccessJoin {
                child,
                rel,
                inputs,
                outputs,
            } => {
                write!(f, "AccessJoin({}, {}(", child, rel)?;
                write_list(f, inputs)?;
                f.write_str(";")?;
                write_list(f, outputs)?;
                f.write_str("))")
            }
            Plan::Union(l, r) => write!(f, "Union({}, {})", l, r),
            Plan::Difference(l, r) => write!(f, "Difference({}, {})", l, r),
            Plan::Join(l, r) => write!(f, "Join({}, {})", l, r),
            Plan::Project { child, keep } => write!(f, "Project({}, {})", child, fmt_vars(keep)),
            Plan::ProjectAway { child, drop } => {
                write!(f, "ProjectAway({}, {})", child, fmt_vars(drop))
            }
            Plan::Extend {
                child,
                target,
                source,
            } => write!(f, "Extend({}, {} := {})", child, target, source),
            Plan::Select { child, var, rhs } => write!(f, "Select({}, {} = {})", child, var, rhs),
            Plan::Let { name, bound, body } => write!(f, "Let({} = {}, {})", name, bound, body),
        }
    }
}

impl fmt::Debug for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self)
    }
}

/// Short description of a node for error messages.
pub(crate) fn node_label(p: &Plan) -> String {
    use alloc::format;
    match p {
        Plan::In => "In".into(),
        Plan::Ref(n) => format!("Ref({})", n),
        Plan::AccessJoin { rel, .. } => format!("AccessJoin(.., {})", rel),
        Plan::Union(..) => "Union".into(),
        Plan::Difference(..) => "Difference".into(),
        Plan::Join(..) => "Join".into(),
        Plan::Project { keep, .. } => format!("Project(.., {})", fmt_vars(keep)),
        Plan::ProjectAway { drop, .. } => format!("ProjectAway(.., {})", fmt_vars(drop)),
        Plan::Extend { target, source, .. } => format!("Extend(.., {} := {})", target, source),
        Plan::Select { var, rhs, .. } => format!("Select(.., {} = {})", var, rhs),
        Plan::Let { name, .. } => format!("Let({})", name),
    }
}
