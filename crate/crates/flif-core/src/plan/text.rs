use alloc::collections::BTreeSet;
use alloc::format;

use super::{Plan, Term};
use crate::error::{Error, Result};
use crate::model::Constant;
use crate::syntax::lexer::{Cursor, Tok};
use crate::syntax::parser::{atom_args, var};

/// Parses the textual plan format produced by `Display for Plan`.
pub fn parse_plan(src: &str) -> Result<Plan> {
    let mut c = Cursor::new(src)?;
    let p = plan(&mut c)?;
    c.finish()?;
    Ok(p)
}

fn plan(c: &mut Cursor) -> Result<Plan> {
    let pos = c.pos();
    let head = c.ident()?;
    if head == "In" {
        return Ok(Plan::In);
    }
    c.expect(&Tok::LParen)?;
    let p = match head.as_str() {
        "Ref" => Plan::Ref(c.ident()?),
        "Let" => {
            let name = c.ident()?;
            c.expect(&Tok::Eq)?;
            let bound = plan(c)?;
            c.expect(&Tok::Comma)?;
            Plan::let_in(name, bound, plan(c)?)
        }
        "Union" | "Difference" | "Join" => {
            let l = plan(c)?;
            c.expect(&Tok::Comma)?;
            let r = plan(c)?;
            match head.as_str() {
                "Union" => Plan::union(l, r),
                "Difference" => Plan::difference(l, r),
                _ => Plan::join(l, r),
            }
        }
        "AccessJoin" => {
            let child = plan(c)?;
            c.expect(&Tok::Comma)?;
            let (rel, inputs, outputs) = atom_args(c)?;
            Plan::access_join(child, rel, inputs, outputs)
        }
        "Project" | "ProjectAway" => {
            let child = plan(c)?;
            c.expect(&Tok::Comma)?;
            let set = var_set(c)?;
            if head == "Project" {
                Plan::project(child, set)
            } else {
                Plan::project_away(child, set)
            }
        }
        "Extend" => {
            let child = plan(c)?;
            c.expect(&Tok::Comma)?;
            let target = var(c)?;
            c.expect(&Tok::Assign)?;
            Plan::Extend {
                child: child.into(),
                target,
                source: term(c)?,
            }
        }
        "Select" => {
            let child = plan(c)?;
            c.expect(&Tok::Comma)?;
            let v = var(c)?;
            c.expect(&Tok::Eq)?;
            Plan::Select {
                child: child.into(),
                var: v,
                rhs: term(c)?,
            }
        }
        _ => {
            return Err(Error::Syntax {
                pos,
                message: format!("unknown plan operator `{}`", head),
            })
        }
    };
    c.expect(&Tok::RParen)?;
    Ok(p)
}

fn term(c: &mut Cursor) -> Result<Term> {
    if let Tok::Str(s) = c.peek().clone() {
        c.bump();
        return Ok(Term::Const(Constant::new(s)));
    }
    Ok(Term::Var(var(c)?))
}

fn var_set(c: &mut Cursor) -> Result<BTreeSet<crate::model::VarName>> {
    c.expect(&Tok::LBrace)?;
    let mut out = BTreeSet::new();
    while *c.peek() != Tok::RBrace {
        out.insert(var(c)?);
        if !c.eat(&Tok::Comma) {
            break;
        }
    }
    c.expect(&Tok::RBrace)?;
    Ok(out)
}
