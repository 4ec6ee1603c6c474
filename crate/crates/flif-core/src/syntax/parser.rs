use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::flif::FlifExpr;
use super::fo::FoFormula;
use super::lexer::{Cursor, Tok};
use crate::error::{Error, Result};
use crate::model::{Constant, RelName, VarName};

/// Parses a FLIF expression.
///
/// Grammar, loosest first: `|` (union), `-` (difference) and `&`
/// (intersection, desugared) are left-associative at the same level; `;`
/// binds tighter. Atoms are `R(x,y;z)`, `(x=y)`, `(x="c")`, `(x:=y)`,
/// `(x:="c")`, or a parenthesized expression.
pub fn parse_flif(src: &str) -> Result<FlifExpr> {
    let mut c = Cursor::new(src)?;
    let e = flif_expr(&mut c)?;
    c.finish()?;
    Ok(e)
}

/// Parses an FO formula and renames bound variables apart
/// (see [`FoFormula::normalize_hygiene`]).
pub fn parse_fo(src: &str) -> Result<FoFormula> {
    Ok(parse_fo_raw(src)?.normalize_hygiene())
}

/// Parses an FO formula exactly as written, keeping shadowed binders.
///
/// `|` and `||` both denote disjunction, `&` conjunction, `!` negation and
/// `exists x. φ` quantification, which extends as far right as possible.
pub fn parse_fo_raw(src: &str) -> Result<FoFormula> {
    let mut c = Cursor::new(src)?;
    let f = fo_formula(&mut c)?;
    c.finish()?;
    Ok(f)
}

/// Parses a variable set written as `{x,y}`, `x,y` or `x y`.
pub fn parse_var_set(src: &str) -> Result<BTreeSet<VarName>> {
    let mut c = Cursor::new(src)?;
    let braced = c.eat(&Tok::LBrace);
    let mut out = BTreeSet::new();
    loop {
        match c.peek() {
            Tok::Ident(_) => {
                out.insert(var(&mut c)?);
                c.eat(&Tok::Comma);
            }
            _ => break,
        }
    }
    if braced {
        c.expect(&Tok::RBrace)?;
    }
    c.finish()?;
    Ok(out)
}

pub(crate) fn var(c: &mut Cursor) -> Result<VarName> {
    let pos = c.pos();
    let s = c.ident()?;
    VarName::new(&s).map_err(|_| Error::Syntax {
        pos,
        message: alloc::format!("invalid variable `{}`", s),
    })
}

fn rel_name(s: &str, pos: usize) -> Result<RelName> {
    RelName::new(s).map_err(|_| Error::Syntax {
        pos,
        message: alloc::format!("invalid relation name `{}`", s),
    })
}

pub(crate) fn var_list(c: &mut Cursor, end: &Tok) -> Result<Vec<VarName>> {
    let mut out = Vec::new();
    if c.peek() == end {
        return Ok(out);
    }
    loop {
        out.push(var(c)?);
        if !c.eat(&Tok::Comma) {
            return Ok(out);
        }
    }
}

/// `R(` already identified by lookahead; parses `R(x̄;ȳ)`.
pub(crate) fn atom_args(c: &mut Cursor) -> Result<(RelName, Vec<VarName>, Vec<VarName>)> {
    let pos = c.pos();
    let name = c.ident()?;
    let rel = rel_name(&name, pos)?;
    c.expect(&Tok::LParen)?;
    let inputs = var_list(c, &Tok::Semi)?;
    c.expect(&Tok::Semi)?;
    let outputs = var_list(c, &Tok::RParen)?;
    c.expect(&Tok::RParen)?;
    Ok((rel, inputs, outputs))
}

fn flif_expr(c: &mut Cursor) -> Result<FlifExpr> {
    let mut acc = flif_comp(c)?;
    loop {
        match c.peek() {
            Tok::Pipe | Tok::PipePipe => {
                c.bump();
                acc = FlifExpr::union(acc, flif_comp(c)?);
            }
            Tok::Minus => {
                c.bump();
                acc = FlifExpr::diff(acc, flif_comp(c)?);
            }
            Tok::Amp => {
                c.bump();
                acc = FlifExpr::intersect(acc, flif_comp(c)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn flif_comp(c: &mut Cursor) -> Result<FlifExpr> {
    let mut acc = flif_prim(c)?;
    while c.eat(&Tok::Semi) {
        acc = FlifExpr::comp(acc, flif_prim(c)?);
    }
    Ok(acc)
}

fn flif_prim(c: &mut Cursor) -> Result<FlifExpr> {
    match c.peek().clone() {
        Tok::Ident(_) => {
            let (rel, inputs, outputs) = atom_args(c)?;
            Ok(FlifExpr::rel(rel, inputs, outputs))
        }
        Tok::LParen => {
            if let Tok::Str(_) = c.peek_at(1) {
                c.bump();
                return Err(Error::ConstantPlacement { pos: c.pos() });
            }
            let is_basic = matches!(c.peek_at(1), Tok::Ident(_))
                && matches!(c.peek_at(2), Tok::Eq | Tok::Assign);
            c.bump();
            if !is_basic {
                let e = flif_expr(c)?;
                c.expect(&Tok::RParen)?;
                return Ok(e);
            }
            let x = var(c)?;
            let assign = matches!(c.bump(), Tok::Assign);
            let e = match c.peek().clone() {
                Tok::Str(s) => {
                    c.bump();
                    let k = Constant::new(s);
                    if assign {
                        FlifExpr::AssignConst(x, k)
                    } else {
                        FlifExpr::EqConst(x, k)
                    }
                }
                _ => {
                    let y = var(c)?;
                    if assign {
                        FlifExpr::AssignVar(x, y)
                    } else {
                        FlifExpr::EqVar(x, y)
                    }
                }
            };
            c.expect(&Tok::RParen)?;
            Ok(e)
        }
        Tok::Str(_) => Err(Error::ConstantPlacement { pos: c.pos() }),
        _ => Err(c.unexpected("an atom or `(`")),
    }
}

fn is_exists(c: &Cursor) -> bool {
    matches!(c.peek(), Tok::Ident(s) if s == "exists") && matches!(c.peek_at(1), Tok::Ident(_))
}

fn fo_formula(c: &mut Cursor) -> Result<FoFormula> {
    if is_exists(c) {
        return fo_exists(c);
    }
    fo_or(c)
}

fn fo_exists(c: &mut Cursor) -> Result<FoFormula> {
    c.bump();
    let x = var(c)?;
    c.expect(&Tok::Dot)?;
    Ok(FoFormula::exists(x, fo_formula(c)?))
}

fn fo_or(c: &mut Cursor) -> Result<FoFormula> {
    let mut acc = fo_and(c)?;
    while matches!(c.peek(), Tok::Pipe | Tok::PipePipe) {
        c.bump();
        acc = FoFormula::or(acc, fo_and(c)?);
    }
    Ok(acc)
}

fn fo_and(c: &mut Cursor) -> Result<FoFormula> {
    let mut acc = fo_unary(c)?;
    while c.eat(&Tok::Amp) {
        acc = FoFormula::and(acc, fo_unary(c)?);
    }
    Ok(acc)
}

fn fo_unary(c: &mut Cursor) -> Result<FoFormula> {
    if is_exists(c) {
        return fo_exists(c);
    }
    match c.peek().clone() {
        Tok::Bang => {
            c.bump();
            Ok(FoFormula::not(fo_unary(c)?))
        }
        Tok::LParen => {
            c.bump();
            let f = fo_formula(c)?;
            c.expect(&Tok::RParen)?;
            Ok(f)
        }
        Tok::Str(_) => Err(Error::ConstantPlacement { pos: c.pos() }),
        Tok::Ident(_) => match c.peek_at(1) {
            Tok::LParen => {
                let (rel, inputs, outputs) = atom_args(c)?;
                Ok(FoFormula::rel(rel, inputs, outputs))
            }
            Tok::Eq => {
                let x = var(c)?;
                c.bump();
                match c.peek().clone() {
                    Tok::Str(s) => {
                        c.bump();
                        Ok(FoFormula::EqConst(x, Constant::new(s)))
                    }
                    _ => Ok(FoFormula::Eq(x, var(c)?)),
                }
            }
            _ => {
                c.bump();
                Err(c.unexpected("`(` or `=`"))
            }
        },
        _ => Err(c.unexpected("a formula")),
    }
}

impl core::str::FromStr for FlifExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_flif(s)
    }
}

impl core::str::FromStr for FoFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_fo(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn roundtrip_flif(s: &str) {
        let e = parse_flif(s).unwrap();
        assert_eq!(e.to_string(), s);
        assert_eq!(parse_flif(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn flif_printing_is_canonical() {
        roundtrip_flif("B(x;y) ; T(y;x)");
        roundtrip_flif("(u=y)");
        roundtrip_flif("(u:=\"42\")");
        roundtrip_flif("R(;) | S(x,y;)");
        roundtrip_flif("R(x;y) - (S(x;y) | T(x;y))");
        roundtrip_flif("(R(x;y) | S(x;y)) ; T(y;z)");
        roundtrip_flif("A(;x) ; (B(x;y) ; C(y;z))");
    }

    #[test]
    fn flif_precedence() {
        let e = parse_flif("A(;x) ; B(x;y) | C(;y) - D(y;)").unwrap();
        match e {
            FlifExpr::Diff(l, _) => assert!(matches!(*l, FlifExpr::Union(..))),
            other => panic!("{}", other),
        }
    }

    #[test]
    fn intersection_is_sugar() {
        let e = parse_flif("R(x;y) & S(x;y)").unwrap();
        assert_eq!(e.to_string(), "R(x;y) - (R(x;y) - S(x;y))");
    }

    #[test]
    fn flif_constants_only_in_tests_and_assignments() {
        assert!(matches!(
            parse_flif("R(\"1\";y)"),
            Err(Error::ConstantPlacement { .. })
        ));
        assert!(matches!(
            parse_flif("(\"1\"=y)"),
            Err(Error::ConstantPlacement { .. })
        ));
        assert!(parse_flif("(y=\"1\")").is_ok());
    }

    #[test]
    fn flif_syntax_errors() {
        for bad in ["", "R(x;y", "R(x y)", "(x:y)", "R(x;y) ;", "x", "(x=)"] {
            assert!(parse_flif(bad).unwrap_err().is_parse_error(), "{}", bad);
        }
    }

    #[test]
    fn fo_printing() {
        let f = parse_fo_raw("exists y. B(x;y) & !(y = z) | x = \"1\"").unwrap();
        assert_eq!(f.to_string(), "exists y. B(x;y) & !(y = z) | x = \"1\"");
        let g = parse_fo_raw("(exists y. B(x;y)) & C(x;)").unwrap();
        assert_eq!(g.to_string(), "(exists y. B(x;y)) & C(x;)");
        let h = parse_fo_raw("B(x;y) || C(x;) & !exists z. D(x;z)").unwrap();
        assert_eq!(h.to_string(), "B(x;y) | C(x;) & !(exists z. D(x;z))");
        assert_eq!(parse_fo_raw(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn fo_constants() {
        assert!(matches!(
            parse_fo("B(\"1\";y)"),
            Err(Error::ConstantPlacement { .. })
        ));
        assert!(matches!(
            parse_fo("\"1\" = y"),
            Err(Error::ConstantPlacement { .. })
        ));
    }

    #[test]
    fn fo_hygiene() {
        let f = parse_fo("B(x;y) & exists x. (C(x;) & exists x. D(x;))").unwrap();
        assert!(f.is_hygienic());
        assert_eq!(
            f.to_string(),
            "B(x;y) & (exists x_1. C(x_1;) & (exists x_2. D(x_2;)))"
        );
        let raw = parse_fo_raw("exists x. exists x. R(x;)").unwrap();
        assert!(!raw.is_hygienic());
        assert_eq!(raw.normalize_hygiene().to_string(), "exists x. exists x_1. R(x_1;)");
    }

    #[test]
    fn var_sets() {
        let v = parse_var_set("{x, y}").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(parse_var_set("x,y").unwrap(), v);
        assert!(parse_var_set("{}").unwrap().is_empty());
        assert!(parse_var_set("{x").is_err());
    }
}
