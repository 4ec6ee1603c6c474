use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Pipe,
    PipePipe,
    Minus,
    Amp,
    Bang,
    Eq,
    Assign,
    Dot,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{}`", s),
            Tok::Str(s) => format!("constant \"{}\"", s),
            Tok::Eof => String::from("end of input"),
            Tok::LParen => String::from("`(`"),
            Tok::RParen => String::from("`)`"),
            Tok::LBrace => String::from("`{`"),
            Tok::RBrace => String::from("`}`"),
            Tok::Semi => String::from("`;`"),
            Tok::Comma => String::from("`,`"),
            Tok::Pipe => String::from("`|`"),
            Tok::PipePipe => String::from("`||`"),
            Tok::Minus => String::from("`-`"),
            Tok::Amp => String::from("`&`"),
            Tok::Bang => String::from("`!`"),
            Tok::Eq => String::from("`=`"),
            Tok::Assign => String::from("`:=`"),
            Tok::Dot => String::from("`.`"),
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(s)));
            continue;
        }
        it.next();
        let tok = match ch {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '-' => Tok::Minus,
            '&' => Tok::Amp,
            '!' => Tok::Bang,
            '=' => Tok::Eq,
            '.' => Tok::Dot,
            '|' => {
                if matches!(it.peek(), Some(&(_, '|'))) {
                    it.next();
                    Tok::PipePipe
                } else {
                    Tok::Pipe
                }
            }
            ':' => {
                if matches!(it.peek(), Some(&(_, '='))) {
                    it.next();
                    Tok::Assign
                } else {
                    return Err(Error::Syntax {
                        pos,
                        message: String::from("expected `:=`"),
                    });
                }
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match it.next() {
                        None => {
                            return Err(Error::Syntax {
                                pos,
                                message: String::from("unterminated constant"),
                            })
                        }
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match it.next() {
                            Some((_, c @ ('"' | '\\'))) => s.push(c),
                            Some((p, c)) => {
                                return Err(Error::Syntax {
                                    pos: p,
                                    message: format!("unknown escape `\\{}`", c),
                                })
                            }
                            None => {
                                return Err(Error::Syntax {
                                    pos,
                                    message: String::from("unterminated constant"),
                                })
                            }
                        },
                        Some((_, c)) => s.push(c),
                    }
                }
                Tok::Str(s)
            }
            other => {
                return Err(Error::Syntax {
                    pos,
                    message: format!("unexpected character `{}`", other),
                })
            }
        };
        out.push((pos, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

/// Cursor over a token stream shared by the expression, formula and plan parsers.
pub(crate) struct Cursor {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Cursor {
            toks: tokenize(src)?,
            at: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].1
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            message: format!("expected {}, found {}", wanted, self.peek().describe()),
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            Tok::Str(_) => Err(Error::ConstantPlacement { pos: self.pos() }),
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}
