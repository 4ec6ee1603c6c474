//! Abstract syntax, parsing and printing for FLIF expressions and FO formulas.

mod flif;
mod fo;
pub(crate) mod lexer;
pub(crate) mod parser;
mod renaming;

pub use flif::FlifExpr;
pub use fo::FoFormula;
pub use parser::{parse_flif, parse_fo, parse_fo_raw, parse_var_set};
pub use renaming::Renaming;

pub(crate) use flif::{write_constant, write_list};
