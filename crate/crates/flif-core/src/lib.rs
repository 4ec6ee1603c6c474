//! Forward logic of information flows (FLIF) over databases with limited
//! access patterns.
//!
//! The crate covers the language itself ([`syntax`]), its input/output
//! analysis ([`analysis`]), reference evaluators ([`eval`]), translations to
//! and from executable first-order logic ([`translate`]), compilation of
//! io-disjoint expressions to relational plans with access joins ([`plan`]),
//! and brute-force oracles plus random generators for testing ([`oracle`]).
//!
//! Everything here is `no_std` with `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod eval;
pub mod model;
pub mod oracle;
pub mod plan;
pub mod syntax;
pub mod translate;

pub use analysis::{io_profile, is_io_disjoint, IoProfile};
pub use error::{Error, Result};
pub use eval::{eval_exfo, eval_flif, eval_flif_v, in_sem, ValuationSet};
pub use model::{Constant, Instance, RelName, Schema, Signature, Tuple, Valuation, VarName};
pub use plan::{compile_plan, eval_plan, parse_plan, plan_schema, Plan};
pub use syntax::{parse_flif, parse_fo, FlifExpr, FoFormula, Renaming};
