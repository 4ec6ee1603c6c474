use alloc::string::String;

use crate::model::{RelName, VarName};

/// Errors raised by the library.
///
/// The variants split into three families: malformed input (syntax, unknown
/// names, arity), semantic rejections (not executable, not io-disjoint, ill-typed
/// plans) and resource guards of the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),

    #[error("constants may only appear in equalities of the form x = \"c\" (offset {pos})")]
    ConstantPlacement { pos: usize },

    #[error("unknown relation `{0}`")]
    UnknownRelation(RelName),

    #[error("arity mismatch for `{rel}`: expected {expected}, found {found}")]
    ArityMismatch {
        rel: RelName,
        expected: usize,
        found: usize,
    },

    #[error("relation `{rel}` declared with input arity {input_arity} > arity {arity}")]
    BadSignature {
        rel: RelName,
        arity: usize,
        input_arity: usize,
    },

    #[error("variable `{0}` is not bound by the valuation")]
    UnboundVariable(VarName),

    #[error("valuations are defined on different variable sets")]
    DomainMismatch,

    #[error("input valuation must be defined on exactly {expected}, got {found}")]
    InputDomainMismatch { expected: String, found: String },

    #[error("formula is not {vars}-executable; offending subformula: {witness}")]
    NotExecutable { vars: String, witness: String },

    #[error("expression is not io-disjoint; offending subexpression: {witness}")]
    NotIoDisjoint { witness: String },

    #[error("bad renaming: {0}")]
    BadRenaming(String),

    #[error("plan type error at {node}: {reason}")]
    PlanType { node: String, reason: String },

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

impl Error {
    /// True for errors caused by malformed text or undeclared names, as opposed
    /// to well-formed input that is semantically rejected.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::InvalidIdentifier(_) | Error::ConstantPlacement { .. }
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
