//! Two-sorted first-order formulas over program signatures extended with
//! the Atleast, Atmost and Start predicate families.

mod display;
mod family;
mod formula;
mod lex;
mod ops;
mod parse;
mod term;

use alloc::string::String;

pub use display::Ascii;
pub use family::{FamilyBody, FamilyKind, FamilyRegistry};
pub use formula::{Atom, Formula, Predicate, Symbol};
pub use lex::lex_less;
pub use parse::{parse_family_body, parse_formula, FormulaParseError};
pub use term::{ArithOp, FoTerm, Sort, Variable};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FolError {
    #[error("sort mismatch in {context}: expected {expected}, found {found}")]
    SortMismatch { expected: Sort, found: Sort, context: String },
    #[error("{symbol} expects {expected} arguments, got {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("invalid predicate family: {0}")]
    InvalidFamily(String),
    #[error("formula already contains primed symbol {0}")]
    AlreadyPrimed(String),
    #[error("tuple lengths differ: {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
}
