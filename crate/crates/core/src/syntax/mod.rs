//! The input language: mini-gringo rules with `count` aggregates.

mod analysis;
mod ast;
mod display;
mod parser;

pub use analysis::*;
pub use ast::*;
pub use parser::{parse_program, parse_rule, parse_term, parse_term_list, ParseError};
