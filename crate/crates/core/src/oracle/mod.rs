//! Finite-universe here-and-there semantics: grounding, HT satisfaction,
//! standard interpretations of the counting families, stable models and a
//! brute-force strong-equivalence check.

mod check;
mod eval;
mod ground;
mod universe;
mod value;

use alloc::string::String;

pub use check::{
    build_prime_interp, check_gamma_lemma, check_strong_equivalence, classical_sat, classical_sat_formula, eval_agg_atom,
    eval_sigma0_ground, eval_sigma0_term, ground, ht_sat, ht_sat_formula, stable_models, stable_models_with, Disagreement,
    GammaAgreement, HTPair, PrimeInterp, SeChecker, SeOptions, SeReport, SeVerdict, StableModels, SubsetOrder, YOutcome,
};
pub use eval::{Compiled, Flags, Masks, Scratch, World, C, H, T};
pub use ground::{AtomTable, GroundAtom, Grounder, Grounding, Node, NodeId, FALSE, TRUE};
pub use universe::{aggregate_width, Universe};
pub use value::Value;

use crate::fol::FolError;
use crate::translate::TranslateError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Fol(#[from] FolError),
    #[error("formula is not closed: {0} is free")]
    NotClosed(String),
    #[error("variable {0} is unbound")]
    Unbound(String),
    #[error("integer overflow during evaluation")]
    Overflow,
    #[error("arithmetic on non-integer {0}")]
    NonInteger(String),
    #[error("numeral {0} does not fit in 64 bits")]
    NumeralRange(String),
    #[error("{count} atoms exceed the enumeration limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("expected a ground Atleast or Atmost atom")]
    NotFamilyAtom,
    #[error("here-world is not a subset of the there-world")]
    NotSubset,
    #[error("{0}")]
    Unsupported(String),
}
