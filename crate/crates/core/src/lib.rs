#![no_std]
//! Strong-equivalence tooling for mini-gringo programs with counting
//! aggregates: parsing, translation into two-sorted first-order logic,
//! the HT# axioms and their γ-translation, and a finite-universe
//! here-and-there oracle.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
pub mod fol;
pub mod gamma;
pub mod oracle;
pub mod syntax;
pub mod term;
pub mod translate;

pub use term::{PrecomputedTerm, Relation};
