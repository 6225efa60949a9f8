//! File formats, prover plumbing and drivers around `mgc-core`.

pub mod input;
pub mod parallel;
pub mod pipeline;
pub mod prover;
pub mod report;
pub mod tptp;

pub use pipeline::{verify, Outcome, VerifyError, VerifyOptions, VerifyReport};
pub use prover::{run_prover, ProverConfig, ProverStatus, ProverVerdict, PROVER_ENV};
pub use tptp::emit_problem;
