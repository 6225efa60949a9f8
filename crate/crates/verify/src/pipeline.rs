//! Oracle search followed by the prover path.

use std::io::Write;
use std::time::Instant;

use mgc_core::gamma::{build_problem, GammaError, ProblemOptions};
use mgc_core::oracle::{ht_sat_formula, SeChecker, SeOptions, SeReport, SeVerdict, Universe};
use mgc_core::syntax::Program;
use mgc_core::translate::tau_star_program;

use crate::parallel::run_parallel;
use crate::prover::{run_prover, ProverConfig, ProverStatus, ProverVerdict};
use crate::tptp::{emit_problem, EmitError};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("problem file: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// An HT pair separating the programs, re-checked on both translations.
    CounterexampleFound,
    /// The prover reported Theorem.
    ProvedEquivalent,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::CounterexampleFound => "CounterexampleFound",
            Outcome::ProvedEquivalent => "ProvedEquivalent",
            Outcome::Inconclusive => "Inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::ProvedEquivalent => 0,
            Outcome::CounterexampleFound => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Oracle universe; derived from the programs when absent.
    pub universe: Option<Universe>,
    pub threads: usize,
    pub prover: Option<ProverConfig>,
    pub problem: ProblemOptions,
    pub atom_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            universe: None,
            threads: 1,
            prover: None,
            problem: ProblemOptions::new(),
            atom_limit: SeOptions::default().atom_limit,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub outcome: Outcome,
    pub universe: Universe,
    pub oracle: Option<SeReport>,
    pub prover: Option<ProverVerdict>,
    pub warnings: Vec<String>,
    pub elapsed_ms: u64,
}

pub fn default_universe(p1: &Program, p2: &Program) -> Result<Universe, mgc_core::oracle::OracleError> {
    Universe::for_programs(&[p1, p2])
}

/// Oracle search over the chosen universe.
pub fn run_oracle(p1: &Program, p2: &Program, u: &Universe, threads: usize, atom_limit: usize) -> Result<SeReport, mgc_core::oracle::OracleError> {
    let checker = SeChecker::new(p1, p2, u, SeOptions { atom_limit })?;
    Ok(run_parallel(&checker, threads))
}

fn confirmed(p1: &Program, p2: &Program, u: &Universe, report: &SeReport) -> Result<bool, mgc_core::oracle::OracleError> {
    let SeVerdict::Counterexample { pair, .. } = &report.verdict else {
        return Ok(false);
    };
    let l = ht_sat_formula(pair, &tau_star_program(p1)?, u)?;
    let r = ht_sat_formula(pair, &tau_star_program(p2)?, u)?;
    Ok(l != r)
}

pub fn verify(p1: &Program, p2: &Program, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let universe = match &opts.universe {
        Some(u) => u.clone(),
        None => match default_universe(p1, p2) {
            Ok(u) => u,
            Err(e) => {
                warnings.push(format!("no oracle universe: {e}"));
                Universe::exact([])
            }
        },
    };
    let finish = |outcome, oracle, prover, warnings| VerifyReport {
        outcome,
        universe: universe.clone(),
        oracle,
        prover,
        warnings,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    let oracle = match run_oracle(p1, p2, &universe, opts.threads, opts.atom_limit) {
        Ok(r) => {
            warnings.extend(r.warnings.iter().cloned());
            Some(r)
        }
        Err(e) => {
            warnings.push(format!("oracle skipped: {e}"));
            None
        }
    };
    if let Some(r) = &oracle {
        if matches!(r.verdict, SeVerdict::Counterexample { .. }) {
            match confirmed(p1, p2, &universe, r) {
                Ok(true) => return Ok(finish(Outcome::CounterexampleFound, oracle, None, warnings)),
                Ok(false) => warnings.push("oracle pair did not re-check; ignored".into()),
                Err(e) => warnings.push(format!("oracle pair re-check failed: {e}")),
            }
        }
    }
    let Some(cfg) = &opts.prover else {
        warnings.push("no prover configured".into());
        return Ok(finish(Outcome::Inconclusive, oracle, None, warnings));
    };
    let text = emit_problem(&build_problem(p1, p2, &opts.problem)?)?;
    let mut file = tempfile::Builder::new().prefix("mgc-verify-").suffix(".p").tempfile()?;
    file.write_all(text.as_bytes())?;
    file.flush()?;
    let verdict = run_prover(file.path(), cfg);
    if let Some(m) = &verdict.message {
        warnings.push(format!("prover: {m}"));
    }
    let outcome = if verdict.status == ProverStatus::Theorem { Outcome::ProvedEquivalent } else { Outcome::Inconclusive };
    Ok(finish(outcome, oracle, Some(verdict), warnings))
}
