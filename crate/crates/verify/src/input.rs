//! Reading programs, universes and induction instances from text.

use std::fs;
use std::path::Path;

use mgc_core::fol::{parse_formula, Formula, Variable};
use mgc_core::oracle::Universe;
use mgc_core::syntax::{parse_program, parse_term_list, Program};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

pub fn read_program(path: &Path) -> Result<Program, InputError> {
    let src = read(path)?;
    parse_program(&src).map_err(|e| InputError::Parse {
        path: path.display().to_string(),
        line: e.line,
        column: e.column,
        message: e.message,
    })
}

/// A universe from a list such as `a, b, -2..4`; integers are padded to
/// cover counts of the programs' aggregates.
pub fn parse_universe(text: &str, programs: &[&Program]) -> Result<Universe, InputError> {
    let terms = parse_term_list(text).map_err(|e| InputError::Invalid(format!("universe: {}", e.message)))?;
    Universe::with_base(&terms, programs).map_err(|e| InputError::Invalid(format!("universe: {e}")))
}

/// A range `lo..hi` of integers.
pub fn parse_range(text: &str) -> Result<(i64, i64), InputError> {
    let bad = || InputError::Invalid(format!("expected a range lo..hi, found {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Induction instances, one per line as `N: formula`, where `N` is the
/// integer induction variable. Blank lines and `%` comments are skipped.
pub fn parse_ind_file(text: &str) -> Result<Vec<(Formula, Variable)>, InputError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('%').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (var, src) = line
            .split_once(':')
            .ok_or_else(|| InputError::Invalid(format!("line {}: expected `N: formula`", i + 1)))?;
        let n = Variable::integer(var.trim());
        let f = parse_formula(src, std::slice::from_ref(&n))
            .map_err(|e| InputError::Invalid(format!("line {}: {}", i + 1, e.message)))?;
        out.push((f, n));
    }
    Ok(out)
}

pub fn read_ind_file(path: &Path) -> Result<Vec<(Formula, Variable)>, InputError> {
    parse_ind_file(&read(path)?)
}
