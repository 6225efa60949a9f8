//! Human-readable and JSON renderings of oracle and verification results.

use std::fmt::Write;

use mgc_core::oracle::{GroundAtom, SeReport, SeVerdict, Universe};
use serde_json::{json, Value};

use crate::pipeline::VerifyReport;

fn atoms(set: &std::collections::BTreeSet<GroundAtom>) -> Value {
    Value::Array(set.iter().map(|a| Value::String(a.to_string())).collect())
}

pub fn oracle_json(report: &SeReport, universe: &Universe, elapsed_ms: u64) -> Value {
    let (verdict, ce) = match &report.verdict {
        SeVerdict::Equivalent => ("Equivalent", Value::Null),
        SeVerdict::Counterexample { pair, left, right } => (
            "Counterexample",
            json!({ "here": atoms(&pair.here), "there": atoms(&pair.there), "left": left, "right": right }),
        ),
    };
    json!({
        "verdict": verdict,
        "universe": universe.to_string(),
        "counterexample": ce,
        "atoms": report.atoms,
        "pairs_checked": report.pairs_checked.to_string(),
        "pairs_evaluated": report.pairs_evaluated,
        "warnings": report.warnings,
        "elapsed_ms": elapsed_ms,
    })
}

pub fn oracle_text(report: &SeReport, universe: &Universe, elapsed_ms: u64) -> String {
    let mut s = String::new();
    for w in &report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    let _ = writeln!(s, "universe: {universe}");
    let _ = writeln!(s, "atoms: {}", report.atoms);
    match &report.verdict {
        SeVerdict::Equivalent => {
            let _ = writeln!(s, "Equivalent over this universe");
        }
        SeVerdict::Counterexample { pair, left, right } => {
            let _ = writeln!(s, "Counterexample {pair}");
            let _ = writeln!(s, "  first program: {}", if *left { "satisfied" } else { "not satisfied" });
            let _ = writeln!(s, "  second program: {}", if *right { "satisfied" } else { "not satisfied" });
        }
    }
    let _ = writeln!(s, "pairs checked: {} ({} evaluated) in {elapsed_ms} ms", report.pairs_checked, report.pairs_evaluated);
    s
}

pub fn verify_json(r: &VerifyReport) -> Value {
    let oracle = r.oracle.as_ref().map_or(Value::Null, |o| oracle_json(o, &r.universe, 0));
    let prover = r.prover.as_ref().map_or(Value::Null, |p| {
        json!({ "status": p.status.as_str(), "elapsed_ms": p.elapsed_ms, "message": p.message, "raw": p.raw })
    });
    json!({
        "outcome": r.outcome.as_str(),
        "universe": r.universe.to_string(),
        "oracle": oracle,
        "prover": prover,
        "warnings": r.warnings,
        "elapsed_ms": r.elapsed_ms,
    })
}

pub fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    if let Some(o) = &r.oracle {
        match &o.verdict {
            SeVerdict::Equivalent => {
                let _ = writeln!(s, "oracle: no counterexample over {} ({} atoms)", r.universe, o.atoms);
            }
            SeVerdict::Counterexample { pair, .. } => {
                let _ = writeln!(s, "oracle: counterexample {pair}");
            }
        }
    }
    if let Some(p) = &r.prover {
        let _ = writeln!(s, "prover: {} after {} ms", p.status.as_str(), p.elapsed_ms);
    }
    let _ = writeln!(s, "{}", r.outcome.as_str());
    s
}
