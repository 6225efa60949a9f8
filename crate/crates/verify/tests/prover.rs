use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use mgc_verify::prover::{classify, run_prover, szs_status, ProverConfig, ProverStatus};

fn script(dir: &Path, name: &str, body: &str, timeout: Duration) -> ProverConfig {
    let p = dir.join(name);
    fs::write(&p, format!("{body}\n")).unwrap();
    let mut cfg = ProverConfig::new("/bin/sh", timeout);
    cfg.extra_args = vec![p.display().to_string()];
    cfg
}

fn problem(dir: &Path) -> PathBuf {
    let p = dir.join("problem.p");
    fs::write(&p, "tff(c, conjecture, $true).\n").unwrap();
    p
}

#[test]
fn status_lines() {
    assert_eq!(szs_status("% SZS status Theorem for problem"), Some("Theorem"));
    assert_eq!(szs_status("noise\n# SZS status CounterSatisfiable\n"), Some("CounterSatisfiable"));
    assert_eq!(szs_status("Refutation found."), None);
    assert_eq!(classify("Theorem"), ProverStatus::Theorem);
    assert_eq!(classify("Satisfiable"), ProverStatus::CounterSatisfiable);
    assert_eq!(classify("TimeOut"), ProverStatus::Timeout);
    assert_eq!(classify("ResourceOut"), ProverStatus::Timeout);
    assert_eq!(classify("theorem"), ProverStatus::Unknown);
    assert_eq!(classify("GaveUp"), ProverStatus::Unknown);
}

#[test]
fn theorem_reported_verbatim() {
    let d = tempfile::tempdir().unwrap();
    let cfg = script(d.path(), "prove", "echo \"% SZS status Theorem for $1\"", Duration::from_secs(10));
    let v = run_prover(&problem(d.path()), &cfg);
    assert_eq!(v.status, ProverStatus::Theorem);
    assert!(v.raw.contains("problem.p"));
}

#[test]
fn extra_args_precede_file() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = script(d.path(), "prove", "[ \"$1\" = \"--mode\" ] && [ \"$2\" = casc ] && echo '% SZS status Theorem'", Duration::from_secs(10));
    cfg.extra_args.extend(["--mode".into(), "casc".into()]);
    assert_eq!(run_prover(&problem(d.path()), &cfg).status, ProverStatus::Theorem);
}

#[test]
fn counter_satisfiable() {
    let d = tempfile::tempdir().unwrap();
    let cfg = script(d.path(), "prove", "echo '% SZS status CounterSatisfiable for x'", Duration::from_secs(10));
    let v = run_prover(&problem(d.path()), &cfg);
    assert_eq!(v.status, ProverStatus::CounterSatisfiable);
}

#[test]
fn forced_timeout() {
    let d = tempfile::tempdir().unwrap();
    let cfg = script(d.path(), "prove", "exec sleep 5", Duration::from_millis(1));
    let v = run_prover(&problem(d.path()), &cfg);
    assert_eq!(v.status, ProverStatus::Timeout);
    assert!(v.elapsed_ms < 4000);
}

#[test]
fn timeout_with_lingering_child() {
    let d = tempfile::tempdir().unwrap();
    let cfg = script(d.path(), "prove", "sleep 5; echo '% SZS status Theorem'", Duration::from_millis(50));
    let v = run_prover(&problem(d.path()), &cfg);
    assert_eq!(v.status, ProverStatus::Timeout);
    assert!(v.elapsed_ms < 4000);
}

#[test]
fn missing_binary() {
    let d = tempfile::tempdir().unwrap();
    let v = run_prover(&problem(d.path()), &ProverConfig::new(d.path().join("nope"), Duration::from_secs(1)));
    assert_eq!(v.status, ProverStatus::Error);
    assert!(v.message.unwrap().contains("prover binary missing"));
}

#[test]
fn unparseable_failure_keeps_output() {
    let d = tempfile::tempdir().unwrap();
    let cfg = script(d.path(), "prove", "echo 'parse error at line 1' >&2; exit 4", Duration::from_secs(10));
    let v = run_prover(&problem(d.path()), &cfg);
    assert_eq!(v.status, ProverStatus::Error);
    assert!(v.raw.contains("parse error at line 1"));
}

#[test]
fn silent_success_is_unknown() {
    let d = tempfile::tempdir().unwrap();
    let cfg = script(d.path(), "prove", "echo done", Duration::from_secs(10));
    let v = run_prover(&problem(d.path()), &cfg);
    assert_eq!(v.status, ProverStatus::Unknown);
}
