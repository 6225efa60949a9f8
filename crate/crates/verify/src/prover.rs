//! Running an external prover and reading its SZS status line.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

/// Environment variable naming the default prover binary.
pub const PROVER_ENV: &str = "MGC_VERIFY_PROVER";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProverStatus {
    Theorem,
    CounterSatisfiable,
    Timeout,
    Unknown,
    Error,
}

impl ProverStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ProverStatus::Theorem => "Theorem",
            ProverStatus::CounterSatisfiable => "CounterSatisfiable",
            ProverStatus::Timeout => "Timeout",
            ProverStatus::Unknown => "Unknown",
            ProverStatus::Error => "Error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverVerdict {
    pub status: ProverStatus,
    pub elapsed_ms: u64,
    /// Captured stdout followed by stderr.
    pub raw: String,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    pub binary: PathBuf,
    pub timeout: Duration,
    /// Passed before the problem file.
    pub extra_args: Vec<String>,
}

impl ProverConfig {
    pub fn new(binary: impl Into<PathBuf>, timeout: Duration) -> Self {
        ProverConfig { binary: binary.into(), timeout, extra_args: Vec::new() }
    }

    pub fn from_env(timeout: Duration) -> Option<Self> {
        std::env::var_os(PROVER_ENV).filter(|s| !s.is_empty()).map(|b| ProverConfig::new(b, timeout))
    }
}

/// The status word of the first `SZS status` line, if any.
pub fn szs_status(output: &str) -> Option<&str> {
    output.lines().find_map(|l| {
        let i = l.find("SZS status ")?;
        l[i + "SZS status ".len()..].split_whitespace().next()
    })
}

pub fn classify(status: &str) -> ProverStatus {
    match status {
        "Theorem" => ProverStatus::Theorem,
        "CounterSatisfiable" | "Satisfiable" => ProverStatus::CounterSatisfiable,
        "Timeout" | "TimeOut" | "ResourceOut" => ProverStatus::Timeout,
        _ => ProverStatus::Unknown,
    }
}

fn drain(mut r: impl Read + Send + 'static) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

pub fn run_prover(file: &Path, config: &ProverConfig) -> ProverVerdict {
    let start = Instant::now();
    let verdict = |status, raw: String, message: Option<String>| ProverVerdict {
        status,
        elapsed_ms: start.elapsed().as_millis() as u64,
        raw,
        message,
    };
    let mut child = match Command::new(&config.binary)
        .args(&config.extra_args)
        .arg(file)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return verdict(ProverStatus::Error, String::new(), Some(format!("prover binary missing: {}", config.binary.display())))
        }
        Err(e) => return verdict(ProverStatus::Error, String::new(), Some(format!("cannot start prover: {e}"))),
    };
    let out = drain(child.stdout.take().expect("piped"));
    let err = drain(child.stderr.take().expect("piped"));
    let exit = loop {
        match child.try_wait() {
            Ok(Some(s)) => break Some(s),
            Ok(None) => {}
            Err(e) => {
                let _ = child.kill();
                let _ = child.wait();
                return verdict(ProverStatus::Error, String::new(), Some(format!("waiting for prover: {e}")));
            }
        }
        if start.elapsed() >= config.timeout {
            let _ = child.kill();
            let _ = child.wait();
            break None;
        }
        thread::sleep(Duration::from_millis(2));
    };
    let Some(exit) = exit else {
        // descendants may still hold the pipes open, so readers are not joined
        return verdict(ProverStatus::Timeout, String::new(), Some(format!("killed after {} ms", config.timeout.as_millis())));
    };
    let mut raw = out.join().unwrap_or_default();
    raw.push_str(&err.join().unwrap_or_default());
    match szs_status(&raw) {
        Some(s) => {
            let status = classify(s);
            verdict(status, raw.clone(), (status == ProverStatus::Unknown).then(|| format!("SZS status {s}")))
        }
        None if !exit.success() => verdict(ProverStatus::Error, raw, Some(format!("prover exited with {exit} and no status line"))),
        None => verdict(ProverStatus::Unknown, raw, Some("no SZS status line".into())),
    }
}
