use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use mgc_core::axioms::{d0_axioms, d1_axioms, defs_axioms};
use mgc_core::fol::parse_family_body;
use mgc_core::gamma::{build_problem, ProblemOptions};
use mgc_core::oracle::{stable_models, Universe};
use mgc_core::syntax::Program;
use mgc_core::translate::{simplify, tau_star_rule, SimplifyOptions};
use mgc_verify::input::{parse_range, parse_universe, read_ind_file, read_program};
use mgc_verify::pipeline::{default_universe, run_oracle, verify, VerifyOptions};
use mgc_verify::prover::{ProverConfig, PROVER_ENV};
use mgc_verify::report::{oracle_json, oracle_text, verify_json, verify_text};
use mgc_verify::tptp::emit_problem;

const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "mgc-verify", version, about = "Strong-equivalence checking for mini-gringo programs with counting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first-order translation of every rule
    Translate {
        file: PathBuf,
        #[arg(long)]
        simplify: bool,
    },
    /// Axioms for a predicate family
    Axioms {
        #[command(subcommand)]
        command: AxiomsCommand,
    },
    /// Search for an HT counterexample over a finite universe
    Oracle {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Stable models over a finite universe
    Models {
        file: PathBuf,
        #[arg(long)]
        universe: Option<String>,
    },
    /// Write the classical problem for an external prover
    Emit {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Oracle search, then the prover if no counterexample is found
    Verify {
        first: PathBuf,
        second: PathBuf,
        /// Prover binary; defaults to $MGC_VERIFY_PROVER
        #[arg(long, env = PROVER_ENV)]
        prover: Option<PathBuf>,
        /// Prover time limit in seconds
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Extra prover argument, placed before the problem file
        #[arg(long = "prover-arg", allow_hyphen_values = true)]
        prover_args: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        problem: ProblemArgs,
    },
}

#[derive(Subcommand)]
enum AxiomsCommand {
    /// Start recursion and the Atleast/Atmost axioms for a family body `X; V : F`
    Dump {
        family: String,
        /// Also print the fixed-bound definitions for r in lo..hi
        #[arg(long)]
        defs: Option<String>,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Comma-separated precomputed terms, ranges allowed: `a, b, -2..4`
    #[arg(long)]
    universe: Option<String>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long = "atom-limit", default_value_t = 24)]
    atom_limit: usize,
}

#[derive(Args)]
struct ProblemArgs {
    /// Fixed-bound definitions for every r in lo..hi
    #[arg(long = "with-defs")]
    with_defs: Option<String>,
    /// Induction instances, one `N: formula` per line
    #[arg(long)]
    ind: Option<PathBuf>,
    #[arg(long = "no-heuristic-ind")]
    no_heuristic_ind: bool,
    #[arg(long)]
    simplify: bool,
}

type Result<T> = std::result::Result<T, String>;

fn program(path: &Path) -> Result<Program> {
    read_program(path).map_err(|e| e.to_string())
}

fn problem_options(a: &ProblemArgs) -> Result<ProblemOptions> {
    let mut o = ProblemOptions::new();
    o.heuristic_ind = !a.no_heuristic_ind;
    o.simplify = a.simplify;
    if let Some(r) = &a.with_defs {
        o.defs_range = Some(parse_range(r).map_err(|e| e.to_string())?);
    }
    if let Some(p) = &a.ind {
        o.ind = read_ind_file(p).map_err(|e| e.to_string())?;
    }
    Ok(o)
}

fn universe(text: &Option<String>, programs: &[&Program]) -> Result<Universe> {
    match text {
        Some(t) => parse_universe(t, programs).map_err(|e| e.to_string()),
        None => match programs {
            [a, b] => default_universe(a, b),
            _ => Universe::for_programs(programs),
        }
        .map_err(|e| e.to_string()),
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Translate { file, simplify: simp } => {
            let p = program(&file)?;
            for rule in &p.rules {
                let mut f = tau_star_rule(rule).map_err(|e| e.to_string())?;
                if simp {
                    f = simplify(&f, SimplifyOptions::default());
                }
                println!("% {rule}");
                println!("{f}");
            }
            Ok(0)
        }
        Command::Axioms { command: AxiomsCommand::Dump { family, defs } } => {
            let body = parse_family_body(&family).map_err(|e| format!("family: {}", e.message))?;
            for f in d0_axioms(&body).into_iter().chain(d1_axioms(&body)) {
                println!("{f}");
            }
            if let Some(r) = defs {
                let (lo, hi) = parse_range(&r).map_err(|e| e.to_string())?;
                for f in defs_axioms(&body, lo, hi) {
                    println!("{f}");
                }
            }
            Ok(0)
        }
        Command::Oracle { first, second, search } => {
            let (p1, p2) = (program(&first)?, program(&second)?);
            let u = universe(&search.universe, &[&p1, &p2])?;
            let start = Instant::now();
            let r = run_oracle(&p1, &p2, &u, search.threads, search.atom_limit).map_err(|e| e.to_string())?;
            let ms = start.elapsed().as_millis() as u64;
            if search.json {
                println!("{}", serde_json::to_string_pretty(&oracle_json(&r, &u, ms)).expect("json"));
            } else {
                print!("{}", oracle_text(&r, &u, ms));
            }
            Ok(matches!(r.verdict, mgc_core::oracle::SeVerdict::Counterexample { .. }) as u8)
        }
        Command::Models { file, universe: text } => {
            let p = program(&file)?;
            let u = universe(&text, &[&p])?;
            let m = stable_models(&p, &u).map_err(|e| e.to_string())?;
            for w in &m.warnings {
                eprintln!("warning: {w}");
            }
            for model in &m.models {
                let atoms: Vec<String> = model.iter().map(|a| a.to_string()).collect();
                println!("{{{}}}", atoms.join(", "));
            }
            Ok(0)
        }
        Command::Emit { first, second, output, problem } => {
            let (p1, p2) = (program(&first)?, program(&second)?);
            let pb = build_problem(&p1, &p2, &problem_options(&problem)?).map_err(|e| e.to_string())?;
            let text = emit_problem(&pb).map_err(|e| e.to_string())?;
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Verify { first, second, prover, timeout, prover_args, search, problem } => {
            let (p1, p2) = (program(&first)?, program(&second)?);
            if !(timeout.is_finite() && timeout > 0.0) {
                return Err(format!("invalid timeout {timeout}"));
            }
            let prover = prover.map(|b| ProverConfig {
                binary: b,
                timeout: Duration::from_secs_f64(timeout),
                extra_args: prover_args,
            });
            let opts = VerifyOptions {
                universe: Some(universe(&search.universe, &[&p1, &p2])?),
                threads: search.threads,
                prover,
                problem: problem_options(&problem)?,
                atom_limit: search.atom_limit,
            };
            let r = verify(&p1, &p2, &opts).map_err(|e| e.to_string())?;
            if search.json {
                println!("{}", serde_json::to_string_pretty(&verify_json(&r)).expect("json"));
            } else {
                print!("{}", verify_text(&r));
            }
            Ok(r.outcome.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
