//! Acceptance criteria, one line of output per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use mgc_core::axioms::{d0_axioms, d1_axioms, defs_axioms};
use mgc_core::fol::{FamilyBody, Formula, Variable};
use mgc_core::gamma::{build_problem, ProblemOptions};
use mgc_core::oracle::{
    check_gamma_lemma, classical_sat_formula, ht_sat_formula, stable_models, GroundAtom, Grounder, Masks, SeChecker,
    SeOptions, SeVerdict, SubsetOrder, Universe, Value, H,
};
use mgc_core::syntax::{parse_program, parse_term, Program};
use mgc_core::translate::{tau_star_program, tau_star_rule};
use mgc_verify::pipeline::{verify, Outcome, VerifyOptions};
use mgc_verify::prover::{run_prover, ProverConfig, ProverStatus, PROVER_ENV};
use mgc_verify::tptp::emit_problem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PROGRAM_A: &str = "p(a). q(Y) :- count{X : p(X), X != a} = Y.";
const PROGRAM_B: &str = "p(a). q(Y - 1) :- count{X : p(X)} = Y.";

const GOLDEN_FACT: &str = "∀Z(Z = a → p(Z))";
const GOLDEN_RULE: &str = "∀Y Z(∃Z1(Z1 = Y ∧ Atleast^{X;}_{∃Z(Z = X ∧ p(Z)) ∧ ∃Z1 Z2(Z1 = X ∧ Z2 = a ∧ Z1 ≠ Z2)}(Z1)) ∧ \
∃Z2(Z2 = Y ∧ Atmost^{X;}_{∃Z(Z = X ∧ p(Z)) ∧ ∃Z1 Z2(Z1 = X ∧ Z2 = a ∧ Z1 ≠ Z2)}(Z2)) ∧ Z = Y → q(Z))";

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(30);
const LIMIT_3: Duration = Duration::from_secs(1);
const LIMIT_4: Duration = Duration::from_secs(5);
const LIMIT_5: Duration = Duration::from_secs(60);
const LIMIT_8: Duration = Duration::from_secs(60);
const LIMIT_9: Duration = Duration::from_secs(10);

const GAMMA_FORMULAS: usize = 1000;
const GAMMA_PAIRS_PER_FORMULA: usize = 10;
const GAMMA_DEPTH: usize = 4;
const SEED: u64 = 0x6d67_635f_6163_6365;

enum Status {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn prog(s: &str) -> Program {
    parse_program(s).unwrap()
}

fn timed(limit: Duration, start: Instant, detail: String, ok: bool) -> Status {
    let t = start.elapsed();
    if !ok {
        Status::Fail(detail)
    } else if t > limit {
        Status::Fail(format!("{detail}; took {:.2}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    } else {
        Status::Pass(detail)
    }
}

fn golden_translation() -> Status {
    let start = Instant::now();
    let a = prog(PROGRAM_A);
    let fact = tau_star_rule(&a.rules[0]).unwrap().to_string();
    let rule = tau_star_rule(&a.rules[1]).unwrap().to_string();
    if fact != GOLDEN_FACT {
        return Status::Fail(format!("fact translated to {fact}"));
    }
    if rule != GOLDEN_RULE {
        return Status::Fail(format!("rule translated to {rule}"));
    }
    let whole = tau_star_program(&a).unwrap();
    let ok = matches!(&whole, Formula::And(fs) if fs.len() == 2);
    timed(LIMIT_1, start, "fact and counting rule of program A match the snapshot".into(), ok)
}

fn intro_equivalence() -> Status {
    let start = Instant::now();
    let (a, b) = (prog(PROGRAM_A), prog(PROGRAM_B));
    let terms = mgc_core::syntax::parse_term_list("a, b, -2..4").unwrap();
    let u = Universe::with_base(&terms, &[&a, &b]).unwrap();
    let checker = match SeChecker::new(&a, &b, &u, SeOptions::default()) {
        Ok(c) => c,
        Err(e) => return Status::Fail(format!("oracle refused: {e}")),
    };
    let r = checker.run();
    let exhaustive = r.pairs_checked == 3u128.pow(r.atoms as u32);
    let detail = format!("{:?} over {u}, {} atoms, {} pairs", r.verdict, r.atoms, r.pairs_checked);
    timed(LIMIT_2, start, detail, r.verdict == SeVerdict::Equivalent && exhaustive)
}

fn non_equivalence() -> Status {
    let start = Instant::now();
    let (a, b) = (prog("p :- not q."), prog("q :- not p."));
    let u = Universe::for_programs(&[&a, &b]).unwrap();
    let r = SeChecker::new(&a, &b, &u, SeOptions::default()).unwrap().run();
    let p = GroundAtom::new("p", vec![]);
    let ok = matches!(&r.verdict, SeVerdict::Counterexample { pair, left: false, right: true }
        if pair.here.is_empty() && pair.there == BTreeSet::from([p.clone()]));
    let detail = match &r.verdict {
        SeVerdict::Counterexample { pair, .. } => format!("counterexample {pair}"),
        SeVerdict::Equivalent => "no counterexample".into(),
    };
    timed(LIMIT_3, start, detail, ok)
}

fn stable_model_sanity() -> Status {
    let start = Instant::now();
    let u = Universe::exact([Value::sym("a"), Value::sym("b"), Value::Int(0), Value::Int(1), Value::Int(2)]);
    let expected = vec![BTreeSet::from([GroundAtom::new("p", vec![Value::sym("a")]), GroundAtom::new("q", vec![Value::Int(0)])])];
    let mut ok = true;
    let mut seen = Vec::new();
    for src in [PROGRAM_A, PROGRAM_B] {
        let m = stable_models(&prog(src), &u).unwrap();
        ok &= m.models == expected;
        let shown: Vec<String> = m.models.iter().map(|s| format!("{:?}", s.iter().map(|a| a.to_string()).collect::<Vec<_>>())).collect();
        seen.push(shown.join(" "));
    }
    timed(LIMIT_4, start, format!("A: {}; B: {}", seen[0], seen[1]), ok)
}

fn corpus() -> Vec<(Formula, Vec<mgc_core::oracle::HTPair>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let u = small_universe();
    let atoms = ground_atoms(&u, &PREDICATES);
    (0..GAMMA_FORMULAS)
        .map(|_| {
            let f = random_formula(&mut rng, GAMMA_DEPTH);
            let pairs = (0..GAMMA_PAIRS_PER_FORMULA).map(|_| random_pair(&mut rng, &atoms)).collect();
            (f, pairs)
        })
        .collect()
}

fn gamma_correspondence(corpus: &[(Formula, Vec<mgc_core::oracle::HTPair>)]) -> Status {
    let start = Instant::now();
    let u = small_universe();
    let (mut checked, mut bad) = (0, 0);
    let mut first = None;
    for (f, pairs) in corpus {
        for pair in pairs {
            let g = check_gamma_lemma(f, pair, &u).unwrap();
            checked += 1;
            if !g.agrees() {
                bad += 1;
                first.get_or_insert_with(|| format!("{f} at {pair}"));
            }
        }
    }
    let mut detail = format!("{checked} formula/pair checks, {bad} disagreements");
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    timed(LIMIT_5, start, detail, bad == 0)
}

fn persistence(corpus: &[(Formula, Vec<mgc_core::oracle::HTPair>)]) -> Status {
    let start = Instant::now();
    let u = small_universe();
    let (mut premises, mut bad) = (0, 0);
    for (f, pairs) in corpus {
        for pair in pairs {
            if ht_sat_formula(pair, f, &u).unwrap() {
                premises += 1;
                if !classical_sat_formula(&pair.there, f, &u).unwrap() {
                    bad += 1;
                }
            }
        }
    }
    timed(LIMIT_5, start, format!("{premises} HT-satisfied pairs, {bad} not classically satisfied there"), bad == 0)
}

type Predicates = Vec<(&'static str, usize)>;

fn axiom_bodies() -> Vec<(std::sync::Arc<FamilyBody>, Predicates)> {
    let x = Variable::general("X");
    let v = Variable::general("V");
    let f = |s: &str, free: &[Variable]| mgc_core::fol::parse_formula(s, free).unwrap();
    let xv = [x.clone(), v.clone()];
    let one = |src: &str, preds: Vec<(&'static str, usize)>| (FamilyBody::new(vec![x.clone()], vec![], f(src, &xv)).unwrap(), preds);
    let two = |src: &str, preds: Vec<(&'static str, usize)>| (FamilyBody::new(vec![x.clone()], vec![v.clone()], f(src, &xv)).unwrap(), preds);
    vec![
        one("p(X)", vec![("p", 1)]),
        one("p(X) & not r", vec![("p", 1), ("r", 0)]),
        one("p(X) & (s(X) | r)", vec![("p", 1), ("s", 1), ("r", 0)]),
        one("p(X) & not not s(X)", vec![("p", 1), ("s", 1)]),
        one("p(X) & (s(X) -> r)", vec![("p", 1), ("s", 1), ("r", 0)]),
        two("p(X) & X != V", vec![("p", 1)]),
        two("p(X) & s(V)", vec![("p", 1), ("s", 1)]),
        two("p(X) & X < V", vec![("p", 1)]),
    ]
}

fn axiom_validity() -> Status {
    let start = Instant::now();
    let u = Universe::padded([Value::Int(0), Value::Int(1), Value::Int(2), Value::sym("a")], 1);
    let (mut instances, mut pairs, mut bad) = (0usize, 0u64, 0usize);
    let mut first = None;
    for (body, preds) in axiom_bodies() {
        let axioms: Vec<Formula> = d0_axioms(&body).into_iter().chain(d1_axioms(&body)).chain(defs_axioms(&body, 0, 3)).collect();
        let mut g = Grounder::new(&u);
        for (name, arity) in &preds {
            g.declare_predicate(name, *arity);
        }
        let roots: Vec<_> = axioms.iter().map(|f| g.ground(f).unwrap()).collect();
        let grounding = g.into_grounding(&roots);
        if let Some(w) = grounding.warnings.iter().find(|w| w.contains("truncated")) {
            return Status::Fail(w.clone());
        }
        let n = grounding.atoms.len();
        instances += axioms.len();
        let p = &grounding.program;
        let mut sc = p.scratch();
        for y in SubsetOrder::new(n) {
            for sub in SubsetOrder::new(y.count_ones() as usize) {
                let x = deposit(sub, y);
                p.eval(&Masks { here: x, there: y }, &mut sc);
                pairs += 1;
                for (i, f) in axioms.iter().enumerate() {
                    if p.root(&sc, i) & H == 0 {
                        bad += 1;
                        first.get_or_insert_with(|| format!("{f} fails at here={x:b} there={y:b} for {}", body.canonical()));
                    }
                }
            }
        }
    }
    let mut detail = format!("{instances} D0/D1/Defs sentences over {pairs} pairs, {bad} failures");
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    timed(Duration::MAX, start, detail, bad == 0)
}

fn deposit(bits: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut i = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if bits >> i & 1 == 1 {
            out |= low;
        }
        m &= m - 1;
        i += 1;
    }
    out
}

fn val_oracle() -> Status {
    let start = Instant::now();
    let u = Universe::padded((-3..=3).map(Value::Int).chain([Value::sym("a")]), 0);
    let l = leaves(-3, 3, &["a"]);
    let terms = all_ground_terms(3, &l);
    let short = all_ground_terms(2, &l).len();
    let mut bad = 0;
    let mut first = None;
    for (i, t) in terms.iter().enumerate() {
        let direct = direct_values(t);
        let candidates: Vec<Value> = if i < short {
            u.domain().iter().cloned().chain(direct.iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect()
        } else {
            let mut c: BTreeSet<Value> = (-4..=4).map(Value::Int).chain([Value::sym("a")]).collect();
            for v in &direct {
                c.insert(v.clone());
                if let Some(n) = v.as_int() {
                    c.extend([Value::Int(n - 1), Value::Int(n + 1)]);
                }
            }
            c.into_iter().collect()
        };
        if val_values(t, &u, &candidates) != direct {
            bad += 1;
            first.get_or_insert_with(|| t.to_string());
        }
    }
    let specific = [
        ("7/2", vec![3]),
        ("-7/2", vec![-3]),
        ("7\\2", vec![1]),
        ("-7\\2", vec![-1]),
        ("1..3", vec![1, 2, 3]),
        ("a-1", vec![]),
    ];
    let probe: Vec<Value> = (-10..=10).map(Value::Int).chain([Value::sym("a")]).collect();
    let mut specific_ok = true;
    for (src, want) in specific {
        let t = parse_term(src).unwrap();
        let want: BTreeSet<Value> = want.into_iter().map(Value::Int).collect();
        if val_values(&t, &u, &probe) != want || direct_values(&t) != want {
            specific_ok = false;
            first.get_or_insert_with(|| src.to_string());
        }
    }
    let mut detail = format!("{} ground terms of height <= 3, {bad} mismatches, fixed cases {}", terms.len(), if specific_ok { "agree" } else { "differ" });
    if let Some(t) = first {
        detail.push_str(&format!("; first: {t}"));
    }
    timed(LIMIT_8, start, detail, bad == 0 && specific_ok)
}

fn prover_path() -> Status {
    let Some(mut cfg) = ProverConfig::from_env(LIMIT_9) else {
        return Status::Skip(format!("{PROVER_ENV} not set"));
    };
    if let Ok(args) = std::env::var("MGC_VERIFY_PROVER_ARGS") {
        cfg.extra_args = args.split_whitespace().map(String::from).collect();
    }
    let dir = tempfile::tempdir().unwrap();
    let a = prog(PROGRAM_A);
    let b = prog(PROGRAM_B);
    let own = dir.path().join("self.p");
    std::fs::write(&own, emit_problem(&build_problem(&a, &a, &ProblemOptions::new()).unwrap()).unwrap()).unwrap();
    let start = Instant::now();
    let v = run_prover(&own, &cfg);
    if v.status != ProverStatus::Theorem || start.elapsed() > LIMIT_9 {
        return Status::Fail(format!("self-equivalence gave {} after {} ms", v.status.as_str(), v.elapsed_ms));
    }
    let ab = dir.path().join("ab.p");
    std::fs::write(&ab, emit_problem(&build_problem(&a, &b, &ProblemOptions::new()).unwrap()).unwrap()).unwrap();
    let w = run_prover(&ab, &cfg);
    if w.status == ProverStatus::Error {
        return Status::Fail(format!("prover rejected the A/B problem: {}", w.message.unwrap_or_default()));
    }
    let r = verify(&a, &b, &VerifyOptions { prover: Some(cfg), ..Default::default() }).unwrap();
    let ok = r.outcome != Outcome::CounterexampleFound;
    let detail = format!("self-equivalence Theorem in {} ms; A/B prover {}, verify {}", v.elapsed_ms, w.status.as_str(), r.outcome.as_str());
    if ok {
        Status::Pass(detail)
    } else {
        Status::Fail(detail)
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Box<dyn FnOnce() -> Status>);
    let mut criteria: Vec<Criterion> = vec![
        ("golden translation of program A", Box::new(golden_translation)),
        ("A and B strongly equivalent over {a, b, -2..4}", Box::new(intro_equivalence)),
        ("counterexample for p :- not q. vs q :- not p.", Box::new(non_equivalence)),
        ("stable models of A and B", Box::new(stable_model_sanity)),
    ];
    let shared = std::rc::Rc::new(corpus());
    let c5 = shared.clone();
    let c6 = shared.clone();
    criteria.push(("gamma correspondence on random formulas", Box::new(move || gamma_correspondence(&c5))));
    criteria.push(("persistence on random formulas", Box::new(move || persistence(&c6))));
    criteria.push(("D0, D1 and Defs hold in all standard pairs", Box::new(axiom_validity)));
    criteria.push(("val agrees with direct evaluation", Box::new(val_oracle)));
    criteria.push(("end-to-end prover path", Box::new(prover_path)));
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        if filter.as_ref().is_some_and(|f| f != &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let status = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match status {
            Status::Pass(d) => ("PASS", d),
            Status::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Status::Skip(d) => ("SKIP", d),
        };
        println!("criterion {n} {tag} {name} ({secs:.2}s): {detail}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
