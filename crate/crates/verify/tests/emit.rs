use mgc_core::fol::FamilyKind;
use mgc_core::gamma::{build_problem, AxiomRole, ProblemOptions};
use mgc_core::syntax::{parse_program, Program};
use mgc_verify::tptp::{constant_name, emit_problem, variable_name};

const A: &str = include_str!("data/a.lp");
const B: &str = include_str!("data/b.lp");
const GOLDEN: &str = include_str!("golden/ab_problem.p");

fn prog(s: &str) -> Program {
    parse_program(s).unwrap()
}

fn emit(p1: &str, p2: &str, opts: &ProblemOptions) -> String {
    emit_problem(&build_problem(&prog(p1), &prog(p2), opts).unwrap()).unwrap()
}

fn lines_with<'a>(text: &'a str, role: &str) -> Vec<&'a str> {
    text.lines().filter(|l| l.contains(", axiom, ") && l.starts_with(&format!("tff({role}_"))).collect()
}

#[test]
fn ab_problem_matches_snapshot() {
    let text = emit(A, B, &ProblemOptions::new());
    assert_eq!(text, GOLDEN);
}

#[test]
fn ab_problem_groups() {
    let text = GOLDEN;
    assert_eq!(text.matches(", conjecture, ").count(), 1);
    assert_eq!(lines_with(text, "a").len(), 8);
    assert_eq!(lines_with(text, "gamma_d0").len(), 6);
    assert_eq!(lines_with(text, "gamma_d1").len(), 4);
    assert!(!lines_with(text, "std").is_empty());
    assert!(text.contains("tff(int_to_gen_type, type, int_to_gen: $int > general)."));
}

#[test]
fn emission_is_deterministic() {
    let opts = ProblemOptions { defs_range: Some((0, 2)), ..ProblemOptions::new() };
    let first = emit(A, B, &opts);
    for _ in 0..3 {
        assert_eq!(emit(A, B, &opts), first);
    }
    let again = emit_problem(&build_problem(&prog(A), &prog(B), &opts).unwrap()).unwrap();
    assert_eq!(again, first);
}

#[test]
fn empty_programs() {
    let text = emit("", "", &ProblemOptions::new());
    assert_eq!(text.matches(", conjecture, ").count(), 1);
    assert!(text.contains("tff(strong_equivalence, conjecture, (($true => $true) & ($true => $true)))."), "{text}");
}

#[test]
fn start_declaration_ends_with_integer() {
    let p = "r(Y) :- count{X, Z : s(X, Z)} = Y.";
    let pb = build_problem(&prog(p), &prog(p), &ProblemOptions::new()).unwrap();
    let text = emit_problem(&pb).unwrap();
    let body = pb.families.families()[0].clone();
    let start = pb.families.name(FamilyKind::Start, &body);
    let decl = format!("tff({start}_type, type, {start}: (general * general * $int) > $o).");
    assert!(text.contains(&decl), "{text}");
    assert!(text.contains(&format!("{start}_prime: (general * general * $int) > $o")));
}

#[test]
fn defs_and_induction_options() {
    let opts = ProblemOptions { defs_range: Some((0, 1)), heuristic_ind: false, ..ProblemOptions::new() };
    let pb = build_problem(&prog(A), &prog(B), &opts).unwrap();
    assert!(pb.axioms.iter().all(|a| a.role != AxiomRole::GammaInd));
    // two families, two bounds, two kinds
    assert_eq!(pb.axioms.iter().filter(|a| a.role == AxiomRole::GammaDefs).count(), 8);
    let text = emit_problem(&pb).unwrap();
    assert_eq!(lines_with(&text, "gamma_defs").len(), 8);
}

#[test]
fn names_are_tptp_safe() {
    assert_eq!(variable_name(&mgc_core::fol::Variable::general("X1")), "X1");
    assert!(variable_name(&mgc_core::fol::Variable::general("x")).starts_with(|c: char| c.is_ascii_uppercase()));
    assert_eq!(constant_name(&mgc_core::PrecomputedTerm::from(3)), "int_to_gen(3)");
    assert_eq!(constant_name(&mgc_core::PrecomputedTerm::from(-3)), "int_to_gen(-3)");
    let text = emit("p(\"hello world\").", "p(\"hello world\").", &ProblemOptions::new());
    for line in text.lines().filter(|l| l.starts_with("tff(")) {
        let name = &line[4..line.find(',').unwrap()];
        assert!(name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'), "{name}");
    }
}
