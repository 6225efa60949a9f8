use std::collections::BTreeSet;
use std::time::Instant;

use mgc_core::fol::{parse_family_body, parse_formula, FamilyKind, FoTerm, Formula};
use mgc_core::oracle::*;
use mgc_core::syntax::parse_program;

fn atom(s: &str) -> GroundAtom {
    match s.split_once('(') {
        None => GroundAtom::new(s, vec![]),
        Some((p, rest)) => {
            let args = rest.trim_end_matches(')').split(',').map(|a| match a.trim().parse::<i64>() {
                Ok(n) => Value::Int(n),
                Err(_) => Value::sym(a.trim()),
            });
            GroundAtom::new(p, args.collect())
        }
    }
}

fn set(xs: &[&str]) -> BTreeSet<GroundAtom> {
    xs.iter().map(|s| atom(s)).collect()
}

fn pair(h: &[&str], t: &[&str]) -> HTPair {
    HTPair::new(set(h), set(t)).unwrap()
}

fn vals(xs: &[&str]) -> Vec<Value> {
    xs.iter()
        .map(|a| match a.parse::<i64>() {
            Ok(n) => Value::Int(n),
            Err(_) => Value::sym(a),
        })
        .collect()
}

fn f(src: &str) -> Formula {
    parse_formula(src, &[]).unwrap()
}

const A: &str = "p(a). q(Y) :- count{X : p(X), X != a} = Y.";
const B: &str = "p(a). q(Y - 1) :- count{X : p(X)} = Y.";

#[test]
fn sigma0_evaluation() {
    assert_eq!(eval_sigma0_term(&FoTerm::binary(mgc_core::fol::ArithOp::Mul, FoTerm::int(2), FoTerm::int(2)).unwrap()).unwrap(), Value::Int(4));
    assert!(eval_sigma0_ground(&f("1 < a")).unwrap());
    assert!(eval_sigma0_ground(&f("a != b")).unwrap());
    assert!(!eval_sigma0_ground(&f("b < a")).unwrap());
}

#[test]
fn grounding_quantifiers() {
    let u = Universe::exact(vals(&["a", "b"]));
    let g = ground(&f("forall X p(X)"), &u).unwrap();
    assert!(ht_sat(&pair(&["p(a)", "p(b)"], &["p(a)", "p(b)"]), &g));
    assert!(!ht_sat(&pair(&["p(a)"], &["p(a)", "p(b)"]), &g));
    let u = Universe::exact(vals(&["0", "3"]));
    assert!(ht_sat(&HTPair::default(), &ground(&f("1 < 2"), &u).unwrap()));
    assert!(ht_sat(&HTPair::default(), &ground(&f("exists N:int (N > 2)"), &u).unwrap()));
    assert!(!ht_sat(&HTPair::default(), &ground(&f("exists N:int (N > 3)"), &u).unwrap()));
}

#[test]
fn ht_examples() {
    let u = Universe::exact(vec![]);
    let p = pair(&[], &["p"]);
    assert!(!ht_sat_formula(&p, &f("not q -> p"), &u).unwrap());
    assert!(ht_sat_formula(&p, &f("not p -> q"), &u).unwrap());
    assert!(ht_sat_formula(&pair(&["p"], &["p"]), &f("p"), &u).unwrap());
}

#[test]
fn aggregate_atoms() {
    let u = Universe::exact(vals(&["a", "b"]));
    let body = parse_family_body("X; : p(X)").unwrap();
    let at = |k, r: i64| body.atom(k, vec![FoTerm::int(r)]).unwrap();
    let pr = pair(&["p(a)"], &["p(a)"]);
    assert!(eval_agg_atom(&pr, &at(FamilyKind::Atleast, 1), &u).unwrap());
    assert!(eval_agg_atom(&HTPair::default(), &at(FamilyKind::Atleast, 0), &u).unwrap());
    assert!(!eval_agg_atom(&pr, &at(FamilyKind::Atmost, -1), &u).unwrap());
    // the counting route agrees
    for (h, t) in [(vec![], vec!["p(a)"]), (vec!["p(a)"], vec!["p(a)", "p(b)"])] {
        let pr = pair(&h, &t);
        for r in -1..=3 {
            for k in [FamilyKind::Atleast, FamilyKind::Atmost] {
                assert_eq!(eval_agg_atom(&pr, &at(k, r), &u).unwrap(), ht_sat_formula(&pr, &at(k, r), &u).unwrap(), "{k:?} {r} {pr}");
            }
        }
    }
}

#[test]
fn stable_model_examples() {
    let u = Universe::exact(vals(&["a", "b", "0", "1", "2"]));
    let t = Instant::now();
    let a = stable_models(&parse_program(A).unwrap(), &u).unwrap();
    assert_eq!(a.models, vec![set(&["p(a)", "q(0)"])]);
    let b = stable_models(&parse_program(B).unwrap(), &u).unwrap();
    assert_eq!(b.models, vec![set(&["p(a)", "q(0)"])]);
    assert!(t.elapsed().as_secs() < 5);
    let p = stable_models(&parse_program("p :- not q.").unwrap(), &u).unwrap();
    assert_eq!(p.models, vec![set(&["p"])]);
    let e = stable_models(&parse_program("").unwrap(), &u).unwrap();
    assert_eq!(e.models, vec![BTreeSet::new()]);
}

#[test]
fn strong_equivalence_examples() {
    let u = Universe::exact(vec![]);
    let r = check_strong_equivalence(&parse_program("p :- not q.").unwrap(), &parse_program("q :- not p.").unwrap(), &u).unwrap();
    assert_eq!(r.verdict, SeVerdict::Counterexample { pair: pair(&[], &["p"]), left: false, right: true });
    let pa = parse_program(A).unwrap();
    let pb = parse_program(B).unwrap();
    let u = Universe::padded(vals(&["a", "b", "0", "1", "2"]), aggregate_width(&[&pa, &pb]));
    assert_eq!(check_strong_equivalence(&pa, &pa, &u).unwrap().verdict, SeVerdict::Equivalent);
    let r = check_strong_equivalence(&pa, &pb, &u).unwrap();
    assert_eq!(r.verdict, SeVerdict::Equivalent);
    assert_eq!(r.pairs_checked, 3u128.pow(10));
}

#[test]
fn prime_interp_examples() {
    let u = Universe::exact(vec![]);
    let i = build_prime_interp(&pair(&[], &["p"]), &u);
    assert!(!i.holds(&atom("p"), false));
    assert!(i.holds(&atom("p"), true));
    assert!(i.satisfies(&f("p -> p'")).unwrap());
    let u = Universe::exact(vals(&["a"]));
    let g = check_gamma_lemma(&f("not p(a)"), &pair(&[], &["p(a)"]), &u).unwrap();
    assert_eq!(g, GammaAgreement { ht: false, classical: false });
    assert!(check_gamma_lemma(&Formula::True, &HTPair::default(), &u).unwrap().agrees());
}

#[test]
fn intro_programs_equivalent_on_wider_universe() {
    let pa = parse_program(A).unwrap();
    let pb = parse_program(B).unwrap();
    let u = Universe::padded(vals(&["a", "b", "-2", "-1", "0", "1", "2", "3", "4"]), 1);
    let t = Instant::now();
    let r = check_strong_equivalence(&pa, &pb, &u).unwrap();
    eprintln!("{:?} {} {} {:?}", t.elapsed(), r.pairs_checked, r.pairs_evaluated, r.warnings);
    assert_eq!(r.verdict, SeVerdict::Equivalent);
}
