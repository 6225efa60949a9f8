//! Random generators and brute-force reference evaluators shared by the
//! property tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use mgc_core::fol::{FamilyBody, FamilyKind, FoTerm, Formula, Variable};
use mgc_core::oracle::{GroundAtom, HTPair, Universe, Value};
use mgc_core::syntax::{BinaryOp, Term};
use mgc_core::{PrecomputedTerm, Relation};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn gvar(name: &str) -> FoTerm {
    FoTerm::var(&Variable::general(name))
}

/// `{a, 0, 1}`, exact.
pub fn small_universe() -> Universe {
    Universe::exact([Value::sym("a"), Value::Int(0), Value::Int(1)])
}

/// Plain predicates used by the formula generator.
pub const PREDICATES: [(&str, usize); 3] = [("r", 0), ("p", 1), ("q", 2)];

pub fn families() -> Vec<Arc<FamilyBody>> {
    let x = Variable::general("X");
    let v = Variable::general("V");
    let p = |t| Formula::plain_atom("p", vec![t]).unwrap();
    let q = |s, t| Formula::plain_atom("q", vec![s, t]).unwrap();
    let r = Formula::plain_atom("r", vec![]).unwrap();
    vec![
        FamilyBody::new(vec![x.clone()], vec![], p(gvar("X"))).unwrap(),
        FamilyBody::new(vec![x.clone()], vec![v.clone()], q(gvar("X"), gvar("V"))).unwrap(),
        FamilyBody::new(vec![x.clone()], vec![], Formula::and(vec![p(gvar("X")), Formula::not(r.clone())])).unwrap(),
        FamilyBody::new(vec![x.clone()], vec![v], Formula::or(vec![q(gvar("V"), gvar("X")), r])).unwrap(),
    ]
}

/// All ground atoms of `preds` over the base of `u`.
pub fn ground_atoms(u: &Universe, preds: &[(&str, usize)]) -> Vec<GroundAtom> {
    let mut out = Vec::new();
    for &(name, arity) in preds {
        let mut tuples: Vec<Vec<Value>> = vec![vec![]];
        for _ in 0..arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| u.base().iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(v.clone());
                    t
                }))
                .collect();
        }
        out.extend(tuples.into_iter().map(|args| GroundAtom::new(name, args)));
    }
    out
}

pub fn random_pair<R: Rng>(rng: &mut R, atoms: &[GroundAtom]) -> HTPair {
    let mut here = BTreeSet::new();
    let mut there = BTreeSet::new();
    for a in atoms {
        match rng.random_range(0..3) {
            0 => {}
            1 => {
                there.insert(a.clone());
            }
            _ => {
                here.insert(a.clone());
                there.insert(a.clone());
            }
        }
    }
    HTPair::new(here, there).unwrap()
}

struct Gen<'a, R> {
    rng: &'a mut R,
    general: Vec<Variable>,
    integer: Vec<Variable>,
    fresh: usize,
    families: Vec<Arc<FamilyBody>>,
}

const CONSTANTS: [i64; 3] = [0, 1, 2];

impl<R: Rng> Gen<'_, R> {
    fn int_term(&mut self) -> FoTerm {
        if !self.integer.is_empty() && self.rng.random_bool(0.7) {
            let n = FoTerm::var(self.integer.choose(self.rng).unwrap());
            if self.rng.random_bool(0.2) {
                return FoTerm::binary(mgc_core::fol::ArithOp::Add, n, FoTerm::int(1)).unwrap();
            }
            return n;
        }
        FoTerm::int(*CONSTANTS.choose(self.rng).unwrap())
    }

    fn general_term(&mut self) -> FoTerm {
        match self.rng.random_range(0..10) {
            0..=5 if !self.general.is_empty() => FoTerm::var(self.general.choose(self.rng).unwrap()),
            6 | 7 => self.int_term(),
            8 => FoTerm::symbol("a"),
            _ => FoTerm::int(*CONSTANTS.choose(self.rng).unwrap()),
        }
    }

    fn atom(&mut self) -> Formula {
        match self.rng.random_range(0..10) {
            0..=5 => {
                let (name, arity) = *PREDICATES.choose(self.rng).unwrap();
                let args = (0..arity).map(|_| self.general_term()).collect();
                Formula::plain_atom(name, args).unwrap()
            }
            6 | 7 => {
                let rel = *Relation::ALL.choose(self.rng).unwrap();
                Formula::compare(self.general_term(), rel, self.general_term())
            }
            _ => {
                let body = self.families.choose(self.rng).unwrap().clone();
                let kind = *[FamilyKind::Atleast, FamilyKind::Atmost, FamilyKind::Start].choose(self.rng).unwrap();
                let mut args = Vec::new();
                if kind == FamilyKind::Start {
                    args.extend(body.bound().iter().map(|_| self.general_term()));
                }
                args.extend(body.params().iter().map(|_| self.general_term()));
                args.push(if kind == FamilyKind::Start || self.rng.random_bool(0.5) { self.int_term() } else { self.general_term() });
                body.atom(kind, args).unwrap()
            }
        }
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.random_bool(0.25) {
            return match self.rng.random_range(0..12) {
                0 => Formula::True,
                1 => Formula::False,
                _ => self.atom(),
            };
        }
        let d = depth - 1;
        match self.rng.random_range(0..8) {
            0 => Formula::not(self.formula(d)),
            1 => Formula::And(vec![self.formula(d), self.formula(d)]),
            2 => Formula::Or(vec![self.formula(d), self.formula(d)]),
            3 | 4 => Formula::implies(self.formula(d), self.formula(d)),
            5 => Formula::iff(self.formula(d), self.formula(d)),
            _ => {
                self.fresh += 1;
                let integer = self.rng.random_bool(0.3);
                let v = if integer {
                    Variable::integer(&format!("N{}", self.fresh))
                } else {
                    Variable::general(&format!("X{}", self.fresh))
                };
                let list = if integer { &mut self.integer } else { &mut self.general };
                list.push(v.clone());
                let body = self.formula(d);
                let list = if integer { &mut self.integer } else { &mut self.general };
                list.pop();
                if self.rng.random_bool(0.5) {
                    Formula::forall(vec![v], body)
                } else {
                    Formula::exists(vec![v], body)
                }
            }
        }
    }
}

/// A random closed formula over `r/0, p/1, q/2`, comparisons and the
/// counting families of [`families`], with connective depth at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    let mut g = Gen { rng, general: Vec::new(), integer: Vec::new(), fresh: 0, families: families() };
    let f = g.formula(depth);
    assert!(f.is_closed());
    f
}

pub fn random_ground_term<R: Rng>(rng: &mut R, height: usize, leaves: &[Term]) -> Term {
    if height <= 1 || rng.random_bool(0.3) {
        return leaves.choose(rng).unwrap().clone();
    }
    let ops = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Mod, BinaryOp::Interval];
    if rng.random_bool(0.1) {
        return Term::Abs(Box::new(random_ground_term(rng, height - 1, leaves)));
    }
    let op = *ops.choose(rng).unwrap();
    Term::binary(op, random_ground_term(rng, height - 1, leaves), random_ground_term(rng, height - 1, leaves))
}

/// Numerals in `lo..=hi` and the given symbols, as leaf terms.
pub fn leaves(lo: i64, hi: i64, symbols: &[&str]) -> Vec<Term> {
    (lo..=hi).map(Term::numeral).chain(symbols.iter().map(|s| Term::symbol(s))).collect()
}

/// Every ground term of height at most `height` over `leaves`.
pub fn all_ground_terms(height: usize, leaves: &[Term]) -> Vec<Term> {
    let mut terms = leaves.to_vec();
    for _ in 1..height {
        let prev = terms.clone();
        let mut next = prev.clone();
        for t in &prev {
            next.push(Term::Abs(Box::new(t.clone())));
        }
        for op in [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Mod, BinaryOp::Interval] {
            for a in &prev {
                for b in &prev {
                    next.push(Term::binary(op, a.clone(), b.clone()));
                }
            }
        }
        terms = next;
    }
    terms
}

fn ints(s: &BTreeSet<Value>) -> Vec<i64> {
    s.iter().filter_map(Value::as_int).collect()
}

/// Values of a ground term computed from the arithmetic directly.
pub fn direct_values(t: &Term) -> BTreeSet<Value> {
    match t {
        Term::Precomputed(c) => BTreeSet::from([Value::try_from(c).unwrap()]),
        Term::Variable(_) => panic!("not ground"),
        Term::Abs(a) => ints(&direct_values(a)).into_iter().map(|n| Value::Int(n.abs())).collect(),
        Term::Binary(op, a, b) => {
            let (xs, ys) = (ints(&direct_values(a)), ints(&direct_values(b)));
            let mut out = BTreeSet::new();
            for &x in &xs {
                for &y in &ys {
                    match op {
                        BinaryOp::Add => {
                            out.insert(Value::Int(x + y));
                        }
                        BinaryOp::Sub => {
                            out.insert(Value::Int(x - y));
                        }
                        BinaryOp::Mul => {
                            out.insert(Value::Int(x * y));
                        }
                        BinaryOp::Div if y != 0 => {
                            out.insert(Value::Int(x / y));
                        }
                        BinaryOp::Mod if y != 0 => {
                            out.insert(Value::Int(x % y));
                        }
                        BinaryOp::Interval => out.extend((x..=y).map(Value::Int)),
                        _ => {}
                    }
                }
            }
            out
        }
    }
}

pub fn value_term(v: &Value) -> FoTerm {
    FoTerm::Constant(v.to_term())
}

pub fn numeral(n: i64) -> PrecomputedTerm {
    PrecomputedTerm::from(n)
}

/// The candidates `z` for which the oracle makes `val(t, z)` true.
pub fn val_values(t: &Term, u: &Universe, candidates: &[Value]) -> BTreeSet<Value> {
    use mgc_core::oracle::{Grounder, Masks, T};
    let z = Variable::general("Z");
    let f = mgc_core::translate::val(t, &z);
    let mut g = Grounder::new(u);
    let roots: Vec<_> = candidates.iter().map(|c| g.ground_with(&f, &[(z.clone(), c.clone())]).unwrap()).collect();
    let grounding = g.into_grounding(&roots);
    let p = &grounding.program;
    let mut sc = p.scratch();
    p.eval(&Masks { here: 0, there: 0 }, &mut sc);
    candidates.iter().enumerate().filter(|(i, _)| p.root(&sc, *i) & T != 0).map(|(_, c)| c.clone()).collect()
}
