//! The translation τ* from mini-gringo rules with counting into
//! two-sorted first-order sentences.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::fol::{
    ArithOp, Atom, FamilyBody, FamilyKind, FoTerm, FolError, Formula, Predicate, Symbol, Variable,
};
use crate::syntax::{
    self, check_pure, classify_variables, desugar_count_eq, Aggregate, AggregateRelation, BinaryOp, BodyElement,
    Comparison, ConditionLiteral, Head, ImpurityError, Literal, Program, Rule, Sign, Term,
};
use crate::term::Relation;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error(transparent)]
    Impure(#[from] ImpurityError),
    #[error(transparent)]
    Fol(#[from] FolError),
}

/// Supplies variable names not yet used: `Z`, `Z1`, `Z2`, ... per prefix.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    taken: BTreeSet<String>,
}

impl FreshNames {
    pub fn new<I: IntoIterator<Item = String>>(taken: I) -> Self {
        FreshNames { taken: taken.into_iter().collect() }
    }

    pub fn reserve(&mut self, name: &str) {
        self.taken.insert(name.into());
    }

    /// `prefix` if free, else the first free `prefix<k>` with k ≥ 1.
    pub fn fresh(&mut self, prefix: &str) -> String {
        if self.taken.insert(prefix.into()) {
            return prefix.into();
        }
        self.fresh_indexed(prefix)
    }

    /// The first free `prefix<k>` with k ≥ 1.
    pub fn fresh_indexed(&mut self, prefix: &str) -> String {
        let mut k = 1usize;
        loop {
            let name = format!("{prefix}{k}");
            if self.taken.insert(name.clone()) {
                return name;
            }
            k += 1;
        }
    }

    pub fn general(&mut self, prefix: &str) -> Variable {
        Variable::general(&self.fresh(prefix))
    }

    pub fn integer(&mut self, prefix: &str) -> Variable {
        Variable::integer(&self.fresh(prefix))
    }

    /// `n` fresh general variables, numbered when `n > 1`.
    pub fn general_tuple(&mut self, prefix: &str, n: usize) -> Vec<Variable> {
        if n == 1 {
            return vec![self.general(prefix)];
        }
        (0..n).map(|_| Variable::general(&self.fresh_indexed(prefix))).collect()
    }
}

fn program_var(v: &syntax::Variable) -> Variable {
    Variable::general(v.name())
}

fn simple_term(t: &Term) -> Option<FoTerm> {
    match t {
        Term::Precomputed(c) => Some(FoTerm::Constant(c.clone())),
        Term::Variable(v) => Some(FoTerm::Var(program_var(v))),
        _ => None,
    }
}

fn v(x: &Variable) -> FoTerm {
    FoTerm::var(x)
}

fn int_op(op: ArithOp, a: FoTerm, b: FoTerm) -> FoTerm {
    FoTerm::binary(op, a, b).expect("integer operands")
}

fn abs(t: FoTerm) -> FoTerm {
    FoTerm::abs(t).expect("integer operand")
}

/// The formula val_t(Z) expressing that Z is one of the values of t.
pub fn val(t: &Term, z: &Variable) -> Formula {
    let mut taken = Vec::new();
    t.collect_variables(&mut taken);
    let mut fresh = FreshNames::new(taken.into_iter().map(|v| v.0));
    fresh.reserve(&z.name);
    val_with(t, z, &mut fresh)
}

pub fn val_with(t: &Term, z: &Variable, fresh: &mut FreshNames) -> Formula {
    if let Some(s) = simple_term(t) {
        return Formula::eq(v(z), s);
    }
    match t {
        Term::Abs(t1) => {
            let i = fresh.integer("I");
            let inner = val_with(t1, &i, fresh);
            Formula::exists(vec![i.clone()], Formula::and(vec![inner, Formula::eq(v(z), abs(v(&i)))]))
        }
        Term::Binary(op, t1, t2) => {
            let i = fresh.integer("I");
            let j = fresh.integer("J");
            let k = match op {
                BinaryOp::Div | BinaryOp::Mod | BinaryOp::Interval => Some(fresh.integer("K")),
                _ => None,
            };
            let vi = val_with(t1, &i, fresh);
            let vj = val_with(t2, &j, fresh);
            let (iv, jv) = (v(&i), v(&j));
            let mut conj = vec![vi, vj];
            let mut vars = vec![i.clone(), j.clone()];
            match op {
                BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul => {
                    let aop = match op {
                        BinaryOp::Add => ArithOp::Add,
                        BinaryOp::Sub => ArithOp::Sub,
                        _ => ArithOp::Mul,
                    };
                    conj.push(Formula::eq(v(z), int_op(aop, iv, jv)));
                }
                BinaryOp::Div | BinaryOp::Mod => {
                    let k = k.unwrap();
                    let kv = v(&k);
                    vars.push(k);
                    let abs_j = abs(jv.clone());
                    let abs_i = abs(iv.clone());
                    conj.push(Formula::compare(int_op(ArithOp::Mul, kv.clone(), abs_j.clone()), Relation::Le, abs_i.clone()));
                    conj.push(Formula::compare(
                        abs_i,
                        Relation::Lt,
                        int_op(ArithOp::Mul, int_op(ArithOp::Add, kv.clone(), FoTerm::int(1)), abs_j),
                    ));
                    let prod = int_op(ArithOp::Mul, iv.clone(), jv.clone());
                    let (pos, neg) = if *op == BinaryOp::Div {
                        (kv.clone(), FoTerm::neg(kv).unwrap())
                    } else {
                        let kj = int_op(ArithOp::Mul, kv, jv);
                        (int_op(ArithOp::Sub, iv.clone(), kj.clone()), int_op(ArithOp::Add, iv, kj))
                    };
                    conj.push(Formula::Or(vec![
                        Formula::and(vec![
                            Formula::compare(prod.clone(), Relation::Ge, FoTerm::int(0)),
                            Formula::eq(v(z), pos),
                        ]),
                        Formula::and(vec![Formula::compare(prod, Relation::Lt, FoTerm::int(0)), Formula::eq(v(z), neg)]),
                    ]));
                }
                BinaryOp::Interval => {
                    let k = k.unwrap();
                    let kv = v(&k);
                    vars.push(k);
                    conj.push(Formula::compare(iv, Relation::Le, kv.clone()));
                    conj.push(Formula::compare(kv.clone(), Relation::Le, jv));
                    conj.push(Formula::eq(v(z), kv));
                }
            }
            Formula::exists(vars, Formula::and(conj))
        }
        _ => unreachable!(),
    }
}

fn val_tuple(ts: &[Term], zs: &[Variable], fresh: &mut FreshNames) -> Vec<Formula> {
    ts.iter().zip(zs).map(|(t, z)| val_with(t, z, fresh)).collect()
}

fn plain_atom(name: &str, args: Vec<FoTerm>) -> Formula {
    let arity = args.len();
    Formula::Atom(Atom { predicate: Predicate::new(Symbol::plain(name, arity)), args })
}

fn tau_b_literal(l: &Literal, fresh: &mut FreshNames) -> Formula {
    let zs = fresh.general_tuple("Z", l.atom.arity());
    let mut conj = val_tuple(&l.atom.args, &zs, fresh);
    let atom = plain_atom(&l.atom.predicate, zs.iter().map(v).collect());
    conj.push(match l.sign {
        Sign::None => atom,
        Sign::Not => Formula::not(atom),
        Sign::NotNot => Formula::not(Formula::not(atom)),
    });
    Formula::exists(zs, Formula::and(conj))
}

fn tau_b_comparison(c: &Comparison, fresh: &mut FreshNames) -> Formula {
    let z1 = Variable::general(&fresh.fresh_indexed("Z"));
    let z2 = Variable::general(&fresh.fresh_indexed("Z"));
    let a = val_with(&c.lhs, &z1, fresh);
    let b = val_with(&c.rhs, &z2, fresh);
    Formula::exists(
        vec![z1.clone(), z2.clone()],
        Formula::and(vec![a, b, Formula::compare(v(&z1), c.relation, v(&z2))]),
    )
}

/// τ^B of a literal or comparison, with fresh names avoiding its variables.
pub fn tau_b(c: &ConditionLiteral) -> Formula {
    let mut taken = Vec::new();
    c.collect_variables(&mut taken);
    let mut fresh = FreshNames::new(taken.into_iter().map(|v| v.0));
    tau_b_condition(c, &mut fresh)
}

fn tau_b_condition(c: &ConditionLiteral, fresh: &mut FreshNames) -> Formula {
    match c {
        ConditionLiteral::Literal(l) => tau_b_literal(l, fresh),
        ConditionLiteral::Comparison(c) => tau_b_comparison(c, fresh),
    }
}

/// The family body X; V : ∃W τ^B(L) of an aggregate inside `rule`.
pub fn aggregate_family(agg: &Aggregate, rule: &Rule) -> Result<Arc<FamilyBody>, TranslateError> {
    let classes = classify_variables(rule);
    let occurring = agg.element.condition_variables();
    let params: Vec<Variable> = occurring.iter().filter(|x| classes.global.contains(*x)).map(program_var).collect();
    let local: Vec<Variable> = occurring
        .iter()
        .filter(|x| !classes.global.contains(*x) && !agg.element.variables.contains(x))
        .map(program_var)
        .collect();
    let bound: Vec<Variable> = agg.element.variables.iter().map(program_var).collect();
    let mut fresh = FreshNames::new(rule.variables().into_iter().map(|v| v.0));
    let conj: Vec<Formula> = agg.element.condition.iter().map(|c| tau_b_condition(c, &mut fresh)).collect();
    let body = Formula::exists(local, Formula::and(conj));
    Ok(FamilyBody::new(bound, params, body)?)
}

fn tau_aggregate(agg: &Aggregate, rule: &Rule, fresh: &mut FreshNames) -> Result<Formula, TranslateError> {
    let body = aggregate_family(agg, rule)?;
    let kind = match agg.relation {
        AggregateRelation::AtLeast => FamilyKind::Atleast,
        AggregateRelation::AtMost => FamilyKind::Atmost,
        AggregateRelation::Exactly => unreachable!("desugared"),
    };
    let c = fresh.general("Z");
    let bound = val_with(&agg.bound, &c, fresh);
    let mut args: Vec<FoTerm> = body.params().iter().map(v).collect();
    args.push(v(&c));
    let atom = body.atom(kind, args)?;
    Ok(Formula::exists(vec![c], Formula::and(vec![bound, atom])))
}

/// τ* of one rule. Rules with `count{..} = t` are desugared first.
pub fn tau_star_rule(rule: &Rule) -> Result<Formula, TranslateError> {
    check_pure(rule)?;
    let rule = desugar_count_eq(rule);
    let mut fresh = FreshNames::new(rule.variables().into_iter().map(|v| v.0));
    let head = match &rule.head {
        Head::Basic(a) | Head::Choice(a) => {
            let zs = fresh.general_tuple("Z", a.arity());
            Some((a, zs))
        }
        Head::Constraint => None,
    };
    let mut body = Vec::with_capacity(rule.body.len() + 1);
    for b in &rule.body {
        body.push(match b {
            BodyElement::Literal(l) => tau_b_literal(l, &mut fresh),
            BodyElement::Comparison(c) => tau_b_comparison(c, &mut fresh),
            BodyElement::Aggregate(a) => tau_aggregate(a, &rule, &mut fresh)?,
        });
    }
    let f = match head {
        None => Formula::not(Formula::and(body)),
        Some((a, zs)) => {
            body.extend(val_tuple(&a.args, &zs, &mut fresh));
            let atom = plain_atom(&a.predicate, zs.iter().map(v).collect());
            let consequent = if matches!(rule.head, Head::Choice(_)) {
                Formula::Or(vec![atom.clone(), Formula::not(atom)])
            } else {
                atom
            };
            if body.is_empty() {
                consequent
            } else {
                Formula::implies(Formula::and(body), consequent)
            }
        }
    };
    Ok(f.universal_closure())
}

/// Conjunction of τ* over the rules, in source order; ⊤ when empty.
pub fn tau_star_program(program: &Program) -> Result<Formula, TranslateError> {
    let fs = program.rules.iter().map(tau_star_rule).collect::<Result<Vec<_>, _>>()?;
    Ok(Formula::and(fs))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimplifyOptions {
    /// Also rewrite the formulas inside family bodies. This changes which
    /// family symbols occur.
    pub family_bodies: bool,
}

/// Eliminates quantified variables fixed by an equality and drops ⊤.
pub fn simplify(f: &Formula, opts: SimplifyOptions) -> Formula {
    simp(f, opts)
}

fn simp(f: &Formula, opts: SimplifyOptions) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Compare(..) => fold_compare(f),
        Formula::Atom(a) => match (&a.predicate.symbol, opts.family_bodies) {
            (Symbol::Family(kind, body), true) => {
                let inner = simp(body.formula(), opts);
                match FamilyBody::new(body.bound().to_vec(), body.params().to_vec(), inner) {
                    Ok(nb) => Formula::Atom(Atom {
                        predicate: Predicate { symbol: Symbol::Family(*kind, nb), primed: a.predicate.primed },
                        args: a.args.clone(),
                    }),
                    Err(_) => f.clone(),
                }
            }
            _ => f.clone(),
        },
        Formula::Not(g) => match simp(g, opts) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            g => Formula::not(g),
        },
        Formula::And(fs) => {
            let mut out = Vec::new();
            for g in fs {
                match simp(g, opts) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    Formula::And(hs) => out.extend(hs),
                    h => out.push(h),
                }
            }
            Formula::and(out)
        }
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for g in fs {
                match simp(g, opts) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    Formula::Or(hs) => out.extend(hs),
                    h => out.push(h),
                }
            }
            Formula::or(out)
        }
        Formula::Implies(a, b) => {
            let (a, b) = (simp(a, opts), simp(b, opts));
            match (&a, &b) {
                (Formula::True, _) => b,
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                _ => Formula::implies(a, b),
            }
        }
        Formula::Iff(a, b) => Formula::iff(simp(a, opts), simp(b, opts)),
        Formula::Exists(vs, body) => {
            let mut vars = vs.clone();
            let mut body = simp(body, opts);
            while let Some((x, t, rest)) = find_definition(&vars, &body) {
                vars.retain(|y| *y != x);
                body = simp(&rest.substitute_one(&x, &t).expect("sort checked"), opts);
            }
            let free = body.free_vars();
            vars.retain(|y| free.contains(y));
            Formula::exists(vars, body)
        }
        Formula::Forall(vs, body) => {
            let mut vars = vs.clone();
            let mut body = simp(body, opts);
            while let Formula::Implies(a, b) = &body {
                let Some((x, t, rest)) = find_definition(&vars, a) else { break };
                vars.retain(|y| *y != x);
                let g = Formula::implies(rest, (**b).clone());
                body = simp(&g.substitute_one(&x, &t).expect("sort checked"), opts);
            }
            let free = body.free_vars();
            vars.retain(|y| free.contains(y));
            Formula::forall(vars, body)
        }
    }
}

fn fold_compare(f: &Formula) -> Formula {
    match f {
        Formula::Compare(l, Relation::Eq, r) if l == r => Formula::True,
        _ => f.clone(),
    }
}

// A conjunct x = t (or t = x) with x among `vars`, t free of x and of a
// sort x can take. Returns x, t and the remaining conjunction.
fn find_definition(vars: &[Variable], body: &Formula) -> Option<(Variable, FoTerm, Formula)> {
    let conjuncts = body.conjuncts();
    for (i, c) in conjuncts.iter().enumerate() {
        let Formula::Compare(l, Relation::Eq, r) = c else { continue };
        for (side, other) in [(l, r), (r, l)] {
            let FoTerm::Var(x) = side else { continue };
            if !vars.contains(x) || other.contains_var(x) || !other.sort().fits(x.sort) {
                continue;
            }
            let rest: Vec<Formula> =
                conjuncts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| (*g).clone()).collect();
            return Some((x.clone(), other.clone(), Formula::and(rest)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_program, parse_rule, parse_term};
    use alloc::string::ToString;

    fn ascii(f: &Formula) -> String {
        f.ascii().to_string()
    }

    #[test]
    fn val_of_basic_terms() {
        let z = Variable::general("Z");
        assert_eq!(ascii(&val(&parse_term("a").unwrap(), &z)), "Z = a");
        assert_eq!(ascii(&val(&parse_term("Y - 1").unwrap(), &z)), "exists I:int J:int (I = Y & J = 1 & Z = I - J)");
        assert_eq!(
            ascii(&val(&parse_term("1..3").unwrap(), &z)),
            "exists I:int J:int K:int (I = 1 & J = 3 & I <= K & K <= J & Z = K)"
        );
    }

    #[test]
    fn fact_and_choice() {
        let f = tau_star_rule(&parse_rule("p(a).").unwrap()).unwrap();
        assert_eq!(ascii(&f), "forall Z (Z = a -> p(Z))");
        let f = tau_star_rule(&parse_rule("{q(X)} :- p(X).").unwrap()).unwrap();
        assert_eq!(ascii(&f), "forall X Z (exists Z1 (Z1 = X & p(Z1)) & Z = X -> q(Z) | not q(Z))");
        let f = tau_star_rule(&parse_rule(":- p(1).").unwrap()).unwrap();
        assert_eq!(ascii(&f), "not exists Z (Z = 1 & p(Z))");
    }

    #[test]
    fn program_a_rule_two() {
        let r = parse_rule("q(Y) :- count{X : p(X), X != a} = Y.").unwrap();
        let f = tau_star_rule(&r).unwrap();
        let fam = "{X; : exists Z (Z = X & p(Z)) & exists Z1 Z2 (Z1 = X & Z2 = a & Z1 != Z2)}";
        assert_eq!(
            ascii(&f),
            alloc::format!(
                "forall Y Z (exists Z1 (Z1 = Y & atleast{fam}(Z1)) & exists Z2 (Z2 = Y & atmost{fam}(Z2)) & Z = Y -> q(Z))"
            )
        );
        let s = simplify(&f, SimplifyOptions::default());
        assert_eq!(ascii(&s), alloc::format!("forall Y (atleast{fam}(Y) & atmost{fam}(Y) -> q(Y))"));
    }

    #[test]
    fn global_parameter_variables() {
        let r = parse_rule("q(V) :- r(V), count{X : p(X, V)} >= 1.").unwrap();
        let f = tau_star_rule(&r).unwrap();
        let fams = f.families();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].params(), &[Variable::general("V")]);
        assert_eq!(fams[0].arity(FamilyKind::Atleast), 2);
    }

    #[test]
    fn empty_program_is_true() {
        assert_eq!(tau_star_program(&parse_program("").unwrap()).unwrap(), Formula::True);
    }

    #[test]
    fn simplify_fact() {
        let f = tau_star_rule(&parse_rule("p(a).").unwrap()).unwrap();
        assert_eq!(ascii(&simplify(&f, SimplifyOptions::default())), "p(a)");
    }
}
