use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::term::{PrecomputedTerm, Relation};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(pub String);

impl Variable {
    pub fn new(name: &str) -> Self {
        Variable(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Precomputed(PrecomputedTerm),
    Variable(Variable),
    Abs(Box<Term>),
    Binary(BinaryOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn numeral(n: i64) -> Self {
        Term::Precomputed(PrecomputedTerm::from(n))
    }

    pub fn symbol(name: &str) -> Self {
        Term::Precomputed(PrecomputedTerm::symbol(name))
    }

    pub fn var(name: &str) -> Self {
        Term::Variable(Variable::new(name))
    }

    pub fn binary(op: BinaryOp, lhs: Term, rhs: Term) -> Self {
        Term::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn abs(t: Term) -> Self {
        Term::Abs(Box::new(t))
    }

    /// Variables in order of first occurrence, pushed onto `out` unless
    /// already present.
    pub fn collect_variables(&self, out: &mut Vec<Variable>) {
        match self {
            Term::Precomputed(_) => {}
            Term::Variable(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Abs(t) => t.collect_variables(out),
            Term::Binary(_, l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    pub fn contains_interval(&self) -> bool {
        match self {
            Term::Precomputed(_) | Term::Variable(_) => false,
            Term::Abs(t) => t.contains_interval(),
            Term::Binary(op, l, r) => {
                *op == BinaryOp::Interval || l.contains_interval() || r.contains_interval()
            }
        }
    }

    pub fn collect_constants(&self, out: &mut Vec<PrecomputedTerm>) {
        match self {
            Term::Precomputed(c) => {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
            Term::Variable(_) => {}
            Term::Abs(t) => t.collect_constants(out),
            Term::Binary(_, l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    None,
    Not,
    NotNot,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub sign: Sign,
    pub atom: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comparison {
    pub lhs: Term,
    pub relation: Relation,
    pub rhs: Term,
}

/// A literal or comparison allowed inside an aggregate element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionLiteral {
    Literal(Literal),
    Comparison(Comparison),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AggregateElement {
    pub variables: Vec<Variable>,
    pub condition: Vec<ConditionLiteral>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggregateRelation {
    AtLeast,
    AtMost,
    Exactly,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Aggregate {
    pub element: AggregateElement,
    pub relation: AggregateRelation,
    pub bound: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyElement {
    Literal(Literal),
    Comparison(Comparison),
    Aggregate(Aggregate),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Basic(Atom),
    Choice(Atom),
    Constraint,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyElement>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Literal {
    pub fn collect_variables(&self, out: &mut Vec<Variable>) {
        for t in &self.atom.args {
            t.collect_variables(out);
        }
    }
}

impl Comparison {
    pub fn collect_variables(&self, out: &mut Vec<Variable>) {
        self.lhs.collect_variables(out);
        self.rhs.collect_variables(out);
    }
}

impl ConditionLiteral {
    pub fn collect_variables(&self, out: &mut Vec<Variable>) {
        match self {
            ConditionLiteral::Literal(l) => l.collect_variables(out),
            ConditionLiteral::Comparison(c) => c.collect_variables(out),
        }
    }
}

impl AggregateElement {
    /// Variables of the condition L, first occurrence order.
    pub fn condition_variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        for c in &self.condition {
            c.collect_variables(&mut out);
        }
        out
    }
}

impl Rule {
    /// Every variable of the rule, first occurrence order (head first).
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        match &self.head {
            Head::Basic(a) | Head::Choice(a) => {
                for t in &a.args {
                    t.collect_variables(&mut out);
                }
            }
            Head::Constraint => {}
        }
        for b in &self.body {
            match b {
                BodyElement::Literal(l) => l.collect_variables(&mut out),
                BodyElement::Comparison(c) => c.collect_variables(&mut out),
                BodyElement::Aggregate(a) => {
                    for v in &a.element.variables {
                        if !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                    for c in &a.element.condition {
                        c.collect_variables(&mut out);
                    }
                    a.bound.collect_variables(&mut out);
                }
            }
        }
        out
    }

    pub fn constants(&self) -> Vec<PrecomputedTerm> {
        let mut out = Vec::new();
        let atom = |a: &Atom, out: &mut Vec<PrecomputedTerm>| {
            for t in &a.args {
                t.collect_constants(out);
            }
        };
        let cond = |c: &ConditionLiteral, out: &mut Vec<PrecomputedTerm>| match c {
            ConditionLiteral::Literal(l) => atom(&l.atom, out),
            ConditionLiteral::Comparison(c) => {
                c.lhs.collect_constants(out);
                c.rhs.collect_constants(out);
            }
        };
        if let Head::Basic(a) | Head::Choice(a) = &self.head {
            atom(a, &mut out);
        }
        for b in &self.body {
            match b {
                BodyElement::Literal(l) => atom(&l.atom, &mut out),
                BodyElement::Comparison(c) => {
                    c.lhs.collect_constants(&mut out);
                    c.rhs.collect_constants(&mut out);
                }
                BodyElement::Aggregate(a) => {
                    for c in &a.element.condition {
                        cond(c, &mut out);
                    }
                    a.bound.collect_constants(&mut out);
                }
            }
        }
        out
    }

    /// Predicate symbols (name, arity) occurring in the rule.
    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        let mut push = |a: &Atom| {
            let key = (a.predicate.clone(), a.arity());
            if !out.contains(&key) {
                out.push(key);
            }
        };
        if let Head::Basic(a) | Head::Choice(a) = &self.head {
            push(a);
        }
        for b in &self.body {
            match b {
                BodyElement::Literal(l) => push(&l.atom),
                BodyElement::Comparison(_) => {}
                BodyElement::Aggregate(a) => {
                    for c in &a.element.condition {
                        if let ConditionLiteral::Literal(l) = c {
                            push(&l.atom);
                        }
                    }
                }
            }
        }
        out
    }
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn constants(&self) -> Vec<PrecomputedTerm> {
        let mut out = Vec::new();
        for r in &self.rules {
            for c in r.constants() {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        for r in &self.rules {
            for p in r.predicates() {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}
