use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::format;

use super::family::{FamilyBody, FamilyKind};
use super::term::{FoTerm, Sort};
use super::FolError;
use crate::term::Relation;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Plain { name: String, arity: usize },
    Family(FamilyKind, Arc<FamilyBody>),
}

impl Symbol {
    pub fn plain(name: &str, arity: usize) -> Self {
        Symbol::Plain { name: name.into(), arity }
    }

    pub fn family(kind: FamilyKind, body: &Arc<FamilyBody>) -> Self {
        Symbol::Family(kind, body.clone())
    }

    pub fn arity(&self) -> usize {
        match self {
            Symbol::Plain { arity, .. } => *arity,
            Symbol::Family(kind, body) => body.arity(*kind),
        }
    }

    /// Sort of each argument position.
    pub fn argument_sorts(&self) -> Vec<Sort> {
        let mut sorts = alloc::vec![Sort::General; self.arity()];
        if let Symbol::Family(FamilyKind::Start, _) = self {
            if let Some(last) = sorts.last_mut() {
                *last = Sort::Integer;
            }
        }
        sorts
    }

    pub fn family_body(&self) -> Option<(FamilyKind, &Arc<FamilyBody>)> {
        match self {
            Symbol::Family(k, b) => Some((*k, b)),
            Symbol::Plain { .. } => None,
        }
    }

    /// A short readable name: `p/1`, or the family name.
    pub fn name(&self) -> String {
        match self {
            Symbol::Plain { name, arity } => format!("{name}/{arity}"),
            Symbol::Family(k, b) => b.name(*k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub symbol: Symbol,
    pub primed: bool,
}

impl Predicate {
    pub fn new(symbol: Symbol) -> Self {
        Predicate { symbol, primed: false }
    }

    pub fn primed(symbol: Symbol) -> Self {
        Predicate { symbol, primed: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Predicate,
    pub args: Vec<FoTerm>,
}

impl Atom {
    pub fn new(predicate: Predicate, args: Vec<FoTerm>) -> Result<Self, FolError> {
        let expected = predicate.symbol.arity();
        if args.len() != expected {
            return Err(FolError::ArityMismatch { symbol: predicate.symbol.name(), expected, found: args.len() });
        }
        for (t, s) in args.iter().zip(predicate.symbol.argument_sorts()) {
            if !t.sort().fits(s) {
                return Err(FolError::SortMismatch {
                    expected: s,
                    found: t.sort(),
                    context: format!("argument of {}", predicate.symbol.name()),
                });
            }
        }
        Ok(Atom { predicate, args })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Compare(FoTerm, Relation, FoTerm),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<super::Variable>, Box<Formula>),
    Exists(Vec<super::Variable>, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: Predicate, args: Vec<FoTerm>) -> Result<Self, FolError> {
        Ok(Formula::Atom(Atom::new(predicate, args)?))
    }

    pub fn plain_atom(name: &str, args: Vec<FoTerm>) -> Result<Self, FolError> {
        let arity = args.len();
        Self::atom(Predicate::new(Symbol::plain(name, arity)), args)
    }

    pub fn compare(lhs: FoTerm, relation: Relation, rhs: FoTerm) -> Self {
        Formula::Compare(lhs, relation, rhs)
    }

    pub fn eq(lhs: FoTerm, rhs: FoTerm) -> Self {
        Formula::Compare(lhs, Relation::Eq, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; the empty conjunction is ⊤ and singletons are unwrapped.
    pub fn and(mut fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    pub fn or(mut fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<super::Variable>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<super::Variable>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    /// Flatten a formula into its top-level conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(fs) => fs.iter().flat_map(|f| f.conjuncts()).collect(),
            Formula::True => Vec::new(),
            other => alloc::vec![other],
        }
    }
}
