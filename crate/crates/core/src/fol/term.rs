use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;

use super::FolError;
use crate::term::PrecomputedTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    General,
    Integer,
}

impl Sort {
    /// A term of sort `self` may stand where `target` is expected.
    pub fn fits(self, target: Sort) -> bool {
        self == target || target == Sort::General
    }
}

impl core::fmt::Display for Sort {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Sort::General => "general",
            Sort::Integer => "integer",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub name: String,
    pub sort: Sort,
}

impl Variable {
    pub fn new(name: &str, sort: Sort) -> Self {
        Variable { name: name.into(), sort }
    }

    pub fn general(name: &str) -> Self {
        Variable::new(name, Sort::General)
    }

    pub fn integer(name: &str) -> Self {
        Variable::new(name, Sort::Integer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoTerm {
    Constant(PrecomputedTerm),
    Var(Variable),
    Neg(Box<FoTerm>),
    Abs(Box<FoTerm>),
    Binary(ArithOp, Box<FoTerm>, Box<FoTerm>),
}

fn require_integer(t: &FoTerm, context: &str) -> Result<(), FolError> {
    match t.sort() {
        Sort::Integer => Ok(()),
        found => Err(FolError::SortMismatch { expected: Sort::Integer, found, context: context.into() }),
    }
}

impl FoTerm {
    pub fn var(v: &Variable) -> Self {
        FoTerm::Var(v.clone())
    }

    pub fn int(n: i64) -> Self {
        FoTerm::Constant(PrecomputedTerm::from(n))
    }

    pub fn symbol(name: &str) -> Self {
        FoTerm::Constant(PrecomputedTerm::symbol(name))
    }

    pub fn sort(&self) -> Sort {
        match self {
            FoTerm::Constant(PrecomputedTerm::Numeral(_)) => Sort::Integer,
            FoTerm::Constant(_) => Sort::General,
            FoTerm::Var(v) => v.sort,
            FoTerm::Neg(_) | FoTerm::Abs(_) | FoTerm::Binary(..) => Sort::Integer,
        }
    }

    pub fn abs(t: FoTerm) -> Result<Self, FolError> {
        require_integer(&t, "argument of |.|")?;
        Ok(FoTerm::Abs(Box::new(t)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: FoTerm) -> Result<Self, FolError> {
        require_integer(&t, "argument of unary minus")?;
        Ok(FoTerm::Neg(Box::new(t)))
    }

    pub fn binary(op: ArithOp, lhs: FoTerm, rhs: FoTerm) -> Result<Self, FolError> {
        require_integer(&lhs, "arithmetic operand")?;
        require_integer(&rhs, "arithmetic operand")?;
        Ok(FoTerm::Binary(op, Box::new(lhs), Box::new(rhs)))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            FoTerm::Constant(_) => {}
            FoTerm::Var(v) => {
                out.insert(v.clone());
            }
            FoTerm::Neg(t) | FoTerm::Abs(t) => t.collect_vars(out),
            FoTerm::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// True when `pred` holds for every variable occurrence.
    pub fn all_vars(&self, pred: &mut impl FnMut(&Variable) -> bool) -> bool {
        match self {
            FoTerm::Constant(_) => true,
            FoTerm::Var(v) => pred(v),
            FoTerm::Neg(t) | FoTerm::Abs(t) => t.all_vars(pred),
            FoTerm::Binary(_, l, r) => l.all_vars(pred) && r.all_vars(pred),
        }
    }

    pub fn contains_var(&self, v: &Variable) -> bool {
        match self {
            FoTerm::Constant(_) => false,
            FoTerm::Var(w) => w == v,
            FoTerm::Neg(t) | FoTerm::Abs(t) => t.contains_var(v),
            FoTerm::Binary(_, l, r) => l.contains_var(v) || r.contains_var(v),
        }
    }

    pub fn collect_constants(&self, out: &mut BTreeSet<PrecomputedTerm>) {
        match self {
            FoTerm::Constant(c) => {
                out.insert(c.clone());
            }
            FoTerm::Var(_) => {}
            FoTerm::Neg(t) | FoTerm::Abs(t) => t.collect_constants(out),
            FoTerm::Binary(_, l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
        }
    }

    /// Replace variables according to `f`, which returns `None` to keep one.
    pub fn map_vars(&self, f: &mut impl FnMut(&Variable) -> Option<FoTerm>) -> FoTerm {
        match self {
            FoTerm::Constant(_) => self.clone(),
            FoTerm::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            FoTerm::Neg(t) => FoTerm::Neg(Box::new(t.map_vars(f))),
            FoTerm::Abs(t) => FoTerm::Abs(Box::new(t.map_vars(f))),
            FoTerm::Binary(op, l, r) => FoTerm::Binary(*op, Box::new(l.map_vars(f)), Box::new(r.map_vars(f))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_are_checked() {
        let x = FoTerm::var(&Variable::general("X"));
        let i = FoTerm::var(&Variable::integer("I"));
        assert!(FoTerm::binary(ArithOp::Add, i.clone(), FoTerm::int(1)).is_ok());
        assert!(matches!(
            FoTerm::binary(ArithOp::Add, x.clone(), i),
            Err(FolError::SortMismatch { found: Sort::General, .. })
        ));
        assert!(FoTerm::abs(FoTerm::symbol("a")).is_err());
        assert_eq!(FoTerm::int(3).sort(), Sort::Integer);
        assert_eq!(x.sort(), Sort::General);
    }
}
