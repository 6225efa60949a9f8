use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// A precomputed term: a numeral, a symbolic constant, or some other
/// constant (written as a quoted string). The derived order puts all
/// numerals first, then symbols lexicographically, then the rest.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrecomputedTerm {
    Numeral(BigInt),
    Symbol(String),
    Other(String),
}

impl PrecomputedTerm {
    pub fn numeral(n: impl Into<BigInt>) -> Self {
        PrecomputedTerm::Numeral(n.into())
    }

    pub fn symbol(name: &str) -> Self {
        PrecomputedTerm::Symbol(name.into())
    }

    pub fn other(text: &str) -> Self {
        PrecomputedTerm::Other(text.into())
    }

    pub fn is_numeral(&self) -> bool {
        matches!(self, PrecomputedTerm::Numeral(_))
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            PrecomputedTerm::Numeral(n) => n.to_i64(),
            _ => None,
        }
    }
}

impl From<i64> for PrecomputedTerm {
    fn from(n: i64) -> Self {
        PrecomputedTerm::Numeral(n.into())
    }
}

impl fmt::Display for PrecomputedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecomputedTerm::Numeral(n) => write!(f, "{n}"),
            PrecomputedTerm::Symbol(s) => f.write_str(s),
            PrecomputedTerm::Other(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    if c == '"' || c == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("\"")
            }
        }
    }
}

/// Comparison relations shared by programs and first-order formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Eq,
        Relation::Ne,
        Relation::Lt,
        Relation::Gt,
        Relation::Le,
        Relation::Ge,
    ];

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Eq => ord == Ordering::Equal,
            Relation::Ne => ord != Ordering::Equal,
            Relation::Lt => ord == Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
            Relation::Le => ord != Ordering::Greater,
            Relation::Ge => ord != Ordering::Less,
        }
    }

    pub fn ascii(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "≠",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Le => "≤",
            Relation::Ge => "≥",
        }
    }
}
