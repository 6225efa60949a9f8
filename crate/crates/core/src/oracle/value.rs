use alloc::string::ToString;
use alloc::sync::Arc;
use core::fmt;

use crate::term::PrecomputedTerm;

use super::OracleError;

/// A precomputed term in machine form. The order matches
/// [`PrecomputedTerm`]: integers, then symbols, then everything else.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Symbol(Arc<str>),
    Other(Arc<str>),
}

impl Value {
    pub fn sym(name: &str) -> Self {
        Value::Symbol(name.into())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_int(&self) -> bool {
        matches!(self, Value::Int(_))
    }

    pub fn to_term(&self) -> PrecomputedTerm {
        match self {
            Value::Int(n) => PrecomputedTerm::from(*n),
            Value::Symbol(s) => PrecomputedTerm::symbol(s),
            Value::Other(s) => PrecomputedTerm::other(s),
        }
    }
}

impl TryFrom<&PrecomputedTerm> for Value {
    type Error = OracleError;

    fn try_from(t: &PrecomputedTerm) -> Result<Self, OracleError> {
        Ok(match t {
            PrecomputedTerm::Numeral(_) => Value::Int(t.as_i64().ok_or_else(|| OracleError::NumeralRange(t.to_string()))?),
            PrecomputedTerm::Symbol(s) => Value::Symbol(s.as_str().into()),
            PrecomputedTerm::Other(s) => Value::Other(s.as_str().into()),
        })
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Symbol(s) => f.write_str(s),
            Value::Other(_) => write!(f, "{}", self.to_term()),
        }
    }
}
