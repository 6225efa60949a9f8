use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{BodyElement, Program};
use crate::term::PrecomputedTerm;

use super::{OracleError, Value};

/// Cap on the integer padding added around the atom base.
const MAX_PAD: i64 = 256;

/// A finite stand-in for the domain of precomputed terms.
///
/// `base` holds the terms that may occur as arguments of enumerated atoms.
/// `domain` is what general quantifiers range over; it contains `base` and
/// may extend its integers so that every count over base atoms is a
/// domain element. Integer quantifiers range over the numerals of `domain`,
/// which always form one contiguous window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    base: Vec<Value>,
    domain: Vec<Value>,
    window: Option<(i64, i64)>,
}

fn normalize(terms: impl IntoIterator<Item = Value>, pad: Option<(i64, i64)>) -> (Vec<Value>, Option<(i64, i64)>) {
    let set: BTreeSet<Value> = terms.into_iter().collect();
    let mut lo = set.iter().filter_map(Value::as_int).min();
    let mut hi = set.iter().filter_map(Value::as_int).max();
    if let Some((plo, phi)) = pad {
        lo = Some(lo.map_or(plo, |l| l.min(plo)));
        hi = Some(hi.map_or(phi, |h| h.max(phi)));
    }
    let window = lo.zip(hi);
    let mut out: Vec<Value> = Vec::new();
    if let Some((lo, hi)) = window {
        out.extend((lo..=hi).map(Value::Int));
    }
    out.extend(set.into_iter().filter(|v| !v.is_int()));
    (out, window)
}

impl Universe {
    /// Universe whose domain is exactly the given terms, with the integers
    /// filled in to a contiguous window.
    pub fn exact(terms: impl IntoIterator<Item = Value>) -> Self {
        let (base, window) = normalize(terms, None);
        Universe { domain: base.clone(), base, window }
    }

    /// Universe with the given atom base whose integer window is widened so
    /// that counts of up to `|base|^width` tuples are representable.
    pub fn padded(terms: impl IntoIterator<Item = Value>, width: usize) -> Self {
        let (base, window) = normalize(terms, None);
        if width == 0 {
            return Universe { domain: base.clone(), base, window };
        }
        let n = base.len() as i64;
        let mut c: i64 = 1;
        for _ in 0..width {
            c = c.saturating_mul(n).min(MAX_PAD);
        }
        let (domain, window) = normalize(base.iter().cloned(), Some((-(c + 1), c + 1)));
        Universe { base, domain, window }
    }

    pub fn from_terms(terms: &[PrecomputedTerm], width: usize) -> Result<Self, OracleError> {
        let vals = terms.iter().map(Value::try_from).collect::<Result<Vec<_>, _>>()?;
        Ok(Universe::padded(vals, width))
    }

    /// The default universe for a set of programs: their constants and the
    /// integers from -2 to max(3, #constants + 2).
    pub fn for_programs(programs: &[&Program]) -> Result<Self, OracleError> {
        let mut terms = BTreeSet::new();
        for p in programs {
            for c in p.constants() {
                terms.insert(Value::try_from(&c)?);
            }
        }
        let hi = 3.max(terms.len() as i64 + 2);
        terms.extend((-2..=hi).map(Value::Int));
        Ok(Universe::padded(terms, aggregate_width(programs)))
    }

    /// Like [`Universe::for_programs`] but with an explicit atom base.
    pub fn with_base(terms: &[PrecomputedTerm], programs: &[&Program]) -> Result<Self, OracleError> {
        Universe::from_terms(terms, aggregate_width(programs))
    }

    pub fn base(&self) -> &[Value] {
        &self.base
    }

    pub fn domain(&self) -> &[Value] {
        &self.domain
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn integers(&self) -> &[Value] {
        let n = self.window.map_or(0, |(lo, hi)| (hi - lo + 1) as usize);
        &self.domain[..n]
    }

    pub fn in_base(&self, v: &Value) -> bool {
        self.base.binary_search(v).is_ok()
    }

    pub fn is_padded(&self) -> bool {
        self.base.len() != self.domain.len()
    }
}

/// Largest tuple width of any aggregate element in the programs.
pub fn aggregate_width(programs: &[&Program]) -> usize {
    programs
        .iter()
        .flat_map(|p| p.rules.iter())
        .flat_map(|r| r.body.iter())
        .filter_map(|b| match b {
            BodyElement::Aggregate(a) => Some(a.element.variables.len()),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

fn write_values(f: &mut fmt::Formatter<'_>, vals: &[Value]) -> fmt::Result {
    f.write_str("{")?;
    let mut first = true;
    let mut i = 0;
    while i < vals.len() {
        if !first {
            f.write_str(", ")?;
        }
        first = false;
        if let Value::Int(lo) = vals[i] {
            let mut j = i;
            while j + 1 < vals.len() && vals[j + 1] == Value::Int(lo + (j + 1 - i) as i64) {
                j += 1;
            }
            if j > i + 1 {
                write!(f, "{lo}..{}", lo + (j - i) as i64)?;
                i = j + 1;
                continue;
            }
        }
        write!(f, "{}", vals[i])?;
        i += 1;
    }
    f.write_str("}")
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_values(f, &self.base)?;
        if self.is_padded() {
            f.write_str(" within ")?;
            write_values(f, &self.domain)?;
        }
        Ok(())
    }
}
