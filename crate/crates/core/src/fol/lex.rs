use alloc::vec::Vec;

use super::formula::Formula;
use super::term::FoTerm;
use super::FolError;
use crate::term::Relation;

/// Lexicographic (X1,..,Xm) < (U1,..,Um) as a disjunction over the
/// first differing position. For m = 0 this is ⊥.
pub fn lex_less(xs: &[FoTerm], us: &[FoTerm]) -> Result<Formula, FolError> {
    if xs.len() != us.len() {
        return Err(FolError::LengthMismatch { left: xs.len(), right: us.len() });
    }
    let mut disjuncts = Vec::with_capacity(xs.len());
    for l in 0..xs.len() {
        let mut conj: Vec<Formula> = (0..l).map(|k| Formula::eq(xs[k].clone(), us[k].clone())).collect();
        conj.push(Formula::compare(xs[l].clone(), Relation::Lt, us[l].clone()));
        disjuncts.push(Formula::and(conj));
    }
    Ok(Formula::or(disjuncts))
}
