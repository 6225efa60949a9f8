use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::format;

use super::family::FamilyBody;
use super::formula::{Atom, Formula, Predicate, Symbol};
use super::term::{FoTerm, Variable};
use super::FolError;
use crate::term::PrecomputedTerm;

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    /// True when `pred` holds for every free variable occurrence.
    pub fn all_free_vars(&self, pred: &mut impl FnMut(&Variable) -> bool) -> bool {
        self.all_free_in(&mut Vec::new(), pred)
    }

    pub fn has_free_var(&self, v: &Variable) -> bool {
        !self.all_free_vars(&mut |w| w != v)
    }

    fn all_free_in<'a>(&'a self, bound: &mut Vec<&'a Variable>, pred: &mut impl FnMut(&Variable) -> bool) -> bool {
        let mut term = |t: &FoTerm, bound: &Vec<&Variable>| t.all_vars(&mut |v| bound.contains(&v) || pred(v));
        match self {
            Formula::True | Formula::False => true,
            Formula::Atom(a) => a.args.iter().all(|t| term(t, bound)),
            Formula::Compare(l, _, r) => term(l, bound) && term(r, bound),
            Formula::Not(g) => g.all_free_in(bound, pred),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|g| g.all_free_in(bound, pred)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.all_free_in(bound, pred) && b.all_free_in(bound, pred),
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let n = bound.len();
                bound.extend(vs.iter());
                let ok = g.all_free_in(bound, pred);
                bound.truncate(n);
                ok
            }
        }
    }

    fn collect_free(&self, bound: &mut BTreeSet<Variable>, out: &mut BTreeSet<Variable>) {
        let term = |t: &FoTerm, bound: &BTreeSet<Variable>, out: &mut BTreeSet<Variable>| {
            t.all_vars(&mut |v| {
                if !bound.contains(v) && !out.contains(v) {
                    out.insert(v.clone());
                }
                true
            });
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.args.iter().for_each(|t| term(t, bound, out)),
            Formula::Compare(l, _, r) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| g.collect_free(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let added: Vec<Variable> = vs.iter().filter(|v| bound.insert((*v).clone())).cloned().collect();
                g.collect_free(bound, out);
                for v in added {
                    bound.remove(&v);
                }
            }
        }
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                for t in &a.args {
                    let mut vs = BTreeSet::new();
                    t.collect_vars(&mut vs);
                    out.extend(vs.into_iter().map(|v| v.name));
                }
            }
            Formula::Compare(l, _, r) => {
                let mut vs = BTreeSet::new();
                l.collect_vars(&mut vs);
                r.collect_vars(&mut vs);
                out.extend(vs.into_iter().map(|v| v.name));
            }
            Formula::Forall(vs, _) | Formula::Exists(vs, _) => out.extend(vs.iter().map(|v| v.name.clone())),
            _ => {}
        });
        out
    }

    /// Pre-order traversal of subformulas (family bodies are not entered).
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Compare(..) => {}
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit(f),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// ∀ over the free variables, in alphabetical order.
    pub fn universal_closure(&self) -> Formula {
        let free: Vec<Variable> = self.free_vars().into_iter().collect();
        Formula::forall(free, self.clone())
    }

    /// Simultaneous capture-avoiding substitution. Bound variables that
    /// would capture are renamed by appending primes (Y becomes Y').
    pub fn substitute(&self, map: &[(Variable, FoTerm)]) -> Result<Formula, FolError> {
        for (v, t) in map {
            if !t.sort().fits(v.sort) {
                return Err(FolError::SortMismatch {
                    expected: v.sort,
                    found: t.sort(),
                    context: format!("substitution for {}", v.name),
                });
            }
        }
        let m: BTreeMap<Variable, FoTerm> = map.iter().cloned().collect();
        Ok(subst(self, &m))
    }

    pub fn substitute_one(&self, v: &Variable, t: &FoTerm) -> Result<Formula, FolError> {
        self.substitute(&[(v.clone(), t.clone())])
    }

    pub fn contains_iff(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Iff(..)));
        found
    }

    pub fn contains_primed(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                found |= a.predicate.primed;
            }
        });
        found
    }

    /// Replace every intensional symbol p by p'.
    pub fn prime(&self) -> Result<Formula, FolError> {
        if let Some(name) = self.primed_symbol() {
            return Err(FolError::AlreadyPrimed(name));
        }
        Ok(self.map_atoms(&mut |a| {
            Formula::Atom(Atom { predicate: Predicate::primed(a.predicate.symbol.clone()), args: a.args.clone() })
        }))
    }

    fn primed_symbol(&self) -> Option<String> {
        let mut found = None;
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                if a.predicate.primed && found.is_none() {
                    found = Some(a.predicate.symbol.name());
                }
            }
        });
        found
    }

    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Compare(..) => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(vs, g) => Formula::Forall(vs.clone(), g.map_atoms(f).into()),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), g.map_atoms(f).into()),
        }
    }

    /// F ↔ G becomes (F → G) ∧ (G → F).
    pub fn lower_iff(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Compare(..) => self.clone(),
            Formula::Not(g) => Formula::not(g.lower_iff()),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.lower_iff()).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| g.lower_iff()).collect()),
            Formula::Implies(a, b) => Formula::implies(a.lower_iff(), b.lower_iff()),
            Formula::Iff(a, b) => {
                let (a, b) = (a.lower_iff(), b.lower_iff());
                Formula::And(alloc::vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b, a)])
            }
            Formula::Forall(vs, g) => Formula::Forall(vs.clone(), g.lower_iff().into()),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), g.lower_iff().into()),
        }
    }

    /// Unprimed symbols of all atoms.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.predicate.symbol.clone());
            }
        });
        out
    }

    /// Family bodies used by atoms of this formula, in order of first use.
    pub fn families(&self) -> Vec<Arc<FamilyBody>> {
        let mut out: Vec<Arc<FamilyBody>> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                if let Symbol::Family(_, b) = &a.predicate.symbol {
                    if !out.iter().any(|x| **x == **b) {
                        out.push(b.clone());
                    }
                }
            }
        });
        out
    }

    /// Object constants, including those inside family bodies.
    pub fn constants(&self) -> BTreeSet<PrecomputedTerm> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                for t in &a.args {
                    t.collect_constants(&mut out);
                }
                if let Symbol::Family(_, b) = &a.predicate.symbol {
                    out.extend(b.formula().constants());
                }
            }
            Formula::Compare(l, _, r) => {
                l.collect_constants(&mut out);
                r.collect_constants(&mut out);
            }
            _ => {}
        });
        out
    }
}

fn term_names(t: &FoTerm, out: &mut BTreeSet<String>) {
    let mut vs = BTreeSet::new();
    t.collect_vars(&mut vs);
    out.extend(vs.into_iter().map(|v| v.name));
}

fn subst_term(t: &FoTerm, m: &BTreeMap<Variable, FoTerm>) -> FoTerm {
    t.map_vars(&mut |v| m.get(v).cloned())
}

fn subst(f: &Formula, m: &BTreeMap<Variable, FoTerm>) -> Formula {
    if m.is_empty() {
        return f.clone();
    }
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| subst_term(t, m)).collect(),
        }),
        Formula::Compare(l, r, s) => Formula::Compare(subst_term(l, m), *r, subst_term(s, m)),
        Formula::Not(g) => Formula::not(subst(g, m)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| subst(g, m)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| subst(g, m)).collect()),
        Formula::Implies(a, b) => Formula::implies(subst(a, m), subst(b, m)),
        Formula::Iff(a, b) => Formula::iff(subst(a, m), subst(b, m)),
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let body_free = g.free_vars();
            let mut inner: BTreeMap<Variable, FoTerm> = m
                .iter()
                .filter(|(v, _)| !vs.contains(v) && body_free.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect();
            let mut incoming = BTreeSet::new();
            for t in inner.values() {
                term_names(t, &mut incoming);
            }
            let mut avoid: BTreeSet<String> = g.all_names();
            avoid.extend(incoming.iter().cloned());
            avoid.extend(vs.iter().map(|v| v.name.clone()));
            let mut new_vs = Vec::with_capacity(vs.len());
            for v in vs {
                if incoming.contains(&v.name) {
                    let mut name = format!("{}'", v.name);
                    while avoid.contains(&name) {
                        name.push('\'');
                    }
                    avoid.insert(name.clone());
                    let fresh = Variable::new(&name, v.sort);
                    inner.insert(v.clone(), FoTerm::Var(fresh.clone()));
                    new_vs.push(fresh);
                } else {
                    new_vs.push(v.clone());
                }
            }
            let body = subst(g, &inner);
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(new_vs, body.into())
            } else {
                Formula::Exists(new_vs, body.into())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn capture_is_avoided() {
        let x = Variable::general("X");
        let y = Variable::general("Y");
        let f = Formula::exists(
            vec![y.clone()],
            Formula::plain_atom("p", vec![FoTerm::var(&x), FoTerm::var(&y)]).unwrap(),
        );
        let g = f.substitute_one(&x, &FoTerm::var(&y)).unwrap();
        let y1 = Variable::general("Y'");
        assert_eq!(
            g,
            Formula::exists(vec![y1.clone()], Formula::plain_atom("p", vec![FoTerm::var(&y), FoTerm::var(&y1)]).unwrap())
        );
    }

    #[test]
    fn substitution_sort_error() {
        let n = Variable::integer("N");
        let f = Formula::eq(FoTerm::var(&n), FoTerm::int(0));
        assert!(f.substitute_one(&n, &FoTerm::symbol("a")).is_err());
        let x = Variable::general("X");
        let f = Formula::eq(FoTerm::var(&x), FoTerm::int(0));
        assert!(f.substitute_one(&x, &FoTerm::int(3)).is_ok());
    }

    #[test]
    fn prime_twice_fails() {
        let f = Formula::plain_atom("p", vec![]).unwrap();
        let g = f.prime().unwrap();
        assert!(g.contains_primed());
        assert!(matches!(g.prime(), Err(FolError::AlreadyPrimed(_))));
    }

    #[test]
    fn closure_is_alphabetical() {
        let f = Formula::plain_atom(
            "p",
            vec![FoTerm::var(&Variable::general("Z")), FoTerm::var(&Variable::general("Y"))],
        )
        .unwrap();
        match f.universal_closure() {
            Formula::Forall(vs, _) => {
                assert_eq!(vs, vec![Variable::general("Y"), Variable::general("Z")])
            }
            _ => panic!(),
        }
    }
}
