use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use sha2::{Digest, Sha256};

use super::formula::{Atom, Formula, Predicate, Symbol};
use super::term::{FoTerm, Sort, Variable};
use super::FolError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyKind {
    Atleast,
    Atmost,
    Start,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::Atleast, FamilyKind::Atmost, FamilyKind::Start];

    pub fn prefix(self) -> &'static str {
        match self {
            FamilyKind::Atleast => "atleast",
            FamilyKind::Atmost => "atmost",
            FamilyKind::Start => "start",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            FamilyKind::Atleast => "Atleast",
            FamilyKind::Atmost => "Atmost",
            FamilyKind::Start => "Start",
        }
    }
}

/// The data X; V : F that indexes a family of predicate symbols.
/// Two bodies are equal when they are alpha-equivalent.
#[derive(Clone, Debug)]
pub struct FamilyBody {
    bound: Vec<Variable>,
    params: Vec<Variable>,
    formula: Formula,
    canonical: String,
}

impl PartialEq for FamilyBody {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for FamilyBody {}

impl PartialOrd for FamilyBody {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FamilyBody {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical.cmp(&other.canonical)
    }
}

impl core::hash::Hash for FamilyBody {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.canonical.hash(state)
    }
}

fn has_extended_atoms(f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => a.predicate.primed || matches!(a.predicate.symbol, Symbol::Family(..)),
        Formula::True | Formula::False | Formula::Compare(..) => false,
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => has_extended_atoms(g),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().any(has_extended_atoms),
        Formula::Implies(a, b) | Formula::Iff(a, b) => has_extended_atoms(a) || has_extended_atoms(b),
    }
}

impl FamilyBody {
    pub fn new(bound: Vec<Variable>, params: Vec<Variable>, formula: Formula) -> Result<Arc<Self>, FolError> {
        let mut seen = BTreeSet::new();
        for v in bound.iter().chain(params.iter()) {
            if v.sort != Sort::General {
                return Err(FolError::InvalidFamily(format!("variable {} must be general", v.name)));
            }
            if !seen.insert(v.name.clone()) {
                return Err(FolError::InvalidFamily(format!("variable {} listed twice", v.name)));
            }
        }
        if bound.is_empty() {
            return Err(FolError::InvalidFamily("empty tuple of counted variables".into()));
        }
        let free = formula.free_vars();
        if let Some(v) = free.iter().find(|v| !bound.contains(v) && !params.contains(v)) {
            return Err(FolError::InvalidFamily(format!("free variable {} not among X or V", v.name)));
        }
        if has_extended_atoms(&formula) {
            return Err(FolError::InvalidFamily("body must not contain primed or family atoms".into()));
        }
        let canonical = canonical_form(&bound, &params, &formula);
        Ok(Arc::new(FamilyBody { bound, params, formula, canonical }))
    }

    pub fn bound(&self) -> &[Variable] {
        &self.bound
    }

    pub fn params(&self) -> &[Variable] {
        &self.params
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn arity(&self, kind: FamilyKind) -> usize {
        match kind {
            FamilyKind::Start => self.bound.len() + self.params.len() + 1,
            _ => self.params.len() + 1,
        }
    }

    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical.as_bytes());
        let mut out = String::with_capacity(64);
        for b in hash.iter() {
            let _ = write!(out, "{b:02x}");
        }
        out
    }

    /// Default name, such as `atleast_3f9a12`.
    pub fn name(&self, kind: FamilyKind) -> String {
        format!("{}_{}", kind.prefix(), &self.digest()[..6])
    }

    pub fn symbol(self: &Arc<Self>, kind: FamilyKind) -> Symbol {
        Symbol::Family(kind, self.clone())
    }

    /// The atom kind(args) of this family.
    pub fn atom(self: &Arc<Self>, kind: FamilyKind, args: Vec<FoTerm>) -> Result<Formula, FolError> {
        Ok(Formula::Atom(Atom::new(Predicate::new(self.symbol(kind)), args)?))
    }
}

fn canonical_form(bound: &[Variable], params: &[Variable], formula: &Formula) -> String {
    let mut names = BTreeMap::new();
    for (i, v) in bound.iter().enumerate() {
        names.insert(v.clone(), format!("x{i}"));
    }
    for (i, v) in params.iter().enumerate() {
        names.insert(v.clone(), format!("v{i}"));
    }
    let mut counter = 0usize;
    let normal = normalize(formula, &names, &mut counter);
    format!("{};{}:{}", bound.len(), params.len(), normal.ascii())
}

fn normalize(f: &Formula, names: &BTreeMap<Variable, String>, counter: &mut usize) -> Formula {
    let rename = |t: &FoTerm, names: &BTreeMap<Variable, String>| {
        t.map_vars(&mut |v| names.get(v).map(|n| FoTerm::Var(Variable::new(n, v.sort))))
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| rename(t, names)).collect(),
        }),
        Formula::Compare(l, r, m) => Formula::Compare(rename(l, names), *r, rename(m, names)),
        Formula::Not(g) => Formula::not(normalize(g, names, counter)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| normalize(g, names, counter)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| normalize(g, names, counter)).collect()),
        Formula::Implies(a, b) => Formula::implies(normalize(a, names, counter), normalize(b, names, counter)),
        Formula::Iff(a, b) => Formula::iff(normalize(a, names, counter), normalize(b, names, counter)),
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let mut inner = names.clone();
            let mut new_vs = Vec::new();
            for v in vs {
                let n = format!("b{counter}");
                *counter += 1;
                inner.insert(v.clone(), n.clone());
                new_vs.push(Variable::new(&n, v.sort));
            }
            let body = normalize(g, &inner, counter);
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(new_vs, body.into())
            } else {
                Formula::Exists(new_vs, body.into())
            }
        }
    }
}

/// Assigns each distinct family a unique name, lengthening the digest
/// suffix when two families share a prefix.
#[derive(Clone, Debug, Default)]
pub struct FamilyRegistry {
    families: Vec<Arc<FamilyBody>>,
    names: BTreeMap<String, String>,
}

impl FamilyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert if absent; returns the stored body.
    pub fn register(&mut self, body: &Arc<FamilyBody>) -> Arc<FamilyBody> {
        if let Some(existing) = self.families.iter().find(|b| ***b == **body) {
            return existing.clone();
        }
        self.families.push(body.clone());
        self.assign_names();
        body.clone()
    }

    fn assign_names(&mut self) {
        let digests: Vec<String> = self.families.iter().map(|b| b.digest()).collect();
        let mut len = 6;
        loop {
            let prefixes: BTreeSet<&str> = digests.iter().map(|d| &d[..len]).collect();
            if prefixes.len() == digests.len() || len == 64 {
                break;
            }
            len += 2;
        }
        self.names = self
            .families
            .iter()
            .zip(&digests)
            .map(|(b, d)| (b.canonical().to_string(), d[..len].to_string()))
            .collect();
    }

    pub fn families(&self) -> &[Arc<FamilyBody>] {
        &self.families
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn name(&self, kind: FamilyKind, body: &FamilyBody) -> String {
        match self.names.get(body.canonical()) {
            Some(suffix) => format!("{}_{suffix}", kind.prefix()),
            None => body.name(kind),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<(FamilyKind, Arc<FamilyBody>)> {
        for b in &self.families {
            for k in FamilyKind::ALL {
                if self.name(k, b) == name {
                    return Some((k, b.clone()));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(v: &Variable) -> Formula {
        Formula::plain_atom("p", vec![FoTerm::var(v)]).unwrap()
    }

    #[test]
    fn alpha_equivalent_bodies_share_a_name() {
        let x = Variable::general("X");
        let y = Variable::general("Y");
        let z = Variable::general("Z");
        let f1 = Formula::exists(vec![z.clone()], Formula::and(vec![Formula::eq(FoTerm::var(&z), FoTerm::var(&x)), p(&z)]));
        let f2 = Formula::exists(vec![x.clone()], Formula::and(vec![Formula::eq(FoTerm::var(&x), FoTerm::var(&y)), p(&x)]));
        let a = FamilyBody::new(vec![x.clone()], vec![], f1).unwrap();
        let b = FamilyBody::new(vec![y.clone()], vec![], f2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.name(FamilyKind::Atleast), b.name(FamilyKind::Atleast));
        let c = FamilyBody::new(vec![x.clone()], vec![], p(&x)).unwrap();
        assert_ne!(a, c);
        assert!(a.name(FamilyKind::Atleast).starts_with("atleast_"));
        assert_eq!(a.name(FamilyKind::Atleast).len(), "atleast_".len() + 6);
    }

    #[test]
    fn invalid_bodies_rejected() {
        let x = Variable::general("X");
        let y = Variable::general("Y");
        assert!(FamilyBody::new(vec![x.clone()], vec![], p(&y)).is_err());
        assert!(FamilyBody::new(vec![x.clone()], vec![x.clone()], p(&x)).is_err());
        assert!(FamilyBody::new(vec![Variable::integer("N")], vec![], Formula::True).is_err());
    }

    #[test]
    fn registry_deduplicates() {
        let x = Variable::general("X");
        let a = FamilyBody::new(vec![x.clone()], vec![], p(&x)).unwrap();
        let b = FamilyBody::new(vec![x.clone()], vec![], p(&x)).unwrap();
        let mut r = FamilyRegistry::new();
        r.register(&a);
        r.register(&b);
        assert_eq!(r.len(), 1);
        let name = r.name(FamilyKind::Atmost, &a);
        assert_eq!(r.lookup(&name), Some((FamilyKind::Atmost, a.clone())));
    }
}
