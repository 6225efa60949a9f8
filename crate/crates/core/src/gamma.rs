//! The γ translation into classical logic over primed signatures, the
//! persistence axioms 𝒜, and assembly of a complete HT#′ problem.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::axioms::{d0_axioms, d1_axioms, defs_axioms, ind_instance, start_monotonicity_ind, std_theory};
use crate::fol::{Atom, FamilyKind, FamilyRegistry, FoTerm, FolError, Formula, Predicate, Symbol, Variable};
use crate::syntax::Program;
use crate::translate::{simplify, tau_star_program, SimplifyOptions, TranslateError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GammaError {
    #[error("γ is undefined on ↔; lower equivalences first")]
    ContainsIff,
    #[error("input already contains primed symbol {0}")]
    AlreadyPrimed(String),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("symbol {0} is used but not declared")]
    Undeclared(String),
    #[error(transparent)]
    Fol(#[from] FolError),
}

pub fn gamma(f: &Formula) -> Result<Formula, GammaError> {
    if f.contains_iff() {
        return Err(GammaError::ContainsIff);
    }
    if f.contains_primed() {
        return Err(match f.prime() {
            Err(FolError::AlreadyPrimed(s)) => GammaError::AlreadyPrimed(s),
            _ => GammaError::AlreadyPrimed(String::new()),
        });
    }
    Ok(gamma_rec(f))
}

fn primed(f: &Formula) -> Formula {
    f.prime().expect("unprimed input")
}

fn gamma_rec(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Compare(..) => f.clone(),
        Formula::Not(g) => Formula::not(primed(g)),
        Formula::And(fs) => Formula::And(fs.iter().map(gamma_rec).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(gamma_rec).collect()),
        Formula::Implies(a, b) => Formula::And(vec![
            Formula::implies(gamma_rec(a), gamma_rec(b)),
            Formula::implies(primed(a), primed(b)),
        ]),
        Formula::Iff(..) => unreachable!("checked by gamma"),
        Formula::Forall(vs, g) => Formula::Forall(vs.clone(), gamma_rec(g).into()),
        Formula::Exists(vs, g) => Formula::Exists(vs.clone(), gamma_rec(g).into()),
    }
}

/// ∀X(p(X) → p′(X)) for one symbol.
pub fn a_axiom(symbol: &Symbol) -> Formula {
    let sorts = symbol.argument_sorts();
    let n = sorts.len();
    let vars: Vec<Variable> = sorts
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            crate::fol::Sort::Integer => Variable::integer("N"),
            crate::fol::Sort::General if n == 1 => Variable::general("X"),
            crate::fol::Sort::General => Variable::general(&format!("X{}", i + 1)),
        })
        .collect();
    let args: Vec<FoTerm> = vars.iter().map(FoTerm::var).collect();
    let plain = Formula::Atom(Atom { predicate: Predicate::new(symbol.clone()), args: args.clone() });
    let prime = Formula::Atom(Atom { predicate: Predicate::primed(symbol.clone()), args });
    Formula::forall(vars, Formula::implies(plain, prime))
}

pub fn a_axioms(symbols: &BTreeSet<Symbol>) -> Vec<Formula> {
    symbols.iter().map(a_axiom).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomRole {
    A,
    GammaInd,
    Std,
    GammaD0,
    GammaD1,
    GammaDefs,
}

impl AxiomRole {
    pub fn label(self) -> &'static str {
        match self {
            AxiomRole::A => "a",
            AxiomRole::GammaInd => "gamma_ind",
            AxiomRole::Std => "std",
            AxiomRole::GammaD0 => "gamma_d0",
            AxiomRole::GammaD1 => "gamma_d1",
            AxiomRole::GammaDefs => "gamma_defs",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedAxiom {
    pub name: String,
    pub role: AxiomRole,
    pub formula: Formula,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub axioms: Vec<NamedAxiom>,
    pub conjecture: Formula,
    pub families: FamilyRegistry,
    /// Every unprimed symbol the problem may mention.
    pub symbols: BTreeSet<Symbol>,
    pub left: Formula,
    pub right: Formula,
}

#[derive(Clone, Debug, Default)]
pub struct ProblemOptions {
    /// Emit γDefs instances for every integer r in this range.
    pub defs_range: Option<(i64, i64)>,
    /// User induction instances: formula and induction variable.
    pub ind: Vec<(Formula, Variable)>,
    /// Add the Start antitonicity induction instance per family.
    pub heuristic_ind: bool,
    /// Run the equality-eliminating simplifier on both translations.
    pub simplify: bool,
}

impl ProblemOptions {
    pub fn new() -> Self {
        ProblemOptions { heuristic_ind: true, ..Default::default() }
    }
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect()
}

pub fn symbol_label(symbol: &Symbol, registry: &FamilyRegistry) -> String {
    match symbol {
        Symbol::Plain { name, arity } => format!("{}_{arity}", sanitize(name)),
        Symbol::Family(k, b) => registry.name(*k, b),
    }
}

fn used_symbols(f: &Formula, out: &mut BTreeSet<Symbol>) {
    out.extend(f.symbols());
}

/// Assemble the classical problem whose theorem-hood establishes strong
/// equivalence of the two programs.
pub fn build_problem(p1: &Program, p2: &Program, opts: &ProblemOptions) -> Result<Problem, GammaError> {
    let mut left = tau_star_program(p1)?;
    let mut right = tau_star_program(p2)?;
    if opts.simplify {
        left = simplify(&left, SimplifyOptions::default());
        right = simplify(&right, SimplifyOptions::default());
    }
    let mut registry = FamilyRegistry::new();
    let mut symbols = BTreeSet::new();
    let mut sources: Vec<&Formula> = vec![&left, &right];
    for (f, _) in &opts.ind {
        sources.push(f);
    }
    for f in &sources {
        for b in f.families() {
            registry.register(&b);
        }
        used_symbols(f, &mut symbols);
    }
    for b in registry.families() {
        used_symbols(b.formula(), &mut symbols);
        for k in FamilyKind::ALL {
            symbols.insert(Symbol::Family(k, b.clone()));
        }
    }

    let mut axioms = Vec::new();
    let mut push = |role: AxiomRole, name: String, formula: Formula| axioms.push(NamedAxiom { name, role, formula });

    for s in &symbols {
        push(AxiomRole::A, format!("a_{}", symbol_label(s, &registry)), a_axiom(s));
    }
    for (k, (f, n)) in opts.ind.iter().enumerate() {
        push(AxiomRole::GammaInd, format!("gamma_ind_{k}"), gamma(&ind_instance(f, n))?);
    }
    if opts.heuristic_ind {
        for b in registry.families() {
            let name = format!("gamma_ind_{}", registry.name(FamilyKind::Start, b));
            push(AxiomRole::GammaInd, name, gamma(&start_monotonicity_ind(b))?);
        }
    }
    let mut constants = left.constants();
    constants.extend(right.constants());
    for (f, _) in &opts.ind {
        constants.extend(f.constants());
    }
    for b in registry.families() {
        constants.extend(b.formula().constants());
    }
    for (i, f) in std_theory(&constants).into_iter().enumerate() {
        push(AxiomRole::Std, format!("std_{i}"), f);
    }
    for b in registry.families() {
        let start = registry.name(FamilyKind::Start, b);
        for (i, f) in d0_axioms(b).into_iter().enumerate() {
            push(AxiomRole::GammaD0, format!("gamma_d0_{start}_{i}"), gamma(&f.lower_iff())?);
        }
        for (f, kind) in d1_axioms(b).into_iter().zip([FamilyKind::Atleast, FamilyKind::Atmost]) {
            let name = format!("gamma_d1_{}", registry.name(kind, b));
            push(AxiomRole::GammaD1, name, gamma(&f.lower_iff())?);
        }
        if let Some((lo, hi)) = opts.defs_range {
            for (i, f) in defs_axioms(b, lo, hi).into_iter().enumerate() {
                let kind = if i % 2 == 0 { FamilyKind::Atleast } else { FamilyKind::Atmost };
                let r = lo + (i / 2) as i64;
                let r = if r < 0 { format!("m{}", -r) } else { format!("{r}") };
                push(AxiomRole::GammaDefs, format!("gamma_defs_{}_{r}", registry.name(kind, b)), gamma(&f.lower_iff())?);
            }
        }
    }

    let g1 = gamma(&left)?;
    let g2 = gamma(&right)?;
    let conjecture = Formula::And(vec![Formula::implies(g1.clone(), g2.clone()), Formula::implies(g2, g1)]);

    let problem = Problem { axioms, conjecture, families: registry, symbols, left, right };
    validate(&problem)?;
    Ok(problem)
}

fn validate(p: &Problem) -> Result<(), GammaError> {
    let mut used = BTreeSet::new();
    used_symbols(&p.conjecture, &mut used);
    for a in &p.axioms {
        used_symbols(&a.formula, &mut used);
        if !a.formula.is_closed() {
            return Err(GammaError::Undeclared(format!("free variable in axiom {}", a.name)));
        }
    }
    if let Some(s) = used.iter().find(|s| !p.symbols.contains(*s)) {
        return Err(GammaError::Undeclared(s.name()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;
    use crate::syntax::parse_program;
    use alloc::string::ToString;

    fn g(src: &str) -> String {
        gamma(&parse_formula(src, &[]).unwrap()).unwrap().ascii().to_string()
    }

    #[test]
    fn gamma_clauses() {
        assert_eq!(g("not p(a)"), "not p'(a)");
        assert_eq!(g("p -> q"), "(p -> q) & (p' -> q')");
        assert_eq!(g("forall X p(X)"), "forall X p(X)");
        assert_eq!(g("forall X (X < a)"), "forall X (X < a)");
        assert!(matches!(gamma(&parse_formula("p <-> q", &[]).unwrap()), Err(GammaError::ContainsIff)));
        assert!(matches!(gamma(&parse_formula("p'", &[]).unwrap()), Err(GammaError::AlreadyPrimed(_))));
    }

    #[test]
    fn persistence_axioms() {
        assert_eq!(a_axiom(&Symbol::plain("p", 1)).ascii().to_string(), "forall X (p(X) -> p'(X))");
        assert_eq!(a_axiom(&Symbol::plain("q", 0)).ascii().to_string(), "q -> q'");
        let fam = crate::fol::parse_family_body("X; V : p(X, V)").unwrap();
        assert_eq!(
            a_axiom(&Symbol::Family(FamilyKind::Atleast, fam.clone())).ascii().to_string(),
            "forall X1 X2 (atleast{X; V : p(X, V)}(X1, X2) -> atleast'{X; V : p(X, V)}(X1, X2))"
        );
        assert_eq!(
            a_axiom(&Symbol::Family(FamilyKind::Start, fam)).ascii().to_string(),
            "forall X1 X2 N:int (start{X; V : p(X, V)}(X1, X2, N) -> start'{X; V : p(X, V)}(X1, X2, N))"
        );
    }

    #[test]
    fn problem_for_example_programs() {
        let a = parse_program("p(a). q(Y) :- count{X : p(X), X != a} = Y.").unwrap();
        let b = parse_program("p(a). q(Y - 1) :- count{X : p(X)} = Y.").unwrap();
        let p = build_problem(&a, &b, &ProblemOptions::new()).unwrap();
        assert_eq!(p.families.len(), 2);
        assert!(p.conjecture.is_closed());
        assert_eq!(p.axioms.iter().filter(|x| x.role == AxiomRole::GammaD0).count(), 6);
        assert_eq!(p.axioms.iter().filter(|x| x.role == AxiomRole::GammaD1).count(), 4);
        assert_eq!(p.axioms.iter().filter(|x| x.role == AxiomRole::A).count(), 2 + 6);
        let names: BTreeSet<_> = p.axioms.iter().map(|x| x.name.clone()).collect();
        assert_eq!(names.len(), p.axioms.len());
    }

    #[test]
    fn impure_program_rejected() {
        let a = parse_program("q(Y) :- count{X : p(X)} = Y, X > 0.").unwrap();
        assert!(matches!(build_problem(&a, &a, &ProblemOptions::new()), Err(GammaError::Translate(_))));
    }
}
