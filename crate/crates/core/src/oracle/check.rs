use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::axioms::{exists_geq, exists_leq};
use crate::fol::{FamilyKind, FoTerm, Formula, Symbol};
use crate::gamma::gamma;
use crate::syntax::Program;
use crate::translate::tau_star_program;

use super::eval::{Compiled, Flags, Masks, Scratch, World, C, H, T};
use super::ground::{eval_term, AtomTable, GroundAtom, Grounder, Grounding};
use super::{OracleError, Universe, Value};

/// A propositional HT-interpretation: here-world `here` inside there-world `there`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct HTPair {
    pub here: BTreeSet<GroundAtom>,
    pub there: BTreeSet<GroundAtom>,
}

impl HTPair {
    pub fn new(here: BTreeSet<GroundAtom>, there: BTreeSet<GroundAtom>) -> Result<Self, OracleError> {
        if !here.is_subset(&there) {
            return Err(OracleError::NotSubset);
        }
        Ok(HTPair { here, there })
    }

    /// The total pair ⟨Y, Y⟩.
    pub fn total(there: BTreeSet<GroundAtom>) -> Self {
        HTPair { here: there.clone(), there }
    }

    fn flags(&self, atoms: &AtomTable) -> Flags {
        Flags {
            here: atoms.iter().map(|a| self.here.contains(a)).collect(),
            there: atoms.iter().map(|a| self.there.contains(a)).collect(),
        }
    }

    fn ground_for(&self, f: &Formula, u: &Universe) -> Result<(Grounding, Flags), OracleError> {
        let mut g = Grounder::new(u);
        for a in self.there.iter() {
            g.declare_atom(a);
        }
        let root = g.ground(f)?;
        let grounding = g.into_grounding(&[root]);
        let flags = self.flags(&grounding.atoms);
        Ok((grounding, flags))
    }
}

impl core::fmt::Display for HTPair {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let set = |f: &mut core::fmt::Formatter<'_>, s: &BTreeSet<GroundAtom>| {
            f.write_str("{")?;
            for (i, a) in s.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("}")
        };
        f.write_str("⟨")?;
        set(f, &self.here)?;
        f.write_str(", ")?;
        set(f, &self.there)?;
        f.write_str("⟩")
    }
}

fn bits<W: World>(p: &Compiled, w: &W, root: usize) -> u8 {
    let mut sc = p.scratch();
    p.eval(w, &mut sc);
    p.root(&sc, root)
}

impl Grounding {
    pub fn eval_pair(&self, pair: &HTPair, root: usize) -> u8 {
        bits(&self.program, &pair.flags(&self.atoms), root)
    }
}

/// Ground a closed formula over the universe; interpret it with [`ht_sat`].
pub fn ground(f: &Formula, u: &Universe) -> Result<Grounding, OracleError> {
    let mut g = Grounder::new(u);
    let root = g.ground(f)?;
    Ok(g.into_grounding(&[root]))
}

/// HT satisfaction of the first root of a grounding.
pub fn ht_sat(pair: &HTPair, g: &Grounding) -> bool {
    g.eval_pair(pair, 0) & H != 0
}

/// Classical satisfaction of the first root by a set of atoms.
pub fn classical_sat(y: &BTreeSet<GroundAtom>, g: &Grounding) -> bool {
    g.eval_pair(&HTPair::total(y.clone()), 0) & T != 0
}

/// Ground `f` and decide ⟨X,Y⟩ ⊨ht f.
pub fn ht_sat_formula(pair: &HTPair, f: &Formula, u: &Universe) -> Result<bool, OracleError> {
    let (g, w) = pair.ground_for(f, u)?;
    Ok(bits(&g.program, &w, 0) & H != 0)
}

/// Classical Y ⊨ f.
pub fn classical_sat_formula(y: &BTreeSet<GroundAtom>, f: &Formula, u: &Universe) -> Result<bool, OracleError> {
    let pair = HTPair::total(y.clone());
    let (g, w) = pair.ground_for(f, u)?;
    Ok(bits(&g.program, &w, 0) & T != 0)
}

/// Value of a ground σ0 term.
pub fn eval_sigma0_term(t: &FoTerm) -> Result<Value, OracleError> {
    eval_term(t, &Vec::new())
}

/// Truth of a closed quantifier-free σ0 formula.
pub fn eval_sigma0_ground(f: &Formula) -> Result<bool, OracleError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Compare(l, r, m) => r.holds(eval_sigma0_term(l)?.cmp(&eval_sigma0_term(m)?)),
        Formula::Not(g) => !eval_sigma0_ground(g)?,
        Formula::And(fs) => {
            for g in fs {
                if !eval_sigma0_ground(g)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_sigma0_ground(g)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_sigma0_ground(a)? || eval_sigma0_ground(b)?,
        Formula::Iff(a, b) => eval_sigma0_ground(a)? == eval_sigma0_ground(b)?,
        _ => return Err(OracleError::Unsupported("not a quantifier-free σ0 formula".into())),
    })
}

/// Decide a ground Atleast/Atmost atom in ⟨X,Y⟩ by expanding it into its
/// counting formula and evaluating that.
pub fn eval_agg_atom(pair: &HTPair, atom: &Formula, u: &Universe) -> Result<bool, OracleError> {
    let Formula::Atom(a) = atom else {
        return Err(OracleError::NotFamilyAtom);
    };
    let Symbol::Family(kind, body) = &a.predicate.symbol else {
        return Err(OracleError::NotFamilyAtom);
    };
    if *kind == FamilyKind::Start || a.predicate.primed {
        return Err(OracleError::NotFamilyAtom);
    }
    let env = Vec::new();
    let vals = a.args.iter().map(|t| eval_term(t, &env)).collect::<Result<Vec<_>, _>>()?;
    let m = body.params().len();
    let subst: Vec<_> = body.params().iter().cloned().zip(vals[..m].iter().map(|v| FoTerm::Constant(v.to_term()))).collect();
    let f = body.formula().substitute(&subst)?;
    let r = vals[m].to_term();
    let expansion = match kind {
        FamilyKind::Atleast => exists_geq(&r, body.bound(), &f),
        _ => exists_leq(&r, body.bound(), &f),
    };
    ht_sat_formula(pair, &expansion, u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeOptions {
    /// Refuse to enumerate more atoms than this.
    pub atom_limit: usize,
}

impl Default for SeOptions {
    fn default() -> Self {
        SeOptions { atom_limit: 24 }
    }
}

/// Iterates the k-subsets of 0..n in lexicographic order, for k = 0..=n.
#[derive(Clone, Debug)]
pub struct SubsetOrder {
    n: usize,
    k: usize,
    idx: Vec<usize>,
    done: bool,
}

impl SubsetOrder {
    pub fn new(n: usize) -> Self {
        SubsetOrder { n, k: 0, idx: Vec::new(), done: false }
    }
}

impl Iterator for SubsetOrder {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let mask = self.idx.iter().fold(0u64, |m, &i| m | 1 << i);
        // advance
        let k = self.k;
        let mut j = k;
        loop {
            if j == 0 {
                self.k += 1;
                if self.k > self.n {
                    self.done = true;
                } else {
                    self.idx = (0..self.k).collect();
                }
                break;
            }
            j -= 1;
            if self.idx[j] < self.n - k + j {
                self.idx[j] += 1;
                for l in j + 1..k {
                    self.idx[l] = self.idx[l - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    }
}

/// Spread the low bits of `sub` over the set bits of `y`.
#[inline]
fn deposit(sub: u64, y: u64) -> u64 {
    let mut out = 0;
    let mut y = y;
    let mut i = 0;
    while y != 0 {
        let bit = y & y.wrapping_neg();
        if sub >> i & 1 == 1 {
            out |= bit;
        }
        y &= y - 1;
        i += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub here: u64,
    pub there: u64,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct YOutcome {
    pub counterexample: Option<Disagreement>,
    /// Pairs covered, evaluated or skipped by persistence.
    pub pairs_checked: u64,
    pub pairs_evaluated: u64,
}

/// Brute-force strong-equivalence search over all HT pairs of atoms drawn
/// from a universe.
#[derive(Clone, Debug)]
pub struct SeChecker {
    grounding: Grounding,
    n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeVerdict {
    /// No disagreement among the enumerated pairs, relative to the universe.
    Equivalent,
    Counterexample { pair: HTPair, left: bool, right: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeReport {
    pub verdict: SeVerdict,
    pub atoms: usize,
    pub pairs_checked: u128,
    pub pairs_evaluated: u64,
    pub warnings: Vec<String>,
}

fn program_predicates(programs: &[&Program]) -> Vec<(String, usize)> {
    let mut preds: Vec<(String, usize)> = programs.iter().flat_map(|p| p.predicates()).collect();
    preds.sort();
    preds.dedup();
    preds
}

impl SeChecker {
    pub fn new(p1: &Program, p2: &Program, u: &Universe, opts: SeOptions) -> Result<Self, OracleError> {
        let f1 = tau_star_program(p1)?;
        let f2 = tau_star_program(p2)?;
        let mut g = Grounder::new(u);
        for (name, arity) in program_predicates(&[p1, p2]) {
            g.declare_predicate(&name, arity);
        }
        let limit = opts.atom_limit.min(63);
        if g.atoms().len() > limit {
            return Err(OracleError::TooManyAtoms { count: g.atoms().len(), limit });
        }
        let r1 = g.ground(&f1)?;
        let r2 = g.ground(&f2)?;
        let n = g.atoms().len();
        if n > limit {
            return Err(OracleError::TooManyAtoms { count: n, limit });
        }
        Ok(SeChecker { grounding: g.into_grounding(&[r1, r2]), n })
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.grounding.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.n
    }

    pub fn warnings(&self) -> &[String] {
        &self.grounding.warnings
    }

    pub fn total_pairs(&self) -> u128 {
        3u128.pow(self.n as u32)
    }

    /// There-worlds in enumeration order.
    pub fn y_order(&self) -> SubsetOrder {
        SubsetOrder::new(self.n)
    }

    pub fn pair(&self, here: u64, there: u64) -> HTPair {
        let set = |m: u64| (0..self.n).filter(|i| m >> i & 1 == 1).map(|i| self.grounding.atoms.get(i as u32).clone()).collect();
        HTPair { here: set(here), there: set(there) }
    }

    /// Evaluate both programs at ⟨here, there⟩; bits as in [`Compiled::eval`].
    pub fn eval(&self, here: u64, there: u64, sc: &mut Scratch) -> (u8, u8) {
        let p = &self.grounding.program;
        p.eval(&Masks { here, there }, sc);
        (p.root(sc, 0), p.root(sc, 1))
    }

    pub fn scratch(&self) -> Scratch {
        self.grounding.program.scratch()
    }

    /// First disagreeing here-world under the there-world `y`.
    pub fn check_y(&self, y: u64, sc: &mut Scratch) -> YOutcome {
        let p = &self.grounding.program;
        let size = y.count_ones();
        let all = 1u64 << size;
        let (a, b) = self.eval(y, y, sc);
        if a & T == 0 && b & T == 0 {
            return YOutcome { counterexample: None, pairs_checked: all, pairs_evaluated: 1 };
        }
        let mut evaluated = 1;
        let mut checked = 0;
        for sub in SubsetOrder::new(size as usize) {
            let x = deposit(sub, y);
            checked += 1;
            let (a, b) = if x == y {
                (a, b)
            } else {
                evaluated += 1;
                p.eval_here(&Masks { here: x, there: y }, sc);
                (p.root(sc, 0), p.root(sc, 1))
            };
            if (a ^ b) & H != 0 {
                return YOutcome {
                    counterexample: Some(Disagreement { here: x, there: y, left: a & H != 0, right: b & H != 0 }),
                    pairs_checked: checked,
                    pairs_evaluated: evaluated,
                };
            }
        }
        YOutcome { counterexample: None, pairs_checked: checked, pairs_evaluated: evaluated }
    }

    pub fn report(&self, found: Option<Disagreement>, pairs_checked: u128, pairs_evaluated: u64) -> SeReport {
        let verdict = match found {
            None => SeVerdict::Equivalent,
            Some(d) => SeVerdict::Counterexample { pair: self.pair(d.here, d.there), left: d.left, right: d.right },
        };
        SeReport { verdict, atoms: self.n, pairs_checked, pairs_evaluated, warnings: self.grounding.warnings.clone() }
    }

    /// Sequential search in enumeration order.
    pub fn run(&self) -> SeReport {
        let mut sc = self.scratch();
        let (mut checked, mut evaluated) = (0u128, 0u64);
        for y in self.y_order() {
            let o = self.check_y(y, &mut sc);
            checked += o.pairs_checked as u128;
            evaluated += o.pairs_evaluated;
            if o.counterexample.is_some() {
                return self.report(o.counterexample, checked, evaluated);
            }
        }
        self.report(None, checked, evaluated)
    }
}

pub fn check_strong_equivalence(p1: &Program, p2: &Program, u: &Universe) -> Result<SeReport, OracleError> {
    Ok(SeChecker::new(p1, p2, u, SeOptions::default())?.run())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableModels {
    pub models: Vec<BTreeSet<GroundAtom>>,
    pub warnings: Vec<String>,
}

/// All X with ⟨X,X⟩ ⊨ τ*Π and no ⟨X′,X⟩ ⊨ τ*Π for X′ ⊂ X.
pub fn stable_models(p: &Program, u: &Universe) -> Result<StableModels, OracleError> {
    stable_models_with(p, u, SeOptions::default())
}

pub fn stable_models_with(p: &Program, u: &Universe, opts: SeOptions) -> Result<StableModels, OracleError> {
    let f = tau_star_program(p)?;
    let mut g = Grounder::new(u);
    for (name, arity) in program_predicates(&[p]) {
        g.declare_predicate(&name, arity);
    }
    let root = g.ground(&f)?;
    let limit = opts.atom_limit.min(63);
    let n = g.atoms().len();
    if n > limit {
        return Err(OracleError::TooManyAtoms { count: n, limit });
    }
    let grounding = g.into_grounding(&[root]);
    let prog = &grounding.program;
    let mut sc = prog.scratch();
    let mut models = Vec::new();
    for x in SubsetOrder::new(n) {
        prog.eval(&Masks { here: x, there: x }, &mut sc);
        if prog.root(&sc, 0) & H == 0 {
            continue;
        }
        let size = x.count_ones();
        let minimal = SubsetOrder::new(size as usize).map(|s| deposit(s, x)).filter(|&s| s != x).all(|s| {
            prog.eval_here(&Masks { here: s, there: x }, &mut sc);
            prog.root(&sc, 0) & H == 0
        });
        if minimal {
            models.push((0..n).filter(|i| x >> i & 1 == 1).map(|i| grounding.atoms.get(i as u32).clone()).collect());
        }
    }
    Ok(StableModels { models, warnings: grounding.warnings })
}

/// The classical interpretation I^H of the primed signature determined by
/// an HT pair: unprimed symbols are read in the here-world, primed ones in
/// the there-world.
#[derive(Clone, Debug)]
pub struct PrimeInterp<'u> {
    pair: HTPair,
    universe: &'u Universe,
}

pub fn build_prime_interp<'u>(pair: &HTPair, u: &'u Universe) -> PrimeInterp<'u> {
    PrimeInterp { pair: pair.clone(), universe: u }
}

impl PrimeInterp<'_> {
    pub fn holds(&self, atom: &GroundAtom, primed: bool) -> bool {
        if primed {
            self.pair.there.contains(atom)
        } else {
            self.pair.here.contains(atom)
        }
    }

    /// Classical truth of a closed formula over the primed signature.
    pub fn satisfies(&self, f: &Formula) -> Result<bool, OracleError> {
        let (g, w) = self.pair.ground_for(f, self.universe)?;
        Ok(bits(&g.program, &w, 0) & C != 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaAgreement {
    /// ⟨H,I⟩ ⊨ht F
    pub ht: bool,
    /// I^H ⊨ γF
    pub classical: bool,
}

impl GammaAgreement {
    pub fn agrees(&self) -> bool {
        self.ht == self.classical
    }
}

pub fn check_gamma_lemma(f: &Formula, pair: &HTPair, u: &Universe) -> Result<GammaAgreement, OracleError> {
    let lowered = f.lower_iff();
    let g = gamma(&lowered).map_err(|e| OracleError::Unsupported(alloc::format!("{e}")))?;
    let ht = ht_sat_formula(pair, &lowered, u)?;
    let classical = build_prime_interp(pair, u).satisfies(&g)?;
    Ok(GammaAgreement { ht, classical })
}
