//! Typed first-order (TFF) problem text with integer arithmetic.

use std::collections::BTreeSet;
use std::fmt::Write;

use mgc_core::fol::{ArithOp, FoTerm, Formula, Sort, Symbol, Variable};
use mgc_core::gamma::{AxiomRole, Problem};
use mgc_core::{PrecomputedTerm, Relation};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("formula contains an equivalence; lower it first")]
    Iff,
    #[error("symbol {0} is not declared")]
    Undeclared(String),
}

fn escape(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' => out.push(c),
            '_' => out.push_str("__"),
            '\'' => out.push_str("_p"),
            c => {
                let _ = write!(out, "_u{:04x}", c as u32);
            }
        }
    }
    out
}

pub fn variable_name(v: &Variable) -> String {
    let e = escape(&v.name);
    if e.starts_with(|c: char| c.is_ascii_uppercase()) {
        e
    } else {
        format!("V_x{e}")
    }
}

pub fn constant_name(c: &PrecomputedTerm) -> String {
    match c {
        PrecomputedTerm::Numeral(n) => format!("int_to_gen({n})"),
        PrecomputedTerm::Symbol(s) => format!("c_{}", escape(s)),
        PrecomputedTerm::Other(s) => {
            let mut h = String::from("o_");
            for b in s.bytes() {
                let _ = write!(h, "{b:02x}");
            }
            h
        }
    }
}

/// TPTP name of a predicate symbol or its primed twin.
pub fn predicate_name(problem: &Problem, symbol: &Symbol, primed: bool) -> String {
    let base = match symbol {
        Symbol::Plain { name, arity } => format!("{}_{arity}", escape(name)),
        Symbol::Family(k, b) => problem.families.name(*k, b),
    };
    if primed {
        format!("{base}_prime")
    } else {
        base
    }
}

fn sort_name(s: Sort) -> &'static str {
    match s {
        Sort::General => "general",
        Sort::Integer => "$int",
    }
}

fn int_term(t: &FoTerm) -> String {
    match t {
        FoTerm::Constant(PrecomputedTerm::Numeral(n)) => n.to_string(),
        FoTerm::Var(v) => variable_name(v),
        FoTerm::Neg(a) => format!("$uminus({})", int_term(a)),
        FoTerm::Abs(a) => format!("abs_int({})", int_term(a)),
        FoTerm::Binary(op, a, b) => {
            let f = match op {
                ArithOp::Add => "$sum",
                ArithOp::Sub => "$difference",
                ArithOp::Mul => "$product",
            };
            format!("{f}({}, {})", int_term(a), int_term(b))
        }
        FoTerm::Constant(c) => constant_name(c),
    }
}

fn term(t: &FoTerm, want: Sort) -> String {
    match (t.sort(), want) {
        (Sort::Integer, Sort::Integer) => int_term(t),
        (Sort::Integer, Sort::General) => format!("int_to_gen({})", int_term(t)),
        _ => match t {
            FoTerm::Constant(c) => constant_name(c),
            FoTerm::Var(v) => variable_name(v),
            _ => unreachable!("arithmetic terms are integer-sorted"),
        },
    }
}

fn comparison(l: &FoTerm, r: Relation, m: &FoTerm) -> String {
    if l.sort() == Sort::Integer && m.sort() == Sort::Integer {
        let (a, b) = (int_term(l), int_term(m));
        return match r {
            Relation::Eq => format!("{a} = {b}"),
            Relation::Ne => format!("{a} != {b}"),
            Relation::Lt => format!("$less({a}, {b})"),
            Relation::Gt => format!("$greater({a}, {b})"),
            Relation::Le => format!("$lesseq({a}, {b})"),
            Relation::Ge => format!("$greatereq({a}, {b})"),
        };
    }
    let (a, b) = (term(l, Sort::General), term(m, Sort::General));
    match r {
        Relation::Eq => format!("{a} = {b}"),
        Relation::Ne => format!("{a} != {b}"),
        Relation::Lt => format!("gen_less({a}, {b})"),
        Relation::Gt => format!("gen_less({b}, {a})"),
        Relation::Le => format!("(gen_less({a}, {b}) | {a} = {b})"),
        Relation::Ge => format!("(gen_less({b}, {a}) | {a} = {b})"),
    }
}

struct Emitter<'p> {
    problem: &'p Problem,
}

impl Emitter<'_> {
    fn formula(&self, f: &Formula) -> Result<String, EmitError> {
        Ok(match f {
            Formula::True => "$true".into(),
            Formula::False => "$false".into(),
            Formula::Atom(a) => {
                let sym = &a.predicate.symbol;
                if !self.problem.symbols.contains(sym) {
                    return Err(EmitError::Undeclared(sym.name()));
                }
                let name = predicate_name(self.problem, sym, a.predicate.primed);
                if a.args.is_empty() {
                    name
                } else {
                    let args: Vec<String> = a.args.iter().zip(sym.argument_sorts()).map(|(t, s)| term(t, s)).collect();
                    format!("{name}({})", args.join(", "))
                }
            }
            Formula::Compare(l, r, m) => comparison(l, *r, m),
            Formula::Not(g) => format!("~ ({})", self.formula(g)?),
            Formula::And(fs) | Formula::Or(fs) if fs.is_empty() => {
                if matches!(f, Formula::And(_)) { "$true" } else { "$false" }.into()
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
                let parts = fs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?;
                format!("({})", parts.join(sep))
            }
            Formula::Implies(a, b) => format!("({} => {})", self.formula(a)?, self.formula(b)?),
            Formula::Iff(..) => return Err(EmitError::Iff),
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let q = if matches!(f, Formula::Forall(..)) { "!" } else { "?" };
                let vars: Vec<String> = vs.iter().map(|v| format!("{}: {}", variable_name(v), sort_name(v.sort))).collect();
                format!("{q}[{}]: ({})", vars.join(", "), self.formula(g)?)
            }
        })
    }

    fn declare(&self, out: &mut String, symbol: &Symbol) {
        let sorts: Vec<&str> = symbol.argument_sorts().into_iter().map(sort_name).collect();
        let ty = match sorts.len() {
            0 => "$o".to_string(),
            1 => format!("{} > $o", sorts[0]),
            _ => format!("({}) > $o", sorts.join(" * ")),
        };
        for primed in [false, true] {
            let name = predicate_name(self.problem, symbol, primed);
            let _ = writeln!(out, "tff({name}_type, type, {name}: {ty}).");
        }
    }
}

const PREAMBLE: &str = "\
tff(general_type, type, general: $tType).
tff(int_to_gen_type, type, int_to_gen: $int > general).
tff(gen_less_type, type, gen_less: (general * general) > $o).
tff(abs_int_type, type, abs_int: $int > $int).
";

const ENCODING: &str = "\
% integers embedded in the general sort
tff(int_to_gen_injective, axiom, ![I: $int, J: $int]: ((int_to_gen(I) = int_to_gen(J)) => (I = J))).
tff(gen_less_extends_int_order, axiom, ![I: $int, J: $int]: (gen_less(int_to_gen(I), int_to_gen(J)) <=> $less(I, J))).
tff(abs_int_definition, axiom, ![I: $int]: (($greatereq(I, 0) => (abs_int(I) = I)) & ($less(I, 0) => (abs_int(I) = $uminus(I))))).
";

fn role_comment(role: AxiomRole) -> &'static str {
    match role {
        AxiomRole::A => "% persistence: p(X) -> p'(X)",
        AxiomRole::GammaInd => "% induction instances",
        AxiomRole::Std => "% standard order and constants",
        AxiomRole::GammaD0 => "% Start recursion",
        AxiomRole::GammaD1 => "% Atleast and Atmost via Start",
        AxiomRole::GammaDefs => "% Atleast and Atmost for fixed bounds",
    }
}

/// Serialize a problem. Output depends only on the problem.
pub fn emit_problem(problem: &Problem) -> Result<String, EmitError> {
    let e = Emitter { problem };
    let mut out = String::new();
    out.push_str("% strong equivalence of two mini-gringo programs with counting\n");
    out.push_str(PREAMBLE);
    let mut constants = BTreeSet::new();
    for f in problem.axioms.iter().map(|a| &a.formula).chain([&problem.conjecture]) {
        constants.extend(f.constants());
    }
    for c in constants.iter().filter(|c| !c.is_numeral()) {
        let name = constant_name(c);
        let _ = writeln!(out, "tff({name}_type, type, {name}: general).");
    }
    for s in &problem.symbols {
        e.declare(&mut out, s);
    }
    out.push_str(ENCODING);
    let mut last = None;
    for a in &problem.axioms {
        if last != Some(a.role) {
            let _ = writeln!(out, "{}", role_comment(a.role));
            last = Some(a.role);
        }
        let _ = writeln!(out, "tff({}, axiom, {}).", a.name, e.formula(&a.formula)?);
    }
    out.push_str("% the two translations are equivalent\n");
    let _ = writeln!(out, "tff(strong_equivalence, conjecture, {}).", e.formula(&problem.conjecture)?);
    Ok(out)
}
