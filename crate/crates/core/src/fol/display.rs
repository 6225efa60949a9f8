use core::fmt;

use super::family::FamilyBody;
use super::formula::{Atom, Formula, Symbol};
use super::term::{ArithOp, FoTerm, Sort, Variable};
use crate::term::PrecomputedTerm;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Unicode,
    Ascii,
}

/// Parseable ASCII rendering of a formula or term.
pub struct Ascii<'a, T: ?Sized>(&'a T);

impl Formula {
    pub fn ascii(&self) -> Ascii<'_, Formula> {
        Ascii(self)
    }
}

impl FoTerm {
    pub fn ascii(&self) -> Ascii<'_, FoTerm> {
        Ascii(self)
    }
}

impl fmt::Display for Ascii<'_, Formula> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.0, Style::Ascii)
    }
}

impl fmt::Display for Ascii<'_, FoTerm> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.0, Style::Ascii)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, Style::Unicode)
    }
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Style::Unicode)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn term_level(t: &FoTerm) -> u8 {
    match t {
        FoTerm::Binary(ArithOp::Add | ArithOp::Sub, ..) => 1,
        FoTerm::Binary(ArithOp::Mul, ..) => 2,
        _ => 3,
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &FoTerm, style: Style) -> fmt::Result {
    let child = |f: &mut fmt::Formatter<'_>, t: &FoTerm, parens: bool| {
        if parens {
            f.write_str("(")?;
            write_term(f, t, style)?;
            f.write_str(")")
        } else {
            write_term(f, t, style)
        }
    };
    match t {
        FoTerm::Constant(c) => write!(f, "{c}"),
        FoTerm::Var(v) => f.write_str(&v.name),
        FoTerm::Neg(inner) => {
            f.write_str(if style == Style::Unicode { "−" } else { "-" })?;
            let parens = term_level(inner) < 3 || matches!(**inner, FoTerm::Constant(PrecomputedTerm::Numeral(_)));
            child(f, inner, parens)
        }
        FoTerm::Abs(inner) => {
            if style == Style::Unicode {
                f.write_str("|")?;
                write_term(f, inner, style)?;
                f.write_str("|")
            } else {
                f.write_str("abs(")?;
                write_term(f, inner, style)?;
                f.write_str(")")
            }
        }
        FoTerm::Binary(op, l, r) => {
            let me = term_level(t);
            child(f, l, term_level(l) < me)?;
            f.write_str(match (op, style) {
                (ArithOp::Add, _) => " + ",
                (ArithOp::Sub, Style::Unicode) => " − ",
                (ArithOp::Sub, Style::Ascii) => " - ",
                (ArithOp::Mul, Style::Unicode) => " × ",
                (ArithOp::Mul, Style::Ascii) => " * ",
            })?;
            child(f, r, term_level(r) <= me)
        }
    }
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(_) => 2,
        Formula::And(_) => 3,
        Formula::Not(_) | Formula::Forall(..) | Formula::Exists(..) => 4,
        _ => 5,
    }
}

fn write_vars(f: &mut fmt::Formatter<'_>, vs: &[Variable], sep: &str) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        f.write_str(&v.name)?;
    }
    Ok(())
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[FoTerm], style: Style) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_term(f, t, style)?;
    }
    f.write_str(")")
}

fn write_family(f: &mut fmt::Formatter<'_>, body: &FamilyBody, style: Style) -> fmt::Result {
    match style {
        Style::Unicode => {
            f.write_str("^{")?;
            write_vars(f, body.bound(), ",")?;
            f.write_str(";")?;
            write_vars(f, body.params(), ",")?;
            f.write_str("}_{")?;
            write_formula(f, body.formula(), style)?;
            f.write_str("}")
        }
        Style::Ascii => {
            f.write_str("{")?;
            write_vars(f, body.bound(), ", ")?;
            f.write_str(";")?;
            if !body.params().is_empty() {
                f.write_str(" ")?;
            }
            write_vars(f, body.params(), ", ")?;
            f.write_str(" : ")?;
            write_formula(f, body.formula(), style)?;
            f.write_str("}")
        }
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, a: &Atom, style: Style) -> fmt::Result {
    let prime = if !a.predicate.primed {
        ""
    } else if style == Style::Unicode {
        "′"
    } else {
        "'"
    };
    match &a.predicate.symbol {
        Symbol::Plain { name, .. } => {
            write!(f, "{name}{prime}")?;
        }
        Symbol::Family(kind, body) => {
            match style {
                Style::Unicode => write!(f, "{}{prime}", kind.display_name())?,
                Style::Ascii => write!(f, "{}{prime}", kind.prefix())?,
            }
            write_family(f, body, style)?;
        }
    }
    write_args(f, &a.args, style)
}

fn write_formula(f: &mut fmt::Formatter<'_>, g: &Formula, style: Style) -> fmt::Result {
    let uni = style == Style::Unicode;
    let child = |f: &mut fmt::Formatter<'_>, g: &Formula, parens: bool| {
        if parens {
            f.write_str("(")?;
            write_formula(f, g, style)?;
            f.write_str(")")
        } else {
            write_formula(f, g, style)
        }
    };
    match g {
        Formula::True => f.write_str(if uni { "⊤" } else { "true" }),
        Formula::False => f.write_str(if uni { "⊥" } else { "false" }),
        Formula::Atom(a) => write_atom(f, a, style),
        Formula::Compare(l, r, m) => {
            write_term(f, l, style)?;
            write!(f, " {} ", if uni { r.unicode() } else { r.ascii() })?;
            write_term(f, m, style)
        }
        Formula::Not(inner) => {
            f.write_str(if uni { "¬" } else { "not " })?;
            child(f, inner, level(inner) < 4)
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let me = level(g);
            let sep = match (g, uni) {
                (Formula::And(_), true) => " ∧ ",
                (Formula::And(_), false) => " & ",
                (_, true) => " ∨ ",
                (_, false) => " | ",
            };
            if fs.is_empty() {
                return write_formula(f, if me == 3 { &Formula::True } else { &Formula::False }, style);
            }
            for (i, h) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                child(f, h, level(h) <= me)?;
            }
            Ok(())
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let sep = match (g, uni) {
                (Formula::Implies(..), true) => " → ",
                (Formula::Implies(..), false) => " -> ",
                (_, true) => " ↔ ",
                (_, false) => " <-> ",
            };
            child(f, a, level(a) <= 1)?;
            f.write_str(sep)?;
            child(f, b, level(b) <= 1)
        }
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            let forall = matches!(g, Formula::Forall(..));
            if uni {
                f.write_str(if forall { "∀" } else { "∃" })?;
                write_vars(f, vs, " ")?;
            } else {
                f.write_str(if forall { "forall" } else { "exists" })?;
                for v in vs {
                    write!(f, " {}", v.name)?;
                    if v.sort == Sort::Integer {
                        f.write_str(":int")?;
                    }
                }
                f.write_str(" ")?;
            }
            let bare = matches!(
                **body,
                Formula::Not(_) | Formula::Forall(..) | Formula::Exists(..) | Formula::Atom(_) | Formula::True | Formula::False
            );
            if uni && bare {
                f.write_str(" ")?;
            }
            child(f, body, !bare)
        }
    }
}
