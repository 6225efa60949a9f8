use core::fmt;

use super::ast::*;

fn level(t: &Term) -> u8 {
    match t {
        Term::Binary(BinaryOp::Interval, ..) => 0,
        Term::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
        Term::Binary(BinaryOp::Mul | BinaryOp::Div | BinaryOp::Mod, ..) => 2,
        _ => 3,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, t: &Term, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Mod => "\\",
            BinaryOp::Interval => "..",
        })
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Precomputed(c) => write!(f, "{c}"),
            Term::Variable(v) => write!(f, "{v}"),
            Term::Abs(t) => write!(f, "|{t}|"),
            Term::Binary(op, l, r) => {
                let me = level(self);
                write_child(f, l, level(l) < me || (me == 0 && level(l) == 0))?;
                if *op == BinaryOp::Interval {
                    write!(f, "..")?;
                } else {
                    write!(f, " {op} ")?;
                }
                write_child(f, r, level(r) <= me)
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::None => {}
            Sign::Not => f.write_str("not ")?,
            Sign::NotNot => f.write_str("not not ")?,
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relation.ascii(), self.rhs)
    }
}

impl fmt::Display for ConditionLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionLiteral::Literal(l) => write!(f, "{l}"),
            ConditionLiteral::Comparison(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for AggregateRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregateRelation::AtLeast => ">=",
            AggregateRelation::AtMost => "<=",
            AggregateRelation::Exactly => "=",
        })
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("count{")?;
        for (i, v) in self.element.variables.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(" : ")?;
        for (i, c) in self.element.condition.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}} {} {}", self.relation, self.bound)
    }
}

impl fmt::Display for BodyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyElement::Literal(l) => write!(f, "{l}"),
            BodyElement::Comparison(c) => write!(f, "{c}"),
            BodyElement::Aggregate(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Basic(a) => write!(f, "{a}"),
            Head::Choice(a) => write!(f, "{{{a}}}"),
            Head::Constraint => Ok(()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() || self.head == Head::Constraint {
            if self.head != Head::Constraint {
                f.write_str(" ")?;
            }
            f.write_str(":-")?;
            for (i, b) in self.body.iter().enumerate() {
                f.write_str(if i > 0 { ", " } else { " " })?;
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
