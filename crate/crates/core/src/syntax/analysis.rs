use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::*;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableClasses {
    pub global: BTreeSet<Variable>,
    pub local: BTreeSet<Variable>,
}

/// Split the variables of a rule: local ones occur only inside aggregate
/// elements, every other variable is global.
pub fn classify_variables(rule: &Rule) -> VariableClasses {
    let mut outside = Vec::new();
    if let Head::Basic(a) | Head::Choice(a) = &rule.head {
        for t in &a.args {
            t.collect_variables(&mut outside);
        }
    }
    let mut inside = Vec::new();
    for b in &rule.body {
        match b {
            BodyElement::Literal(l) => l.collect_variables(&mut outside),
            BodyElement::Comparison(c) => c.collect_variables(&mut outside),
            BodyElement::Aggregate(a) => {
                a.bound.collect_variables(&mut outside);
                for v in &a.element.variables {
                    if !inside.contains(v) {
                        inside.push(v.clone());
                    }
                }
                for c in &a.element.condition {
                    c.collect_variables(&mut inside);
                }
            }
        }
    }
    let global: BTreeSet<Variable> = outside.into_iter().collect();
    let local = inside.into_iter().filter(|v| !global.contains(v)).collect();
    VariableClasses { global, local }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("rule is not pure: variable {variable} of aggregate element `{element}` is global")]
pub struct ImpurityError {
    pub variable: Variable,
    pub element: String,
}

pub fn check_pure(rule: &Rule) -> Result<(), ImpurityError> {
    let classes = classify_variables(rule);
    for b in &rule.body {
        if let BodyElement::Aggregate(a) = b {
            if let Some(v) = a.element.variables.iter().find(|v| classes.global.contains(*v)) {
                return Err(ImpurityError { variable: v.clone(), element: a.to_string() });
            }
        }
    }
    Ok(())
}

pub fn check_program_pure(program: &Program) -> Result<(), ImpurityError> {
    program.rules.iter().try_for_each(check_pure)
}

/// Replace each `count{..} = t` by the pair `count{..} >= t, count{..} <= t`,
/// keeping the position of the original element.
pub fn desugar_count_eq(rule: &Rule) -> Rule {
    let mut body = Vec::with_capacity(rule.body.len());
    for b in &rule.body {
        match b {
            BodyElement::Aggregate(a) if a.relation == AggregateRelation::Exactly => {
                let mut lo = a.clone();
                lo.relation = AggregateRelation::AtLeast;
                let mut hi = a.clone();
                hi.relation = AggregateRelation::AtMost;
                body.push(BodyElement::Aggregate(lo));
                body.push(BodyElement::Aggregate(hi));
            }
            other => body.push(other.clone()),
        }
    }
    Rule { head: rule.head.clone(), body }
}

pub fn desugar_program(program: &Program) -> Program {
    Program { rules: program.rules.iter().map(desugar_count_eq).collect() }
}
