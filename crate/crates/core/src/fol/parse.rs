use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;

use num_bigint::BigInt;

use super::family::{FamilyBody, FamilyKind};
use super::formula::{Formula, Predicate, Symbol};
use super::term::{ArithOp, FoTerm, Sort, Variable};
use crate::term::{PrecomputedTerm, Relation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("offset {offset}: {message}")]
pub struct FormulaParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(BigInt),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    And,
    Or,
    Arrow,
    DArrow,
    Plus,
    Minus,
    Star,
    Rel(Relation),
    Eof,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FormulaParseError> {
    let b: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = b[start..i].iter().collect();
            Tok::Int(s.parse().unwrap())
        } else if c.is_alphabetic() || c == '_' {
            while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_' || b[i] == '\'') {
                i += 1;
            }
            let s: String = b[start..i].iter().collect();
            if c.is_uppercase() || c == '_' {
                Tok::Var(s)
            } else {
                Tok::Ident(s)
            }
        } else if c == '"' {
            i += 1;
            let mut s = String::new();
            loop {
                match b.get(i) {
                    None => return Err(FormulaParseError { offset: start, message: "unterminated string".into() }),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') if matches!(b.get(i + 1), Some('"' | '\\')) => {
                        s.push(b[i + 1]);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            Tok::Str(s)
        } else {
            let rest: String = b[i..(i + 3).min(b.len())].iter().collect();
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::DArrow, 3)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else if rest.starts_with("!=") {
                (Tok::Rel(Relation::Ne), 2)
            } else if rest.starts_with("<=") {
                (Tok::Rel(Relation::Le), 2)
            } else if rest.starts_with(">=") {
                (Tok::Rel(Relation::Ge), 2)
            } else {
                let t = match c {
                    '<' => Tok::Rel(Relation::Lt),
                    '>' => Tok::Rel(Relation::Gt),
                    '=' => Tok::Rel(Relation::Eq),
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    ':' => Tok::Colon,
                    '&' => Tok::And,
                    '|' => Tok::Or,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    _ => {
                        return Err(FormulaParseError { offset: i, message: format!("unexpected character `{c}`") })
                    }
                };
                (t, 1)
            };
            i += len;
            tok
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, b.len()));
    Ok(out)
}

const KEYWORDS: [&str; 9] = ["not", "forall", "exists", "true", "false", "abs", "atleast", "atmost", "start"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<Variable>,
}

type PResult<T> = Result<T, FormulaParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: String) -> PResult<T> {
        Err(FormulaParseError { offset: self.toks[self.pos].1, message })
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.advance();
            Ok(())
        } else {
            self.err(format!("expected {t:?}, found {:?}", self.peek()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::DArrow {
            self.advance();
            let rhs = self.implication()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut fs = alloc::vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.advance();
            fs.push(self.conjunction()?);
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Formula::Or(fs) })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut fs = alloc::vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.advance();
            fs.push(self.unary()?);
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Formula::And(fs) })
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.is_kw("not") {
            self.advance();
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            let forall = self.is_kw("forall");
            self.advance();
            let mut vars = Vec::new();
            while let Tok::Var(name) = self.peek().clone() {
                self.advance();
                let mut sort = Sort::General;
                if *self.peek() == Tok::Colon {
                    self.advance();
                    match self.advance() {
                        Tok::Ident(s) if s == "int" => sort = Sort::Integer,
                        Tok::Ident(s) if s == "gen" => {}
                        _ => return self.err("expected sort `int` or `gen`".into()),
                    }
                }
                vars.push(Variable::new(&name, sort));
            }
            if vars.is_empty() {
                return self.err("quantifier without variables".into());
            }
            let depth = self.scope.len();
            self.scope.extend(vars.iter().cloned());
            let body = self.unary();
            self.scope.truncate(depth);
            let body = body?;
            return Ok(if forall { Formula::Forall(vars, body.into()) } else { Formula::Exists(vars, body.into()) });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        // A comparison is tried first; on failure we backtrack.
        let save = self.pos;
        if let Ok(lhs) = self.term() {
            if let Tok::Rel(r) = *self.peek() {
                self.advance();
                let rhs = self.term()?;
                return Ok(Formula::Compare(lhs, r, rhs));
            }
        }
        self.pos = save;
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.advance();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.advance();
                Ok(Formula::False)
            }
            Tok::Ident(s) => {
                self.advance();
                let (base, primed) = match s.strip_suffix('\'') {
                    Some(b) => (String::from(b), true),
                    None => (s.clone(), false),
                };
                let kind = match base.as_str() {
                    "atleast" => Some(FamilyKind::Atleast),
                    "atmost" => Some(FamilyKind::Atmost),
                    "start" => Some(FamilyKind::Start),
                    _ => None,
                };
                if KEYWORDS.contains(&base.as_str()) && kind.is_none() {
                    return self.err(format!("unexpected keyword `{base}`"));
                }
                let symbol = match kind {
                    Some(k) if *self.peek() == Tok::LBrace => Symbol::Family(k, self.family_body()?),
                    _ => Symbol::Plain { name: base, arity: 0 },
                };
                let args = self.arguments()?;
                let symbol = match symbol {
                    Symbol::Plain { name, .. } => Symbol::Plain { name, arity: args.len() },
                    other => other,
                };
                let pred = Predicate { symbol, primed };
                Formula::atom(pred, args).map_err(|e| FormulaParseError { offset: self.toks[save].1, message: format!("{e}") })
            }
            other => self.err(format!("expected formula, found {other:?}")),
        }
    }

    fn family_body(&mut self) -> PResult<alloc::sync::Arc<FamilyBody>> {
        let start = self.toks[self.pos].1;
        self.expect(Tok::LBrace)?;
        let bound = self.var_list(Tok::Semi)?;
        self.expect(Tok::Semi)?;
        let params = self.var_list(Tok::Colon)?;
        self.expect(Tok::Colon)?;
        let saved = core::mem::replace(&mut self.scope, bound.iter().chain(params.iter()).cloned().collect());
        let f = self.formula();
        self.scope = saved;
        let f = f?;
        self.expect(Tok::RBrace)?;
        FamilyBody::new(bound, params, f).map_err(|e| FormulaParseError { offset: start, message: format!("{e}") })
    }

    fn var_list(&mut self, end: Tok) -> PResult<Vec<Variable>> {
        let mut out = Vec::new();
        while *self.peek() != end {
            match self.advance() {
                Tok::Var(v) => out.push(Variable::general(&v)),
                _ => return self.err("expected variable".into()),
            }
            if *self.peek() == Tok::Comma {
                self.advance();
            }
        }
        Ok(out)
    }

    fn arguments(&mut self) -> PResult<Vec<FoTerm>> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.advance();
            loop {
                args.push(self.term()?);
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(args)
    }

    fn lookup(&self, name: &str) -> Variable {
        self.scope
            .iter()
            .rev()
            .find(|v| v.name == name)
            .cloned()
            .unwrap_or_else(|| Variable::general(name))
    }

    fn term(&mut self) -> PResult<FoTerm> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.product()?;
            lhs = self.checked(FoTerm::binary(op, lhs, rhs))?;
        }
    }

    fn product(&mut self) -> PResult<FoTerm> {
        let mut lhs = self.unary_term()?;
        while *self.peek() == Tok::Star {
            self.advance();
            let rhs = self.unary_term()?;
            lhs = self.checked(FoTerm::binary(ArithOp::Mul, lhs, rhs))?;
        }
        Ok(lhs)
    }

    fn checked(&self, t: Result<FoTerm, super::FolError>) -> PResult<FoTerm> {
        t.map_err(|e| FormulaParseError { offset: self.toks[self.pos].1, message: format!("{e}") })
    }

    fn unary_term(&mut self) -> PResult<FoTerm> {
        if *self.peek() == Tok::Minus {
            self.advance();
            if let Tok::Int(n) = self.peek().clone() {
                self.advance();
                return Ok(FoTerm::Constant(PrecomputedTerm::Numeral(-n)));
            }
            let t = self.unary_term()?;
            return self.checked(FoTerm::neg(t));
        }
        match self.advance() {
            Tok::Int(n) => Ok(FoTerm::Constant(PrecomputedTerm::Numeral(n))),
            Tok::Str(s) => Ok(FoTerm::Constant(PrecomputedTerm::Other(s))),
            Tok::Var(v) => Ok(FoTerm::Var(self.lookup(&v))),
            Tok::Ident(s) if s == "abs" => {
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                self.checked(FoTerm::abs(t))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && *self.peek() != Tok::LParen => {
                Ok(FoTerm::Constant(PrecomputedTerm::Symbol(s)))
            }
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.err("expected term".into()),
        }
    }
}

/// Parse the ASCII formula syntax. Variables not bound in the text get
/// the sort listed in `free`, or general otherwise.
pub fn parse_formula(src: &str, free: &[Variable]) -> Result<Formula, FormulaParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, scope: free.to_vec() };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("trailing input {:?}", p.peek()));
    }
    Ok(f)
}

/// Parse a family body written `X1, X2; V1 : F`, braces optional.
pub fn parse_family_body(src: &str) -> Result<alloc::sync::Arc<FamilyBody>, FormulaParseError> {
    let trimmed = src.trim();
    let text = if trimmed.starts_with('{') { String::from(trimmed) } else { format!("{{{trimmed}}}") };
    let toks = lex(&text)?;
    let mut p = Parser { toks, pos: 0, scope: Vec::new() };
    let b = p.family_body()?;
    if *p.peek() != Tok::Eof {
        return p.err("trailing input after family body".into());
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn round_trip_examples() {
        for src in [
            "forall Y Z (exists Z1 (Z1 = Y & atleast{X; : exists Z (Z = X & p(Z))}(Z1)) & Z = Y -> q(Z))",
            "forall N:int (N >= 0 & p(N) -> p(N + 1))",
            "not p' | q(a, \"s\", -3)",
            "forall X M:int N:int (M <= X & X <= N -> exists K:int (X = K))",
            "start{X; V : p(X, V)}(a, b, 0 - abs(-2 * 3))",
            "(p <-> q) <-> r",
        ] {
            let f = parse_formula(src, &[]).unwrap();
            let printed = f.ascii().to_string();
            assert_eq!(parse_formula(&printed, &[]).unwrap(), f, "{printed}");
        }
    }

    #[test]
    fn binder_sorts() {
        let f = parse_formula("forall N:int (N > 0)", &[]).unwrap();
        assert_eq!(f.free_vars().len(), 0);
        let g = parse_formula("N > 0", &[Variable::integer("N")]).unwrap();
        assert_eq!(g.free_vars().into_iter().next().unwrap().sort, Sort::Integer);
        assert!(parse_formula("forall X (X + 1 > 0)", &[]).is_err());
    }
}
