use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;

use num_bigint::BigInt;

use super::ast::*;
use crate::term::{PrecomputedTerm, Relation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
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
    Dot,
    DotDot,
    If,
    Colon,
    Bar,
    Plus,
    Minus,
    Star,
    Slash,
    Backslash,
    Rel(Relation),
    HashCount,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Eof => "end of input".into(),
            Tok::Rel(r) => format!("`{}`", r.ascii()),
            other => format!(
                "`{}`",
                match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Comma => ",",
                    Tok::Dot => ".",
                    Tok::DotDot => "..",
                    Tok::If => ":-",
                    Tok::Colon => ":",
                    Tok::Bar => "|",
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Star => "*",
                    Tok::Slash => "/",
                    Tok::Backslash => "\\",
                    _ => "#count",
                }
            ),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| ParseError { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (sl, sc) = (line, col);
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            Tok::Int(text.parse().map_err(|_| err(sl, sc, "bad integer".into()))?)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            if c.is_uppercase() || c == '_' {
                Tok::Var(text)
            } else {
                Tok::Ident(text)
            }
        } else if c == '"' {
            i += 1;
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(err(sl, sc, "unterminated string".into())),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(err(sl, sc, "bad escape in string".into())),
                        }
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
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('#', _) => {
                    let word: String = chars[i + 1..].iter().take_while(|c| c.is_alphabetic()).collect();
                    if word == "count" {
                        (Tok::HashCount, 6)
                    } else {
                        return Err(err(sl, sc, format!("unknown directive `#{word}`")));
                    }
                }
                (':', Some('-')) => (Tok::If, 2),
                (':', _) => (Tok::Colon, 1),
                ('.', Some('.')) => (Tok::DotDot, 2),
                ('.', _) => (Tok::Dot, 1),
                ('!', Some('=')) => (Tok::Rel(Relation::Ne), 2),
                ('<', Some('=')) => (Tok::Rel(Relation::Le), 2),
                ('>', Some('=')) => (Tok::Rel(Relation::Ge), 2),
                ('<', _) => (Tok::Rel(Relation::Lt), 1),
                ('>', _) => (Tok::Rel(Relation::Gt), 1),
                ('=', _) => (Tok::Rel(Relation::Eq), 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (',', _) => (Tok::Comma, 1),
                ('|', _) => (Tok::Bar, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('\\', _) => (Tok::Backslash, 1),
                _ => return Err(err(sl, sc, format!("unexpected character `{c}`"))),
            };
            i += len;
            tok
        };
        col += i - start;
        out.push(Spanned { tok, line: sl, column: sc });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, message }
    }

    fn error_at(&self, pos: usize, message: String) -> ParseError {
        let s = &self.toks[pos];
        ParseError { line: s.line, column: s.column, message }
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(Program { rules })
    }

    fn rule(&mut self) -> PResult<Rule> {
        let head = match self.peek() {
            Tok::If => Head::Constraint,
            Tok::LBrace => {
                self.advance();
                let a = self.atom()?;
                self.expect(Tok::RBrace)?;
                Head::Choice(a)
            }
            Tok::Ident(_) => Head::Basic(self.atom()?),
            other => return Err(self.error_here(format!("expected rule head, found {}", other.describe()))),
        };
        let mut body = Vec::new();
        if *self.peek() == Tok::If {
            self.advance();
            if *self.peek() != Tok::Dot {
                loop {
                    body.push(self.body_element()?);
                    if *self.peek() == Tok::Comma {
                        self.advance();
                    } else {
                        break;
                    }
                }
            }
        }
        self.expect(Tok::Dot)?;
        Ok(Rule { head, body })
    }

    fn atom(&mut self) -> PResult<Atom> {
        let here = self.pos;
        let name = match self.advance() {
            Tok::Ident(n) => n,
            other => {
                return Err(self.error_at(here, format!("expected predicate name, found {}", other.describe())));
            }
        };
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
        Ok(Atom { predicate: name, args })
    }

    fn sign(&mut self) -> Sign {
        if *self.peek() == Tok::Ident("not".into()) {
            self.advance();
            if *self.peek() == Tok::Ident("not".into()) {
                self.advance();
                return Sign::NotNot;
            }
            return Sign::Not;
        }
        Sign::None
    }

    fn starts_aggregate(&self) -> bool {
        match self.peek() {
            Tok::HashCount => true,
            Tok::Ident(n) => n == "count" && *self.peek_at(1) == Tok::LBrace,
            _ => false,
        }
    }

    // An identifier starts an atom unless what follows makes it a term.
    fn ident_is_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(n) if n != "not" => !matches!(
                self.peek_at(1),
                Tok::Rel(_) | Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Backslash | Tok::DotDot
            ),
            _ => false,
        }
    }

    fn body_element(&mut self) -> PResult<BodyElement> {
        if self.starts_aggregate() {
            return Ok(BodyElement::Aggregate(self.aggregate(None)?));
        }
        if *self.peek() == Tok::Ident("not".into()) {
            let sign = self.sign();
            let atom = self.atom()?;
            return Ok(BodyElement::Literal(Literal { sign, atom }));
        }
        if self.ident_is_atom() {
            let atom = self.atom()?;
            return Ok(BodyElement::Literal(Literal { sign: Sign::None, atom }));
        }
        let lhs = self.term()?;
        let rel_pos = self.pos;
        let relation = match self.advance() {
            Tok::Rel(r) => r,
            other => {
                return Err(self.error_at(rel_pos, format!("expected comparison operator, found {}", other.describe())))
            }
        };
        if self.starts_aggregate() {
            let rel = match relation {
                Relation::Le => AggregateRelation::AtLeast,
                Relation::Ge => AggregateRelation::AtMost,
                Relation::Eq => AggregateRelation::Exactly,
                other => {
                    return Err(self.error_at(
                        rel_pos,
                        format!("unsupported aggregate relation `{}`", other.ascii()),
                    ))
                }
            };
            if lhs.contains_interval() {
                return Err(self.error_at(rel_pos, "interval symbol in aggregate bound".into()));
            }
            return Ok(BodyElement::Aggregate(self.aggregate(Some((rel, lhs)))?));
        }
        let rhs = self.term()?;
        Ok(BodyElement::Comparison(Comparison { lhs, relation, rhs }))
    }

    fn condition(&mut self) -> PResult<ConditionLiteral> {
        if *self.peek() == Tok::Ident("not".into()) {
            let sign = self.sign();
            let atom = self.atom()?;
            return Ok(ConditionLiteral::Literal(Literal { sign, atom }));
        }
        if self.ident_is_atom() {
            let atom = self.atom()?;
            return Ok(ConditionLiteral::Literal(Literal { sign: Sign::None, atom }));
        }
        let lhs = self.term()?;
        let here = self.pos;
        let relation = match self.advance() {
            Tok::Rel(r) => r,
            other => {
                return Err(self.error_at(here, format!("expected comparison operator, found {}", other.describe())));
            }
        };
        let rhs = self.term()?;
        Ok(ConditionLiteral::Comparison(Comparison { lhs, relation, rhs }))
    }

    fn aggregate(&mut self, left_guard: Option<(AggregateRelation, Term)>) -> PResult<Aggregate> {
        let agg_pos = self.pos;
        // `#count` or bare `count`
        self.advance();
        self.expect(Tok::LBrace)?;
        let mut variables = Vec::new();
        loop {
            let vpos = self.pos;
            match self.advance() {
                Tok::Var(v) => {
                    let v = Variable(v);
                    if variables.contains(&v) {
                        return Err(self.error_at(vpos, format!("variable {v} repeated in aggregate tuple")));
                    }
                    variables.push(v);
                }
                other => {
                    return Err(self.error_at(
                        vpos,
                        format!("expected aggregate variable, found {}", other.describe()),
                    ))
                }
            }
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                break;
            }
        }
        self.expect(Tok::Colon)?;
        let mut condition = Vec::new();
        loop {
            condition.push(self.condition()?);
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        let element = AggregateElement { variables, condition };
        let occurring = element.condition_variables();
        if let Some(v) = element.variables.iter().find(|v| !occurring.contains(v)) {
            return Err(self.error_at(agg_pos, format!("aggregate variable {v} does not occur in the condition")));
        }
        let (relation, bound) = match left_guard {
            Some(g) => g,
            None => {
                let rel_pos = self.pos;
                let relation = match self.advance() {
                    Tok::Rel(Relation::Ge) => AggregateRelation::AtLeast,
                    Tok::Rel(Relation::Le) => AggregateRelation::AtMost,
                    Tok::Rel(Relation::Eq) => AggregateRelation::Exactly,
                    other => {
                        return Err(self.error_at(
                            rel_pos,
                            format!("expected `>=`, `<=` or `=` after aggregate, found {}", other.describe()),
                        ))
                    }
                };
                let bound = self.term()?;
                if bound.contains_interval() {
                    return Err(self.error_at(rel_pos, "interval symbol in aggregate bound".into()));
                }
                (relation, bound)
            }
        };
        Ok(Aggregate { element, relation, bound })
    }

    pub fn term(&mut self) -> PResult<Term> {
        let lhs = self.sum()?;
        if *self.peek() == Tok::DotDot {
            self.advance();
            let rhs = self.sum()?;
            return Ok(Term::binary(BinaryOp::Interval, lhs, rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.product()?;
            lhs = Term::binary(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                Tok::Backslash => BinaryOp::Mod,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.primary()?;
            lhs = Term::binary(op, lhs, rhs);
        }
    }

    fn primary(&mut self) -> PResult<Term> {
        let here = self.pos;
        match self.advance() {
            Tok::Int(n) => Ok(Term::Precomputed(PrecomputedTerm::Numeral(n))),
            Tok::Minus => match self.advance() {
                Tok::Int(n) => Ok(Term::Precomputed(PrecomputedTerm::Numeral(-n))),
                _ => Err(self.error_at(here, "unary minus applies to integer literals only".into())),
            },
            Tok::Ident(s) => {
                if *self.peek() == Tok::LParen {
                    return Err(self.error_at(here, format!("function symbol `{s}` is not part of the language")));
                }
                Ok(Term::Precomputed(PrecomputedTerm::Symbol(s)))
            }
            Tok::Str(s) => Ok(Term::Precomputed(PrecomputedTerm::Other(s))),
            Tok::Var(v) => Ok(Term::Variable(Variable(v))),
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Bar => {
                let t = self.term()?;
                self.expect(Tok::Bar)?;
                Ok(Term::abs(t))
            }
            other => Err(self.error_at(here, format!("expected term, found {}", other.describe()))),
        }
    }
}

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.program()
}

pub fn parse_rule(src: &str) -> Result<Rule, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let r = p.rule()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here("trailing input after rule".to_string()));
    }
    Ok(r)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!("unexpected {}", p.peek().describe())));
    }
    Ok(t)
}

/// Parse a comma separated list of precomputed terms, with `a..b`
/// integer ranges allowed; used for universe arguments.
pub fn parse_term_list(src: &str) -> Result<Vec<PrecomputedTerm>, ParseError> {
    let mut out = Vec::new();
    if src.trim().is_empty() {
        return Ok(out);
    }
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    loop {
        let start = p.pos;
        let t = p.term()?;
        match t {
            Term::Precomputed(c) => out.push(c),
            Term::Binary(BinaryOp::Interval, l, r) => match (*l, *r) {
                (Term::Precomputed(PrecomputedTerm::Numeral(a)), Term::Precomputed(PrecomputedTerm::Numeral(b))) => {
                    let mut k = a;
                    while k <= b {
                        out.push(PrecomputedTerm::Numeral(k.clone()));
                        k += 1;
                    }
                }
                _ => return Err(p.error_at(start, "range bounds must be integers".into())),
            },
            _ => return Err(p.error_at(start, "expected a precomputed term".into())),
        }
        match p.peek() {
            Tok::Comma => {
                p.advance();
            }
            Tok::Eof => break,
            other => return Err(p.error_here(format!("unexpected {}", other.describe()))),
        }
    }
    Ok(out)
}
