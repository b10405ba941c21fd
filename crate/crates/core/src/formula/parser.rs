//! Recursive-descent parser for the formula language (see `docs/grammar.md`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Formula, Quantifier, Rel};
use crate::poly::{Polynomial, VarOrder};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Forall,
    Exists,
    And,
    Or,
    Not,
    True,
    False,
    Rel(Rel),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "number {}", q),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Forall => write!(f, "`forall`"),
            Tok::Exists => write!(f, "`exists`"),
            Tok::And => write!(f, "`and`"),
            Tok::Or => write!(f, "`or`"),
            Tok::Not => write!(f, "`not`"),
            Tok::True => write!(f, "`true`"),
            Tok::False => write!(f, "`false`"),
            Tok::Rel(r) => write!(f, "`{}`", r.symbol()),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphabetic() || c.is_ascii_digit() || matches!(c, '_' | '\'' | '′' | '₀'..='₉')
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, column: col, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok, n: usize, i: &mut usize, col: &mut usize| {
            out.push(Lexed { tok, line: l0, col: c0 });
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut s: String = chars[start..i].iter().collect();
                let mut value = Rational::from_integer(s.parse::<BigInt>().unwrap());
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    let fs = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let frac: String = chars[fs..i].iter().collect();
                    s.push_str(&frac);
                    let den = BigInt::from(10u32).pow(frac.len() as u32);
                    value = Rational::new(s.parse::<BigInt>().unwrap(), den);
                }
                col += i - start;
                out.push(Lexed { tok: Tok::Num(value), line: l0, col: c0 });
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match s.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(s),
                };
                out.push(Lexed { tok, line: l0, col: c0 });
            }
            '∀' => push(Tok::Forall, 1, &mut i, &mut col),
            '∃' => push(Tok::Exists, 1, &mut i, &mut col),
            '∧' => push(Tok::And, 1, &mut i, &mut col),
            '∨' => push(Tok::Or, 1, &mut i, &mut col),
            '¬' | '~' => push(Tok::Not, 1, &mut i, &mut col),
            '→' | '⇒' => push(Tok::Sym("->"), 1, &mut i, &mut col),
            '↔' | '⇔' => push(Tok::Sym("<->"), 1, &mut i, &mut col),
            '≤' => push(Tok::Rel(Rel::Le), 1, &mut i, &mut col),
            '≥' => push(Tok::Rel(Rel::Ge), 1, &mut i, &mut col),
            '≠' => push(Tok::Rel(Rel::Ne), 1, &mut i, &mut col),
            '−' => push(Tok::Sym("-"), 1, &mut i, &mut col),
            '·' | '×' => push(Tok::Sym("*"), 1, &mut i, &mut col),
            '²' | '³' => {
                out.push(Lexed { tok: Tok::Sym("^"), line: l0, col: c0 });
                let e = if c == '²' { 2 } else { 3 };
                out.push(Lexed { tok: Tok::Num(Rational::from_integer(e.into())), line: l0, col: c0 });
                i += 1;
                col += 1;
            }
            '&' | '|' => {
                let n = if chars.get(i + 1) == Some(&c) { 2 } else { 1 };
                push(if c == '&' { Tok::And } else { Tok::Or }, n, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Sym("->"), 2, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Sym("<->"), 3, &mut i, &mut col)
            }
            '<' | '>' | '=' | '!' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && matches!(chars[j], '<' | '>' | '=' | '!') {
                    j += 1;
                }
                let s: String = chars[start..j].iter().collect();
                let tok = match s.as_str() {
                    "=" | "==" => Tok::Rel(Rel::Eq),
                    "!=" | "<>" => Tok::Rel(Rel::Ne),
                    "<" => Tok::Rel(Rel::Lt),
                    "<=" => Tok::Rel(Rel::Le),
                    ">" => Tok::Rel(Rel::Gt),
                    ">=" => Tok::Rel(Rel::Ge),
                    "!" => Tok::Not,
                    _ => return Err(err(l0, c0, format!("unknown relation symbol `{s}`"))),
                };
                push(tok, j - start, &mut i, &mut col);
            }
            '+' => push(Tok::Sym("+"), 1, &mut i, &mut col),
            '-' => push(Tok::Sym("-"), 1, &mut i, &mut col),
            '*' => push(Tok::Sym("*"), 1, &mut i, &mut col),
            '/' if chars.get(i + 1) == Some(&'=') => push(Tok::Rel(Rel::Ne), 2, &mut i, &mut col),
            '/' => push(Tok::Sym("/"), 1, &mut i, &mut col),
            '^' => push(Tok::Sym("^"), 1, &mut i, &mut col),
            '(' => push(Tok::Sym("("), 1, &mut i, &mut col),
            ')' => push(Tok::Sym(")"), 1, &mut i, &mut col),
            '[' => push(Tok::Sym("["), 1, &mut i, &mut col),
            ']' => push(Tok::Sym("]"), 1, &mut i, &mut col),
            ',' => push(Tok::Sym(","), 1, &mut i, &mut col),
            '.' => push(Tok::Sym("."), 1, &mut i, &mut col),
            ':' => push(Tok::Sym(":"), 1, &mut i, &mut col),
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Lexed { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    vars: VarOrder,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error_here(&self, message: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, column: t.col, message }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        self.error_here(format!("expected {what}, found {}", self.peek()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> PResult<()> {
        if self.eat(&Tok::Sym(s)) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut l = self.implies()?;
        while self.eat(&Tok::Sym("<->")) {
            let r = self.implies()?;
            l = Formula::iff(l, r);
        }
        Ok(l)
    }

    fn implies(&mut self) -> PResult<Formula> {
        let l = self.disjunction()?;
        if self.eat(&Tok::Sym("->")) {
            let r = self.implies()?;
            return Ok(Formula::implies(l, r));
        }
        Ok(l)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut v = vec![self.conjunction()?];
        while self.eat(&Tok::Or) {
            v.push(self.conjunction()?);
        }
        Ok(Formula::or(v))
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut v = vec![self.unary()?];
        while self.eat(&Tok::And) {
            v.push(self.unary()?);
        }
        Ok(Formula::and(v))
    }

    fn quantifier_token(t: &Tok) -> Option<Quantifier> {
        match t {
            Tok::Forall => Some(Quantifier::Forall),
            Tok::Exists => Some(Quantifier::Exists),
            _ => None,
        }
    }

    fn var_list(&mut self) -> PResult<Vec<String>> {
        let mut vs = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(s) => {
                    self.pos += 1;
                    vs.push(s);
                }
                _ => return Err(self.unexpected("a variable name")),
            }
            if !self.eat(&Tok::Sym(",")) && !self.binder_run_ahead(0) {
                return Ok(vs);
            }
        }
    }

    /// Whether the tokens from offset `k` are identifiers, optionally comma
    /// separated, closed by `.`, `:` or `)`; this allows `forall a b c.`.
    fn binder_run_ahead(&self, mut k: usize) -> bool {
        if !matches!(self.peek_at(k), Tok::Ident(_)) {
            return false;
        }
        loop {
            match self.peek_at(k) {
                Tok::Ident(_) | Tok::Sym(",") => k += 1,
                Tok::Sym(".") | Tok::Sym(":") | Tok::Sym(")") => return true,
                _ => return false,
            }
        }
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(q) = Self::quantifier_token(self.peek()) {
            self.pos += 1;
            let vs = self.var_list()?;
            if !self.eat(&Tok::Sym(".")) {
                self.eat(&Tok::Sym(":"));
            }
            let body = self.formula()?;
            return Ok(Formula::quantify(q, &vs, body));
        }
        if *self.peek() == Tok::Sym("(") && self.paren_prefix_ahead() {
            if let Some(q) = Self::quantifier_token(self.peek_at(1)) {
                self.pos += 2;
                let vs = self.var_list()?;
                self.expect_sym(")")?;
                let body = self.formula()?;
                return Ok(Formula::quantify(q, &vs, body));
            }
        }
        self.primary()
    }

    /// Whether the tokens ahead read `( Q v1, …, vk )`.
    fn paren_prefix_ahead(&self) -> bool {
        if Self::quantifier_token(self.peek_at(1)).is_none() {
            return false;
        }
        let mut k = 2;
        loop {
            if !matches!(self.peek_at(k), Tok::Ident(_)) {
                return false;
            }
            match self.peek_at(k + 1) {
                Tok::Sym(",") => k += 2,
                Tok::Ident(_) => k += 1,
                Tok::Sym(")") => return true,
                _ => return false,
            }
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::True => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Tok::False => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Tok::Sym("[") => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect_sym("]")?;
                Ok(f)
            }
            Tok::Sym("(") => {
                let save = self.pos;
                match self.atom() {
                    Ok(a) => Ok(a),
                    Err(e1) => {
                        let far1 = self.pos_of(&e1);
                        self.pos = save + 1;
                        let res = self.formula().and_then(|f| {
                            self.expect_sym(")")?;
                            Ok(f)
                        });
                        match res {
                            Ok(f) => Ok(f),
                            Err(e2) => Err(if self.pos_of(&e2) >= far1 { e2 } else { e1 }),
                        }
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn pos_of(&self, e: &ParseError) -> (usize, usize) {
        (e.line, e.column)
    }

    fn atom(&mut self) -> PResult<Formula> {
        let l = self.expr()?;
        let rel = match self.peek() {
            Tok::Rel(r) => *r,
            _ => return Err(self.unexpected("a relation")),
        };
        self.pos += 1;
        let r = self.expr()?;
        Ok(Formula::Atom(&l - &r, rel))
    }

    fn expr(&mut self) -> PResult<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Sym("+")) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Sym("-")) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Polynomial> {
        let mut acc = self.signed()?;
        loop {
            if self.eat(&Tok::Sym("*")) {
                acc = &acc * &self.signed()?;
            } else if *self.peek() == Tok::Sym("/") {
                self.pos += 1;
                let at = self.pos;
                let d = self.signed()?;
                match d.constant_value() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    _ => {
                        self.pos = at;
                        return Err(self.error_here("division by a non-constant or zero".into()));
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed(&mut self) -> PResult<Polynomial> {
        if self.eat(&Tok::Sym("-")) {
            return Ok(-self.signed()?);
        }
        if self.eat(&Tok::Sym("+")) {
            return self.signed();
        }
        let base = self.base()?;
        if self.eat(&Tok::Sym("^")) {
            let e = match self.peek().clone() {
                Tok::Num(q) if q.is_integer() => q.to_integer().to_u32(),
                _ => None,
            };
            match e {
                Some(e) => {
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                None => return Err(self.unexpected("a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> PResult<Polynomial> {
        match self.peek().clone() {
            Tok::Num(q) => {
                self.pos += 1;
                Ok(Polynomial::constant(&self.vars, q))
            }
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(Polynomial::var_named(&self.vars, &s).expect("identifier collected by the lexer"))
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

/// Parses a formula. Atoms are normalized to `p ⋈ 0` over the variables of
/// the whole input in order of first appearance.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut names: Vec<String> = Vec::new();
    for t in &toks {
        if let Tok::Ident(s) = &t.tok {
            if !names.contains(s) {
                names.push(s.clone());
            }
        }
    }
    let mut p = Parser { toks, pos: 0, vars: VarOrder::new(&names) };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}
