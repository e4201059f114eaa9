//! Concrete syntax for formulas: a hand-written lexer, a backtracking
//! recursive-descent parser with scope-based name resolution, and a
//! precedence-aware printer whose output parses back to the same tree.
//!
//! ```text
//! input    := [ "free" decls "." ] formula
//! formula  := ("ex"|"all") binders "." formula | iff
//! iff      := imp { "<=>" imp }        imp := or [ "=>" imp ]
//! or       := and { "|" and }          and := not { "&" not }
//! not      := "~" not | "(" formula ")" | atom
//! ```
//!
//! Binders accept both `ex set x, y.` and `ex x:set, k:int.`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, IntTerm, Name, Quant, SetTerm, Sort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

const KEYWORDS: &[&str] = &[
    "free", "ex", "all", "set", "int", "prop", "true", "false", "fin", "finU", "seteq", "subseteq",
    "dvd", "eqcard", "isref", "union", "inter", "empty", "univ", "compl", "card", "MAXC",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

// Longest symbols first so that `<=>` wins over `<=` and `<`.
const SYMBOLS: &[&str] = &[
    "<=>", "=>", "<=", ">=", ":=", "(", ")", "{", "}", ",", ".", ":", ";", "&", "|", "~", "=", "<",
    ">", "+", "-", "*",
];

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);
    let span = |start: usize, end: usize, line: usize, line_start: usize| SourceSpan {
        start,
        end,
        line,
        column: start - line_start + 1,
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' || (c == b'/' && bytes.get(i + 1) == Some(&b'/')) {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            while i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), span(start, i, line, line_start)));
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((Tok::Int(n), span(start, i, line, line_start)));
            continue;
        }
        match SYMBOLS.iter().find(|s| src[i..].starts_with(*s)) {
            Some(s) => {
                i += s.len();
                out.push((Tok::Sym(s), span(start, i, line, line_start)));
            }
            None => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    span: span(start, start + ch.len_utf8(), line, line_start),
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    let end = src.len();
    out.push((Tok::Eof, span(end, end, line, line_start)));
    Ok(out)
}

/// Token cursor with a stack of variable scopes. Shared with the schema parser.
pub(crate) struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    scope: Vec<(Name, Sort)>,
}

type PResult<T> = Result<T>;

fn furthest(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (Error::Parse { span: sa, .. }, Error::Parse { span: sb, .. }) => {
            if sb.start > sa.start {
                b
            } else {
                a
            }
        }
        (Error::Parse { .. }, _) => b,
        _ => a,
    }
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, scope: Vec::new() })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub(crate) fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(Error::Parse { span: self.span(), message: message.into() })
    }

    pub(crate) fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub(crate) fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == w)
    }

    pub(crate) fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    pub(crate) fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.error(format!("expected `{w}`, found {}", self.peek()))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub(crate) fn expect_eof(&self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            self.error(format!("unexpected {} after end of formula", self.peek()))
        }
    }

    pub(crate) fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected a name, found {other}")),
        }
    }

    pub(crate) fn sort(&mut self) -> PResult<Sort> {
        let s = match self.peek() {
            Tok::Ident(w) if w == "set" => Sort::Set,
            Tok::Ident(w) if w == "int" => Sort::Int,
            Tok::Ident(w) if w == "prop" => Sort::Prop,
            other => return self.error(format!("expected a sort (set, int, prop), found {other}")),
        };
        self.bump();
        Ok(s)
    }

    pub(crate) fn push_scope(&mut self, name: Name, sort: Sort) {
        self.scope.push((name, sort));
    }

    pub(crate) fn pop_scope(&mut self, n: usize) {
        let len = self.scope.len();
        self.scope.truncate(len - n);
    }

    fn lookup(&self, name: &str) -> Option<Sort> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, s)| *s)
    }

    /// `name : sort { , name : sort }`
    pub(crate) fn decls(&mut self) -> PResult<Vec<(Name, Sort)>> {
        let mut out = Vec::new();
        loop {
            let n = self.ident()?;
            self.expect_sym(":")?;
            let s = self.sort()?;
            out.push((n, s));
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    /// Either `set x, y` or `x:set, k:int`; a leading sort sticks to the
    /// names that follow it until another sort appears.
    fn binders(&mut self) -> PResult<Vec<(Name, Sort)>> {
        let mut out = Vec::new();
        let mut current: Option<Sort> = None;
        loop {
            if matches!(self.peek(), Tok::Ident(w) if w == "set" || w == "int" || w == "prop") {
                current = Some(self.sort()?);
            }
            let n = self.ident()?;
            let s = if self.eat_sym(":") {
                let s = self.sort()?;
                current = Some(s);
                s
            } else {
                match current {
                    Some(s) => s,
                    None => return self.error(format!("missing sort for bound variable `{n}`")),
                }
            };
            out.push((n, s));
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    pub(crate) fn input(&mut self) -> PResult<Formula> {
        let mut n = 0;
        if self.eat_word("free") {
            let decls = self.decls()?;
            self.expect_sym(".")?;
            n = decls.len();
            for (v, s) in decls {
                self.push_scope(v, s);
            }
        }
        let f = self.formula()?;
        self.expect_eof()?;
        self.pop_scope(n);
        Ok(f)
    }

    pub(crate) fn formula(&mut self) -> PResult<Formula> {
        if self.at_word("ex") || self.at_word("all") {
            return self.quantified();
        }
        self.iff()
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let q = if self.eat_word("ex") {
            Quant::Exists
        } else {
            self.expect_word("all")?;
            Quant::Forall
        };
        let binders = self.binders()?;
        self.expect_sym(".")?;
        for (v, s) in &binders {
            self.push_scope(v.clone(), *s);
        }
        let body = self.formula();
        self.pop_scope(binders.len());
        let body = body?;
        Ok(binders.into_iter().rev().fold(body, |acc, (v, s)| Formula::quant(q, v, s, acc)))
    }

    fn iff(&mut self) -> PResult<Formula> {
        let mut lhs = self.imp()?;
        while self.eat_sym("<=>") {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> PResult<Formula> {
        let lhs = self.or()?;
        if self.eat_sym("=>") {
            let rhs = self.imp_rhs()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    // A quantifier may directly follow `=>`; it extends to the right.
    fn imp_rhs(&mut self) -> PResult<Formula> {
        if self.at_word("ex") || self.at_word("all") {
            return self.quantified();
        }
        self.imp()
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut lhs = self.and()?;
        while self.eat_sym("|") {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut lhs = self.not()?;
        while self.eat_sym("&") {
            let rhs = self.not()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> PResult<Formula> {
        if self.eat_sym("~") {
            return Ok(Formula::not(self.not()?));
        }
        if self.at_word("ex") || self.at_word("all") {
            return self.quantified();
        }
        if self.at_sym("(") {
            let save = self.pos;
            self.bump();
            let attempt = self.formula().and_then(|f| self.expect_sym(")").map(|_| f));
            match attempt {
                Ok(f) if !self.continues_term() => return Ok(f),
                Ok(_) => {
                    self.pos = save;
                    return self.atom();
                }
                Err(e) => {
                    self.pos = save;
                    return self.atom().map_err(|e2| furthest(e, e2));
                }
            }
        }
        self.atom()
    }

    /// Tokens that can only continue a term, never a formula.
    fn continues_term(&self) -> bool {
        match self.peek() {
            Tok::Sym(s) => matches!(*s, "=" | "<" | "<=" | ">" | ">=" | "+" | "-" | "*"),
            Tok::Ident(w) => matches!(w.as_str(), "seteq" | "subseteq" | "union" | "inter"),
            _ => false,
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let tok = self.peek().clone();
        if let Tok::Ident(w) = &tok {
            match w.as_str() {
                "true" => {
                    self.bump();
                    return Ok(Formula::tt());
                }
                "false" => {
                    self.bump();
                    return Ok(Formula::ff());
                }
                "finU" => {
                    self.bump();
                    return Ok(Formula::Atom(Atom::FinU));
                }
                "fin" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let b = self.set_term()?;
                    self.expect_sym(")")?;
                    return Ok(Formula::Atom(Atom::Fin(b)));
                }
                "dvd" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let span = self.span();
                    let neg = self.eat_sym("-");
                    let c = match self.bump() {
                        Tok::Int(n) => {
                            if neg {
                                -n
                            } else {
                                n
                            }
                        }
                        other => {
                            return Err(Error::Parse {
                                span,
                                message: format!("expected a divisor constant, found {other}"),
                            })
                        }
                    };
                    if !c.is_positive() {
                        return Err(Error::Parse { span, message: "divisor must be positive".into() });
                    }
                    self.expect_sym(",")?;
                    let t = self.int_term()?;
                    self.expect_sym(")")?;
                    return Ok(Formula::Atom(Atom::Dvd(c, t)));
                }
                "isref" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let b = self.set_term()?;
                    self.expect_sym(")")?;
                    return Ok(Formula::int_le(IntTerm::card(b), IntTerm::int(1)));
                }
                "eqcard" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let a = self.set_term()?;
                    self.expect_sym(",")?;
                    let b = self.set_term()?;
                    self.expect_sym(")")?;
                    return Ok(Formula::int_eq(IntTerm::card(a), IntTerm::card(b)));
                }
                _ => {}
            }
            if !is_keyword(w) {
                match self.lookup(w) {
                    Some(Sort::Prop) => {
                        self.bump();
                        return Ok(Formula::Atom(Atom::PropVar(w.clone())));
                    }
                    None => return self.error(format!("unbound variable `{w}`")),
                    _ => {}
                }
            }
        }
        let save = self.pos;
        let set_err = match self.set_atom() {
            Ok(f) => return Ok(f),
            Err(e) => e,
        };
        self.pos = save;
        match self.int_atom() {
            Ok(f) => Ok(f),
            Err(e) => {
                self.pos = save;
                Err(furthest(set_err, e))
            }
        }
    }

    fn set_atom(&mut self) -> PResult<Formula> {
        let a = self.set_term()?;
        let rel = match self.peek() {
            Tok::Ident(w) if w == "seteq" || w == "subseteq" => w.clone(),
            Tok::Sym("<") => "<".to_string(),
            other => return self.error(format!("expected `seteq` or `subseteq`, found {other}")),
        };
        self.bump();
        let b = self.set_term()?;
        Ok(match rel.as_str() {
            "seteq" => Formula::Atom(Atom::SetEq(a, b)),
            "subseteq" => Formula::Atom(Atom::SubsetEq(a, b)),
            _ => Formula::and(
                Formula::Atom(Atom::SubsetEq(a.clone(), b.clone())),
                Formula::not(Formula::Atom(Atom::SetEq(a, b))),
            ),
        })
    }

    fn int_atom(&mut self) -> PResult<Formula> {
        let a = self.int_term()?;
        let rel = match self.peek() {
            Tok::Sym(s) if matches!(*s, "=" | "<" | "<=" | ">" | ">=") => *s,
            other => {
                return self.error(format!("expected a comparison (=, <, <=, >, >=), found {other}"))
            }
        };
        self.bump();
        let b = self.int_term()?;
        Ok(match rel {
            "=" => Formula::int_eq(a, b),
            "<" => Formula::int_lt(a, b),
            "<=" => Formula::int_le(a, b),
            ">" => Formula::int_lt(b, a),
            _ => Formula::int_ge(a, b),
        })
    }

    pub(crate) fn set_term(&mut self) -> PResult<SetTerm> {
        let first = self.set_atom_term()?;
        let op = match self.peek() {
            Tok::Ident(w) if w == "union" || w == "inter" => w.clone(),
            _ => return Ok(first),
        };
        let mut acc = first;
        loop {
            match self.peek() {
                Tok::Ident(w) if *w == op => {
                    self.bump();
                }
                Tok::Ident(w) if w == "union" || w == "inter" => {
                    return self.error("mixed `union` and `inter` need parentheses");
                }
                _ => return Ok(acc),
            }
            let rhs = self.set_atom_term()?;
            acc = if op == "union" { SetTerm::union(acc, rhs) } else { SetTerm::inter(acc, rhs) };
        }
    }

    fn set_atom_term(&mut self) -> PResult<SetTerm> {
        match self.peek().clone() {
            Tok::Ident(w) => match w.as_str() {
                "empty" => {
                    self.bump();
                    Ok(SetTerm::Empty)
                }
                "univ" => {
                    self.bump();
                    Ok(SetTerm::Univ)
                }
                "compl" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let t = self.set_term()?;
                    self.expect_sym(")")?;
                    Ok(SetTerm::compl(t))
                }
                _ if is_keyword(&w) => self.error(format!("expected a set term, found `{w}`")),
                _ => match self.lookup(&w) {
                    Some(Sort::Set) => {
                        self.bump();
                        Ok(SetTerm::Var(w))
                    }
                    Some(s) => self.error(format!("`{w}` has sort {s}, expected a set")),
                    None => self.error(format!("unbound variable `{w}`")),
                },
            },
            Tok::Sym("(") => {
                self.bump();
                let t = self.set_term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            other => self.error(format!("expected a set term, found {other}")),
        }
    }

    pub(crate) fn int_term(&mut self) -> PResult<IntTerm> {
        let mut acc = self.int_atom_term()?;
        loop {
            if self.eat_sym("+") {
                acc = IntTerm::add(acc, self.int_atom_term()?);
            } else if self.eat_sym("-") {
                acc = IntTerm::sub(acc, self.int_atom_term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn int_atom_term(&mut self) -> PResult<IntTerm> {
        let negative_literal = self.at_sym("-") && matches!(self.peek_at(1), Tok::Int(_));
        match self.peek().clone() {
            Tok::Int(_) | Tok::Sym("-") if negative_literal || matches!(self.peek(), Tok::Int(_)) => {
                let neg = self.eat_sym("-");
                let n = match self.bump() {
                    Tok::Int(n) => n,
                    _ => unreachable!("checked above"),
                };
                let c = if neg { -n } else { n };
                if self.eat_sym("*") {
                    let t = self.int_atom_term()?;
                    Ok(IntTerm::MulConst(c, Box::new(t)))
                } else {
                    Ok(IntTerm::Const(c))
                }
            }
            Tok::Ident(w) => match w.as_str() {
                "MAXC" => {
                    self.bump();
                    Ok(IntTerm::MaxCard)
                }
                "card" => {
                    self.bump();
                    self.expect_sym("(")?;
                    let b = self.set_term()?;
                    self.expect_sym(")")?;
                    Ok(IntTerm::card(b))
                }
                _ if is_keyword(&w) => self.error(format!("expected an integer term, found `{w}`")),
                _ => match self.lookup(&w) {
                    Some(Sort::Int) => {
                        self.bump();
                        Ok(IntTerm::Var(w))
                    }
                    Some(s) => self.error(format!("`{w}` has sort {s}, expected an integer")),
                    None => self.error(format!("unbound variable `{w}`")),
                },
            },
            Tok::Sym("(") => {
                self.bump();
                let t = self.int_term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            other => self.error(format!("expected an integer term, found {other}")),
        }
    }
}

/// Parses a formula; free variables must be declared in a `free` preamble.
pub fn parse_formula(src: &str) -> Result<Formula> {
    Parser::new(src)?.input()
}

/// Parses a formula with extra free variables in scope (in addition to any
/// `free` preamble in the text).
pub fn parse_formula_in(src: &str, free: &[(Name, Sort)]) -> Result<Formula> {
    let mut p = Parser::new(src)?;
    for (v, s) in free {
        p.push_scope(v.clone(), *s);
    }
    p.input()
}

// ---------------------------------------------------------------------------
// Printing

pub fn print_set_term(t: &SetTerm) -> String {
    let mut s = String::new();
    set_term(t, &mut s);
    s
}

fn set_atomic(t: &SetTerm, out: &mut String) {
    match t {
        SetTerm::Union(..) | SetTerm::Inter(..) => {
            out.push('(');
            set_term(t, out);
            out.push(')');
        }
        _ => set_term(t, out),
    }
}

fn set_term(t: &SetTerm, out: &mut String) {
    match t {
        SetTerm::Var(v) => out.push_str(v),
        SetTerm::Empty => out.push_str("empty"),
        SetTerm::Univ => out.push_str("univ"),
        SetTerm::Compl(a) => {
            out.push_str("compl(");
            set_term(a, out);
            out.push(')');
        }
        SetTerm::Union(a, b) | SetTerm::Inter(a, b) => {
            let union = matches!(t, SetTerm::Union(..));
            let same = |x: &SetTerm| matches!(x, SetTerm::Union(..)) == union && matches!(x, SetTerm::Union(..) | SetTerm::Inter(..));
            if same(a) {
                set_term(a, out);
            } else {
                set_atomic(a, out);
            }
            out.push_str(if union { " union " } else { " inter " });
            set_atomic(b, out);
        }
    }
}

pub fn print_int_term(t: &IntTerm) -> String {
    let mut s = String::new();
    int_term(t, &mut s);
    s
}

fn int_atomic(t: &IntTerm, out: &mut String) {
    match t {
        IntTerm::Add(..) | IntTerm::Sub(..) => {
            out.push('(');
            int_term(t, out);
            out.push(')');
        }
        _ => int_term(t, out),
    }
}

fn int_term(t: &IntTerm, out: &mut String) {
    match t {
        IntTerm::Var(v) => out.push_str(v),
        IntTerm::Const(c) => out.push_str(&c.to_string()),
        IntTerm::MaxCard => out.push_str("MAXC"),
        IntTerm::Card(b) => {
            out.push_str("card(");
            set_term(b, out);
            out.push(')');
        }
        IntTerm::MulConst(c, a) => {
            out.push_str(&c.to_string());
            out.push_str(" * ");
            int_atomic(a, out);
        }
        IntTerm::Add(a, b) | IntTerm::Sub(a, b) => {
            int_term(a, out);
            out.push_str(if matches!(t, IntTerm::Add(..)) { " + " } else { " - " });
            int_atomic(b, out);
        }
    }
}

pub fn print_atom(a: &Atom) -> String {
    match a {
        Atom::SetEq(x, y) => format!("{} seteq {}", print_set_term(x), print_set_term(y)),
        Atom::SubsetEq(x, y) => format!("{} subseteq {}", print_set_term(x), print_set_term(y)),
        Atom::IntEq(x, y) => format!("{} = {}", print_int_term(x), print_int_term(y)),
        Atom::IntLt(x, y) => format!("{} < {}", print_int_term(x), print_int_term(y)),
        Atom::Dvd(c, t) => format!("dvd({c}, {})", print_int_term(t)),
        Atom::Fin(b) => format!("fin({})", print_set_term(b)),
        Atom::PropVar(p) => p.clone(),
        Atom::FinU => "finU".into(),
        Atom::True => "true".into(),
        Atom::False => "false".into(),
    }
}

// Binding strength: quantifier 0, iff 1, imp 2, or 3, and 4, not 5, atom 6.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(a) if matches!(**a, Formula::Atom(Atom::IntLt(..))) => 6,
        Formula::Not(_) => 5,
        Formula::Atom(_) => 6,
    }
}

fn formula(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        formula(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Atom(a) => out.push_str(&print_atom(a)),
        Formula::Not(a) => match &**a {
            Formula::Atom(Atom::IntLt(x, y)) => {
                out.push_str(&format!("{} >= {}", print_int_term(x), print_int_term(y)));
            }
            _ => {
                out.push('~');
                formula(a, 5, out);
            }
        },
        Formula::And(a, b) => {
            formula(a, 4, out);
            out.push_str(" & ");
            formula(b, 5, out);
        }
        Formula::Or(a, b) => {
            formula(a, 3, out);
            out.push_str(" | ");
            formula(b, 4, out);
        }
        Formula::Implies(a, b) => {
            formula(a, 3, out);
            out.push_str(" => ");
            formula(b, 2, out);
        }
        Formula::Iff(a, b) => {
            formula(a, 1, out);
            out.push_str(" <=> ");
            formula(b, 2, out);
        }
        Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
            out.push_str(if matches!(f, Formula::Exists(..)) { "ex " } else { "all " });
            out.push_str(&format!("{s} {v}. "));
            formula(body, 0, out);
        }
    }
}

/// Prints a formula in the concrete syntax accepted by [`parse_formula`].
pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    formula(f, 0, &mut s);
    s
}

/// Like [`print_formula`] but prefixes a `free` preamble declaring the free
/// variables, so that open formulas round-trip too.
pub fn print_input(f: &Formula) -> String {
    let free = f.free_vars();
    if free.is_empty() {
        return print_formula(f);
    }
    let decls: Vec<String> = free.iter().map(|(v, s)| format!("{v}:{s}")).collect();
    format!("free {}. {}", decls.join(", "), print_formula(f))
}
