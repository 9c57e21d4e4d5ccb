//! Text syntax for both formula languages.
//!
//! l-group formulas: atoms `TERM <= TERM` (also `>=`, `=`, `<`), connectives
//! `&`, `|`, `~`, `->`, quantifiers `E y.` and `A y.`, parentheses. Terms
//! are rational combinations `1/2*x1 + -x2 - y`, and may use lattice meet
//! `/\` and join `\/`, which are compiled away. Lattice formulas use
//! `v[s|t]`, `bot`, `true`, `<=`, `/\`, `\/`, the same connectives,
//! `E {v[..], ...}.` blocks, symbolic blocks `E {Ht(x1,x2;16)^2 \ Ht(x1;16)^2}.`
//! and `delta(x1,x2;16)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::formula::lattice::{LatTerm, LatticeFormula, PairTuple};
use crate::formula::lgroup::LGroupFormula;
use crate::formula::pairs::{PairSpace, Square};
use crate::rational::Rational;
use crate::term::{Term, TermPair, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Le,
    Ge,
    Lt,
    Eq,
    Amp,
    Bar,
    Tilde,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Dot,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Meet,
    Join,
    Caret,
    Backslash,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::Lt => "<",
            Tok::Eq => "=",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Tilde => "~",
            Tok::Arrow => "->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Meet => "/\\",
            Tok::Join => "\\/",
            Tok::Caret => "^",
            Tok::Backslash => "\\",
            Tok::End => return write!(f, "end of input"),
        };
        write!(f, "`{s}`")
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let next_is = |i: usize, c: char| chars.get(i + 1).is_some_and(|&(_, d)| d == c);
    while i < chars.len() {
        let (pos, c) = chars[i];
        let mut step = 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
                continue;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                step = j - i;
                let end = chars.get(j).map_or(text.len(), |&(p, _)| p);
                Tok::Num(text[pos..end].parse().expect("digits"))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                    j += 1;
                }
                step = j - i;
                let end = chars.get(j).map_or(text.len(), |&(p, _)| p);
                Tok::Ident(text[pos..end].to_string())
            }
            '<' if next_is(i, '=') => {
                step = 2;
                Tok::Le
            }
            '>' if next_is(i, '=') => {
                step = 2;
                Tok::Ge
            }
            '-' if next_is(i, '>') => {
                step = 2;
                Tok::Arrow
            }
            '/' if next_is(i, '\\') => {
                step = 2;
                Tok::Meet
            }
            '\\' if next_is(i, '/') => {
                step = 2;
                Tok::Join
            }
            '<' => Tok::Lt,
            '=' => Tok::Eq,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '~' | '¬' => Tok::Tilde,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '\\' => Tok::Backslash,
            '≤' => Tok::Le,
            '≥' => Tok::Ge,
            '∧' => Tok::Meet,
            '∨' => Tok::Join,
            '→' => Tok::Arrow,
            '∃' => Tok::Ident("E".into()),
            '∀' => Tok::Ident("A".into()),
            '⊥' => Tok::Ident("bot".into()),
            other => return Err(ParseError { pos, msg: format!("unexpected character `{other}`") }),
        };
        out.push((tok, pos));
        i += step;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Terms before variable resolution.
#[derive(Clone, Debug)]
enum RawTerm {
    Var(String, usize),
    Zero,
    Add(Box<RawTerm>, Box<RawTerm>),
    Scale(Rational, Box<RawTerm>),
    Meet(Box<RawTerm>, Box<RawTerm>),
    Join(Box<RawTerm>, Box<RawTerm>),
}

#[derive(Clone, Copy, Debug)]
enum Cmp {
    Le,
    Ge,
    Lt,
    Eq,
}

#[derive(Clone, Debug)]
enum RawFormula {
    Atom(RawTerm, Cmp, RawTerm),
    And(Box<RawFormula>, Box<RawFormula>),
    Or(Box<RawFormula>, Box<RawFormula>),
    Implies(Box<RawFormula>, Box<RawFormula>),
    Not(Box<RawFormula>),
    Exists(String, Box<RawFormula>),
    Forall(String, Box<RawFormula>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser { toks: tokenize(text)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            let found = self.peek().clone();
            self.error(format!("expected {t}, found {found}"))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected a variable, found {other}")),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            let found = self.peek().clone();
            self.error(format!("unexpected {found}"))
        }
    }

    fn number(&mut self) -> PResult<BigInt> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            other => self.error(format!("expected a number, found {other}")),
        }
    }

    /// `n` or `n/m`.
    fn rational(&mut self) -> PResult<Rational> {
        let n = self.number()?;
        if *self.peek() == Tok::Slash {
            self.bump();
            let pos = self.pos();
            let m = self.number()?;
            if m.is_zero() {
                return Err(ParseError { pos, msg: "zero denominator".into() });
            }
            Ok(Rational::new(n, m))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    // Terms.

    fn lterm(&mut self) -> PResult<RawTerm> {
        let mut t = self.sum()?;
        loop {
            match self.peek() {
                Tok::Meet => {
                    self.bump();
                    t = RawTerm::Meet(Box::new(t), Box::new(self.sum()?));
                }
                Tok::Join => {
                    self.bump();
                    t = RawTerm::Join(Box::new(t), Box::new(self.sum()?));
                }
                _ => return Ok(t),
            }
        }
    }

    fn sum(&mut self) -> PResult<RawTerm> {
        let mut t = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    t = RawTerm::Add(Box::new(t), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.product()?;
                    t = RawTerm::Add(Box::new(t), Box::new(RawTerm::Scale(-Rational::one(), Box::new(rhs))));
                }
                _ => return Ok(t),
            }
        }
    }

    fn product(&mut self) -> PResult<RawTerm> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(RawTerm::Scale(-Rational::one(), Box::new(self.product()?)))
            }
            Tok::Num(_) => {
                let pos = self.pos();
                let q = self.rational()?;
                if self.eat(&Tok::Star) || matches!(self.peek(), Tok::Ident(_) | Tok::LParen) {
                    Ok(RawTerm::Scale(q, Box::new(self.product()?)))
                } else if q.is_zero() {
                    Ok(RawTerm::Zero)
                } else {
                    Err(ParseError { pos, msg: format!("constant {q} is not a term; only 0 is") })
                }
            }
            _ => self.term_primary(),
        }
    }

    fn term_primary(&mut self) -> PResult<RawTerm> {
        match self.peek().clone() {
            Tok::Ident(name) if !is_keyword(&name) => {
                let pos = self.pos();
                self.bump();
                Ok(RawTerm::Var(name, pos))
            }
            Tok::LParen => {
                self.bump();
                let t = self.lterm()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            other => self.error(format!("expected a term, found {other}")),
        }
    }

    // l-group formulas.

    fn formula(&mut self) -> PResult<RawFormula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(RawFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<RawFormula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            f = RawFormula::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<RawFormula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = RawFormula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<RawFormula> {
        if self.eat(&Tok::Tilde) {
            return Ok(RawFormula::Not(Box::new(self.unary()?)));
        }
        if (self.is_ident("E") || self.is_ident("A")) && matches!(self.peek_at(1), Tok::Ident(_)) {
            let universal = self.is_ident("A");
            self.bump();
            let mut names = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                names.push(self.ident()?);
            }
            self.expect(&Tok::Dot)?;
            let mut body = self.formula()?;
            for name in names.into_iter().rev() {
                body = if universal {
                    RawFormula::Forall(name, Box::new(body))
                } else {
                    RawFormula::Exists(name, Box::new(body))
                };
            }
            return Ok(body);
        }
        if *self.peek() == Tok::LParen {
            let save = self.at;
            if let Ok(atom) = self.atom() {
                return Ok(atom);
            }
            self.at = save;
            self.bump();
            let f = self.formula()?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<RawFormula> {
        let lhs = self.lterm()?;
        let at = self.at;
        let cmp = match self.bump() {
            Tok::Le => Cmp::Le,
            Tok::Ge => Cmp::Ge,
            Tok::Lt => Cmp::Lt,
            Tok::Eq => Cmp::Eq,
            other => {
                self.at = at;
                return self.error(format!("expected `<=`, `>=`, `<` or `=`, found {other}"));
            }
        };
        let rhs = self.lterm()?;
        Ok(RawFormula::Atom(lhs, cmp, rhs))
    }
}

fn is_keyword(name: &str) -> bool {
    matches!(name, "E" | "A")
}

/// Index of a name of the form `x<k>`.
fn var_index(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    digits.parse().ok()
}

/// Assigns variable indices: free `x<k>` keep `k`, a bound `x<k>` keeps `k`
/// when no other variable uses it, and every other name gets the next
/// unused index.
struct Renamer {
    used: BTreeSet<u32>,
    free: BTreeMap<String, Var>,
}

impl Renamer {
    fn fresh(&mut self) -> Var {
        let k = self.used.iter().next_back().map_or(1, |m| m + 1);
        self.used.insert(k);
        Var(k)
    }

    fn bind(&mut self, name: &str) -> Var {
        match var_index(name) {
            Some(k) if !self.used.contains(&k) => {
                self.used.insert(k);
                Var(k)
            }
            _ => self.fresh(),
        }
    }
}

fn collect_free(f: &RawFormula, bound: &mut Vec<String>, out: &mut Vec<String>) {
    fn term(t: &RawTerm, bound: &[String], out: &mut Vec<String>) {
        match t {
            RawTerm::Var(n, _) => {
                if !bound.contains(n) && !out.contains(n) {
                    out.push(n.clone());
                }
            }
            RawTerm::Zero => {}
            RawTerm::Add(a, b) | RawTerm::Meet(a, b) | RawTerm::Join(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            RawTerm::Scale(_, a) => term(a, bound, out),
        }
    }
    match f {
        RawFormula::Atom(a, _, b) => {
            term(a, bound, out);
            term(b, bound, out);
        }
        RawFormula::And(a, b) | RawFormula::Or(a, b) | RawFormula::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        RawFormula::Not(a) => collect_free(a, bound, out),
        RawFormula::Exists(v, a) | RawFormula::Forall(v, a) => {
            bound.push(v.clone());
            collect_free(a, bound, out);
            bound.pop();
        }
    }
}

struct Lowering {
    names: Renamer,
    scopes: Vec<(String, Var)>,
}

/// A meet or join definition introduced for a lattice term.
struct Definition {
    var: Var,
    join: bool,
    lhs: Term,
    rhs: Term,
}

impl Lowering {
    fn lookup(&self, name: &str) -> Var {
        self.scopes
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| self.names.free[name])
    }

    fn term(&mut self, t: &RawTerm, defs: &mut Vec<Definition>) -> Term {
        match t {
            RawTerm::Var(n, _) => Term::var(self.lookup(n)),
            RawTerm::Zero => Term::zero(),
            RawTerm::Add(a, b) => {
                let a = self.term(a, defs);
                a.add(&self.term(b, defs))
            }
            RawTerm::Scale(q, a) => self.term(a, defs).scale(q),
            RawTerm::Meet(a, b) | RawTerm::Join(a, b) => {
                let lhs = self.term(a, defs);
                let rhs = self.term(b, defs);
                let var = self.names.fresh();
                defs.push(Definition { var, join: matches!(t, RawTerm::Join(..)), lhs, rhs });
                Term::var(var)
            }
        }
    }

    /// `w <= s & w <= t & A u. (u <= s & u <= t -> u <= w)` for a meet,
    /// dually for a join.
    fn definition(&mut self, d: &Definition) -> LGroupFormula {
        let w = Term::var(d.var);
        let u_var = self.names.fresh();
        let u = Term::var(u_var);
        let le = |a: &Term, b: &Term, flip: bool| {
            if flip {
                LGroupFormula::atom(b.clone(), a.clone())
            } else {
                LGroupFormula::atom(a.clone(), b.clone())
            }
        };
        let bounds = LGroupFormula::and(le(&w, &d.lhs, d.join), le(&w, &d.rhs, d.join));
        let premise = LGroupFormula::and(le(&u, &d.lhs, d.join), le(&u, &d.rhs, d.join));
        let extremal = LGroupFormula::forall(u_var, LGroupFormula::implies(premise, le(&u, &w, d.join)));
        LGroupFormula::and(bounds, extremal)
    }

    fn formula(&mut self, f: &RawFormula) -> LGroupFormula {
        match f {
            RawFormula::Atom(a, cmp, b) => {
                let mut defs = Vec::new();
                let s = self.term(a, &mut defs);
                let t = self.term(b, &mut defs);
                let mut out = match cmp {
                    Cmp::Le => LGroupFormula::atom(s, t),
                    Cmp::Ge => LGroupFormula::atom(t, s),
                    Cmp::Lt => LGroupFormula::not(LGroupFormula::atom(t, s)),
                    Cmp::Eq => LGroupFormula::and(LGroupFormula::atom(s.clone(), t.clone()), LGroupFormula::atom(t, s)),
                };
                // Inner definitions were pushed first and are quantified
                // outermost, since later definitions mention them.
                let defined: Vec<LGroupFormula> = defs.iter().map(|d| self.definition(d)).collect();
                for (d, def) in defs.iter().zip(defined).rev() {
                    out = LGroupFormula::exists(d.var, LGroupFormula::and(def, out));
                }
                out
            }
            RawFormula::And(a, b) => LGroupFormula::and(self.formula(a), self.formula(b)),
            RawFormula::Or(a, b) => LGroupFormula::or(self.formula(a), self.formula(b)),
            RawFormula::Implies(a, b) => LGroupFormula::implies(self.formula(a), self.formula(b)),
            RawFormula::Not(a) => LGroupFormula::not(self.formula(a)),
            RawFormula::Exists(n, a) | RawFormula::Forall(n, a) => {
                let v = self.names.bind(n);
                self.scopes.push((n.clone(), v));
                let body = self.formula(a);
                self.scopes.pop();
                if matches!(f, RawFormula::Forall(..)) {
                    LGroupFormula::forall(v, body)
                } else {
                    LGroupFormula::exists(v, body)
                }
            }
        }
    }
}

/// Parses an l-group formula into core form.
pub fn parse_lgroup(text: &str) -> Result<LGroupFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.formula()?;
    p.finish()?;
    let mut free = Vec::new();
    collect_free(&raw, &mut Vec::new(), &mut free);
    let mut names = Renamer { used: BTreeSet::new(), free: BTreeMap::new() };
    for n in &free {
        if let Some(k) = var_index(n) {
            names.used.insert(k);
            names.free.insert(n.clone(), Var(k));
        }
    }
    for n in &free {
        if var_index(n).is_none() {
            let v = names.fresh();
            names.free.insert(n.clone(), v);
        }
    }
    let mut lowering = Lowering { names, scopes: Vec::new() };
    Ok(lowering.formula(&raw))
}

impl FromStr for LGroupFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_lgroup(s)
    }
}

/// Parses the standalone term syntax used inside `v[s|t]`.
fn resolve_plain(t: &RawTerm) -> PResult<Term> {
    Ok(match t {
        RawTerm::Var(n, pos) => match var_index(n) {
            Some(k) => Term::var(Var(k)),
            None => return Err(ParseError { pos: *pos, msg: format!("variable `{n}` is not of the form x<k>") }),
        },
        RawTerm::Zero => Term::zero(),
        RawTerm::Add(a, b) => resolve_plain(a)?.add(&resolve_plain(b)?),
        RawTerm::Scale(q, a) => resolve_plain(a)?.scale(q),
        RawTerm::Meet(..) | RawTerm::Join(..) => {
            return Err(ParseError { pos: 0, msg: "lattice operations inside an index term".into() })
        }
    })
}

impl Parser {
    fn plain_term(&mut self) -> PResult<Term> {
        let t = self.sum()?;
        resolve_plain(&t)
    }

    fn lat_pair(&mut self) -> PResult<TermPair> {
        if !self.is_ident("v") {
            let found = self.peek().clone();
            return self.error(format!("expected `v[`, found {found}"));
        }
        self.bump();
        self.expect(&Tok::LBracket)?;
        let s = self.plain_term()?;
        self.expect(&Tok::Bar)?;
        let t = self.plain_term()?;
        self.expect(&Tok::RBracket)?;
        Ok(TermPair::new(s, t))
    }

    fn lat_term(&mut self) -> PResult<LatTerm> {
        let mut t = self.lat_term_primary()?;
        loop {
            match self.peek() {
                Tok::Meet => {
                    self.bump();
                    t = LatTerm::meet(t, self.lat_term_primary()?);
                }
                Tok::Join => {
                    self.bump();
                    t = LatTerm::join(t, self.lat_term_primary()?);
                }
                _ => return Ok(t),
            }
        }
    }

    fn lat_term_primary(&mut self) -> PResult<LatTerm> {
        if self.eat(&Tok::LParen) {
            let t = self.lat_term()?;
            self.expect(&Tok::RParen)?;
            return Ok(t);
        }
        Ok(LatTerm::Var(self.lat_pair()?))
    }

    fn lat_formula(&mut self) -> PResult<LatticeFormula> {
        let lhs = self.lat_disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.lat_formula()?;
            return Ok(LatticeFormula::not(LatticeFormula::And(vec![lhs, LatticeFormula::not(rhs)])));
        }
        Ok(lhs)
    }

    fn lat_disjunction(&mut self) -> PResult<LatticeFormula> {
        let mut f = self.lat_conjunction()?;
        while self.eat(&Tok::Bar) {
            let g = self.lat_conjunction()?;
            f = LatticeFormula::not(LatticeFormula::And(vec![LatticeFormula::not(f), LatticeFormula::not(g)]));
        }
        Ok(f)
    }

    fn lat_conjunction(&mut self) -> PResult<LatticeFormula> {
        let first = self.lat_unary()?;
        if *self.peek() != Tok::Amp {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(&Tok::Amp) {
            items.push(self.lat_unary()?);
        }
        Ok(LatticeFormula::And(items))
    }

    fn lat_unary(&mut self) -> PResult<LatticeFormula> {
        if self.eat(&Tok::Tilde) {
            return Ok(LatticeFormula::not(self.lat_unary()?));
        }
        if self.is_ident("true") {
            self.bump();
            return Ok(LatticeFormula::And(Vec::new()));
        }
        if self.is_ident("delta") {
            self.bump();
            self.expect(&Tok::LParen)?;
            let (vars, bound) = self.vars_and_bound()?;
            self.expect(&Tok::RParen)?;
            return Ok(LatticeFormula::Delta { vars, bound });
        }
        if self.is_ident("E") && *self.peek_at(1) == Tok::LBrace {
            self.bump();
            let tuple = self.tuple()?;
            self.expect(&Tok::Dot)?;
            let body = self.lat_formula()?;
            return Ok(LatticeFormula::exists(tuple, body));
        }
        if *self.peek() == Tok::LParen {
            let save = self.at;
            if let Ok(atom) = self.lat_atom() {
                return Ok(atom);
            }
            self.at = save;
            self.bump();
            let f = self.lat_formula()?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        self.lat_atom()
    }

    fn lat_atom(&mut self) -> PResult<LatticeFormula> {
        let lhs = self.lat_term()?;
        let at = self.at;
        match self.bump() {
            Tok::Le => Ok(LatticeFormula::Leq(lhs, self.lat_term()?)),
            Tok::Eq if self.is_ident("bot") => {
                self.bump();
                match lhs {
                    LatTerm::Var(p) => Ok(LatticeFormula::IsBottom(p)),
                    _ => self.error("only variables can be compared with `bot`"),
                }
            }
            Tok::Eq => Ok(LatticeFormula::equal(lhs, self.lat_term()?)),
            other => {
                self.at = at;
                self.error(format!("expected `<=` or `=`, found {other}"))
            }
        }
    }

    fn vars_and_bound(&mut self) -> PResult<(Vec<Var>, BigUint)> {
        let mut vars = Vec::new();
        if *self.peek() != Tok::Semi {
            loop {
                let pos = self.pos();
                let name = self.ident()?;
                match var_index(&name) {
                    Some(k) => vars.push(Var(k)),
                    None => return Err(ParseError { pos, msg: format!("`{name}` is not of the form x<k>") }),
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::Semi)?;
        let pos = self.pos();
        let n = self.number()?;
        let bound = n.to_biguint().filter(|b| !b.is_zero()).ok_or(ParseError { pos, msg: "bound must be positive".into() })?;
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        Ok((sorted, bound))
    }

    fn square(&mut self) -> PResult<Square> {
        if !self.is_ident("Ht") {
            let found = self.peek().clone();
            return self.error(format!("expected `Ht(`, found {found}"));
        }
        self.bump();
        self.expect(&Tok::LParen)?;
        let (vars, bound) = self.vars_and_bound()?;
        self.expect(&Tok::RParen)?;
        self.expect(&Tok::Caret)?;
        let pos = self.pos();
        if self.number()? != BigInt::from(2) {
            return Err(ParseError { pos, msg: "expected exponent 2".into() });
        }
        Ok(Square::new(&vars, bound))
    }

    fn tuple(&mut self) -> PResult<PairTuple> {
        self.expect(&Tok::LBrace)?;
        if self.is_ident("Ht") {
            let base = self.square()?;
            let mut excluded = Vec::new();
            while self.eat(&Tok::Backslash) {
                excluded.push(self.square()?);
            }
            self.expect(&Tok::RBrace)?;
            return Ok(PairTuple::Space(PairSpace::new(base, excluded)));
        }
        let mut pairs = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                pairs.push(self.lat_pair()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBrace)?;
        }
        Ok(PairTuple::Explicit(pairs))
    }
}

/// Parses a lattice formula.
pub fn parse_lattice(text: &str) -> Result<LatticeFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.lat_formula()?;
    p.finish()?;
    Ok(f)
}

impl FromStr for LatticeFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_lattice(s)
    }
}
