//! Parser and evaluator for expressions over `ck`, `Q[...]` and `t`.
//!
//! Grammar (whitespace is insignificant, multiplication must be explicit):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)*
//! atom    := INT | 'c' DIGITS | 't' | 'Q' '[' parts? ']' | '(' expr ')'
//! parts   := INT (',' INT)*
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::basisconv::expand_in_qtilde;
use crate::error::Result;
use crate::partitions::Partition;
use crate::qtilde::qtilde;
use crate::symfunc::{render_e_monomial, write_combination, SymPoly};
use crate::thomtables::{t_power_symbol, TExpansion};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 1000;
const MAX_DEPTH: usize = 200;
const MAX_TOKENS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Gen(usize),
    Q(Partition),
    T,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(k) => write!(f, "{k}"),
            Expr::Gen(k) => write!(f, "c{k}"),
            Expr::Q(i) => write!(f, "{}", crate::basisconv::q_symbol(i)),
            Expr::T => write!(f, "t"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
            Expr::Neg(a) => write!(f, "-({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("generator needs a positive index, as in c1")]
    BadGenerator,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("unbalanced parenthesis")]
    UnbalancedParen,
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent larger than {MAX_EXPONENT}")]
    ExponentTooLarge,
    #[error("expression nested too deeply")]
    TooDeep,
    #[error("expression has more than {MAX_TOKENS} tokens")]
    TooLong,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Gen(usize),
    T,
    Q,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(k) => format!("number {k}"),
            Tok::Gen(k) => format!("c{k}"),
            Tok::T => "t".into(),
            Tok::Q => "Q".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&ch) = chars.peek() {
        let pos = Pos { line, column };
        let err = |kind| ParseError {
            line: pos.line,
            column: pos.column,
            kind,
        };
        if ch == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            't' => Some(Tok::T),
            'Q' => Some(Tok::Q),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            column += 1;
            out.push((tok, pos));
            continue;
        }
        if ch.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
                column += 1;
            }
            let value: BigInt = digits.parse().expect("ascii digits");
            out.push((Tok::Int(value), pos));
            continue;
        }
        if ch == 'c' {
            chars.next();
            column += 1;
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
                column += 1;
            }
            let index = digits.parse::<usize>().ok().filter(|&k| k > 0);
            match index {
                Some(k) => out.push((Tok::Gen(k), pos)),
                None => return Err(err(ParseErrorKind::BadGenerator)),
            }
            continue;
        }
        return Err(err(ParseErrorKind::UnexpectedChar(ch)));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error_at(pos: Pos, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: pos.line,
            column: pos.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let kind = ParseErrorKind::Unexpected {
            expected,
            found: self.peek().describe(),
        };
        Self::error_at(self.pos(), kind)
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Self::error_at(self.pos(), ParseErrorKind::TooDeep));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.descend()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.descend()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            match self.bump().0 {
                Tok::Int(k) => {
                    let e = k
                        .to_u32()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| Self::error_at(pos, ParseErrorKind::ExponentTooLarge))?;
                    base = Expr::Pow(Box::new(base), e);
                }
                Tok::Minus => return Err(Self::error_at(pos, ParseErrorKind::NegativeExponent)),
                other => {
                    return Err(Self::error_at(
                        pos,
                        ParseErrorKind::Unexpected {
                            expected: "integer exponent",
                            found: other.describe(),
                        },
                    ))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(Expr::Int(k))
            }
            Tok::Gen(k) => {
                self.bump();
                Ok(Expr::Gen(k))
            }
            Tok::T => {
                self.bump();
                Ok(Expr::T)
            }
            Tok::Q => {
                let (_, qpos) = self.bump();
                self.partition(qpos).map(Expr::Q)
            }
            Tok::LParen => {
                let (_, open) = self.bump();
                let inner = match self.expr() {
                    Ok(e) => e,
                    // ran out of input inside the parentheses
                    Err(_) if *self.peek() == Tok::End => {
                        return Err(Self::error_at(open, ParseErrorKind::UnbalancedParen))
                    }
                    Err(e) => return Err(e),
                };
                if *self.peek() != Tok::RParen {
                    if *self.peek() == Tok::End {
                        return Err(Self::error_at(open, ParseErrorKind::UnbalancedParen));
                    }
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, generator, t, Q[...] or '('")),
        }
    }

    fn partition(&mut self, qpos: Pos) -> Result<Partition, ParseError> {
        let malformed = |pos: Pos, msg: String| Self::error_at(pos, ParseErrorKind::MalformedPartition(msg));
        if *self.peek() != Tok::LBracket {
            return Err(malformed(self.pos(), format!("expected '[' after Q, found {}", self.peek().describe())));
        }
        self.bump();
        let mut parts = Vec::new();
        if *self.peek() == Tok::RBracket {
            self.bump();
            return Ok(Partition::empty());
        }
        loop {
            let pos = self.pos();
            match self.bump().0 {
                Tok::Int(k) => {
                    let part = k
                        .to_usize()
                        .filter(|&p| p <= u32::MAX as usize)
                        .ok_or_else(|| malformed(pos, format!("part {k} is too large")))?;
                    parts.push(part);
                }
                other => return Err(malformed(pos, format!("expected a part, found {}", other.describe()))),
            }
            let pos = self.pos();
            match self.bump().0 {
                Tok::Comma => continue,
                Tok::RBracket => break,
                other => return Err(malformed(pos, format!("expected ',' or ']', found {}", other.describe()))),
            }
        }
        Partition::new(parts.clone())
            .map_err(|_| malformed(qpos, format!("parts {parts:?} are not weakly decreasing")))
    }
}

pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let toks = lex(source)?;
    if toks.len() > MAX_TOKENS {
        let (_, pos) = toks[MAX_TOKENS];
        return Err(Parser::error_at(pos, ParseErrorKind::TooLong));
    }
    let mut p = Parser {
        toks,
        at: 0,
        depth: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => {}
        Tok::RParen => return Err(Parser::error_at(p.pos(), ParseErrorKind::UnbalancedParen)),
        _ => return Err(p.unexpected("an operator or end of input")),
    }
    Ok(e)
}

/// Polynomial in `t` with coefficients in `Z[c_1, c_2, ...]`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TPoly {
    by_t: BTreeMap<usize, SymPoly>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_sympoly(p: SymPoly) -> Self {
        Self::from_parts([(0, p)])
    }

    pub fn t() -> Self {
        Self::from_parts([(1, SymPoly::one())])
    }

    pub fn from_parts<I: IntoIterator<Item = (usize, SymPoly)>>(parts: I) -> Self {
        let mut by_t: BTreeMap<usize, SymPoly> = BTreeMap::new();
        for (j, p) in parts {
            *by_t.entry(j).or_default() += &p;
        }
        by_t.retain(|_, p| !p.is_zero());
        TPoly { by_t }
    }

    /// Coefficient of `t^j`.
    pub fn t_part(&self, j: usize) -> SymPoly {
        self.by_t.get(&j).cloned().unwrap_or_default()
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, &SymPoly)> {
        self.by_t.iter().map(|(j, p)| (*j, p))
    }

    pub fn is_zero(&self) -> bool {
        self.by_t.is_empty()
    }

    /// The `t`-free value, if there is no `t` in the polynomial.
    pub fn as_sympoly(&self) -> Option<SymPoly> {
        match self.by_t.keys().max() {
            None => Some(SymPoly::zero()),
            Some(0) => Some(self.t_part(0)),
            _ => None,
        }
    }

    fn add(&self, other: &TPoly, sign: bool) -> TPoly {
        let mut out = self.clone();
        for (j, p) in &other.by_t {
            let slot = out.by_t.entry(*j).or_default();
            if sign {
                *slot += p;
            } else {
                *slot -= p;
            }
        }
        out.by_t.retain(|_, p| !p.is_zero());
        out
    }

    fn mul(&self, other: &TPoly) -> TPoly {
        let mut parts = Vec::new();
        for (a, p) in &self.by_t {
            for (b, q) in &other.by_t {
                parts.push((a + b, p * q));
            }
        }
        TPoly::from_parts(parts)
    }

    fn neg(&self) -> TPoly {
        TPoly {
            by_t: self.by_t.iter().map(|(j, p)| (*j, -p)).collect(),
        }
    }

    fn pow(&self, e: u32) -> TPoly {
        let mut acc = TPoly::from_sympoly(SymPoly::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Expands each `t`-coefficient in the Q-tilde basis.
    pub fn to_texpansion(&self, max_part: Option<usize>) -> Result<TExpansion> {
        let mut parts = Vec::new();
        for (j, p) in &self.by_t {
            parts.push((*j, expand_in_qtilde(p, max_part)?));
        }
        Ok(TExpansion::from_t_parts(parts))
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.by_t.iter().flat_map(|(j, p)| {
            p.terms().map(move |(m, c)| {
                let body = [t_power_symbol(*j), Some(render_e_monomial(m)).filter(|s| !s.is_empty())]
                    .into_iter()
                    .flatten()
                    .collect::<Vec<_>>()
                    .join("*");
                (c, body)
            })
        });
        write_combination(f, terms)
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

/// Expands `Q[I]` via its Pfaffian and multiplies out over `Z[t]`.
pub fn elaborate(e: &Expr) -> TPoly {
    match e {
        Expr::Int(k) => TPoly::from_sympoly(SymPoly::constant(k.clone())),
        Expr::Gen(k) => TPoly::from_sympoly(SymPoly::gen(*k)),
        Expr::Q(i) => TPoly::from_sympoly(qtilde(i)),
        Expr::T => TPoly::t(),
        Expr::Add(..) | Expr::Sub(..) => {
            // walk the left spine so long sums do not recurse
            let mut rights = Vec::new();
            let mut node = e;
            loop {
                match node {
                    Expr::Add(_, b) => rights.push((true, b)),
                    Expr::Sub(_, b) => rights.push((false, b)),
                    _ => break,
                }
                node = match node {
                    Expr::Add(a, _) | Expr::Sub(a, _) => a,
                    _ => unreachable!(),
                };
            }
            let mut acc = elaborate(node);
            for (sign, b) in rights.into_iter().rev() {
                acc = acc.add(&elaborate(b), sign);
            }
            acc
        }
        Expr::Mul(..) => {
            let mut rights = Vec::new();
            let mut node = e;
            while let Expr::Mul(a, b) = node {
                rights.push(b);
                node = a;
            }
            let mut acc = elaborate(node);
            for b in rights.into_iter().rev() {
                if acc.is_zero() {
                    break;
                }
                acc = acc.mul(&elaborate(b));
            }
            acc
        }
        Expr::Pow(a, k) => elaborate(a).pow(*k),
        Expr::Neg(a) => elaborate(a).neg(),
    }
}

/// Parses and elaborates in one step.
pub fn parse_tpoly(source: &str) -> Result<TPoly> {
    Ok(elaborate(&parse(source)?))
}

/// Parses a `t`-free expression into a polynomial in the `c_i`.
pub fn parse_sympoly(source: &str) -> Result<SymPoly> {
    parse_tpoly(source)?
        .as_sympoly()
        .ok_or_else(|| crate::error::Error::invalid("expression must not involve t"))
}
