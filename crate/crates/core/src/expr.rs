//! Text form of series and maps.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! top    := expr | "(" expr ("," expr)+ ")"
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" natural)?
//! atom   := integer | variable | "i" | "(" expr ")"
//! ```
//!
//! Division is only allowed by a nonzero constant, which is how rational
//! literals `p/q` are written. `i` is the imaginary unit unless it is a
//! declared variable. [`Variables::print_series`] emits text that parses
//! back to the same series.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::error::Error as AlgebraError;
use crate::monomial::MultiIndex;
use crate::scalar::{Field, Rational};
use crate::series::{FormalMap, FormalSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {name:?} at {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("exponent {exponent} at {pos} exceeds the degree cap {cap}")]
    ExponentOverflow { pos: usize, exponent: String, cap: u32 },
    #[error("division by zero at {pos}")]
    DivisionByZero { pos: usize },
    #[error("division by a non-constant expression at {pos}")]
    NonConstantDivisor { pos: usize },
    #[error("the imaginary unit at {pos} is not available over this field")]
    NoImaginaryUnit { pos: usize },
    #[error("cannot infer variables from {0:?}; declare them explicitly")]
    CannotInferVariables(Vec<String>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Ordered variable names; position `j` is variable `t_j` internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variables {
    names: Vec<String>,
}

impl Variables {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Variables { names: names.into_iter().map(Into::into).collect() }
    }

    /// `prefix1, ..., prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Variables { names: (1..=n).map(|i| format!("{prefix}{i}")).collect() }
    }

    /// `x1, y1, ..., xn, yn`, the order produced by realification.
    pub fn real_pairs(n: usize) -> Self {
        Variables { names: (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Guesses the variable list from identifiers used in `texts`:
    /// `t1..tn`, `z, w`, or `x1, y1, ..., xn, yn`.
    pub fn infer<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Self, ExprError> {
        let mut idents: Vec<String> = Vec::new();
        for t in texts {
            for tok in tokenize(t)? {
                if let Tok::Ident(name) = tok.kind {
                    if name != "i" && !idents.contains(&name) {
                        idents.push(name);
                    }
                }
            }
        }
        let indexed = |prefix: char, name: &str| -> Option<usize> {
            name.strip_prefix(prefix).filter(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit())).and_then(|r| r.parse().ok())
        };
        if idents.is_empty() {
            return Ok(Variables::indexed("t", 1));
        }
        if let Some(max) = idents.iter().map(|n| indexed('t', n)).collect::<Option<Vec<_>>>().and_then(|v| v.into_iter().max()) {
            if max > 0 {
                return Ok(Variables::indexed("t", max));
            }
        }
        if idents.iter().all(|n| n == "z" || n == "w") {
            return Ok(if idents.iter().any(|n| n == "w") { Variables::new(["z", "w"]) } else { Variables::new(["z"]) });
        }
        let xy: Option<Vec<usize>> = idents.iter().map(|n| indexed('x', n).or_else(|| indexed('y', n))).collect();
        if let Some(max) = xy.and_then(|v| v.into_iter().max()) {
            if max > 0 {
                return Ok(Variables::real_pairs(max));
            }
        }
        Err(ExprError::CannotInferVariables(idents))
    }

    pub fn parse_series<F: Field>(&self, text: &str, trunc: u32, cap: u32) -> Result<FormalSeries<F>, ExprError> {
        match self.parse(text, trunc, cap)? {
            Parsed::Series(s) => Ok(s),
            Parsed::Tuple(_) => Err(ExprError::Syntax { pos: 0, msg: "expected a single expression, found a tuple".into() }),
        }
    }

    /// A tuple `(f1, ..., fn)`; with one variable a bare expression is accepted.
    pub fn parse_tuple<F: Field>(&self, text: &str, trunc: u32, cap: u32) -> Result<Vec<FormalSeries<F>>, ExprError> {
        match self.parse(text, trunc, cap)? {
            Parsed::Tuple(v) => Ok(v),
            Parsed::Series(s) => Ok(vec![s]),
        }
    }

    pub fn parse_map<F: Field>(&self, text: &str, trunc: u32, cap: u32) -> Result<FormalMap<F>, ExprError> {
        let comps = self.parse_tuple(text, trunc, cap)?;
        crate::error::check_dim(self.len(), comps.len())?;
        Ok(FormalMap::new(comps)?)
    }

    pub fn parse<F: Field>(&self, text: &str, trunc: u32, cap: u32) -> Result<Parsed<F>, ExprError> {
        if trunc > cap {
            return Err(ExprError::ExponentOverflow { pos: 0, exponent: trunc.to_string(), cap });
        }
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(ExprError::Syntax { pos: 0, msg: "empty expression".into() });
        }
        let parser = |slice: &[Token]| -> Result<FormalSeries<F>, ExprError> {
            let mut p = Parser { toks: slice, at: 0, vars: self, trunc, cap, end: text.len() };
            let v = p.expr()?;
            if p.at != slice.len() {
                return Err(ExprError::Syntax { pos: slice[p.at].pos, msg: "unexpected token".into() });
            }
            Ok(v)
        };
        if let Some(parts) = split_tuple(&toks) {
            return Ok(Parsed::Tuple(parts.into_iter().map(parser).collect::<Result<_, _>>()?));
        }
        Ok(Parsed::Series(parser(&toks)?))
    }

    pub fn print_series<F: Field>(&self, s: &FormalSeries<F>) -> String {
        let mut out = String::new();
        for (idx, (e, c)) in s.terms().enumerate() {
            let (re, im) = c.parts();
            let (negative, body) = if im.is_zero() {
                (re.is_negative(), scaled_monomial(&re.abs().to_string(), re.abs().is_one(), e, self))
            } else if re.is_zero() {
                let mag = im.abs();
                let unit = if mag.is_one() { "i".to_string() } else { format!("{mag}*i") };
                (im.is_negative(), scaled_monomial(&unit, false, e, self))
            } else {
                let sign = if im.is_negative() { '-' } else { '+' };
                let mag = im.abs();
                let coeff = if mag.is_one() { format!("({re} {sign} i)") } else { format!("({re} {sign} {mag}*i)") };
                (false, scaled_monomial(&coeff, false, e, self))
            };
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn print_tuple<F: Field>(&self, comps: &[FormalSeries<F>]) -> String {
        let parts: Vec<String> = comps.iter().map(|c| self.print_series(c)).collect();
        format!("({})", parts.join(", "))
    }

    pub fn print_map<F: Field>(&self, m: &FormalMap<F>) -> String {
        self.print_tuple(m.components())
    }
}

fn scaled_monomial(coeff: &str, unit_coeff: bool, e: &MultiIndex, vars: &Variables) -> String {
    let mut mono = String::new();
    for (j, &k) in e.exponents().iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !mono.is_empty() {
            mono.push('*');
        }
        let name = vars.names.get(j).map_or_else(|| format!("t{}", j + 1), Clone::clone);
        mono.push_str(&name);
        if k > 1 {
            let _ = write!(mono, "^{k}");
        }
    }
    match (mono.is_empty(), unit_coeff) {
        (true, _) => coeff.to_string(),
        (false, true) => mono,
        (false, false) => format!("{coeff}*{mono}"),
    }
}

pub enum Parsed<F> {
    Series(FormalSeries<F>),
    Tuple(Vec<FormalSeries<F>>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token { kind: Tok::Int(text[start..i].to_string()), pos: start });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { kind: Tok::Ident(text[start..i].to_string()), pos: start });
        } else if "+-*/^(),".contains(c) {
            out.push(Token { kind: Tok::Sym(c), pos: i });
            i += 1;
        } else {
            // report the character, not a byte fragment of it
            let ch = text[i..].chars().next().unwrap_or(c);
            return Err(ExprError::Syntax { pos: i, msg: format!("unexpected character {ch:?}") });
        }
    }
    Ok(out)
}

/// Splits `( a , b , ... )` at depth-one commas when the outer parentheses
/// enclose the whole input and at least one such comma exists.
fn split_tuple(toks: &[Token]) -> Option<Vec<&[Token]>> {
    if toks.first()?.kind != Tok::Sym('(') || toks.last()?.kind != Tok::Sym(')') {
        return None;
    }
    let mut depth = 0i32;
    let mut cuts = Vec::new();
    for (idx, t) in toks.iter().enumerate() {
        match t.kind {
            Tok::Sym('(') => depth += 1,
            Tok::Sym(')') => {
                depth -= 1;
                if depth == 0 && idx != toks.len() - 1 {
                    return None;
                }
            }
            Tok::Sym(',') if depth == 1 => cuts.push(idx),
            _ => {}
        }
    }
    if cuts.is_empty() {
        return None;
    }
    let mut parts = Vec::new();
    let mut start = 1;
    for c in cuts {
        parts.push(&toks[start..c]);
        start = c + 1;
    }
    parts.push(&toks[start..toks.len() - 1]);
    Some(parts)
}

struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    vars: &'a Variables,
    trunc: u32,
    cap: u32,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.kind)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr<F: Field>(&mut self) -> Result<FormalSeries<F>, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<F: Field>(&mut self) -> Result<FormalSeries<F>, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                let d: FormalSeries<F> = self.unary()?;
                if d.terms().any(|(e, _)| !e.is_zero()) {
                    return Err(ExprError::NonConstantDivisor { pos });
                }
                let inv = d.constant_term().inv().ok_or(ExprError::DivisionByZero { pos })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<F: Field>(&mut self) -> Result<FormalSeries<F>, ExprError> {
        if self.eat('-') {
            return Ok(self.unary::<F>()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power<F: Field>(&mut self) -> Result<FormalSeries<F>, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.at += 1;
                let e: u32 = match digits.parse() {
                    Ok(e) if e <= self.cap => e,
                    _ => return Err(ExprError::ExponentOverflow { pos, exponent: digits, cap: self.cap }),
                };
                Ok(base.pow(e))
            }
            _ => Err(ExprError::Syntax { pos, msg: "expected a natural exponent after '^'".into() }),
        }
    }

    fn atom<F: Field>(&mut self) -> Result<FormalSeries<F>, ExprError> {
        let n = self.vars.len();
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.at += 1;
                let v: BigInt = digits.parse().expect("digits only");
                Ok(FormalSeries::constant(n, self.trunc, F::from_rational(Rational::from_integer(v))))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(j) = self.vars.index_of(&name) {
                    return Ok(FormalSeries::variable(n, j, self.trunc));
                }
                if name == "i" {
                    let unit = F::imaginary_unit().ok_or(ExprError::NoImaginaryUnit { pos })?;
                    return Ok(FormalSeries::constant(n, self.trunc, unit));
                }
                Err(ExprError::UnknownVariable { pos, name })
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(ExprError::Syntax { pos: self.pos(), msg: "expected ')'".into() });
                }
                Ok(v)
            }
            Some(_) => Err(ExprError::Syntax { pos, msg: "unexpected token".into() }),
            None => Err(ExprError::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}
