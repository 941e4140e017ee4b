//! Parser for entries of `F_q(t)` written as arithmetic expressions in `t`,
//! e.g. `"(t^2+1)/t"`, `"t^-3"`, `"2t+1"`.

use super::rational::RationalFunction;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(i64),
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut v: i64 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(i64::from(d)))
                        .ok_or_else(|| Error::Parse(format!("number too large in {s:?}")))?;
                    chars.next();
                }
                out.push(Tok::Num(v));
            }
            _ => {
                let tok = match c {
                    't' | 'T' => Tok::T,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
                };
                chars.next();
                out.push(tok);
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    q: u8,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.src))
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.next() == Some(t) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {t:?}")))
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(op @ (Tok::Plus | Tok::Minus)) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == Tok::Plus { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).ok_or(Error::DivisionByZero)?;
                }
                // Juxtaposition such as `2t` or `t(t+1)`.
                Some(Tok::Num(_) | Tok::T | Tok::LParen) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        pow(&base, e).ok_or(Error::DivisionByZero)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let neg = self.peek() == Some(Tok::Minus);
        if neg {
            self.pos += 1;
        }
        let Some(Tok::Num(v)) = self.next() else {
            return Err(self.err("expected integer exponent"));
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(RationalFunction::constant(v, self.q)),
            Some(Tok::T) => Ok(RationalFunction::t_power(1, self.q)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.err("expected number, t or parenthesis")),
        }
    }
}

fn pow(base: &RationalFunction, e: i64) -> Option<RationalFunction> {
    let b = if e < 0 { base.inv()? } else { base.clone() };
    let mut result = RationalFunction::one(base.modulus());
    let mut sq = b;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            result = result.mul(&sq);
        }
        sq = sq.mul(&sq);
        k >>= 1;
    }
    Some(result)
}

/// Parses an expression over `F_q(t)`; integer literals are reduced mod `q`.
pub fn parse_entry(s: &str, q: u8) -> Result<RationalFunction> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, q, src: s };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}
