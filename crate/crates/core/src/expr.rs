//! A small expression language for torus series, used for golden closed
//! forms and seed-file expectations:
//!
//! ```text
//! Y2 (1 + z[1,1] q^2 Y1 + q^4 Y1^2)
//! q^-4 Y1^-2 Y2^-1 (1 + q^2 Y2 + ...)^-1
//! ```
//!
//! Juxtaposition is noncommutative multiplication in the written order;
//! `^` binds to the preceding atom; `+`/`-` separate terms. Atoms are `q`,
//! generators `Y<i>` (1-based), frozen coefficients `z[i,s]`, integers, and
//! parenthesized subexpressions. Integer ratios are written `a/b`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::series::ConeSeries;
use crate::torus::{Algebra, Exponent};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Q,
    Gen(usize),
    ZVar(usize, usize),
    Int(BigInt),
    Plus,
    Minus,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Syntax(msg.into())
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'q' => {
                out.push(Tok::Q);
                i += 1;
            }
            'Y' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(err("expected generator index after Y"));
                }
                let idx: usize = chars[start..i].iter().collect::<String>().parse().unwrap();
                if idx == 0 {
                    return Err(err("generator indices are 1-based"));
                }
                out.push(Tok::Gen(idx));
            }
            'z' => {
                i += 1;
                if chars.get(i) != Some(&'[') {
                    return Err(err("expected '[' after z"));
                }
                i += 1;
                let mut nums = Vec::new();
                for part in 0..2 {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if start == i {
                        return Err(err("expected digits in z[i,s]"));
                    }
                    nums.push(chars[start..i].iter().collect::<String>().parse::<usize>().unwrap());
                    let want = if part == 0 { ',' } else { ']' };
                    if chars.get(i) != Some(&want) {
                        return Err(err(format!("expected '{want}' in z[i,s]")));
                    }
                    i += 1;
                }
                out.push(Tok::ZVar(nums[0], nums[1]));
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .unwrap();
                out.push(Tok::Int(n));
            }
            other => return Err(err(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    alg: &'a Arc<Algebra>,
    order: i64,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ConeSeries> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ConeSeries> {
        let mut acc = self.factor()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Q | Tok::Gen(_) | Tok::ZVar(_, _) | Tok::Int(_) | Tok::LParen => {
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ConeSeries> {
        let atom = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let e = self.signed_int()?;
            return atom.pow(e);
        }
        Ok(atom)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            neg = true;
        }
        match self.next() {
            Some(Tok::Int(n)) => {
                let v: i64 = n.try_into().map_err(|_| err("exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(err("expected integer exponent after '^'")),
        }
    }

    fn scalar(&mut self, c: Coeff) -> ConeSeries {
        ConeSeries::monomial(
            Arc::clone(self.alg),
            Exponent::zero(self.alg.n()),
            c,
            self.order,
        )
    }

    fn atom(&mut self) -> Result<ConeSeries> {
        match self.next() {
            Some(Tok::Q) => {
                // bare q is q^1; a following caret is handled by factor(),
                // so peek for it here to fold the exponent into the scalar
                if self.peek() == Some(&Tok::Caret) {
                    self.next();
                    let e = self.signed_int()?;
                    Ok(self.scalar(Coeff::q_pow(e)))
                } else {
                    Ok(self.scalar(Coeff::q_pow(1)))
                }
            }
            Some(Tok::Gen(i)) => {
                let n = self.alg.n();
                if i > n {
                    return Err(err(format!("generator Y{i} out of range 1..={n}")));
                }
                Ok(ConeSeries::generator(
                    Arc::clone(self.alg),
                    i - 1,
                    self.order,
                ))
            }
            Some(Tok::ZVar(i, s)) => {
                let n = self.alg.n();
                if i == 0 || i > n {
                    return Err(err(format!("z[{i},{s}]: index out of range")));
                }
                let d = self.alg.exchange_data().d(i - 1) as usize;
                if s == 0 || s >= d {
                    return Err(err(format!(
                        "z[{i},{s}]: power index out of range 1..={}",
                        d.saturating_sub(1)
                    )));
                }
                Ok(self.scalar(self.alg.exchange_data().z_coeff(i - 1, s)))
            }
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    match self.next() {
                        Some(Tok::Int(d)) => Ok(self.scalar(Coeff::rational(n, d)?)),
                        _ => Err(err("expected denominator after '/'")),
                    }
                } else {
                    Ok(self.scalar(Coeff::from_int(n)))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err("missing closing parenthesis")),
                }
            }
            other => Err(err(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an expression into a cone series over the given algebra at the
/// given truncation order.
pub fn parse_series(src: &str, alg: &Arc<Algebra>, order: i64) -> Result<ConeSeries> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        alg,
        order,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}
