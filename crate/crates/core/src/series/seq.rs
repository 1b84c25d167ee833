//! Non-negative integer sequences given by small expressions in `n`, such as `3^(n!)`,
//! `2^(2^n)` or `(n+2)!`. Values are produced in factored form, so towers whose exponents
//! fit in memory evaluate exactly even when the values themselves do not.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::primes::next_prime;
use crate::arith::FactoredInteger;

use super::SeriesError;

/// Largest argument accepted by `!`.
const FACTORIAL_LIMIT: u64 = 100_000;
/// Largest exponent or summand materialized while evaluating, in bits.
const INNER_BIT_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Lit(BigUint),
    N,
    Add(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Fact(Box<Node>),
}

/// A parsed sequence expression. Grammar: integers, `n`, `+`, `*`, `^` (right
/// associative), postfix `!`, and parentheses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqExpr {
    source: String,
    root: Node,
}

impl SeqExpr {
    pub fn parse(text: &str) -> Result<Self, SeriesError> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens, pos: 0, text };
        let root = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(SeqExpr { source: text.trim().to_string(), root })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Value at `n`, or `None` when it is zero.
    pub fn eval(&self, n: u64) -> Result<Option<FactoredInteger>, SeriesError> {
        eval(&self.root, n).map_err(|message| SeriesError::Sequence { expr: self.source.clone(), n, message })
    }

    /// Value at `n`, required to be nonzero.
    pub fn eval_nonzero(&self, n: u64) -> Result<FactoredInteger, SeriesError> {
        self.eval(n)?.ok_or_else(|| SeriesError::Sequence {
            expr: self.source.clone(),
            n,
            message: "value is zero".into(),
        })
    }

    /// Value at `n` as a plain integer, for sequences used as exponents.
    pub fn eval_small(&self, n: u64) -> Result<BigUint, SeriesError> {
        match self.eval(n)? {
            None => Ok(BigUint::zero()),
            Some(v) => v.materialize(INNER_BIT_CAP).map(|x| x.magnitude().clone()).map_err(|e| SeriesError::Sequence {
                expr: self.source.clone(),
                n,
                message: e.to_string(),
            }),
        }
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl FromStr for SeqExpr {
    type Err = SeriesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeqExpr::parse(s)
    }
}

impl Serialize for SeqExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for SeqExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SeqExpr::parse(&s).map_err(serde::de::Error::custom)
    }
}

type Value = Option<FactoredInteger>;

fn small(v: &Value) -> Result<BigUint, String> {
    match v {
        None => Ok(BigUint::zero()),
        Some(x) => x.materialize(INNER_BIT_CAP).map(|b| b.magnitude().clone()).map_err(|e| e.to_string()),
    }
}

fn from_uint(v: BigUint) -> Value {
    if v.is_zero() {
        None
    } else {
        Some(FactoredInteger::from_bigint(&BigInt::from(v)).expect("nonzero"))
    }
}

fn eval(node: &Node, n: u64) -> Result<Value, String> {
    Ok(match node {
        Node::Lit(v) => from_uint(v.clone()),
        Node::N => from_uint(BigUint::from(n)),
        Node::Add(a, b) => {
            let (x, y) = (eval(a, n)?, eval(b, n)?);
            match (x, y) {
                (None, v) | (v, None) => v,
                (x, y) => from_uint(small(&x)? + small(&y)?),
            }
        }
        Node::Mul(a, b) => match (eval(a, n)?, eval(b, n)?) {
            (Some(x), Some(y)) => Some(x.mul(&y)),
            _ => None,
        },
        Node::Pow(a, b) => {
            let e = small(&eval(b, n)?)?;
            match eval(a, n)? {
                None if e.is_zero() => Some(FactoredInteger::one()),
                None => None,
                Some(base) => Some(base.pow(&e).map_err(|e| e.to_string())?),
            }
        }
        Node::Fact(a) => {
            let m = small(&eval(a, n)?)?;
            let m = m
                .to_u64()
                .filter(|&m| m <= FACTORIAL_LIMIT)
                .ok_or_else(|| format!("factorial argument {m} exceeds {FACTORIAL_LIMIT}"))?;
            Some(factorial(m))
        }
    })
}

/// `m!` in factored form via Legendre's formula.
pub fn factorial(m: u64) -> FactoredInteger {
    let mut factors = Vec::new();
    let mut p = 2;
    while p <= m {
        let mut e = 0u64;
        let mut q = m;
        while q > 0 {
            q /= p;
            e += q;
        }
        factors.push((p, BigUint::from(e)));
        p = next_prime(p + 1);
    }
    FactoredInteger::new(false, factors, BigUint::one()).expect("nonzero")
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigUint),
    N,
    Plus,
    Star,
    Caret,
    Bang,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SeriesError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                out.push((start, Tok::Int(s.parse().expect("digits"))));
                continue;
            }
            'n' => Tok::N,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '!' => Tok::Bang,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(SeriesError::SequenceSyntax {
                    expr: text.to_string(),
                    column: i + 1,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn error(&self, message: &str) -> SeriesError {
        let column = self.tokens.get(self.pos).map(|(c, _)| c + 1).unwrap_or(self.text.chars().count() + 1);
        SeriesError::SequenceSyntax { expr: self.text.to_string(), column, message: message.to_string() }
    }

    fn sum(&mut self) -> Result<Node, SeriesError> {
        let mut lhs = self.product()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            lhs = Node::Add(Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Node, SeriesError> {
        let mut lhs = self.power()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            lhs = Node::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Node, SeriesError> {
        let base = self.postfix()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.power()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Node, SeriesError> {
        let mut node = self.atom()?;
        while self.peek() == Some(&Tok::Bang) {
            self.pos += 1;
            node = Node::Fact(Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node, SeriesError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Node::Lit(v))
            }
            Some(Tok::N) => {
                self.pos += 1;
                Ok(Node::N)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected an integer, 'n' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(src: &str, n: u64) -> BigInt {
        SeqExpr::parse(src).unwrap().eval(n).unwrap().map_or(BigInt::zero(), |v| v.materialize(1 << 20).unwrap())
    }

    #[test]
    fn small_values() {
        assert_eq!(val("n", 7), 7.into());
        assert_eq!(val("2^n", 5), 32.into());
        assert_eq!(val("2^2^n", 2), 16.into());
        assert_eq!(val("(n+1)!", 4), 120.into());
        assert_eq!(val("n!*3", 3), 18.into());
        assert_eq!(val("3^(n!)", 3), 729.into());
        assert_eq!(val("0", 3), 0.into());
        assert_eq!(val("0^0", 3), 1.into());
    }

    #[test]
    fn towers_stay_factored() {
        let v = SeqExpr::parse("3^(n!)").unwrap().eval_nonzero(12).unwrap();
        assert_eq!(v.valuation(3), BigUint::from(479_001_600u64));
        let w = SeqExpr::parse("2^(3^n)*5").unwrap().eval_nonzero(20).unwrap();
        assert_eq!(w.valuation(2), BigUint::from(3u64.pow(20)));
        assert_eq!(w.valuation(5), BigUint::one());
    }

    #[test]
    fn factorial_matches_product() {
        for m in 0..30u64 {
            let direct: BigUint = (1..=m).map(BigUint::from).product();
            assert_eq!(factorial(m).materialize(1 << 12).unwrap(), BigInt::from(direct));
        }
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match SeqExpr::parse("2^(n") {
            Err(SeriesError::SequenceSyntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(SeqExpr::parse("2x").is_err());
        assert!(SeqExpr::parse("").is_err());
    }
}
