//! Text form: integer-coefficient expressions in `x1..xK` with `+ - * ^` and parentheses.
//! Juxtaposition is rejected; write `2*x1`, not `2x1`.

use num_bigint::BigInt;
use thiserror::Error;

use super::IntPolynomial;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message} at column {column}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { column, message: message.into() })
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '+' => out.push((col, Tok::Plus)),
            '-' | '\u{2212}' => out.push((col, Tok::Minus)),
            '*' => out.push((col, Tok::Star)),
            '^' => out.push((col, Tok::Caret)),
            '(' => out.push((col, Tok::LParen)),
            ')' => out.push((col, Tok::RParen)),
            'x' | 'X' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return err(col, "variable needs an index, e.g. x1");
                }
                let idx: usize = chars[start..j].iter().collect::<String>().parse().unwrap_or(0);
                if idx == 0 {
                    return err(col, "variable indices start at 1");
                }
                out.push((col, Tok::Var(idx - 1)));
                i = j;
                continue;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                out.push((col, Tok::Int(s.parse().unwrap())));
                i = j;
                continue;
            }
            other => return err(col, format!("unexpected character '{other}'")),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }

    fn expr(&mut self) -> Result<IntPolynomial, ParseError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPolynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        if matches!(self.peek(), Some(Tok::Int(_) | Tok::Var(_) | Tok::LParen)) {
            return err(self.col(), "implicit multiplication is not allowed; use '*'");
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPolynomial, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = match u32::try_from(e) {
                        Ok(e) if e <= 1000 => e,
                        _ => return err(col, "exponent too large"),
                    };
                    return Ok(base.pow(e));
                }
                _ => return err(col, "expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPolynomial, ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(IntPolynomial::constant(self.nvars, v))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                if i >= self.nvars {
                    return err(col, format!("variable x{} exceeds the {} declared variables", i + 1, self.nvars));
                }
                Ok(IntPolynomial::var(self.nvars, i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return err(self.col(), "expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => err(col, "expected a number, variable or '('"),
            None => err(col, "unexpected end of input"),
        }
    }
}

/// Parses a polynomial. With `nvars = None` the variable count is the largest index used
/// (at least 1).
pub fn parse(text: &str, nvars: Option<usize>) -> Result<IntPolynomial, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return err(1, "empty polynomial");
    }
    let used = toks.iter().filter_map(|(_, t)| if let Tok::Var(i) = t { Some(i + 1) } else { None }).max();
    let nvars = nvars.unwrap_or(used.unwrap_or(1).max(1));
    let mut parser = Parser { toks, pos: 0, nvars, end_col: text.chars().count() + 1 };
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return err(parser.col(), "unexpected trailing input");
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_expressions() {
        let p = parse("(x1 - x2)*(x1 + x2)", None).unwrap();
        assert_eq!(p, parse("x1^2 - x2^2", None).unwrap());
        assert_eq!(p.nvars(), 2);
        assert_eq!(parse("-3", Some(2)).unwrap(), IntPolynomial::constant(2, -3));
        assert_eq!(parse("x1", Some(3)).unwrap().nvars(), 3);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse("2x1", None).unwrap_err().message.contains("implicit"));
        assert!(parse("x1 x2", None).is_err());
        assert!(parse("x0", None).is_err());
        assert!(parse("x3", Some(2)).is_err());
        assert!(parse("x1^-1", None).is_err());
        assert!(parse("(x1", None).is_err());
        assert!(parse("", None).is_err());
        assert_eq!(parse("x1 + ?", None).unwrap_err().column, 6);
    }
}
