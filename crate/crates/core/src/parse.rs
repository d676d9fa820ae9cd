//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := rational | 'i' | 'pi' | var | '(' expr ')'
//! var    := 'x' uint | 't'
//! ```
//!
//! Rationals are integer literals, `p/q` or decimals (`0.25`), all exact.
//! Whitespace is insignificant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{ParseError, ParseErrorKind};
use crate::mpoly::{MPoly, Var};
use crate::scalar::{gaussian, GaussianRational, Ring};

type P = MPoly<GaussianRational>;

/// Parse `text` as a polynomial in `x1..x{dim}`, `t`, `pi` and `i`.
pub fn parse_poly(text: &str, dim: usize) -> Result<P, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        dim,
    };
    parser.skip_ws();
    if parser.peek().is_none() {
        return Err(parser.error(ParseErrorKind::Syntax("empty expression".into())));
    }
    let p = parser.expr()?;
    parser.skip_ws();
    match parser.peek() {
        None => Ok(p),
        Some(c) => Err(parser.error(ParseErrorKind::Syntax(format!("unexpected `{c}`")))),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.pos, kind)
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, column: pos + 1 }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<P, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<P, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<P, ParseError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.eat('^') {
            let e = self.exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() || matches!(self.peek(), Some('.') | Some('/')) {
            return Err(self.error_at(start, ParseErrorKind::BadExponent));
        }
        digits
            .parse::<usize>()
            .map_err(|_| self.error_at(start, ParseErrorKind::BadExponent))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn base(&mut self) -> Result<P, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error(ParseErrorKind::Syntax("unexpected end of expression".into()))),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.eat(')') {
                    Ok(inner)
                } else {
                    self.skip_ws();
                    Err(self.error(ParseErrorKind::Syntax("expected `)`".into())))
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                self.identifier(&word, start)
            }
            Some(c) => Err(self.error(ParseErrorKind::Syntax(format!("unexpected `{c}`")))),
        }
    }

    fn identifier(&self, word: &str, start: usize) -> Result<P, ParseError> {
        match word {
            "i" => Ok(P::constant(gaussian(BigRational::zero(), BigRational::one()))),
            "pi" => Ok(P::var(Var::Pi)),
            "t" => Ok(P::var(Var::Tau)),
            _ => {
                let k = word
                    .strip_prefix('x')
                    .filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
                    .and_then(|rest| rest.parse::<usize>().ok());
                match k {
                    Some(k) if k >= 1 && k <= self.dim => Ok(P::var(Var::Xi(k))),
                    _ => Err(self.error_at(start, ParseErrorKind::UnknownVariable(word.into()))),
                }
            }
        }
    }

    fn number(&mut self) -> Result<P, ParseError> {
        let start = self.pos;
        let int = self.digits();
        let mut value = if int.is_empty() {
            BigRational::zero()
        } else {
            BigRational::from_integer(int.parse::<BigInt>().unwrap())
        };
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac = self.digits();
            if int.is_empty() && frac.is_empty() {
                return Err(self.error_at(start, ParseErrorKind::Syntax("malformed number".into())));
            }
            if !frac.is_empty() {
                let scale = BigInt::from(10).pow(frac.len() as u32);
                value += BigRational::new(frac.parse::<BigInt>().unwrap(), scale);
            }
        }
        if self.peek() == Some('/') {
            self.pos += 1;
            let den_start = self.pos;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.error_at(den_start, ParseErrorKind::Syntax("expected denominator digits".into())));
            }
            let den = den.parse::<BigInt>().unwrap();
            if den.is_zero() {
                return Err(self.error_at(den_start, ParseErrorKind::Syntax("zero denominator".into())));
            }
            value /= BigRational::from_integer(den);
        }
        Ok(P::constant(gaussian(value, BigRational::zero())))
    }
}

/// Parse a rational literal (`3`, `-1/2`, `0.75`) as used in period matrices.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '/') {
        return None;
    }
    let p = parse_poly(body, 0).ok()?;
    let value = match p.terms().next() {
        None => BigRational::zero(),
        Some((m, c)) if m.factors().is_empty() && c.im.is_zero() => c.re.clone(),
        _ => return None,
    };
    Some(if neg { -value } else { value })
}
