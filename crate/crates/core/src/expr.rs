//! Polynomial expressions in `x`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! exponent:= '-'* power            (must evaluate to a nonnegative integer)
//! atom    := INT | INT '/' INT | 'x' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. There is no
//! implicit multiplication. Columns in errors are 1-based character positions.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{is_integer, Rational};

/// Largest exponent accepted, to keep a typo from allocating a huge polynomial.
pub const MAX_EXPONENT: usize = 4096;

pub fn parse_expr(text: &str) -> Result<Polynomial> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected `{c}`")));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { column: self.column(), message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
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

    fn expr(&mut self) -> Result<Polynomial> {
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let column = self.column();
        let mut negate = false;
        while self.eat('-') {
            negate = !negate;
        }
        let e = self.power()?;
        let e = if negate { -e } else { e };
        let value = match e.degree() {
            None => Rational::zero(),
            Some(0) => e.coeff(0),
            Some(_) => return Err(Error::Syntax { column, message: "exponent must be a constant".into() }),
        };
        if value.is_negative() {
            return Err(Error::NegativeExponent { column });
        }
        if !is_integer(&value) {
            return Err(Error::Syntax { column, message: format!("exponent {value} is not an integer") });
        }
        let n = value
            .to_integer()
            .to_usize()
            .filter(|&n| n <= MAX_EXPONENT)
            .ok_or_else(|| Error::Syntax { column, message: format!("exponent {value} exceeds {MAX_EXPONENT}") })?;
        Ok(base.pow(n))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(Polynomial::x())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> BigInt {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().expect("nonempty digit run")
    }

    /// `INT` or `INT/INT`, with no whitespace inside.
    fn number(&mut self) -> Result<Polynomial> {
        let n = self.digits();
        if self.peek() != Some('/') {
            return Ok(Polynomial::constant(Rational::from_integer(n)));
        }
        self.pos += 1;
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.error("expected a denominator"));
        }
        let column = self.column();
        let d = self.digits();
        if d.is_zero() {
            return Err(Error::Syntax { column, message: "zero denominator".into() });
        }
        Ok(Polynomial::constant(Rational::new(n, d)))
    }
}
