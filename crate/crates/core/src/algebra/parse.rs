//! Text grammar for series.
//!
//! ```text
//! series  := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := number ['/' number] ['i'] | 'i' | var ['^' number] | '(' series ')'
//! var     := 'z' k | 'zb' k | 'x' k        (k is 1-based)
//! ```
//!
//! Whitespace is insignificant. Errors carry the byte offset of the
//! offending token in the original text.

use num::{BigInt, BigRational, Zero};

use super::{Monomial, Scalar, Series, VarKind, Vars};
use crate::error::{Error, Result};

/// Parses `text` into a series over `vars`. Any term above `budget` is an error.
pub fn parse_series(text: &str, vars: Vars, budget: u32) -> Result<Series> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let raw = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected character"));
    }
    if let Some(d) = raw.degree() {
        if d > budget {
            return Err(Error::DegreeAboveBudget { degree: d, budget });
        }
    }
    Ok(raw.with_budget(budget))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vars,
}

// Parsed sub-expressions are kept untruncated; the cap below is only a
// storage bound for intermediate products.
const RAW_BUDGET: u32 = u32::MAX / 4;

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Series> {
        let mut acc = Series::zero(self.vars, RAW_BUDGET);
        self.skip_ws();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            self.skip_ws();
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Series> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'*') {
                return Ok(acc);
            }
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f, RAW_BUDGET)?;
        }
    }

    fn number(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        digits.parse().ok()
    }

    fn small_number(&mut self, what: &str) -> Result<u32> {
        let at = self.pos;
        let n = self.number().ok_or_else(|| self.err(&format!("expected {what}")))?;
        u32::try_from(n).map_err(|_| Error::Parse {
            pos: at,
            msg: format!("{what} too large"),
        })
    }

    fn constant(&self, c: Scalar) -> Series {
        Series::constant(self.vars, c, RAW_BUDGET)
    }

    fn factor(&mut self) -> Result<Series> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.number().expect("digit present");
                let mut value = BigRational::from_integer(num);
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den_at = self.pos;
                    let den = self.number().ok_or_else(|| self.err("expected denominator"))?;
                    if den.is_zero() {
                        return Err(Error::Parse {
                            pos: den_at,
                            msg: "zero denominator".into(),
                        });
                    }
                    value /= BigRational::from_integer(den);
                }
                if self.peek() == Some(b'i') {
                    self.pos += 1;
                    return Ok(self.constant(Scalar::new(BigRational::zero(), value)));
                }
                Ok(self.constant(Scalar::new(value, BigRational::zero())))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                let kind = match name {
                    "i" => return Ok(self.constant(Scalar::i())),
                    "z" => VarKind::Z,
                    "zb" => VarKind::Zbar,
                    "x" => VarKind::X,
                    _ => {
                        return Err(Error::UnknownVariable {
                            name: name.to_string(),
                            pos: start,
                        })
                    }
                };
                let index = self.small_number("variable index")? as usize;
                let slot = self.vars.slot(kind, index).map_err(|_| Error::UnknownVariable {
                    name: format!("{name}{index}"),
                    pos: start,
                })?;
                self.skip_ws();
                let mut exp = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    exp = self.small_number("exponent")?;
                }
                let mut e = vec![0; self.vars.len()];
                e[slot] = exp;
                Ok(Series::monomial(
                    self.vars,
                    Monomial::from_exponents(e),
                    Scalar::one(),
                    RAW_BUDGET,
                ))
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}
