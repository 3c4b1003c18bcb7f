//! Polynomial text syntax.
//!
//! ```text
//! poly    = sum ;
//! sum     = [ "+" | "-" ] product { ( "+" | "-" ) product } ;
//! product = power { ( "*" | "/" ) power } ;      (* "/" only by constants *)
//! power   = atom [ "^" integer ] ;
//! atom    = integer | variable | "(" sum ")" | "-" atom ;
//! variable = letter { letter | digit | "_" } ;   (* must name a ring variable *)
//! ```
//!
//! Whitespace is ignored between tokens. Printing with `Display` produces
//! text that this grammar reads back to the same canonical polynomial.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{Polynomial, RingContext, RingError};

pub fn parse_poly(text: &str, ctx: &Arc<RingContext>) -> Result<Polynomial, RingError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
    };
    let out = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a Arc<RingContext>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> RingError {
        RingError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Polynomial, RingError> {
        let mut acc = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            Some(b'-') => {
                self.pos += 1;
                -&self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, RingError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    if d.is_zero() {
                        return Err(RingError::DenominatorZero);
                    }
                    if !d.is_constant() {
                        return Err(self.err("division only by constants"));
                    }
                    let inv = d.lc().inv().ok_or(RingError::DenominatorZero)?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, RingError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, RingError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Polynomial, RingError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let field = self.ctx.field();
                let c = field
                    .from_ratio(&n, &BigInt::from(1))
                    .ok_or(RingError::DenominatorZero)?;
                Ok(Polynomial::constant(self.ctx, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let idx = self
                    .ctx
                    .var_index(name)
                    .ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
                Ok(Polynomial::var(self.ctx, idx))
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}
