//! Text syntax for noncommutative polynomials.
//!
//! ```text
//! expr     := [sign] term (sign term)*
//! term     := rational factor* | factor+
//! factor   := ('x' | 'y') ['^' nat] | 'cyc(' expr ')' | '(' expr ')'
//! rational := int ['/' nat]
//! ```
//!
//! Juxtaposition is the noncommutative product, `^` binds tightest and
//! whitespace is ignored. `cyc(f)` sums all rotations of every word of `f`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{AlgebraError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::FreePoly;
use crate::potential::cyclicize;
use crate::word::{Variable, Word, MAX_DEGREE};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: FieldSpec,
    cyc_depth: usize,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(AlgebraError::Parse { offset, message: message.into() })
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => err(self.pos, format!("expected '{}', found '{}'", c as char, d as char)),
            None => err(self.pos, format!("expected '{}', found end of input", c as char)),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.src.get(self.pos) {
                Some(&c) => err(self.pos, format!("expected a number, found '{}'", c as char)),
                None => err(self.pos, "expected a number, found end of input"),
            };
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn expr(&mut self) -> Result<FreePoly> {
        let mut acc = FreePoly::zero(self.field, None);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<FreePoly> {
        let start = self.pos;
        let mut acc = FreePoly::one(self.field, None);
        let mut any = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let at = self.pos;
            let num = self.digits()?;
            let mut q = Scalar::from_integer(num);
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let den_at = self.pos;
                let den = self.digits()?;
                if den.is_zero() {
                    return err(den_at, "zero denominator");
                }
                q /= Scalar::from_integer(den);
            }
            let c = self.field.element(&q).or_else(|e| err(at, e.to_string()))?;
            acc = acc.scale(&c);
            any = true;
        }
        while let Some(c) = self.peek() {
            if !matches!(c, b'x' | b'y' | b'c' | b'(') {
                break;
            }
            let f = self.factor()?;
            acc = &acc * &f;
            any = true;
        }
        if !any {
            self.skip_ws();
            return match self.src.get(self.pos) {
                Some(&c) => err(self.pos, format!("expected a term, found '{}'", c as char)),
                None => err(self.pos.max(start), "expected a term, found end of input"),
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FreePoly> {
        let at = self.pos;
        match self.peek() {
            Some(b'x') | Some(b'y') => {
                let v = if self.src[self.pos] == b'x' { Variable::X } else { Variable::Y };
                self.pos += 1;
                let mut n = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let exp_at = self.pos;
                    let e = self.digits()?;
                    n = match u32::try_from(e) {
                        Ok(n) if n <= MAX_DEGREE => n,
                        _ => return err(exp_at, format!("exponent above {MAX_DEGREE}")),
                    };
                    if n == 0 && self.cyc_depth > 0 {
                        return err(exp_at, "exponent 0 inside cyc");
                    }
                }
                Ok(FreePoly::word(self.field, None, Word::power(v, n)))
            }
            Some(b'c') => {
                if !self.src[self.pos..].starts_with(b"cyc") {
                    return err(at, "unknown identifier");
                }
                self.pos += 3;
                self.expect(b'(')?;
                self.cyc_depth += 1;
                let inner = self.expr()?;
                self.cyc_depth -= 1;
                self.expect(b')')?;
                if !inner.constant_term().is_zero() {
                    return err(at, "cyc of a degree-0 term");
                }
                Ok(cyclicize(&inner))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            _ => err(at, "expected a factor"),
        }
    }
}

/// Parses `text` into a polynomial over `field`.
pub fn parse_poly(text: &str, field: FieldSpec) -> Result<FreePoly> {
    if let Some(i) = text.bytes().position(|b| !b.is_ascii()) {
        return err(i, "non-ASCII character");
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, field, cyc_depth: 0 };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return err(p.pos, format!("unexpected '{}'", p.src[p.pos] as char));
    }
    Ok(f)
}
