//! Decimal text forms of complex numbers.
//!
//! Accepted grammar (whitespace around the whole literal is ignored):
//!
//! ```text
//! SIGN? DEC ( SIGN DEC? 'i' )?  |  SIGN? DEC? 'i'
//! DEC  = digits ( '.' digits? )? exponent?  |  '.' digits exponent?
//! exponent = ( 'e' | 'E' ) SIGN? digits
//! ```
//!
//! Output is fixed-point with a requested number of fractional digits,
//! rounded half-to-even from the exact binary value.

use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{CNum, PrecisionContext};

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    offset: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos + self.offset,
            message: message.into(),
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Returns the byte range of a decimal literal, or `None` if none starts here.
    fn dec(&mut self) -> Result<Option<(usize, usize)>> {
        let start = self.pos;
        let int_digits = self.digits();
        let mut frac_digits = 0;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac_digits = self.digits();
        }
        if int_digits == 0 && frac_digits == 0 {
            if self.pos != start {
                return Err(self.err("expected digits around '.'"));
            }
            return Ok(None);
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            self.sign();
            if self.digits() == 0 {
                return Err(self.err("expected exponent digits"));
            }
        }
        Ok(Some((start, self.pos)))
    }
}

fn dec_value(text: &str, negative: bool, prec: u32, position: usize) -> Result<Float> {
    let parsed = Float::parse(text).map_err(|e| Error::Parse {
        position,
        message: e.to_string(),
    })?;
    let v = Float::with_val(prec, parsed);
    if !v.is_finite() {
        return Err(Error::Parse {
            position,
            message: "value out of range".into(),
        });
    }
    Ok(if negative { -v } else { v })
}

/// Parse a complex literal such as `3-2i`, `-0.5+1.25i`, `1.5e-3` or `-i`.
pub fn parse_cnum(text: &str, ctx: &PrecisionContext) -> Result<CNum> {
    let trimmed = text.trim_start();
    let offset = text.len() - trimmed.len();
    let trimmed = trimmed.trim_end();
    let mut sc = Scanner {
        bytes: trimmed.as_bytes(),
        pos: 0,
        offset,
    };
    let prec = ctx.work_bits;
    if trimmed.is_empty() {
        return Err(sc.err("empty complex literal"));
    }

    let neg1 = sc.sign().unwrap_or(false);
    let first = sc.dec()?;
    let value_of = |range: Option<(usize, usize)>, neg: bool| -> Result<Float> {
        match range {
            Some((a, b)) => dec_value(&trimmed[a..b], neg, prec, a + offset),
            None => Ok(Float::with_val(prec, if neg { -1 } else { 1 })),
        }
    };

    let (re, im) = match sc.peek() {
        Some(b'i') => {
            sc.pos += 1;
            (Float::new(prec), value_of(first, neg1)?)
        }
        Some(b'+' | b'-') => {
            if first.is_none() {
                return Err(sc.err("expected a number"));
            }
            let re = value_of(first, neg1)?;
            let neg2 = sc.sign().unwrap_or(false);
            let second = sc.dec()?;
            if sc.peek() != Some(b'i') {
                return Err(sc.err("expected 'i' after imaginary part"));
            }
            sc.pos += 1;
            (re, value_of(second, neg2)?)
        }
        None => {
            if first.is_none() {
                return Err(sc.err("expected a number"));
            }
            (value_of(first, neg1)?, Float::new(prec))
        }
        Some(c) => return Err(sc.err(format!("unexpected character {:?}", c as char))),
    };
    if sc.pos != sc.bytes.len() {
        return Err(sc.err("trailing characters"));
    }
    Ok(CNum::new(re, im))
}

/// Fixed-point decimal with `digits` fractional digits, round-half-even.
pub fn format_real(x: &Float, digits: u32) -> String {
    let exact = x.to_rational().unwrap_or_else(Rational::new);
    let scale = Integer::from(Integer::u_pow_u(10, digits));
    let scaled = exact * &scale;
    let floor = scaled.clone().floor();
    let frac = scaled - &floor;
    let half = Rational::from((1, 2));
    let mut n = floor.numer().clone();
    let bump = match frac.cmp(&half) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => n.is_odd(),
    };
    if bump {
        n += 1;
    }
    let negative = n < 0;
    let mut s = n.abs().to_string();
    let width = digits as usize + 1;
    if s.len() < width {
        s = format!("{}{}", "0".repeat(width - s.len()), s);
    }
    if digits > 0 {
        s.insert(s.len() - digits as usize, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// `re±imi` with both parts at `digits` fractional digits.
pub fn format_cnum(z: &CNum, digits: u32) -> String {
    let re = format_real(z.re(), digits);
    let im = format_real(z.im(), digits);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// `{"re": "<decimal>", "im": "<decimal>"}`
pub fn cnum_to_json(z: &CNum, digits: u32) -> Value {
    json!({
        "re": format_real(z.re(), digits),
        "im": format_real(z.im(), digits),
    })
}

pub fn cnum_from_json(v: &Value, ctx: &PrecisionContext) -> Result<CNum> {
    let part = |key: &str| -> Result<Float> {
        let s = v.get(key).and_then(Value::as_str).ok_or_else(|| Error::Parse {
            position: 0,
            message: format!("missing string field {key:?}"),
        })?;
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        dec_value(body, neg, ctx.work_bits, 0)
    };
    Ok(CNum::new(part("re")?, part("im")?))
}
