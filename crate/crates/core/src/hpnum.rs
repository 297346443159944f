//! Arbitrary-precision real arithmetic.
//!
//! Every value is an MPFR float rounded to nearest. A [`Context`] carries the
//! mantissa width `p` and is the only way the rest of the crate creates
//! numbers, so all values produced under one context share the same width.
//! Numeric literals enter as decimal strings; machine doubles are never
//! promoted.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Round, Special};
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::{Error, Result};

/// One arbitrary-precision real scalar.
pub type BigReal = Float;

/// Smallest accepted mantissa width (binary32 has 24 bits).
pub const MIN_BITS: u32 = 24;

/// Mantissa width governing every arithmetic operation of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Context {
    bits: u32,
}

impl Context {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidPrecision { bits });
        }
        Ok(Context { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Decimal digits needed so that printing and parsing back is exact.
    pub fn round_trip_digits(&self) -> usize {
        // MPFR guarantee: 1 + ceil(p * log10(2)) digits suffice.
        1 + (f64::from(self.bits) * std::f64::consts::LOG10_2).ceil() as usize
    }

    pub fn zero(&self) -> BigReal {
        Float::new(self.bits)
    }

    pub fn one(&self) -> BigReal {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> BigReal {
        Float::with_val(self.bits, v)
    }

    /// `num / den`, rounded once.
    pub fn ratio(&self, num: i64, den: i64) -> BigReal {
        let mut r = Float::with_val(self.bits, num);
        r /= den;
        r
    }

    pub fn infinity(&self) -> BigReal {
        Float::with_val(self.bits, Special::Infinity)
    }

    /// Parses `[+-]digits[.digits][e[+-]exp]`, correctly rounded to `p` bits.
    pub fn parse(&self, s: &str) -> Result<BigReal> {
        let t = s.trim();
        if !is_decimal_literal(t) {
            return Err(Error::Parse { input: s.to_string() });
        }
        let parsed = Float::parse(t).map_err(|_| Error::Parse { input: s.to_string() })?;
        Ok(Float::with_val(self.bits, parsed))
    }

    /// Rounds an existing value of any width into this context.
    pub fn adopt(&self, x: &BigReal) -> BigReal {
        Float::with_val(self.bits, x)
    }

    /// `2^exp` exactly.
    pub fn pow2(&self, exp: i32) -> BigReal {
        let mut r = self.one();
        r <<= exp;
        r
    }

    /// `10^exp`, rounded once.
    pub fn pow10(&self, exp: i32) -> BigReal {
        let ten = self.int(10);
        Float::with_val(self.bits, ten.pow(exp))
    }

    /// Magnitudes below `10^(-10 p)` are treated as structural zeros by the
    /// radius estimator.
    pub fn underflow_floor(&self) -> BigReal {
        self.pow10(-10 * self.bits as i32)
    }

    pub fn pi(&self) -> BigReal {
        Float::with_val(self.bits, rug::float::Constant::Pi)
    }

    pub fn factorial(&self, n: u32) -> BigReal {
        Float::with_val(self.bits, Float::factorial(n))
    }

    pub fn elementary(&self, f: Elementary, x: &BigReal) -> Result<BigReal> {
        let x = self.adopt(x);
        let domain = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::Domain { function: f.name(), argument: to_sci(&x, 6) })
            }
        };
        Ok(match f {
            Elementary::Sin => x.sin(),
            Elementary::Cos => x.cos(),
            Elementary::Exp => x.exp(),
            Elementary::Ln => {
                domain(x.is_sign_positive() && !x.is_zero())?;
                x.ln()
            }
            Elementary::Sqrt => {
                domain(!x.is_sign_negative() || x.is_zero())?;
                x.sqrt()
            }
            Elementary::Abs => x.abs(),
        })
    }

    /// Real power `base^exponent`; negative bases need an integral exponent.
    pub fn pow(&self, base: &BigReal, exponent: &BigReal) -> Result<BigReal> {
        if base.is_sign_negative() && !base.is_zero() && !exponent.is_integer() {
            return Err(Error::Domain { function: "pow", argument: to_sci(base, 6) });
        }
        let r = Float::with_val(self.bits, base.pow(exponent));
        if r.is_nan() {
            return Err(Error::Domain { function: "pow", argument: to_sci(base, 6) });
        }
        Ok(r)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} bits", self.bits)
    }
}

/// Elementary functions available on [`BigReal`] arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Exp => "exp",
            Elementary::Ln => "ln",
            Elementary::Sqrt => "sqrt",
            Elementary::Abs => "abs",
        }
    }
}

fn is_decimal_literal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

/// Full-precision decimal string; parsing it back under the value's own
/// width reproduces the value bit for bit.
pub fn to_decimal(x: &BigReal) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    let digits = 1 + (f64::from(x.prec()) * std::f64::consts::LOG10_2).ceil() as usize;
    scientific(x, digits, true)
}

/// Scientific notation with `sig` significant digits, e.g. `1.647e-6754`.
pub fn to_sci(x: &BigReal, sig: usize) -> String {
    if x.is_zero() || !x.is_finite() {
        return to_decimal(x);
    }
    scientific(x, sig.max(1), false)
}

// `d.ddd` followed by `e<exp>` unless the exponent is zero.
fn scientific(x: &BigReal, digits: usize, trim: bool) -> String {
    let (negative, mut mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    if trim {
        let kept = mantissa.trim_end_matches('0').len().max(1);
        mantissa.truncate(kept);
    }
    let exp = exp.expect("finite nonzero value") - 1;
    let mut out = String::with_capacity(mantissa.len() + 8);
    if negative {
        out.push('-');
    }
    out.push_str(&mantissa[..1]);
    if mantissa.len() > 1 {
        out.push('.');
        out.push_str(&mantissa[1..]);
    }
    if exp != 0 {
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

/// Base-10 exponent of `|x|` as a float, for magnitude comparisons of values
/// far outside the binary64 range. Zero maps to `-inf`.
pub fn log10_abs(x: &BigReal) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    let (mantissa, exp) = x.to_f64_exp();
    mantissa.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
}

pub fn max_abs<'a, I: IntoIterator<Item = &'a BigReal>>(ctx: &Context, values: I) -> BigReal {
    let mut best = ctx.zero();
    for v in values {
        if v.cmp_abs(&best) == Some(Ordering::Greater) {
            best.assign(v.abs_ref());
        }
    }
    best
}

/// `max_i |a_i - b_i|`.
pub fn max_abs_diff(ctx: &Context, a: &[BigReal], b: &[BigReal]) -> BigReal {
    let mut best = ctx.zero();
    let mut d = ctx.zero();
    for (x, y) in a.iter().zip(b) {
        d.assign(x - y);
        if d.cmp_abs(&best) == Some(Ordering::Greater) {
            best.assign(d.abs_ref());
        }
    }
    best
}
