//! Exact scalars and integer polynomials.
//!
//! Every q, prefix value and squared weight in this crate is an exact
//! [`Rational`]. Polynomials in λ (or in q = λ²) are [`IntPoly`] values, and
//! irrational roots are carried as [`AlgebraicNumber`]s: a defining polynomial
//! plus a rational interval certified by a sign change.

mod algebraic;
mod poly;

pub use algebraic::{isolate_root, AlgebraicNumber};
pub use poly::IntPoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical arbitrary-precision fraction (positive denominator, reduced).
pub type Rational = BigRational;

/// Shorthand for `n/d` with machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `10^-k` as an exact rational.
pub fn pow10_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Nearest integer, ties rounded towards +∞ (`floor(x + 1/2)`).
pub fn round_nearest(x: &Rational) -> BigInt {
    (x + rat(1, 2)).floor().to_integer()
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `a/b`, a plain integer, or a finite decimal such as `-0.375`.
///
/// Decimals are converted exactly; scientific notation and repeating
/// expansions are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_int(n).ok_or_else(bad)?;
        let d: BigInt = parse_int(d).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) || whole.len() - whole_digits.len() > 1 {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mag: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(mag, den);
        return Ok(if negative { -v } else { v });
    }
    parse_int(s).map(Rational::from_integer).ok_or_else(bad)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
