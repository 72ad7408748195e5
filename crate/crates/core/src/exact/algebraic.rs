use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{int, rat, to_f64, IntPoly, Rational};
use crate::error::{Error, Result};

/// A real algebraic number given by an integer polynomial and a rational
/// isolating interval.
///
/// `defining(lo)` and `defining(hi)` have strictly opposite signs, so the
/// interval always carries a machine-checkable sign-change certificate.
/// `approx` is the interval midpoint rounded to `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicNumber {
    defining: IntPoly,
    lo: Rational,
    hi: Rational,
    approx: f64,
}

impl AlgebraicNumber {
    /// Checks the sign-change certificate; `None` if it does not hold.
    pub fn from_parts(defining: IntPoly, lo: Rational, hi: Rational) -> Option<Self> {
        if lo >= hi || defining.sign_at(&lo) * defining.sign_at(&hi) >= 0 {
            return None;
        }
        let approx = to_f64(&((&lo + &hi) / int(2)));
        Some(AlgebraicNumber { defining, lo, hi, approx })
    }

    pub fn defining(&self) -> &IntPoly {
        &self.defining
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Re-evaluates the certificate from scratch.
    pub fn certificate_holds(&self) -> bool {
        self.lo < self.hi && self.defining.sign_at(&self.lo) * self.defining.sign_at(&self.hi) < 0
    }

    /// Same number with an interval no wider than `eps`.
    pub fn refine(&self, eps: &Rational) -> AlgebraicNumber {
        if self.width() <= *eps {
            return self.clone();
        }
        bisect(&self.defining, self.lo.clone(), self.hi.clone(), eps)
            .expect("refining an interval that already carries a sign change")
    }

    /// Exact comparison of the number with a rational.
    ///
    /// Returns `Equal` only when `x` is an exact root of the defining
    /// polynomial inside the interval.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        if *x <= self.lo {
            return Ordering::Greater;
        }
        if *x >= self.hi {
            return Ordering::Less;
        }
        let s = self.defining.sign_at(x);
        if s == 0 {
            return Ordering::Equal;
        }
        // the unique root lies on the side of x where the sign still changes
        if s == self.defining.sign_at(&self.lo) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// Isolates a root of `p` in `[lo, hi]` to an interval of width at most `eps`.
///
/// The polynomial is first reduced to its square-free part; if that part has
/// no sign change on the interval (a root of even multiplicity inside), the
/// original polynomial is bisected instead.
pub fn isolate_root(p: &IntPoly, lo: &Rational, hi: &Rational, eps: &Rational) -> Result<AlgebraicNumber> {
    let no_change = || Error::NoSignChange { lo: lo.to_string(), hi: hi.to_string() };
    if lo >= hi || p.sign_at(lo) * p.sign_at(hi) >= 0 {
        return Err(no_change());
    }
    let sqf = p.square_free_part();
    let defining = if sqf.sign_at(lo) * sqf.sign_at(hi) < 0 { sqf } else { p.clone() };
    bisect(&defining, lo.clone(), hi.clone(), eps).ok_or_else(no_change)
}

fn bisect(p: &IntPoly, mut lo: Rational, mut hi: Rational, eps: &Rational) -> Option<AlgebraicNumber> {
    let s_lo = p.sign_at(&lo);
    let two = int(2);
    while &hi - &lo > *eps {
        let mid = (&lo + &hi) / &two;
        match p.sign_at(&mid) {
            0 => return bracket_exact_root(p, mid, eps),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    AlgebraicNumber::from_parts(p.clone(), lo, hi)
}

/// Bisection landed on a rational root: wrap it in a small symmetric interval.
fn bracket_exact_root(p: &IntPoly, root: Rational, eps: &Rational) -> Option<AlgebraicNumber> {
    let mut delta = if eps.is_positive() { eps / int(4) } else { rat(1, 1 << 20) };
    for _ in 0..256 {
        let lo = &root - &delta;
        let hi = &root + &delta;
        if p.sign_at(&lo) * p.sign_at(&hi) < 0 {
            return AlgebraicNumber::from_parts(p.clone(), lo, hi);
        }
        delta /= int(2);
        if delta.is_zero() {
            break;
        }
    }
    None
}
