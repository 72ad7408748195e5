use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, exact_sqrt};

/// Univariate polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of the i-th power. The top stored
/// coefficient is never zero; the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of `self(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        super::sign(&self.eval(x))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Splits `p(λ) = even(λ²) + λ·odd(λ²)`.
    pub fn parity_split(&self) -> (IntPoly, IntPoly) {
        let even = self.coeffs.iter().step_by(2).cloned().collect();
        let odd = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        (Self::new(even), Self::new(odd))
    }

    /// Inverse of [`parity_split`](Self::parity_split).
    pub fn from_parity(even: &IntPoly, odd: &IntPoly) -> Self {
        let len = (2 * even.coeffs.len()).max(2 * odd.coeffs.len() + 1);
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, c) in even.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        for (i, c) in odd.coeffs.iter().enumerate() {
            coeffs[2 * i + 1] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Pseudo-remainder of `self` by `divisor` (which must be non-zero).
    fn pseudo_rem(&self, divisor: &IntPoly) -> IntPoly {
        let d_deg = divisor.degree().expect("pseudo-remainder by zero polynomial");
        let d_lc = divisor.leading().unwrap();
        let mut r = self.clone();
        while let Some(r_deg) = r.degree() {
            if r_deg < d_deg {
                break;
            }
            let r_lc = r.leading().unwrap().clone();
            r = &r.scale(d_lc) - &divisor.scale(&r_lc).shift(r_deg - d_deg);
        }
        r
    }

    /// Primitive gcd over Z[x], normalised to a positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_some_and(Signed::is_negative) {
            -a
        } else {
            a
        }
    }

    /// Exact quotient `self / divisor` when the division is exact over Z[x].
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let d_deg = divisor.degree()?;
        let d_lc = divisor.leading().unwrap();
        let mut rem = self.clone();
        let Some(top) = rem.degree() else {
            return Some(IntPoly::zero());
        };
        if top < d_deg {
            return None;
        }
        let mut quot = vec![BigInt::zero(); top - d_deg + 1];
        while let Some(r_deg) = rem.degree() {
            if r_deg < d_deg {
                return None;
            }
            let (q, r) = rem.leading().unwrap().div_rem(d_lc);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &divisor.scale(&q).shift(r_deg - d_deg);
            quot[r_deg - d_deg] = q;
        }
        Some(IntPoly::new(quot))
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free_part(&self) -> IntPoly {
        match self.degree() {
            None | Some(0) => return self.clone(),
            _ => {}
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_exact(&g)
            .expect("polynomial is divisible by its gcd with the derivative")
    }

    /// Rational roots of a polynomial of degree at most two, increasing.
    ///
    /// Returns `None` for higher degrees (no rational-root search there).
    pub fn rational_roots_low_degree(&self) -> Option<Vec<Rational>> {
        match self.degree() {
            None | Some(0) => Some(Vec::new()),
            Some(1) => Some(vec![Rational::new(-self.coeff(0), self.coeff(1))]),
            Some(2) => {
                let (c, b, a) = (self.coeff(0), self.coeff(1), self.coeff(2));
                let disc = &b * &b - BigInt::from(4) * &a * &c;
                let Some(s) = exact_sqrt(&disc) else {
                    return Some(Vec::new());
                };
                let two_a = BigInt::from(2) * &a;
                let mut roots = vec![
                    Rational::new(-&b - &s, two_a.clone()),
                    Rational::new(-&b + &s, two_a),
                ];
                roots.sort();
                roots.dedup();
                Some(roots)
            }
            _ => None,
        }
    }
}

impl fmt::Display for IntPoly {
    /// Coefficient list, lowest power first: `[1, 0, -3, 0, 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        write!(f, "]")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[1]).eval(&rat(7, 3)), int(1));
        assert_eq!(p(&[1, -3, 1]).eval(&int(3)), int(1));
        assert_eq!(p(&[1, 0, -1]).eval(&int(1)), int(0));
        assert_eq!(IntPoly::zero().eval(&rat(1, 2)), int(0));
    }

    #[test]
    fn normalises_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn parity_split_examples() {
        assert_eq!(p(&[1, 0, -1]).parity_split(), (p(&[1, -1]), IntPoly::zero()));
        assert_eq!(p(&[0, 3, 0, -4, 0, 1]).parity_split(), (IntPoly::zero(), p(&[3, -4, 1])));
        assert_eq!(p(&[1, 1]).parity_split(), (p(&[1]), p(&[1])));
    }

    #[test]
    fn gcd_and_square_free() {
        // (x - 1)^2 (x + 2)
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        assert_eq!(f.square_free_part(), p(&[-2, 1, 1]));
        assert_eq!(p(&[1, -3, 1]).square_free_part(), p(&[1, -3, 1]));
        assert_eq!(p(&[6, 4]).gcd(&p(&[9, 6])), p(&[3, 2]));
    }

    #[test]
    fn div_exact_rejects_remainders() {
        assert_eq!(p(&[-1, 0, 1]).div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])), None);
        assert_eq!(p(&[1, 2]).div_exact(&p(&[0, 2])), None);
    }

    #[test]
    fn low_degree_rational_roots() {
        // 6q² − 19q + 8 = (3q − 8)(2q − 1)
        assert_eq!(p(&[8, -19, 6]).rational_roots_low_degree(), Some(vec![rat(1, 2), rat(8, 3)]));
        assert_eq!(p(&[7, -16, 5]).rational_roots_low_degree(), Some(vec![]));
        assert_eq!(p(&[1, 4]).rational_roots_low_degree(), Some(vec![rat(-1, 4)]));
        assert_eq!(p(&[1, 0, 0, 1]).rational_roots_low_degree(), None);
    }

    #[test]
    fn display_lists_coefficients() {
        assert_eq!(p(&[1, 0, -3, 0, 1]).to_string(), "[1, 0, -3, 0, 1]");
        assert_eq!(IntPoly::zero().to_string(), "[0]");
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-20i64..=20, 0..7).prop_map(|c| IntPoly::from_i64s(&c))
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-30i64..=30, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), x in small_rat()) {
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!((&a - &b).eval(&x), a.eval(&x) - b.eval(&x));
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }

        #[test]
        fn parity_split_round_trips(a in small_poly()) {
            let (even, odd) = a.parity_split();
            prop_assert_eq!(IntPoly::from_parity(&even, &odd), a);
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!c.is_zero() && !a.is_zero());
            let ac = &a * &c;
            let bc = &b * &c;
            let g = ac.gcd(&bc);
            prop_assert!(ac.div_exact(&g).is_some());
            if !bc.is_zero() {
                prop_assert!(bc.div_exact(&g).is_some());
            }
            prop_assert!(g.degree() >= c.degree());
        }
    }
}
