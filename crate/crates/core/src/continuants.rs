//! Continuant polynomials f_n(λ; m) and their alternating specialisation g_n.
//!
//! For an integer sequence `m = (m₀, …, m_{n−1})` the continuant satisfies
//! `f₀ = 1`, `f₁ = m₀λ` and `f_{n+1} = m_n·λ·f_n + f_{n−1}`. Prefix values of
//! the loop fraction are ratios `f_{n+1} / (λ f_n)` with `q = λ²`.
//!
//! `g_n` is `f_n` on the alternating sequence `(1, −1, 1, …)`; its roots are
//! `2cos(πj/(n+1))`, and the squares of the primitive ones form the sets
//! `U_n` around which forbidden q accumulate.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{from_f64, gcd_i64, isolate_root, pow10_inv, AlgebraicNumber, IntPoly};

/// Largest sequence length accepted by [`f_explicit`].
pub const EXPLICIT_CUTOFF: usize = 12;

/// The variables `m₀, …, m_{n−1}` of a continuant. Zeros are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoeffSeq(pub Vec<BigInt>);

impl CoeffSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(1, −1, 1, …)` of length `n`.
    pub fn alternating(n: usize) -> Self {
        CoeffSeq((0..n).map(|i| BigInt::from(if i % 2 == 0 { 1 } else { -1 })).collect())
    }
}

impl From<&[i64]> for CoeffSeq {
    fn from(m: &[i64]) -> Self {
        CoeffSeq(m.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl From<Vec<i64>> for CoeffSeq {
    fn from(m: Vec<i64>) -> Self {
        m.as_slice().into()
    }
}

/// `f_n(λ; m)` by the three-term recurrence.
pub fn f_poly(m: &CoeffSeq) -> IntPoly {
    let mut prev = IntPoly::one();
    let Some(m0) = m.0.first() else {
        return prev;
    };
    let mut cur = IntPoly::monomial(m0.clone(), 1);
    for mi in &m.0[1..] {
        let next = &cur.scale(mi).shift(1) + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `f_n(λ; m)` by direct enumeration of admissible index subsets.
///
/// A subset `I ⊆ [0, n)` contributes `∏_{i∈I} m_i · λ^{|I|}` when
/// `|I| ≡ n (mod 2)` and every `i ∈ I` has `i ≡ |I ∩ [0, i)| (mod 2)`.
/// Exponential in `n`; used as an independent check of [`f_poly`].
pub fn f_explicit(m: &CoeffSeq) -> Result<IntPoly> {
    let n = m.len();
    if n > EXPLICIT_CUTOFF {
        return Err(Error::CutoffExceeded { len: n, cutoff: EXPLICIT_CUTOFF });
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size % 2 != n % 2 {
            continue;
        }
        let mut below = 0usize;
        let mut admissible = true;
        let mut prod = BigInt::one();
        for (i, mi) in m.0.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if i % 2 != below % 2 {
                    admissible = false;
                    break;
                }
                prod *= mi;
                below += 1;
            }
        }
        if admissible {
            coeffs[size] += prod;
        }
    }
    Ok(IntPoly::new(coeffs))
}

/// `g_n(λ) = f_n(λ; 1, −1, …, (−1)^{n−1})`.
pub fn g_poly(n: usize) -> IntPoly {
    f_poly(&CoeffSeq::alternating(n))
}

/// The roots `2cos(πj/(n+1))`, `j = 1..=n`, in decreasing order.
pub fn g_roots(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|j| 2.0 * (std::f64::consts::PI * j as f64 / (n + 1) as f64).cos())
        .collect()
}

/// `g_n(x)` in floating point through the three-term recurrence.
///
/// Horner on the expanded coefficients loses about `(1+√2)^n` ulps near the
/// largest roots; the recurrence stays within a few ulps per step.
pub fn g_eval_f64(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, if n == 0 { 1.0 } else { x });
    for k in 1..n {
        let m = if k % 2 == 0 { 1.0 } else { -1.0 };
        let next = m * x * cur + prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Checks `g_n² + g_{n+1}·g_{n−1} = 1` by exact coefficient arithmetic.
pub fn g_identity_check(n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let (prev, cur, next) = (g_poly(n - 1), g_poly(n), g_poly(n + 1));
    &(&cur * &cur) + &(&next * &prev) == IntPoly::one()
}

/// `g_n` as a polynomial in `q = λ²` whose roots are exactly the squared
/// roots of `g_n`: the even part for even `n`, `q·odd` for odd `n`.
pub fn g_in_q(n: usize) -> IntPoly {
    let (even, odd) = g_poly(n).parity_split();
    if n.is_multiple_of(2) {
        even
    } else {
        odd.shift(1)
    }
}

/// `g_{n+1}(λ) / (λ·g_n(λ))` written as `num(q) / den(q)` for `λ = √q > 0`.
///
/// Common integer content of `num` and `den` is divided out; nothing else.
pub fn ratio_in_q(n: usize) -> (IntPoly, IntPoly) {
    assert!(n >= 1, "ratio_in_q needs n >= 1");
    let (next_even, next_odd) = g_poly(n + 1).parity_split();
    let (cur_even, cur_odd) = g_poly(n).parity_split();
    let (num, den) = if n.is_multiple_of(2) {
        (next_odd, cur_even)
    } else {
        (next_even, cur_odd.shift(1))
    };
    let g = num_integer::Integer::gcd(&num.content(), &den.content());
    if g.is_zero() || g.is_one() {
        (num, den)
    } else {
        let div = |p: &IntPoly| IntPoly::new(p.coeffs().iter().map(|c| c / &g).collect());
        (div(&num), div(&den))
    }
}

/// Floats `4cos²(πj/(n+1))` for `j = 1..=n` with `gcd(j, n+1) = 1`,
/// deduplicated and increasing.
pub fn u_set_approx(n: usize) -> Vec<f64> {
    let mut vals: Vec<f64> = (1..=n)
        .filter(|&j| gcd_i64(j as i64, n as i64 + 1) == 1)
        .map(|j| squared_root(j, n))
        .collect();
    sort_dedup(&mut vals);
    vals
}

fn squared_root(j: usize, n: usize) -> f64 {
    let c = 2.0 * (std::f64::consts::PI * j as f64 / (n + 1) as f64).cos();
    c * c
}

fn sort_dedup(vals: &mut Vec<f64>) {
    vals.sort_by(f64::total_cmp);
    vals.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
}

/// `U_n` as certified algebraic numbers, increasing.
///
/// Each element is a root of [`g_in_q`]`(n)`, isolated from a float seed with
/// a half-width below half the gap to the neighbouring squared roots, then
/// refined to width `10⁻⁴⁰`.
pub fn u_set(n: usize) -> Vec<AlgebraicNumber> {
    assert!(n >= 1, "u_set needs n >= 1");
    let defining = g_in_q(n);
    let mut all: Vec<f64> = (1..=n).map(|j| squared_root(j, n)).collect();
    sort_dedup(&mut all);
    u_set_approx(n)
        .into_iter()
        .map(|t| {
            let gap = all
                .iter()
                .filter(|&&s| (s - t).abs() >= 1e-12)
                .map(|&s| (s - t).abs())
                .fold(0.5f64, f64::min);
            let half = gap / 4.0;
            let lo = from_f64(t - half).expect("finite seed");
            let hi = from_f64(t + half).expect("finite seed");
            isolate_root(&defining, &lo, &hi, &pow10_inv(40))
                .expect("squared cosine root is a simple root of g_n in q")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Rational};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn binom(n: i64, k: i64) -> BigInt {
        if k < 0 || k > n {
            return BigInt::zero();
        }
        (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    /// `Σ_ℓ (−1)^ℓ C(n−ℓ, n−2ℓ) λ^{n−2ℓ}`, the closed form up to a global sign.
    fn g_closed_form(n: usize) -> IntPoly {
        let n = n as i64;
        let mut coeffs = vec![BigInt::zero(); n as usize + 1];
        for l in 0..=n / 2 {
            let sign = if l % 2 == 0 { 1 } else { -1 };
            coeffs[(n - 2 * l) as usize] = binom(n - l, n - 2 * l) * sign;
        }
        IntPoly::new(coeffs)
    }

    #[test]
    fn f_poly_examples() {
        assert_eq!(f_poly(&CoeffSeq::default()), IntPoly::one());
        assert_eq!(f_poly(&vec![1, -1].into()), p(&[1, 0, -1]));
        assert_eq!(f_poly(&vec![2, 3].into()), p(&[1, 0, 6]));
    }

    #[test]
    fn f_explicit_examples() {
        assert_eq!(f_explicit(&CoeffSeq::default()).unwrap(), IntPoly::one());
        assert_eq!(f_explicit(&vec![1, -1].into()).unwrap(), p(&[1, 0, -1]));
        assert_eq!(f_explicit(&vec![1, -1, 1].into()).unwrap(), p(&[0, 2, 0, -1]));
        assert_eq!(f_explicit(&vec![1, -1, 1].into()).unwrap(), f_poly(&vec![1, -1, 1].into()));
    }

    #[test]
    fn f_explicit_cutoff() {
        let long: CoeffSeq = vec![1; 13].into();
        assert_eq!(
            f_explicit(&long),
            Err(Error::CutoffExceeded { len: 13, cutoff: EXPLICIT_CUTOFF })
        );
        assert!(f_explicit(&vec![1; 12].into()).is_ok());
    }

    #[test]
    fn g_poly_examples() {
        assert_eq!(g_poly(0), IntPoly::one());
        assert_eq!(g_poly(1), p(&[0, 1]));
        assert_eq!(g_poly(2), p(&[1, 0, -1]));
        assert_eq!(g_poly(4), p(&[1, 0, -3, 0, 1]));
        assert_eq!(g_poly(5), p(&[0, 3, 0, -4, 0, 1]));
    }

    #[test]
    fn g_poly_matches_binomial_closed_form_up_to_sign() {
        for n in 0..=30 {
            let g = g_poly(n);
            let closed = g_closed_form(n);
            assert!(g == closed || g == -closed, "n = {n}");
        }
    }

    #[test]
    fn g_roots_examples() {
        assert!(g_roots(1)[0].abs() < 1e-15);
        let r2 = g_roots(2);
        assert!((r2[0] - 1.0).abs() < 1e-15 && (r2[1] + 1.0).abs() < 1e-15);
        let r4 = g_roots(4);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = [phi, phi - 1.0, 1.0 - phi, -phi];
        for (r, e) in r4.iter().zip(expected) {
            assert!((r - e).abs() < 1e-14);
        }
        assert!(r4.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn float_recurrence_matches_exact_polynomial() {
        for n in 0..=12 {
            let g = g_poly(n);
            for x in [-1.7, -0.3, 0.0, 0.9, 1.95] {
                assert!((g_eval_f64(n, x) - g.eval_f64(x)).abs() < 1e-9, "n = {n}, x = {x}");
            }
        }
        for r in g_roots(30) {
            assert!(g_eval_f64(30, r).abs() < 1e-12);
        }
    }

    #[test]
    fn g_roots_are_roots() {
        for n in 1..=30 {
            let g = g_poly(n);
            for r in g_roots(n) {
                // exact sign change across a small bracket around the float root
                let x = from_f64(r).unwrap();
                let d = pow10_inv(9);
                let (a, b) = (g.sign_at(&(&x - &d)), g.sign_at(&(&x + &d)));
                assert!(a * b <= 0, "n = {n}, root {r}");
            }
        }
    }

    #[test]
    fn quadratic_identity_holds() {
        assert!(g_identity_check(1));
        assert!(g_identity_check(2));
        assert!((1..=40).all(g_identity_check));
        assert!(!g_identity_check(0));
    }

    #[test]
    fn degree_and_leading_coefficient() {
        let m: CoeffSeq = vec![2, -3, 1, 5, -1].into();
        let f = f_poly(&m);
        assert_eq!(f.degree(), Some(5));
        assert_eq!(f.leading(), Some(&BigInt::from(30)));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_in_q(1), (p(&[1, -1]), p(&[0, 1])));
        assert_eq!(ratio_in_q(2), (p(&[2, -1]), p(&[1, -1])));
        assert_eq!(ratio_in_q(4), (p(&[3, -4, 1]), p(&[1, -3, 1])));
    }

    #[test]
    fn ratio_matches_alternating_path_value() {
        use crate::loops::{evaluate_path, PathSeq};
        for n in 1..=10 {
            let (num, den) = ratio_in_q(n);
            let path = PathSeq::from_i64s(
                &(0..=n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect::<Vec<_>>(),
            );
            for (a, b) in [(1, 7), (3, 5), (7, 3), (13, 4), (5, 2), (9, 4)] {
                let q = rat(a, b);
                let d = den.eval(&q);
                if d.is_zero() {
                    continue;
                }
                let eval = evaluate_path(&q, &path).unwrap();
                if !eval.status.is_path_or_loop() {
                    continue;
                }
                assert_eq!(num.eval(&q) / d, *eval.prefix_c.last().unwrap(), "n = {n}, q = {q}");
            }
        }
    }

    #[test]
    fn u_set_examples() {
        let u1 = u_set(1);
        assert_eq!(u1.len(), 1);
        assert!(u1[0].approx().abs() < 1e-30);
        let u2 = u_set(2);
        assert_eq!(u2.len(), 1);
        assert_eq!(u2[0].cmp_rational(&int(1)), std::cmp::Ordering::Equal);
        let u4 = u_set(4);
        assert_eq!(u4.len(), 2);
        let s5 = 5f64.sqrt();
        assert!((u4[0].approx() - (3.0 - s5) / 2.0).abs() < 1e-15);
        assert!((u4[1].approx() - (3.0 + s5) / 2.0).abs() < 1e-15);
        for a in &u4 {
            assert_eq!(a.defining(), &p(&[1, -3, 1]));
            assert!(a.certificate_holds());
        }
    }

    #[test]
    fn u_sets_are_squares_of_primitive_roots_and_disjoint() {
        let mut seen: Vec<(usize, f64)> = Vec::new();
        for n in 1..=10 {
            let roots = g_roots(n);
            let mut expected: Vec<f64> = roots
                .iter()
                .enumerate()
                .filter(|(i, _)| gcd_i64(*i as i64 + 1, n as i64 + 1) == 1)
                .map(|(_, r)| r * r)
                .collect();
            sort_dedup(&mut expected);
            let got = u_set(n);
            assert_eq!(got.len(), expected.len(), "n = {n}");
            for (a, e) in got.iter().zip(&expected) {
                assert!((a.approx() - e).abs() < 1e-12);
                assert!(a.width() <= pow10_inv(40));
                for (m, prev) in &seen {
                    assert!((prev - a.approx()).abs() > 1e-9, "U_{n} meets U_{m}");
                }
            }
            seen.extend(got.iter().map(|a| (n, a.approx())));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn recurrence_matches_enumeration(m in prop::collection::vec(-3i64..=3, 0..=8)) {
            let m: CoeffSeq = m.into();
            prop_assert_eq!(f_poly(&m), f_explicit(&m).unwrap());
        }

        #[test]
        fn degree_is_length_when_entries_nonzero(
            m in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 0..=10)
        ) {
            let f = f_poly(&m.clone().into());
            prop_assert_eq!(f.degree(), Some(m.len()));
            let prod: i64 = m.iter().product();
            prop_assert_eq!(f.leading().cloned(), Some(BigInt::from(prod)));
        }
    }

    #[test]
    fn ratio_at_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        use crate::loops::{evaluate_path, PathSeq};
        for n in [1usize, 2, 3, 4, 5, 7] {
            let (num, den) = ratio_in_q(n);
            let path = PathSeq::from_i64s(
                &(0..=n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect::<Vec<_>>(),
            );
            let mut checked = 0;
            while checked < 50 {
                let q: Rational = rat(rng.gen_range(1..400), 100);
                if den.eval(&q).is_zero() {
                    continue;
                }
                let eval = evaluate_path(&q, &path).unwrap();
                if !eval.status.is_path_or_loop() {
                    continue;
                }
                assert_eq!(num.eval(&q) / den.eval(&q), *eval.prefix_c.last().unwrap());
                checked += 1;
            }
        }
    }
}
