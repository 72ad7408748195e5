//! Constructive families of forbidden q.
//!
//! * Pell/Fibonacci: `q = a/b` with `b² − 3ab + a² = ±1`, certified by the
//!   loop `(1, −1, 1, −1, −(2b² − ab)/(b² − 3ab + a²))` of squared weight
//!   `1/b⁴`. Accumulates at `(3 ± √5)/2`.
//! * Darboux: near each `t₀ ∈ U_n`, roots of
//!   `g_{n+1}(√q)/(√q·g_n(√q)) = ε·c` for growing integers `c`, each
//!   certified by the loop `(1, −1, …, (−1)^{n−1}, (−1)^n − ε·c)`.
//! * The float-only family `(4/n)·cos²(πℓ/(2k+1))`.
//! * The quadratic accumulation targets of general length-5 loops.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::continuants::{ratio_in_q, u_set, u_set_approx};
use crate::error::{Error, Result};
use crate::exact::{int, isolate_root, pow10_inv, sign, to_f64, AlgebraicNumber, IntPoly, Rational};
use crate::loops::{lemma_weight_squared, weight_squared, PathSeq};
use crate::witness::{LoopWitness, Provenance, QValue, WeightSquared};

/// First multiplier tried by [`darboux_witnesses`].
pub const DARBOUX_MIN_C: i64 = 3;
/// Consecutive multipliers without a root before the generator gives up.
pub const DARBOUX_MAX_SKIPS: i64 = 1000;
/// Width of the isolating interval of an irrational Darboux q.
pub const DARBOUX_WIDTH_EXP: u32 = 20;

/// `b² − 3ab + a²`.
pub fn norm_form(a: &BigInt, b: &BigInt) -> BigInt {
    b * b - BigInt::from(3) * a * b + a * a
}

#[derive(Clone, Debug, PartialEq)]
pub struct PellWitness {
    /// Fibonacci index: `(a, b) = (F_{k+2}, F_k)`, swapped for the reciprocal family.
    pub k: usize,
    pub a: BigInt,
    pub b: BigInt,
    pub q: Rational,
    pub witness: LoopWitness,
}

impl PellWitness {
    /// Re-checks the norm equation, the side conditions, the loop and `w² = 1/b⁴`.
    pub fn verify(&self) -> bool {
        let norm = norm_form(&self.a, &self.b);
        let b2 = &self.b * &self.b;
        norm.abs().is_one()
            && b2 > BigInt::one()
            && self.q == Rational::new(self.a.clone(), self.b.clone())
            && self.q != int(1)
            && self.q != int(2)
            && self.witness.loop_seq == pell_loop(&self.a, &self.b)
            && self.witness.weight_squared == WeightSquared::Exact(Rational::new(BigInt::one(), &b2 * &b2))
            && self.witness.verify()
    }
}

/// `(1, −1, 1, −1, −(2b² − ab)/(b² − 3ab + a²))`; the norm must be ±1.
fn pell_loop(a: &BigInt, b: &BigInt) -> PathSeq {
    let last = -(BigInt::from(2) * b * b - a * b) * norm_form(a, b);
    let mut m: Vec<BigInt> = [1, -1, 1, -1].iter().map(|&x| BigInt::from(x)).collect();
    m.push(last);
    PathSeq::new(m).expect("non-empty")
}

fn fibonacci_pairs() -> impl Iterator<Item = (usize, BigInt, BigInt)> {
    // yields (k, F_k, F_{k+2}) for k = 1, 2, …
    let (mut f0, mut f1, mut f2) = (BigInt::one(), BigInt::one(), BigInt::from(2));
    (1..).map(move |k| {
        let out = (k, f0.clone(), f2.clone());
        let next = &f1 + &f2;
        f0 = std::mem::replace(&mut f1, std::mem::replace(&mut f2, next));
        out
    })
}

/// The first `count` Fibonacci-unit witnesses, each fully re-verified.
///
/// Non-reciprocal: `(a, b) = (F_{k+2}, F_k)` for `k ≥ 3` (k = 1, 2 give
/// `b = 1`), so `q → (3+√5)/2`. Reciprocal: the same indices with `a` and
/// `b` swapped, so `q → (3−√5)/2`.
pub fn pell_witnesses(count: usize, reciprocal: bool) -> Vec<PellWitness> {
    fibonacci_pairs()
        .filter(|(_, fk, _)| fk.abs() > BigInt::one())
        .map(|(k, fk, fk2)| {
            let (a, b) = if reciprocal { (fk, fk2) } else { (fk2, fk) };
            let q = Rational::new(a.clone(), b.clone());
            let loop_seq = pell_loop(&a, &b);
            let w2 = weight_squared(&q, &loop_seq).expect("Fibonacci loop is a path");
            let witness = LoopWitness::certified(QValue::Rational(q.clone()), loop_seq, WeightSquared::Exact(w2), Provenance::Pell);
            PellWitness { k, a, b, q, witness }
        })
        .take(count)
        .collect()
}

/// `(3 + √5)/2`, or `(3 − √5)/2` when `reciprocal`.
pub fn golden_accumulation_point(reciprocal: bool) -> AlgebraicNumber {
    let p = IntPoly::from_i64s(&[1, -3, 1]);
    let (lo, hi) = if reciprocal { (int(0), int(1)) } else { (int(2), int(3)) };
    isolate_root(&p, &lo, &hi, &pow10_inv(60)).expect("q² − 3q + 1 changes sign")
}

/// Exact bounds on `|x − t|` from the isolating interval of `t`.
fn distance_bounds(x: &Rational, t: &AlgebraicNumber) -> (Rational, Rational) {
    if x <= t.lo() {
        (t.lo() - x, t.hi() - x)
    } else if x >= t.hi() {
        (x - t.hi(), x - t.lo())
    } else {
        let far = (x - t.lo()).max(t.hi() - x);
        (Rational::zero(), far)
    }
}

/// True iff `|x_i − t|` is strictly decreasing along `xs`, decided exactly
/// by refining `t` until every consecutive pair separates.
pub fn distances_strictly_decreasing(xs: &[Rational], t: &AlgebraicNumber) -> bool {
    let mut t = t.clone();
    let mut exp = 40;
    'refine: loop {
        for pair in xs.windows(2) {
            let (prev_lo, _) = distance_bounds(&pair[0], &t);
            let (_, next_hi) = distance_bounds(&pair[1], &t);
            if next_hi >= prev_lo {
                if exp > 400 {
                    return false;
                }
                exp *= 2;
                t = t.refine(&pow10_inv(exp));
                continue 'refine;
            }
        }
        return true;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxWitness {
    pub n: usize,
    pub t0: AlgebraicNumber,
    /// The positive integer target `ε·R_n(q) = c_k`.
    pub c_k: i64,
    pub q: QValue,
    pub witness: LoopWitness,
    /// `c_k ≥ 3`, the range covered by the existence argument.
    pub within_proof: bool,
}

/// The interval `(t₀, t₁)` and sign used for one Darboux family.
#[derive(Clone, Debug)]
pub struct DarbouxInterval {
    pub n: usize,
    pub t0: AlgebraicNumber,
    /// `None` when the right end is the cap 4.
    pub t1: Option<AlgebraicNumber>,
    /// Rational strictly below `t₁` (its interval's lower end, or 4).
    pub upper: Rational,
    /// Sign of `g_{n+1}/(√q·g_n)` on the interval.
    pub epsilon: i8,
    pub num: IntPoly,
    pub den: IntPoly,
}

/// Sets up the Darboux family around the `u_index`-th element of `U_n`.
///
/// `t₁` is the smallest element of `U_1 ∪ … ∪ U_{n+1}` above `t₀`, or 4. This
/// covers `U_k` for `k ≠ n` and every root of `g_n` in q (each of those lies
/// in some `U_d` with `d + 1 | n + 1`).
pub fn darboux_interval(n: usize, u_index: usize) -> Result<DarbouxInterval> {
    if n == 0 {
        return Err(Error::InvalidInput("Darboux family needs n >= 1".into()));
    }
    let un = u_set(n);
    let t0 = un
        .get(u_index)
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("U_{n} has {} elements, index {u_index} given", un.len())))?;
    let t0f = t0.approx();
    let mut best: Option<(f64, usize, usize)> = None;
    for k in 1..=n + 1 {
        for (idx, v) in u_set_approx(k).into_iter().enumerate() {
            if v > t0f + 1e-9 && v < 4.0 && best.is_none_or(|(b, _, _)| v < b) {
                best = Some((v, k, idx));
            }
        }
    }
    let t1 = best.map(|(_, k, idx)| u_set(k).swap_remove(idx));
    let upper = t1.as_ref().map_or_else(|| int(4), |t| t.lo().clone());
    if upper <= *t0.hi() {
        return Err(Error::EmptyInterval(format!("{t0f}")));
    }
    let (num, den) = ratio_in_q(n);
    let probe = (t0.hi() + &upper) / int(2);
    let epsilon = sign(&num.eval(&probe)) * sign(&den.eval(&probe));
    if epsilon == 0 {
        return Err(Error::EmptyInterval(format!("{t0f}")));
    }
    Ok(DarbouxInterval { n, t0, t1, upper, epsilon, num, den })
}

impl DarbouxInterval {
    /// Solves `ε·R_n(q) = c` in `(t₀, t₁)` and certifies the resulting loop.
    pub fn witness_for(&self, c: i64) -> Result<DarbouxWitness> {
        if c < 1 {
            return Err(Error::InvalidInput(format!("Darboux multiplier must be positive, got {c}")));
        }
        let eps_c = BigInt::from(self.epsilon as i64 * c);
        // num − ε·c·den
        let target = &self.num - &self.den.scale(&eps_c);
        let lemma_c = -&eps_c;
        let loop_seq = PathSeq::alternating_plus(self.n, &lemma_c);

        if let Some(roots) = target.rational_roots_low_degree() {
            let inside = roots.into_iter().find(|r| {
                self.t0.cmp_rational(r) == Ordering::Less
                    && self.t1.as_ref().map_or(*r < int(4), |t1| t1.cmp_rational(r) == Ordering::Greater)
            });
            if let Some(q) = inside {
                let w2 = lemma_weight_squared(self.n, &lemma_c, &q)?;
                let witness = LoopWitness::certified(
                    QValue::Rational(q.clone()),
                    loop_seq,
                    WeightSquared::Exact(w2),
                    Provenance::Darboux,
                );
                return Ok(self.finish(c, QValue::Rational(q), witness));
            }
        }

        let den_sign = sign(&self.den.eval(&self.upper));
        let mut t0 = self.t0.clone();
        let mut exp = 45;
        // near t₀ the ratio blows up, so num − ε·c·den takes the sign ε·sign(den)
        while target.sign_at(t0.hi()) != self.epsilon * den_sign {
            if exp > 400 {
                return Err(Error::NoRoot(c));
            }
            t0 = t0.refine(&pow10_inv(exp));
            exp *= 2;
        }
        let root = isolate_root(&target, t0.hi(), &self.upper, &pow10_inv(DARBOUX_WIDTH_EXP))
            .map_err(|_| Error::NoRoot(c))?;
        let mid = (root.lo() + root.hi()) / int(2);
        let approx = to_f64(&lemma_weight_squared(self.n, &lemma_c, &mid)?);
        let q = QValue::Algebraic(root);
        let witness = LoopWitness::certified(q.clone(), loop_seq, WeightSquared::Formula { approx }, Provenance::Darboux);
        Ok(self.finish(c, q, witness))
    }

    fn finish(&self, c: i64, q: QValue, witness: LoopWitness) -> DarbouxWitness {
        DarbouxWitness {
            n: self.n,
            t0: self.t0.clone(),
            c_k: c,
            q,
            witness,
            within_proof: c >= DARBOUX_MIN_C,
        }
    }
}

/// `count` Darboux witnesses for `c = 3, 4, …`, skipping multipliers without
/// a root in the interval.
pub fn darboux_witnesses(n: usize, u_index: usize, count: usize) -> Result<Vec<DarbouxWitness>> {
    darboux_witnesses_from(n, u_index, count, DARBOUX_MIN_C)
}

/// Like [`darboux_witnesses`] but starting at `start_c`; witnesses with
/// `c < 3` are returned with `within_proof = false`.
pub fn darboux_witnesses_from(n: usize, u_index: usize, count: usize, start_c: i64) -> Result<Vec<DarbouxWitness>> {
    let interval = darboux_interval(n, u_index)?;
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    let mut c = start_c.max(1);
    while out.len() < count {
        match interval.witness_for(c) {
            Ok(w) => out.push(w),
            Err(Error::NoRoot(_)) | Err(Error::DegenerateC { .. }) => {
                misses += 1;
                if misses > DARBOUX_MAX_SKIPS {
                    return Err(Error::BudgetExceeded(format!(
                        "no Darboux root for {DARBOUX_MAX_SKIPS} consecutive multipliers"
                    )));
                }
            }
            Err(e) => return Err(e),
        }
        c += 1;
    }
    Ok(out)
}

/// Sorted, deduplicated values `(4/n)·cos²(πℓ/(2k+1))` for `1 ≤ k ≤ max_k`,
/// `1 ≤ ℓ < 2k+1` coprime to `2k+1`, `2 ≤ n ≤ max_n`. Floats only.
pub fn cos2_family(max_k: usize, max_n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        let modulus = 2 * k + 1;
        for l in (1..modulus).filter(|l| l.gcd(&modulus) == 1) {
            let c = (std::f64::consts::PI * l as f64 / modulus as f64).cos();
            for n in 2..=max_n {
                out.push(4.0 / n as f64 * c * c);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// Accumulation targets `ω₁ ≥ ω₂` for loops of length five with head
/// `(m₀, m₁, m₂, m₃)`:
///
/// ```text
/// ω = ½(−u − v₁ − v₂ ± √(u² + v₁² + v₂² − 2v₁v₂ + 2uv₁ + 2uv₂))
/// v₁ = 1/(m₀m₁), v₂ = 1/(m₂m₃), u = 1/(m₁m₂)
/// ```
pub fn quadratic_targets(m0: i64, m1: i64, m2: i64, m3: i64) -> Result<(f64, f64)> {
    if m0 == 0 || m1 == 0 || m2 == 0 || m3 == 0 {
        return Err(Error::InvalidInput("quadratic targets need non-zero m₀…m₃".into()));
    }
    let v1 = 1.0 / (m0 as f64 * m1 as f64);
    let v2 = 1.0 / (m2 as f64 * m3 as f64);
    let u = 1.0 / (m1 as f64 * m2 as f64);
    let disc = u * u + v1 * v1 + v2 * v2 - 2.0 * v1 * v2 + 2.0 * u * v1 + 2.0 * u * v2;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant);
    }
    let s = disc.sqrt();
    let base = -u - v1 - v2;
    Ok((0.5 * (base + s), 0.5 * (base - s)))
}
