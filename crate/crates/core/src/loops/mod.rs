//! Paths, loops and weights of the fraction
//!
//! ```text
//! c(q, m) = m_k + 1/(q m_{k-1} + q/(q m_{k-2} + … + q/(q m_0)))
//! ```
//!
//! evaluated through the prefix recurrence `c₀ = m₀`,
//! `c_j = m_j + 1/(q·c_{j−1})`. Weights are kept squared so that everything
//! stays rational: `w² = q^k · ∏_{j<k} c_j²`.

mod search;

pub use search::{search_nonunit_loop, SearchConfig, SearchOutcome};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::witness::{LoopWitness, Provenance, QValue, WeightSquared};

/// Largest depth accepted by [`brute_enumerate_loops`].
pub const BRUTE_MAX_DEPTH: usize = 8;
/// Largest coefficient bound accepted by [`brute_enumerate_loops`].
pub const BRUTE_MAX_BOUND: i64 = 6;

/// A non-empty integer sequence `(m₀, …, m_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathSeq(Vec<BigInt>);

impl PathSeq {
    pub fn new(m: Vec<BigInt>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidInput("a path needs at least one entry".into()));
        }
        Ok(PathSeq(m))
    }

    /// Panics on an empty slice.
    pub fn from_i64s(m: &[i64]) -> Self {
        Self::new(m.iter().map(|&x| BigInt::from(x)).collect()).expect("non-empty path")
    }

    /// `(1, −1, …, (−1)^{n−1}, (−1)^n + c)`.
    pub fn alternating_plus(n: usize, c: &BigInt) -> Self {
        let mut m: Vec<BigInt> = (0..n).map(|i| BigInt::from(alt_sign(i))).collect();
        m.push(BigInt::from(alt_sign(n)) + c);
        PathSeq(m)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the last entry.
    pub fn k(&self) -> usize {
        self.0.len() - 1
    }

    /// `(0)`, or no zero entries at all.
    pub fn is_proper(&self) -> bool {
        self.0.len() == 1 || self.0.iter().all(|m| !m.is_zero())
    }

    pub fn is_zero_loop(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_zero()
    }

    pub fn negated(&self) -> Self {
        PathSeq(self.0.iter().map(|m| -m).collect())
    }

    /// If the sequence has the shape `(1, −1, …, (−1)^{n−1}, (−1)^n + c)`
    /// with `n ≥ 1`, returns `(n, c)`.
    pub fn as_alternating_plus(&self) -> Option<(usize, BigInt)> {
        let n = self.k();
        if n == 0 {
            return None;
        }
        let head_ok = self.0[..n].iter().enumerate().all(|(i, m)| *m == BigInt::from(alt_sign(i)));
        head_ok.then(|| (n, &self.0[n] - BigInt::from(alt_sign(n))))
    }
}

impl std::fmt::Display for PathSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn alt_sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStatus {
    Path,
    Loop,
    /// The prefix ending at index `j − 1` is a loop, so entry `j` divides by zero.
    BrokenAt(usize),
}

impl PathStatus {
    pub fn is_path_or_loop(&self) -> bool {
        !matches!(self, PathStatus::BrokenAt(_))
    }
}

impl std::fmt::Display for PathStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathStatus::Path => write!(f, "path"),
            PathStatus::Loop => write!(f, "loop"),
            PathStatus::BrokenAt(j) => write!(f, "broken-at:{j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathEval {
    /// `c(q, m_j)` for every index reached before a zero denominator.
    pub prefix_c: Vec<Rational>,
    pub status: PathStatus,
}

fn require_positive(q: &Rational) -> Result<()> {
    if q.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveQ(q.to_string()))
    }
}

/// One step of the prefix recurrence: `m + 1/(q·c)`. `c` must be non-zero.
pub(crate) fn step(q: &Rational, c: &Rational, m: &BigInt) -> Rational {
    (q * c).recip() + Rational::from_integer(m.clone())
}

pub fn evaluate_path(q: &Rational, m: &PathSeq) -> Result<PathEval> {
    require_positive(q)?;
    let mut prefix_c = Vec::with_capacity(m.len());
    let mut c = Rational::from_integer(m.0[0].clone());
    for (j, mj) in m.0.iter().enumerate().skip(1) {
        if c.is_zero() {
            prefix_c.push(c);
            return Ok(PathEval { prefix_c, status: PathStatus::BrokenAt(j) });
        }
        let next = step(q, &c, mj);
        prefix_c.push(std::mem::replace(&mut c, next));
    }
    let status = if c.is_zero() { PathStatus::Loop } else { PathStatus::Path };
    prefix_c.push(c);
    Ok(PathEval { prefix_c, status })
}

/// `w(q, m)²` from already evaluated prefixes.
pub(crate) fn weight_squared_from_prefixes(q: &Rational, prefix_c: &[Rational]) -> Rational {
    let k = prefix_c.len() - 1;
    prefix_c[..k]
        .iter()
        .fold(Rational::one(), |acc, c| acc * q * c * c)
}

/// Exact `w(q, m)² = q^k ∏_{j<k} c(q, m_j)²`.
pub fn weight_squared(q: &Rational, m: &PathSeq) -> Result<Rational> {
    let eval = evaluate_path(q, m)?;
    if let PathStatus::BrokenAt(j) = eval.status {
        return Err(Error::BrokenPath(j - 1));
    }
    Ok(weight_squared_from_prefixes(q, &eval.prefix_c))
}

/// Closed form of `c(a/b, m)` for sequences of length five:
///
/// ```text
/// m₄ + ((m₀+m₂)b² + m₀m₁m₂·ab) / (b² + (m₀m₁ + m₀m₃ + m₂m₃)·ab + m₀m₁m₂m₃·a²)
/// ```
pub fn closed_form_c5(q: &Rational, m: &PathSeq) -> Result<Rational> {
    require_positive(q)?;
    if m.len() != 5 {
        return Err(Error::InvalidInput(format!("closed form needs 5 entries, got {}", m.len())));
    }
    let e = &m.0;
    if e[..4].iter().any(Zero::is_zero) {
        return Err(Error::InvalidInput("closed form needs m₀…m₃ non-zero".into()));
    }
    let (a, b) = (q.numer(), q.denom());
    let ab = a * b;
    let num = (&e[0] + &e[2]) * b * b + &e[0] * &e[1] * &e[2] * &ab;
    let den = b * b
        + (&e[0] * &e[1] + &e[0] * &e[3] + &e[2] * &e[3]) * &ab
        + &e[0] * &e[1] * &e[2] * &e[3] * a * a;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::from_integer(e[4].clone()) + Rational::new(num, den))
}

fn lemma_denominator(n: usize, c: &BigInt, q: &Rational) -> Result<Rational> {
    if c.is_zero() || *c == BigInt::from(-alt_sign(n)) {
        return Err(Error::DegenerateC { n, c: c.to_string() });
    }
    let c_plus = Rational::from_integer(c + BigInt::from(alt_sign(n)));
    Ok(int(1) + Rational::from_integer(c.clone()) * q * c_plus)
}

/// `1 / |1 + c·q·(c + (−1)^n)|`, the squared weight of the loop
/// `(1, −1, …, (−1)^{n−1}, (−1)^n + c)` at any q where it is a loop.
///
/// For admissible `c` the factor `c·(c + (−1)^n)` is a positive integer, so
/// the value lies strictly between 0 and 1.
pub fn lemma_weight_squared(n: usize, c: &BigInt, q: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidInput("lemma needs n >= 1".into()));
    }
    require_positive(q)?;
    Ok(lemma_denominator(n, c, q)?.abs().recip())
}

/// Bounds of [`lemma_weight_squared`] over `q ∈ [lo, hi]` (with `lo > 0`),
/// returned as `(min, max)`. The value is decreasing in q.
pub fn lemma_weight_squared_bounds(
    n: usize,
    c: &BigInt,
    lo: &Rational,
    hi: &Rational,
) -> Result<(Rational, Rational)> {
    Ok((lemma_weight_squared(n, c, hi)?, lemma_weight_squared(n, c, lo)?))
}

/// `C(q)`: the largest index with `x_n ≥ 1/q` for `x₁ = 1`,
/// `x_{n+1} = 1 − 1/(q·x_n)` (and `x₀ = +∞`).
pub fn chain_length(q: &Rational) -> Result<usize> {
    if !q.is_positive() || *q >= int(4) {
        return Err(Error::OutOfRange { q: q.to_string(), range: "(0, 4)" });
    }
    let threshold = q.recip();
    let mut x = int(1);
    let mut count = 0;
    while x >= threshold {
        count += 1;
        x = int(1) - (q * &x).recip();
    }
    Ok(count)
}

/// Every proper loop with at most `max_depth + 1` entries, all in
/// `[−coeff_bound, coeff_bound] \ {0}`, plus the loop `(0)`.
///
/// Exhaustive depth-first enumeration; used as an oracle for the search and
/// for the chain proposition. Output is in lexicographic order of entries.
pub fn brute_enumerate_loops(q: &Rational, max_depth: usize, coeff_bound: i64) -> Result<Vec<LoopWitness>> {
    require_positive(q)?;
    if max_depth > BRUTE_MAX_DEPTH || !(0..=BRUTE_MAX_BOUND).contains(&coeff_bound) {
        return Err(Error::BudgetExceeded(format!(
            "brute force limited to depth {BRUTE_MAX_DEPTH} and bound {BRUTE_MAX_BOUND}"
        )));
    }
    let candidates: Vec<BigInt> = (-coeff_bound..=coeff_bound)
        .filter(|&m| m != 0)
        .map(BigInt::from)
        .collect();
    let mut out = vec![witness_for(q, PathSeq::from_i64s(&[0]), int(1))];
    let mut path = Vec::with_capacity(max_depth + 1);
    for m0 in &candidates {
        path.push(m0.clone());
        let c0 = Rational::from_integer(m0.clone());
        enumerate_from(q, &c0, &int(1), max_depth, &candidates, &mut path, &mut out);
        path.pop();
    }
    out[1..].sort_by(|a, b| a.loop_seq.entries().cmp(b.loop_seq.entries()));
    Ok(out)
}

fn enumerate_from(
    q: &Rational,
    c: &Rational,
    w2: &Rational,
    max_depth: usize,
    candidates: &[BigInt],
    path: &mut Vec<BigInt>,
    out: &mut Vec<LoopWitness>,
) {
    if path.len() > max_depth {
        return;
    }
    let inv = (q * c).recip();
    let next_w2 = w2 * q * c * c;
    for m in candidates {
        let next = &inv + Rational::from_integer(m.clone());
        path.push(m.clone());
        if next.is_zero() {
            out.push(witness_for(q, PathSeq(path.clone()), next_w2.clone()));
        } else {
            enumerate_from(q, &next, &next_w2, max_depth, candidates, path, out);
        }
        path.pop();
    }
}

fn witness_for(q: &Rational, m: PathSeq, w2: Rational) -> LoopWitness {
    let verified = !w2.is_one();
    LoopWitness {
        q: QValue::Rational(q.clone()),
        loop_seq: m,
        weight_squared: WeightSquared::Exact(w2),
        provenance: Provenance::Search,
        verified,
    }
}

/// Checks the long-chain property on every non-zero proper loop at `q`:
/// with `ℓ` the smallest index such that `|c(q, m_j)| ≤ 1` for all
/// `ℓ ≤ j ≤ k`, the loop has `k ≥ ℓ + C(q)` and `m_j = (−1)^j·ε` for
/// `ℓ ≤ j < ℓ + C(q)`.
///
/// The zero loop `(0)` is skipped. Anything that is not a proper loop at
/// `q` is rejected as invalid input.
pub fn check_chain_proposition(q: &Rational, witnesses: &[LoopWitness]) -> Result<bool> {
    if *q <= int(2) || *q >= int(4) {
        return Err(Error::OutOfRange { q: q.to_string(), range: "(2, 4)" });
    }
    let chain = chain_length(q)?;
    for w in witnesses {
        if w.q != QValue::Rational(q.clone()) {
            return Err(Error::InvalidInput(format!("witness is for a different q: {}", w.q)));
        }
        let m = &w.loop_seq;
        if m.is_zero_loop() {
            continue;
        }
        let eval = evaluate_path(q, m)?;
        if eval.status != PathStatus::Loop || !m.is_proper() {
            return Err(Error::InvalidInput(format!("{m} is not a proper loop at q = {q}")));
        }
        if !chain_holds(m, &eval.prefix_c, chain) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn chain_holds(m: &PathSeq, prefix_c: &[Rational], chain: usize) -> bool {
    let k = m.k();
    let one = int(1);
    let mut ell = k + 1;
    while ell > 0 && prefix_c[ell - 1].abs() <= one {
        ell -= 1;
    }
    if k < ell + chain {
        return false;
    }
    if chain == 0 {
        return true;
    }
    let eps = &m.0[ell] * BigInt::from(alt_sign(ell));
    if eps.abs() != BigInt::one() {
        return false;
    }
    (ell..ell + chain).all(|j| m.0[j] == &eps * BigInt::from(alt_sign(j)))
}
