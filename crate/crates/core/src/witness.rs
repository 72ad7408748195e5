//! Loop witnesses and their JSON certificate form.
//!
//! A witness is a loop at some q together with its squared weight. For a
//! rational q everything is exact. For an algebraic q the loop must have the
//! shape `(1, −1, …, (−1)^{n−1}, (−1)^n + c)`, whose squared weight is the
//! closed form `1/|1 + c·q·(c + (−1)^n)|`, and the loop property is checked
//! at both ends of the isolating interval.
//!
//! JSON schema (all big integers are decimal strings):
//!
//! ```text
//! { "q": {"type":"rational","num":"5","den":"2"}
//!      | {"type":"algebraic","poly":["7","-16","5"],"interval":["lo","hi"],"approx":2.677…},
//!   "loop": ["1","-1","1","-1","-2"],
//!   "weight_squared": {"num":"1","den":"16"}
//!                   | {"formula":"1/|1+c q (c+(-1)^n)|","approx":0.0183…},
//!   "provenance": "search" | "duplicate-c" | "pell" | "darboux",
//!   "verified": true }
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, pow10_inv, to_f64, AlgebraicNumber, IntPoly, Rational};
use crate::loops::{evaluate_path, lemma_weight_squared_bounds, weight_squared, PathSeq, PathStatus};

/// `|final c|` allowed at the interval ends of an algebraic witness.
pub const ALGEBRAIC_LOOP_TOL_EXP: u32 = 12;
/// Slack between a stored float weight and its exact interval bounds.
pub const FORMULA_APPROX_TOL: f64 = 1e-9;
pub const LEMMA_FORMULA: &str = "1/|1+c q (c+(-1)^n)|";

#[derive(Clone, Debug, PartialEq)]
pub enum QValue {
    Rational(Rational),
    Algebraic(AlgebraicNumber),
}

impl QValue {
    pub fn approx(&self) -> f64 {
        match self {
            QValue::Rational(r) => to_f64(r),
            QValue::Algebraic(a) => a.approx(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            QValue::Rational(r) => Some(r),
            QValue::Algebraic(_) => None,
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Rational(r) => write!(f, "{r}"),
            QValue::Algebraic(a) => write!(f, "≈{}", a.approx()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightSquared {
    Exact(Rational),
    /// Value of the closed-form weight at an algebraic q.
    Formula { approx: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "search")]
    Search,
    #[serde(rename = "duplicate-c")]
    DuplicateC,
    #[serde(rename = "pell")]
    Pell,
    #[serde(rename = "darboux")]
    Darboux,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Search => "search",
            Provenance::DuplicateC => "duplicate-c",
            Provenance::Pell => "pell",
            Provenance::Darboux => "darboux",
        })
    }
}

/// A loop at q whose weight certifies that q is forbidden when `verified`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopWitness {
    pub q: QValue,
    pub loop_seq: PathSeq,
    pub weight_squared: WeightSquared,
    pub provenance: Provenance,
    pub verified: bool,
}

impl LoopWitness {
    /// Builds a witness and sets `verified` from [`verify`](Self::verify).
    pub fn certified(q: QValue, loop_seq: PathSeq, weight_squared: WeightSquared, provenance: Provenance) -> Self {
        let mut w = LoopWitness { q, loop_seq, weight_squared, provenance, verified: false };
        w.verified = w.verify();
        w
    }

    /// Re-checks the certificate from scratch, ignoring the stored flag.
    pub fn verify(&self) -> bool {
        match (&self.q, &self.weight_squared) {
            (QValue::Rational(q), WeightSquared::Exact(w2)) => {
                let Ok(eval) = evaluate_path(q, &self.loop_seq) else {
                    return false;
                };
                eval.status == PathStatus::Loop
                    && weight_squared(q, &self.loop_seq).is_ok_and(|x| x == *w2)
                    && !w2.is_one()
            }
            (QValue::Algebraic(a), WeightSquared::Formula { approx }) => self.verify_algebraic(a, *approx),
            _ => false,
        }
    }

    fn verify_algebraic(&self, a: &AlgebraicNumber, approx: f64) -> bool {
        if !a.certificate_holds() || !a.lo().is_positive() {
            return false;
        }
        let Some((n, c)) = self.loop_seq.as_alternating_plus() else {
            return false;
        };
        let tol = pow10_inv(ALGEBRAIC_LOOP_TOL_EXP);
        for end in [a.lo(), a.hi()] {
            let Ok(eval) = evaluate_path(end, &self.loop_seq) else {
                return false;
            };
            if !eval.status.is_path_or_loop() {
                return false;
            }
            // every proper prefix must stay away from zero; the last one must be tiny
            let (last, head) = eval.prefix_c.split_last().unwrap();
            if head.iter().any(|c| c.abs() <= tol) || last.abs() >= tol {
                return false;
            }
        }
        let Ok((min, max)) = lemma_weight_squared_bounds(n, &c, a.lo(), a.hi()) else {
            return false;
        };
        max < Rational::one()
            && approx >= to_f64(&min) - FORMULA_APPROX_TOL
            && approx <= to_f64(&max) + FORMULA_APPROX_TOL
    }

    pub fn to_json(&self) -> WitnessJson {
        let q = match &self.q {
            QValue::Rational(r) => QJson::Rational { num: r.numer().to_string(), den: r.denom().to_string() },
            QValue::Algebraic(a) => QJson::Algebraic {
                poly: a.defining().coeffs().iter().map(ToString::to_string).collect(),
                interval: [a.lo().to_string(), a.hi().to_string()],
                approx: a.approx(),
            },
        };
        let weight_squared = match &self.weight_squared {
            WeightSquared::Exact(w) => WeightJson::Exact { num: w.numer().to_string(), den: w.denom().to_string() },
            WeightSquared::Formula { approx } => {
                WeightJson::Formula { formula: LEMMA_FORMULA.to_string(), approx: *approx }
            }
        };
        WitnessJson {
            q,
            loop_seq: self.loop_seq.entries().iter().map(ToString::to_string).collect(),
            weight_squared,
            provenance: self.provenance,
            verified: self.verified,
        }
    }

    pub fn from_json(j: &WitnessJson) -> Result<Self> {
        let big = |s: &str| -> Result<BigInt> {
            s.parse().map_err(|_| Error::InvalidInput(format!("bad integer {s:?}")))
        };
        let q = match &j.q {
            QJson::Rational { num, den } => {
                let den = big(den)?;
                if den.sign() == num_bigint::Sign::NoSign {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                QValue::Rational(Rational::new(big(num)?, den))
            }
            QJson::Algebraic { poly, interval, .. } => {
                let coeffs = poly.iter().map(|c| big(c)).collect::<Result<Vec<_>>>()?;
                let lo = parse_rational(&interval[0])?;
                let hi = parse_rational(&interval[1])?;
                let a = AlgebraicNumber::from_parts(IntPoly::new(coeffs), lo, hi)
                    .ok_or_else(|| Error::InvalidInput("interval carries no sign change".into()))?;
                QValue::Algebraic(a)
            }
        };
        let loop_seq = PathSeq::new(j.loop_seq.iter().map(|m| big(m)).collect::<Result<Vec<_>>>()?)?;
        let weight_squared = match &j.weight_squared {
            WeightJson::Exact { num, den } => {
                let den = big(den)?;
                if den.sign() == num_bigint::Sign::NoSign {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                WeightSquared::Exact(Rational::new(big(num)?, den))
            }
            WeightJson::Formula { approx, .. } => WeightSquared::Formula { approx: *approx },
        };
        Ok(LoopWitness { q, loop_seq, weight_squared, provenance: j.provenance, verified: j.verified })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub q: QJson,
    #[serde(rename = "loop")]
    pub loop_seq: Vec<String>,
    pub weight_squared: WeightJson,
    pub provenance: Provenance,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum QJson {
    Rational { num: String, den: String },
    Algebraic { poly: Vec<String>, interval: [String; 2], approx: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightJson {
    Exact { num: String, den: String },
    Formula { formula: String, approx: f64 },
}
