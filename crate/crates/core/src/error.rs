use thiserror::Error;

/// Errors raised by the exact-arithmetic layer, the loop calculus and the
/// family generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: String, hi: String },
    #[error("explicit continuant formula limited to {cutoff} variables, got {len}")]
    CutoffExceeded { len: usize, cutoff: usize },
    #[error("q must be positive, got {0}")]
    NonPositiveQ(String),
    #[error("sequence is not a path at q: prefix {0} is already a loop")]
    BrokenPath(usize),
    #[error("closed form has a zero denominator")]
    ZeroDenominator,
    #[error("c = {c} gives a unit-weight loop for n = {n}")]
    DegenerateC { n: usize, c: String },
    #[error("q = {q} is outside the admissible range {range}")]
    OutOfRange { q: String, range: &'static str },
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("empty interval: no admissible right endpoint above t0 = {0}")]
    EmptyInterval(String),
    #[error("no root for c = {0} in the isolating interval")]
    NoRoot(i64),
    #[error("negative discriminant: no real targets")]
    NegativeDiscriminant,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
