//! Exact arithmetic for forbidden values of q in weighted path and loop
//! sequences: continuant polynomials, prefix recurrences, loop weights, a
//! bounded witness search and the constructive families.

pub mod continuants;
pub mod error;
pub mod exact;
pub mod families;
pub mod loops;
pub mod witness;

pub use continuants::CoeffSeq;
pub use error::{Error, Result};
pub use exact::{AlgebraicNumber, IntPoly, Rational};
pub use families::{DarbouxWitness, PellWitness};
pub use loops::{PathEval, PathSeq, PathStatus, SearchConfig, SearchOutcome};
pub use witness::{LoopWitness, Provenance, QValue, WeightSquared};
