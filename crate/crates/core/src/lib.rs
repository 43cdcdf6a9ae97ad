//! Rational unicuspidal plane curves: exact cusp invariants, the semigroup
//! criterion, exhaustive candidate search, closed-form families and
//! existence by degree reduction.

pub mod cusp;
pub mod enumerator;
pub mod error;
pub mod existence;
pub mod families;
pub mod record;
pub mod semigroup;

pub use cusp::{ExactRational, MultiplicitySeq, Nat, NewtonPair, NewtonPairSeq, PuiseuxPair, PuiseuxPairSeq};
pub use error::{Error, Result};
pub use record::{CurveRecord, Existence, Kodaira};
