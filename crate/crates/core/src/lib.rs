//! Exact extended Rauzy induction for interval exchange transformations,
//! induced maps, recovery of permutations from visitation matrices, and a
//! harness for checking the algebraic invariants involved.

pub mod cli;
pub mod error;
pub mod exact;
pub mod harness;
pub mod iet;
pub mod induced;
pub mod perm;
pub mod rauzy;
pub mod recovery;
pub mod sample;
pub mod wire;

pub use error::{Error, Result};
pub use exact::{IntMatrix, Rational, Scalar};
pub use iet::Iet;
pub use perm::Permutation;
