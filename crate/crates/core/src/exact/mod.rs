//! Exact arithmetic: scalars over `Q` and `Q(sqrt D)`, and dense integer and
//! rational matrices.

pub mod matrix;
pub mod scalar;

pub use matrix::{bilinear, nullspace, IntMatrix, Matrix, RatMatrix};
pub use scalar::{parse_rational, scalar_cmp, QuadScalar, Rational, Scalar, DEFAULT_DISCRIMINANT};
