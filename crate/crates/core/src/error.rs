use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by the subsystem that raises them; [`Error::code`]
/// gives a stable machine-readable tag used by the CLI and the C API.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // exact arithmetic
    #[error("mixed quadratic contexts: sqrt({0}) vs sqrt({1})")]
    ContextMismatch(u32, u32),
    #[error("{0} is not a valid discriminant (must be a positive non-square)")]
    BadDiscriminant(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not anti-symmetric")]
    NotAntiSymmetric,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    // permutations
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation {0} is reducible")]
    Reducible(String),

    // IETs and induction
    #[error("length {index} is not positive")]
    NonPositiveLength { index: usize },
    #[error("point {0} lies outside the domain")]
    Domain(String),
    #[error("Rauzy induction is not well defined at step {step}: competing lengths are equal")]
    Tie { step: usize },
    #[error("step cap of {cap} exceeded")]
    StepCapExceeded { cap: usize },
    #[error("invalid cuts: {0}")]
    InvalidCuts(String),
    #[error("policy error: {0}")]
    Policy(String),

    // induced maps
    #[error("no return within {cap} iterations")]
    ReturnOverflow { cap: usize },
    #[error("degenerate interval: {0}")]
    DegenerateInterval(String),
    #[error("sub-interval is not admissible ({pieces} pieces for n = {n})")]
    NotAdmissible { n: usize, pieces: usize },

    // recovery
    #[error("invalid product at index {index}: {reason}")]
    InvalidProduct { index: usize, reason: String },

    // harness
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("invariant violated: {0}")]
    Invariant(String),

    // wire formats
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Short stable tag for error JSON and FFI status codes.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ContextMismatch(..) => "context",
            Error::BadDiscriminant(_) => "discriminant",
            Error::DivisionByZero => "division_by_zero",
            Error::Overflow => "overflow",
            Error::DimensionMismatch(_) => "dimension",
            Error::NotAntiSymmetric => "not_antisymmetric",
            Error::NotUnimodular(_) => "not_unimodular",
            Error::InvalidPermutation(_) => "invalid_permutation",
            Error::Reducible(_) => "reducible",
            Error::NonPositiveLength { .. } => "non_positive_length",
            Error::Domain(_) => "domain",
            Error::Tie { .. } => "tie",
            Error::StepCapExceeded { .. } => "step_cap",
            Error::InvalidCuts(_) => "invalid_cuts",
            Error::Policy(_) => "policy",
            Error::ReturnOverflow { .. } => "return_overflow",
            Error::DegenerateInterval(_) => "degenerate_interval",
            Error::NotAdmissible { .. } => "not_admissible",
            Error::InvalidProduct { .. } => "invalid_product",
            Error::Precondition(_) => "precondition",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Invariant(_) => "invariant",
            Error::Parse(_) => "parse",
        }
    }
}
