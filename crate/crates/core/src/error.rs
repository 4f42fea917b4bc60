use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{what} exceeds the configured limit ({value} > {limit})")]
    ResourceLimit {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error("no strictly preperiodic parameters with tail {m} and period {n} for degree {d}")]
    DegenerateEmpty { d: u32, m: u32, n: u32 },
    #[error("root iteration did not converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("polynomial has a repeated root")]
    NotSquarefree,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("the polynomials share a root; the resultant vanishes")]
    CommonRoot,
    #[error("the parameter is a root of the period-{n} Gleason polynomial")]
    AlphaIsRoot { n: u32 },
    #[error("evaluation point lies within {distance:e} of a root (residual guard {guard:e})")]
    TooCloseToRoot { distance: f64, guard: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotDivisible => "not_divisible",
            Error::DivisionByZero => "division_by_zero",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::DegenerateEmpty { .. } => "degenerate_empty",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NotSquarefree => "not_squarefree",
            Error::ZeroInput => "zero_input",
            Error::CommonRoot => "common_root",
            Error::AlphaIsRoot { .. } => "alpha_is_root",
            Error::TooCloseToRoot { .. } => "too_close_to_root",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
        }
    }
}
