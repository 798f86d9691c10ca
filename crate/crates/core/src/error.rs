use thiserror::Error;

/// Errors produced by the distribution, linear-algebra and diagnostics code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("design matrix is rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("Jacobi eigenvalue iteration did not converge in {0} sweeps")]
    EigenConvergence(usize),

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("C({n},{r}) = {count} subsets exceeds the cap of {cap}; pass explicit subsets instead")]
    TooManySubsets { n: usize, r: usize, count: u128, cap: u128 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
