pub mod error;
pub mod series;
pub mod coeffs;
pub mod special;
pub mod genf;
pub mod linalg;
pub mod diagnostics;
pub mod hotelling;
pub mod mc;
pub mod cli;

pub use error::{Error, Result};
pub use series::{CompensatedSum, SeriesEvaluation};
pub use genf::{stochastic_bounds, GenFOptions, GeneralizedF, GeneralizedFParams, StochasticBounds};
