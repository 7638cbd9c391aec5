use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what}: argument {value} outside domain ({requirement})")]
    Domain {
        what: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    /// The integrand returned NaN or ±∞ at a quadrature node.
    #[error("integrand returned {value} at x = {x}")]
    NonFiniteIntegrand { x: f64, value: f64 },

    #[error("series did not reach its stopping bound within {terms} terms")]
    SeriesNotConverged { terms: usize },

    #[error("parameter grid is empty")]
    EmptyGrid,
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            requirement,
        }
    }

    /// True for precondition violations (the caller asked for something the
    /// operation is not defined for), as opposed to numerical failures.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. } | Error::EmptyGrid | Error::InvalidTolerance(_)
        )
    }
}
