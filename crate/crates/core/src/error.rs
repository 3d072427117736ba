use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Grids, strides or parameters do not fit together.
    #[error("configuration error: {0}")]
    Config(String),

    /// A right-hand side or intensity produced a non-finite value.
    #[error("numerical error at t = {time}: {detail}")]
    Numerical { time: f64, detail: String },

    /// Scenario validation failed; one entry per violated field.
    #[error("invalid scenario: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// A solver failure attributed to the module that raised it.
    #[error("{module}: {source}")]
    Solver {
        module: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numerical(time: f64, detail: impl Into<String>) -> Self {
        Error::Numerical {
            time,
            detail: detail.into(),
        }
    }

    /// Tags the error with the module it came from.
    pub fn in_module(self, module: &'static str) -> Self {
        match self {
            e @ Error::Solver { .. } => e,
            e => Error::Solver {
                module,
                source: Box::new(e),
            },
        }
    }
}
