use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unbound variable `{0}`")]
    Scope(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A hard resource budget was hit. `best` carries the tightest enclosure
    /// known at the time, when the computation produces one.
    #[error("resource budget exceeded: {detail}")]
    Budget {
        detail: String,
        best: Option<(f64, f64)>,
    },
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub fn budget(detail: impl Into<String>) -> Self {
        Error::Budget { detail: detail.into(), best: None }
    }

    pub fn precondition(detail: impl Into<String>) -> Self {
        Error::Precondition(detail.into())
    }
}
