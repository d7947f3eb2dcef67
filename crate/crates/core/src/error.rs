use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("point outside chart domain: {0}")]
    Domain(String),
    #[error("degenerate metric: {0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("convexity violated: {0}")]
    Convexity(String),
    #[error("chart blow-up: {0}")]
    Chart(String),
    #[error("no solution: {0}")]
    Existence(String),
    #[error("pole of closed form: {0}")]
    Pole(String),
    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;

impl From<csv::Error> for GeomError {
    fn from(e: csv::Error) -> Self {
        GeomError::Csv(e.to_string())
    }
}
