use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported rank pair {left}·{right} for {op}")]
    Rank {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("tensor is singular or nearly so (det = {det:e})")]
    Singular { det: f64 },

    #[error("degenerate frame (triple product = {triple:e})")]
    Frame { triple: f64 },

    #[error("domain guard violated: {0}")]
    Domain(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
