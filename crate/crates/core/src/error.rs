use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incomplete judgments: missing pair ({row}, {col})")]
    IncompleteJudgments { row: String, col: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("power iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("unsupported order {0}: random index is tabulated for orders 1..=15 only")]
    UnsupportedOrder(usize),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("no responses cover pair ({row}, {col})")]
    Coverage { row: String, col: String },

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(row: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { row, col, msg: msg.into() }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
