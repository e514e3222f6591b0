use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("(c4, c6) = ({0}, {1}) is not an admissible pair: 1728 does not divide c4^3 - c6^2")]
    InadmissiblePair(String, String),

    #[error("singular model (delta = 0)")]
    SingularModel,

    #[error("prime {0} is not supported here (closed forms require p >= 5)")]
    UnsupportedPrime(u64),

    #[error("model is not minimal at p = {0}")]
    NonMinimal(u64),

    #[error("evaluation budget exceeded: {0} (best estimate {1})")]
    BudgetExceeded(String, f64),

    #[error("internal consistency check failed: {0}")]
    ConsistencyCheck(String),

    #[error("conditioning error: {0}")]
    Conditioning(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("csv rows rejected:\n{}", .0.join("\n"))]
    CsvRows(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
