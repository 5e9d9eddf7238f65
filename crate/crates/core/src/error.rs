use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("not exactly divisible")]
    NotDivisible,

    #[error("class is not in the span of the Schubert basis (residual at {witness})")]
    NotInSpan { witness: String },

    #[error("localization pushforward is not a polynomial")]
    NonPolynomialResult,

    #[error("localization pushforward is not integral")]
    NonIntegralResult,

    #[error("{0} is not a minimal coset representative; valid: {1}")]
    RepNotMinimal(String, String),

    #[error("cross-check failure: {0}")]
    CrossCheckFailure(String),

    #[error("elements belong to different groups")]
    DatumMismatch,

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
