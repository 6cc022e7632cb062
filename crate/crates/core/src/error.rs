use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("(c)_m vanishes at m = {0}; the hypergeometric sum is undefined")]
    ZeroPochhammerInDenominator(usize),

    #[error("series has zero constant term")]
    ZeroConstantTerm,

    #[error("series constant term must be exactly 1 to take a logarithm")]
    ConstantTermNotOne,

    #[error("function is not normalized: need a_0 = 0 and a_1 = 1")]
    NotNormalized,

    #[error("differentiation order {needed} exceeds series order {order}")]
    OrderExhausted { needed: usize, order: usize },

    #[error("vector support {support} exceeds table order {order}")]
    SupportExceedsOrder { support: usize, order: usize },

    #[error("tolerance unachievable: {0}")]
    ToleranceUnachievable(String),

    #[error("power iteration did not converge: best value {best}, residual {residual:e}")]
    ConvergenceFailure { best: f64, residual: f64 },

    #[error("exact backend required: {0}")]
    BackendMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
