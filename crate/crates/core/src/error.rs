use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("{func} did not converge: estimate {estimate:e}, error estimate {abs_err:e} after {evaluations} subdivisions")]
    NonConvergence {
        func: &'static str,
        estimate: f64,
        abs_err: f64,
        evaluations: usize,
    },

    #[error("overflow in {func}: {msg}")]
    Overflow { func: &'static str, msg: String },

    #[error("path horizon exhausted: {0}")]
    Horizon(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(func: &'static str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain {
        func,
        msg: msg.into(),
    })
}
