use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructor received parameters that cannot yield a valid object.
    #[error("construction error: {0}")]
    Construction(String),

    /// An adaptive scheme exhausted its subdivision or sampling budget.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// An iterative procedure failed to converge.
    #[error("did not converge: {0}")]
    NonConvergence(String),

    /// A fit target is outside the achievable range of the chosen family.
    #[error("profile infeasible: {0}")]
    Infeasible(String),

    /// Configuration (CLI flags, descriptors, config files) failed to validate.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
