use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("unknown space: {0}")]
    Lookup(String),

    #[error("{identity} identity violated for {label}: {detail}")]
    IdentityViolation {
        identity: &'static str,
        label: String,
        detail: String,
    },

    #[error("catalog file error: {0}")]
    CatalogFile(String),

    #[error("degenerate chamber: simple roots are linearly dependent")]
    DegenerateChamber,

    #[error("{0} out of range: {1}")]
    OutOfRange(&'static str, String),

    #[error("no matrix model for {family}; supported families: sl(n,R) n<=6, su(p,q) p+q<=6, so(p,q) p+q<=6, sp(n,R) n<=6")]
    UnsupportedModel { family: String },

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("precondition not met: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
