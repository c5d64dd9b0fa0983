use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group spec: {0}")]
    InvalidSpec(String),
    #[error("group spec failed validation: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("unknown generator `{0}`")]
    UnknownSymbol(String),
    #[error("unknown built-in group `{0}`")]
    UnknownGroup(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no Q(beta) sphere at beta = {beta} (critical beta is {beta0})")]
    NoSphere { beta: f64, beta0: f64 },
    #[error("words `{0}` and `{1}` have different endpoints")]
    EndpointMismatch(String, String),
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("ray limit did not settle: gap {gap:e} between r = {r_prev} and r = {r_last}")]
    RayLimitNotSettled {
        r_prev: f64,
        r_last: f64,
        prev: Vec<f64>,
        last: Vec<f64>,
        gap: f64,
    },
    #[error("all weights are zero")]
    ZeroWeights,
    #[error("direction lies outside the cone")]
    OutsideCone,
    #[error("direction coincides with the cone center")]
    AtCenter,
    #[error("element lies outside the tabulated ball")]
    OutsideTable,
    #[error("ball radius {0} exceeds the configured maximum {1}")]
    RadiusTooLarge(usize, usize),
    #[error("degenerate fan: {0}")]
    DegenerateFan(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by the mathematics of the request rather than by how it was phrased.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Validation(_)
                | Error::NoSphere { .. }
                | Error::EndpointMismatch(..)
                | Error::NonConvergence { .. }
                | Error::RayLimitNotSettled { .. }
                | Error::OutsideCone
                | Error::AtCenter
                | Error::OutsideTable
                | Error::DegenerateFan(_)
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
