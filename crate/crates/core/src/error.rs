use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `25 - 4t` went negative, so the inverse branches have no real value.
    #[error("decimation map undefined at t = {t} (requires t <= 25/4)")]
    Domain { t: f64 },

    #[error("renormalized limit did not converge from t = {t} after {iterations} iterations")]
    NonConvergence { t: f64, iterations: usize },

    #[error("values {a} and {b} coincide within {tol:e} relative ({context})")]
    NumericTie {
        a: f64,
        b: f64,
        tol: f64,
        context: String,
    },

    #[error("ordering violated: {context}: {lower} is not below {upper}")]
    Ordering {
        lower: f64,
        upper: f64,
        context: String,
    },

    #[error("catalog depth cap of {cap} cycles reached while extending to t = {t}")]
    CatalogExhausted { t: f64, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("t = {t} is not in the located open set (searched l <= {l_max})")]
    OutsideA { t: f64, l_max: usize },

    #[error("counting function is not constant on {kind} interval l = {ell}: {detail}")]
    NotConstant {
        kind: &'static str,
        ell: usize,
        detail: String,
    },

    #[error("graph level {level} exceeds the cap of {cap}")]
    LevelCap { level: u32, cap: u32 },

    #[error("Jacobi eigensolver stalled after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("sequence is not decimation-consistent at position {index}: {detail}")]
    NotDecimationConsistent { index: usize, detail: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
