use thiserror::Error;

/// Failures raised by constructions and checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rotation data resonant: {n1} + {n2}·α + {n3}·β ≈ 0")]
    Resonant { n1: i64, n2: i64, n3: i64 },
    #[error("gap schedule total {total} is not below 1")]
    ScheduleTooLarge { total: f64 },
    #[error("lift lost monotonicity near x = {x}")]
    NotMonotone { x: f64 },
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: i64 },
    #[error("matrix is not hyperbolic (trace = {trace})")]
    NotHyperbolic { trace: i64 },
    #[error("bump infeasible: need (v - κ)/δ + ramp = {need:.4} ≤ {limit:.4}")]
    BumpInfeasible { need: f64, limit: f64 },
    #[error("blow-up stage {stage} aborted: {reason}")]
    StageAborted { stage: usize, reason: String },
    #[error("graph transform failed to contract: {0}")]
    NoContraction(String),
    #[error("leaf integration exhausted its budget after arc length {arc}")]
    LeafBudget { arc: f64 },
    #[error("line field not transverse to horizontals (min vertical component {0})")]
    NotTransverse(f64),
    #[error("{context}: {source}")]
    Pipeline { context: String, source: Box<Error> },
    #[error("i/o: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
