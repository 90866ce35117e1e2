use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant maps to a stable string code (see [`Error::code`]) so that
/// front ends can emit machine-readable diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point y = {0} lies outside (-1, 1)")]
    Domain(f64),

    #[error("invalid majorant: {0}")]
    InvalidMajorant(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no start index N <= {cap} satisfies the displacement budget (scaled tail sum never drops below {budget})")]
    Divergent { cap: u64, budget: f64 },

    #[error("wild-set density threshold c = {c} is not below 4^-{dimension} = {limit}")]
    WeakCertificate { c: f64, dimension: u32, limit: f64 },

    #[error("majorant is not symmetric and nonincreasing on (0, 1)")]
    NotSymmetricMonotone,

    #[error("radius schedule did not reach the target within {0} steps")]
    ScheduleTooLong(usize),

    #[error("Dirichlet solver did not converge in {cycles} cycles (residual {residual:e}, tolerance {tolerance:e})")]
    NonConvergence {
        cycles: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("ball centered at ({x}, {y}) with radius {radius} leaves the square [-1, 1]^2")]
    Geometry { x: f64, y: f64, radius: f64 },

    #[error("degenerate samples: {0}")]
    Degenerate(String),
}

impl Error {
    /// Stable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain-error",
            Error::InvalidMajorant(_) => "invalid-majorant",
            Error::InvalidCertificate(_) => "invalid-certificate",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Divergent { .. } => "divergent-majorant",
            Error::WeakCertificate { .. } => "weak-certificate",
            Error::NotSymmetricMonotone => "monotonicity-failure",
            Error::ScheduleTooLong(_) => "schedule-too-long",
            Error::NonConvergence { .. } => "nonconvergence",
            Error::Geometry { .. } => "geometry-error",
            Error::Degenerate(_) => "degenerate-samples",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
