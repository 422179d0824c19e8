use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse error category, stable across versions (the CLI maps it to exit codes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    Compatibility,
    Degeneracy,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("degenerate curve at t = {t}: |γ'(t)| = {speed:e}")]
    DegenerateCurve { t: f64, speed: f64 },

    #[error("point ({x}, {y}) is within {distance:e} of the boundary (band {band:e}); use boundary traces instead")]
    NearBoundary { x: f64, y: f64, distance: f64, band: f64 },

    #[error("point ({x}, {y}) lies on the wrong side of the boundary for this solution")]
    WrongSide { x: f64, y: f64 },

    #[error("incompatible right-hand side: {functional} = {residual:e} (relative {relative:e})")]
    Incompatible {
        functional: String,
        residual: f64,
        relative: f64,
    },

    #[error("bordered system is singular: {0}")]
    Rank(String),

    #[error("numerical null space of {operator} has dimension {found}, expected {expected} (try a larger N)")]
    DegenerateDiscretization {
        operator: String,
        expected: usize,
        found: usize,
    },

    #[error("degenerate null-space basis: {0}")]
    DegenerateBasis(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("family degeneracy at λ = {lambda}: ρ({t}) = {rho:e} is not positive; reduce the λ range or the profile scales")]
    FamilyDegeneracy { lambda: f64, t: f64, rho: f64 },

    #[error("critical point: R'(1) = {0:e}")]
    CriticalPoint(f64),

    #[error("spec error: {0}")]
    Spec(String),

    #[error("expression error: {0}")]
    Expression(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_)
            | Error::Geometry(_)
            | Error::DegenerateCurve { .. }
            | Error::NearBoundary { .. }
            | Error::WrongSide { .. }
            | Error::UnsupportedTopology(_)
            | Error::Spec(_)
            | Error::Expression(_) => ErrorKind::Input,
            Error::Incompatible { .. } => ErrorKind::Compatibility,
            Error::FamilyDegeneracy { .. } => ErrorKind::Degeneracy,
            Error::Rank(_)
            | Error::DegenerateDiscretization { .. }
            | Error::DegenerateBasis(_)
            | Error::CriticalPoint(_) => ErrorKind::Numerical,
        }
    }
}

pub(crate) fn arg(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
