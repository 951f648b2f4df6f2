use thiserror::Error;

/// Errors raised by the numerical layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("eigensolver did not converge ({fingerprint})")]
    EigenNonConvergence { fingerprint: String },

    #[error("function is not finite at eigenvalue {eigenvalue}")]
    FunctionUndefined { eigenvalue: f64 },

    #[error("shift {shift} too small: minimum of spectrum is {min_spectrum}")]
    ShiftTooSmall { shift: f64, min_spectrum: f64 },

    #[error("parameter `{name}` out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("weight undefined on [{lo}, {hi}]")]
    WeightUndefined { lo: f64, hi: f64 },

    #[error("quadrature did not converge: last estimates {previous} and {last}")]
    QuadratureNonConvergence { previous: f64, last: f64 },

    #[error("numerical inconsistency: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the numerical machinery itself (eigensolver,
    /// quadrature, consistency checks) as opposed to bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenNonConvergence { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::Numerical(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
