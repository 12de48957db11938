use thiserror::Error;

use crate::spectral::Representation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("representation mismatch: expected {expected:?}, found {found:?}")]
    RepresentationMismatch {
        expected: Representation,
        found: Representation,
    },

    #[error("grids of the two fields differ")]
    GridMismatch,

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("homogeneous Sobolev norm with s = {s} is singular: zero mode is {zero_mode:e}")]
    SingularHomogeneous { s: f64, zero_mode: f64 },

    #[error("under-resolved kernel: multiplier at |xi|_max is {multiplier:e} (needs < 1e-14)")]
    UnderResolvedKernel { multiplier: f64 },

    #[error("kernel has imaginary residue {residue:e} relative to its peak")]
    ComplexKernel { residue: f64 },

    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),

    #[error("degenerate sweep: {0}")]
    DegenerateSweep(String),

    #[error("non-finite state (blow-up) at t = {time}")]
    BlowUp { time: f64 },

    #[error(
        "Picard iteration failed to contract on segment starting at t = {start} \
         (length {length}, {iterations} iterations, last residual {residual:e}, ratio {ratio})"
    )]
    NonContraction {
        start: f64,
        length: f64,
        iterations: usize,
        residual: f64,
        ratio: f64,
    },

    #[error("snapshot schedules differ")]
    ScheduleMismatch,

    #[error("solve failed for alpha = {alpha}: {source}")]
    MemberFailed {
        alpha: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
