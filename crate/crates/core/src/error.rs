use thiserror::Error;

/// Errors raised by the algebra kernels and the deciders built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("{0}: input is zero")]
    ZeroInput(&'static str),

    #[error("series is not a unit (constant term vanishes)")]
    NonUnit,

    #[error("linear change of coordinates is singular")]
    SingularMatrix,

    #[error("germ is not regular in `{var}`")]
    NotRegular { var: String },

    #[error("degree-0 input has no discriminant")]
    DegreeZero,

    #[error("precision exhausted at {precision} while deciding {quantity}")]
    PrecisionExhausted { quantity: String, precision: u32 },

    #[error("no admissible coordinate change after {trials} trials ({failures})")]
    TrialsExhausted { trials: u32, failures: String },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("singularity is not isolated: {0}")]
    NonIsolated(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Resource exhaustion (as opposed to bad input).
    pub fn is_exhaustion(&self) -> bool {
        matches!(self, Error::PrecisionExhausted { .. } | Error::TrialsExhausted { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
