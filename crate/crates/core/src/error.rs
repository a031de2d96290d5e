use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("({m}, {n}) is not a coprime pair")]
    NotCoprime { m: i64, n: i64 },

    #[error("angle is magic: coincides with alpha_({m},{n})")]
    AngleIsMagic { m: i64, n: i64 },

    #[error("continued fraction ran out of floating-point precision after {found} convergents")]
    PrecisionExhausted { found: usize },

    #[error("commensurate collision: integer relation with residual {residual:e}")]
    CommensurateCollision { residual: f64 },

    #[error("approximant violates its bounds: {0}")]
    ApproximantBounds(String),

    #[error("not periodic: mismatch {mismatch:e} along axis {axis}")]
    NotPeriodic { axis: usize, mismatch: f64 },

    #[error("non-monotone classification near level {level}")]
    NonMonotone { level: f64 },

    #[error("interval not degenerate: width {width:e} exceeds {limit:e}")]
    IntervalNotDegenerate { width: f64, limit: f64 },

    #[error("potential lacks the required rotational symmetry (mismatch {mismatch:e})")]
    NotSymmetric { mismatch: f64 },

    #[error("brackets do not overlap at approximant {index}")]
    BracketsDisjoint { index: usize },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    /// True for failures caused by limited grid resolution or floating-point
    /// precision rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonMonotone { .. }
                | Error::IntervalNotDegenerate { .. }
                | Error::PrecisionExhausted { .. }
                | Error::BracketsDisjoint { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
