use thiserror::Error;

pub type Result<T, E = KhError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KhError {
    #[error("braid parse error: {0}")]
    BraidParse(String),

    #[error("PD parse error on line {line}: {reason}")]
    PdParse { line: usize, reason: String },

    #[error("arc {arc} appears {count} time(s); every arc must appear exactly twice")]
    ArcMultiplicity { arc: i64, count: usize },

    #[error("operation requires a positive braid word, found a negative letter at position {position}")]
    NotPositive { position: usize },

    #[error("state vector has length {found}, diagram has {expected} crossings")]
    LengthMismatch { expected: usize, found: usize },

    #[error("crossing index {index} is out of range for {crossings} crossings")]
    FlipOutOfRange { index: usize, crossings: usize },

    #[error("coordinate {index} of the state is already 1")]
    FlipNotZero { index: usize },

    #[error("edge vector must contain exactly one '*', found {found}")]
    MalformedEdge { found: usize },

    #[error("crossing {crossing} neither merges nor splits circles; the diagram is not planar")]
    NonPlanar { crossing: usize },

    #[error("labeled state does not live on the source of the edge")]
    StateEdgeMismatch,

    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    CapExceeded { crossings: usize, cap: usize },

    #[error("resolution has {circles} circles, above the supported maximum of {max}")]
    TooManyCircles { circles: usize, max: usize },

    #[error("differentials do not compose to zero: {0}")]
    NotAComplex(String),

    #[error("torsion coefficient {0} does not fit in 64 bits")]
    TorsionOverflow(String),
}

impl KhError {
    /// True for errors that come from resource limits rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, KhError::CapExceeded { .. } | KhError::TooManyCircles { .. } | KhError::TorsionOverflow(_))
    }
}
