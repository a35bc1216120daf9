use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u64),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("the unit is not available in a non-unital algebra")]
    UnitInNonUnital,

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("presentation is not confluent up to degree {bound}; unresolved overlaps: {overlaps:?}")]
    NonConfluent { bound: usize, overlaps: Vec<String> },

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("vector length {got} does not match ambient dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    /// A product or subspace needs words of degree `needed` but the window
    /// only covers degree `bound`. `level` carries the exhaustion index when
    /// the overflow happened inside a search.
    #[error("truncation overflow: degree {needed} exceeds window bound {bound}{}", level.map(|n| format!(" at level n = {n}")).unwrap_or_default())]
    TruncationOverflow {
        needed: usize,
        bound: usize,
        level: Option<usize>,
    },

    #[error("subspace is zero")]
    ZeroSubspace,

    #[error("element must be nonzero")]
    ZeroElement,

    #[error("exhaustion level is not spanned by basis words")]
    NonMonomialExhaustion,

    #[error("exhaustion is not nested: level {0} is not contained in level {1}")]
    NotNested(usize, usize),

    #[error("rank functions require a unital algebra")]
    NonUnital,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn overflow(needed: usize, bound: usize) -> Self {
        Error::TruncationOverflow {
            needed,
            bound,
            level: None,
        }
    }

    /// Attach an exhaustion level to a truncation overflow.
    pub fn at_level(self, n: usize) -> Self {
        match self {
            Error::TruncationOverflow { needed, bound, .. } => Error::TruncationOverflow {
                needed,
                bound,
                level: Some(n),
            },
            other => other,
        }
    }

    pub fn is_truncation(&self) -> bool {
        matches!(self, Error::TruncationOverflow { .. })
    }
}
