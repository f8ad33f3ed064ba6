use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate. Variant names follow the operation
/// contracts; each carries enough context to point at the offending input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("color {color} out of range 1..={rank}")]
    ColorOutOfRange { color: usize, rank: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("paths are not composable: source `{0}` != range `{1}`")]
    NotComposable(String, String),
    #[error("degree {requested:?} exceeds path degree {actual:?}")]
    DegreeOutOfRange { requested: Vec<u32>, actual: Vec<u32> },
    #[error("range mismatch: expected vertex `{expected}`, got `{got}`")]
    RangeMismatch { expected: String, got: String },
    #[error("source mismatch: `{0}` vs `{1}`")]
    SourceMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a member: {0}")]
    NotMember(String),
    #[error("phase matrix is not skew-symmetric at ({0},{1})")]
    NotSkewSymmetric(usize, usize),
    #[error("elements belong to different graphs or cocycles: {0}")]
    GraphMismatch(String),
    #[error("margin {margin:?} too large for cutoff {cutoff:?}")]
    MarginTooLarge { margin: Vec<u32>, cutoff: Vec<u32> },
    #[error("set is not closed under the mixed-extension rule: missing {0}")]
    NotPiClosed(String),
    #[error("set at vertex `{0}` is not exhaustive (counterexample path `{1}`)")]
    NotExhaustive(String, String),
    #[error("set contains its range vertex `{0}`")]
    ContainsVertex(String),
    #[error("degree {degree:?} exceeds the bounded universe {bound:?}")]
    OutOfUniverse { degree: Vec<u32>, bound: Vec<u32> },
    #[error("vertex set is not hereditary: edge `{0}` leaves it")]
    NotHereditary(String),
    #[error("vertex set is not saturated at vertex `{0}`")]
    NotSaturated(String),
    #[error("vertex `{0}` is not in the periodicity vertex set")]
    VertexNotInHPer(String),
    #[error("cutoff too small: need at least {needed:?}, have {have:?}")]
    CutoffTooSmall { needed: Vec<u32>, have: Vec<u32> },
    #[error("unsupported graph class: {0}")]
    UnsupportedGraphClass(String),
    #[error("parse error: {0}")]
    Parse(String),
}
