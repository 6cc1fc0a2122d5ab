use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex order is not a permutation of the vertex set: {0}")]
    InvalidOrder(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("vertex `{0}` lies on a loop or a 2-cycle; FZ mutation does not apply there, use mutate-covered with a cover preset")]
    LoopOrTwoCycle(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid cycle spec: {0}")]
    InvalidCycleSpec(String),
    #[error("could not decide the C/B index of arrow `{0}` by rewriting within the length bound; supply the cycle spec manually")]
    UndecidableAnnotation(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("quiver is not invariant under the deck action: {0}")]
    NotDeckInvariant(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("invalid catalog parameters: {0}")]
    InvalidCatalog(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that reject a mutation request on structural grounds
    /// (loops, 2-cycles, unsupported fibers) rather than malformed input.
    pub fn is_unsupported_mutation(&self) -> bool {
        matches!(self, Error::LoopOrTwoCycle(_) | Error::Unsupported(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
