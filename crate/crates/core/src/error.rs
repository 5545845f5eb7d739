use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed coefficient fields in one computation")]
    FieldMismatch,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("vector is not in the image")]
    NoSolution,
    #[error("shuffle blocks must be nonempty")]
    EmptyBlock,
    #[error("not a shuffle of the stated kind: {0}")]
    NotAShuffle(String),
    #[error("truncation too low: need degree {needed}, have {available}")]
    TruncationTooLow { needed: usize, available: usize },
    #[error("quotient ill-defined: {0}")]
    QuotientIllDefined(String),
    #[error("the L functor needs a single vertex (found {0})")]
    LNeedsSingleVertex(usize),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("cell budget exceeded in degree {degree}: {cells} cells > budget {budget}")]
    BudgetExceeded { degree: usize, cells: u128, budget: u128 },
    #[error("construction bug: {0}")]
    ConstructionBug(String),
    #[error("complex is not backed by a cubical set")]
    NotCubical,
    #[error("source is not an L-set")]
    NotLSet,
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("missing structure: {0}")]
    MissingStructure(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("not a rack morphism: {0}")]
    NotRackMorphism(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid rack: {0}")]
    InvalidRack(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("no isomorphism: {0}")]
    NoIsomorphism(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
