use thiserror::Error;

/// Errors raised by the toolkit. Check *failures* are never errors; they are
/// reported through verdicts and reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("index out of bounds: {0}")]
    OutOfBounds(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("graphs are not edge-disjoint: shared edge {0}")]
    NotDisjoint(String),
    #[error("vertex class mismatch: {0}")]
    ClassMismatch(String),
    #[error("partitions are over different ground sets ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("parameter out of contract: {0}")]
    ParameterOutOfContract(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("exhaustive budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("partition does not refine the vertex-class frame: {0}")]
    FrameMismatch(String),
    #[error("triad classes must have equal size, got {0:?}")]
    ClassSizeMismatch([usize; 3]),
    #[error("divisibility violated: {0}")]
    Divisibility(String),
    #[error("invalid 2-partition: {0}")]
    InvalidTwoPartition(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
