use thiserror::Error;

/// Errors raised by graph construction, the eigensolvers and the procedures
/// built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph must have at least one node")]
    EmptyNodeSet,

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("edge ({i},{j}) has non-positive or non-finite weight {weight}")]
    NonPositiveWeight { i: usize, j: usize, weight: f64 },

    #[error("duplicate edge ({i},{j})")]
    DuplicateEdge { i: usize, j: usize },

    #[error("node index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("no edge ({i},{j}) in graph")]
    NoSuchEdge { i: usize, j: usize },

    #[error("tau = {0} outside (0, 1]")]
    TauOutOfRange(f64),

    #[error("node {0} has degree zero")]
    IsolatedNode(usize),

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("eigensolver did not converge after {iterations} restarts (residual {residual:.3e})")]
    SolverNoConvergence { iterations: usize, residual: f64 },

    #[error("Fiedler value is not simple (alpha3 - alpha2 = {gap:.3e})")]
    FiedlerNotSimple { gap: f64 },

    #[error("matrix of order {order} exceeds the dense limit {limit}")]
    TooLargeForDense { order: usize, limit: usize },

    #[error("eigenvalue gap {0:.3e} is not positive")]
    ZeroGap(f64),

    #[error("vector norm {0} is not 1")]
    NotUnitNorm(f64),

    #[error("eigenpair is not the Perron pair of this graph")]
    NotPerronPair,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("median {median} is shared by more than half of the entries")]
    DegenerateMedian { median: f64 },

    #[error("edge ({i},{j}) has non-integer weight {weight}")]
    NonIntegerWeights { i: usize, j: usize, weight: f64 },

    #[error("spectra have different orders ({0} vs {1})")]
    OrderMismatch(usize, usize),

    #[error("invalid multiplex: {0}")]
    InvalidMultiplex(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported MatrixMarket header: {0}")]
    UnsupportedHeader(String),

    #[error("general MatrixMarket matrix is not symmetric at ({i},{j})")]
    AsymmetricGeneralMatrix { i: usize, j: usize },

    #[error("line {line}: diagonal entry ({index},{index})")]
    DiagonalEntry { line: usize, index: usize },

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// True for failures of the numerics (no convergence, a required
    /// eigenvalue that is not simple) as opposed to bad input data.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::SolverNoConvergence { .. }
            | Error::FiedlerNotSimple { .. }
            | Error::ZeroGap(_)
            | Error::TooLargeForDense { .. } => true,
            Error::AtLine { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Error {
        match self {
            e @ (Error::Parse { .. } | Error::AtLine { .. } | Error::DiagonalEntry { .. }) => e,
            e => Error::AtLine {
                line,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
