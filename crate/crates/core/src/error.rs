use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected: vertex {unreachable} is not reachable from vertex 0")]
    Disconnected { unreachable: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex index {index} out of range for a graph on {num_vertices} vertices")]
    VertexOutOfRange { index: usize, num_vertices: usize },
    #[error("duplicate edge {{{0}, {1}}} (parallel edges are disabled)")]
    DuplicateEdge(usize, usize),
    #[error("no connected simple graph with {n} vertices and {m} edges")]
    InfeasibleRandomGraph { n: usize, m: usize },

    #[error("dense dimension {dim} exceeds the cap of {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigensolver failed: {0}")]
    EigenSolver(String),

    #[error("invalid weight scheme: {0}")]
    InvalidScheme(String),
    #[error("c' is not constant over vertices (min {min}, max {max})")]
    NonConstantCPrime { min: f64, max: f64 },
    #[error("c*c' = 1 is excluded")]
    DegenerateSpectralParameter,
    #[error("setting 1 normalization fails at vertex {vertex}: sum |w|^2 = {sum}")]
    Setting1Normalization { vertex: usize, sum: f64 },
    #[error("setting 2 row sum fails at vertex {vertex}: sum w = {sum}")]
    Setting2RowSum { vertex: usize, sum: f64 },
    #[error("extended detailed balance fails on arc {arc}: {lhs} != {rhs}")]
    DetailedBalance { arc: usize, lhs: f64, rhs: f64 },
    #[error("weights are not reversible: detailed balance fails on non-tree arc {arc}")]
    NonReversible { arc: usize },
    #[error("weights must be real and positive (arc {arc})")]
    NotRealPositive { arc: usize },
    #[error("evolution is not norm preserving (deviation {deviation:e})")]
    NotNormPreserving { deviation: f64 },

    #[error("vector is not an eigenvector of the discriminant (residual {residual:e})")]
    NotEigenvector { residual: f64 },
    #[error("lifted eigenvector is numerically zero")]
    LiftedZero,

    #[error("graph is not regular")]
    NotRegular,
    #[error("girth {girth} is below the required {required}")]
    GirthTooSmall { girth: String, required: usize },
    #[error("heterogeneous quantum graph parameters are not supported: {0}")]
    Heterogeneous(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty range")]
    EmptyRange,
}

pub type Result<T> = std::result::Result<T, Error>;
