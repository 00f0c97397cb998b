use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size pair has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("vertex value for {id:?} is not finite")]
    NonFiniteValue { id: String },
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {0:?}-{1:?}")]
    DuplicateEdge(String, String),
    #[error("point ({x}, {y}) is not above the diagonal")]
    OutsideHalfPlane { x: f64, y: f64 },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("vertex map is not a graph isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("graphs are not isomorphic")]
    NonIsomorphic,
    #[error("perturbation exceeds bound: {found} > {bound}")]
    PerturbationTooLarge { found: f64, bound: f64 },
    #[error("instance size {size} exceeds cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("degenerate square: center ({x}, {y}), radius {eta}")]
    DegenerateSquare { x: f64, y: f64, eta: f64 },
    #[error("realization failed: {0}")]
    Realization(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
