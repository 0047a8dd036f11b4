use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph6: {message} at byte offset {offset}")]
    Graph6 { offset: usize, message: String },

    #[error("edge list: {message} (token {token})")]
    EdgeList { token: usize, message: String },

    #[error("graph order {0} is outside the supported range 1..=62")]
    OrderOutOfRange(usize),

    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("mixed orders in graph stream: expected {expected}, found {found} at line {line}")]
    MixedOrders {
        expected: usize,
        found: usize,
        line: usize,
    },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
