use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected: vertex {reachable} cannot reach vertex {unreachable}")]
    Disconnected { reachable: usize, unreachable: usize },

    #[error("graph is not a tree (order {order}, {edges} edges)")]
    NotATree { order: usize, edges: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("{{{u},{v}}} is not an edge")]
    NotAnEdge { u: usize, v: usize },

    #[error("{{{u},{v}}} is not a cut edge")]
    NotCutEdge { u: usize, v: usize },

    #[error("invalid branch decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid pendant paths: {0}")]
    InvalidPendantPath(String),

    #[error("vector length {got} does not match graph order {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("rotation eigensolver did not converge: off-diagonal norm {off_norm:e} after {sweeps} sweeps")]
    OracleNoConvergence { off_norm: f64, sweeps: usize },

    #[error("order {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
