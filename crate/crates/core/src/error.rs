use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed complex file: {0}")]
    Parse(String),
    #[error("vertex {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange { vertex: i64, num_vertices: usize },
    #[error("complex has no facets")]
    EmptyFacets,
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("simplices {0} and {1} are not disjoint")]
    NotDisjoint(String, String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("unknown builtin complex `{0}`")]
    UnknownBuiltin(String),
    #[error("unknown system preset `{0}`")]
    UnknownPreset(String),
    #[error("cannot build system: {0}")]
    System(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
