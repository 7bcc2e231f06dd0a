use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data (bad index, wrong table length, ...).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// The multiplication cube is not a ternary group.
    #[error("not a ternary group: {0}")]
    NotAGroup(String),

    /// Syntax error in one of the mini-languages. `pos` is a 1-based offset.
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A configured resource limit was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A mathematical contract was violated (non-cycle input, failed
    /// closure convention, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Structurally impossible request (e.g. odd/even split of a group
    /// with a trivial parity map).
    #[error("structural error: {0}")]
    Structural(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
