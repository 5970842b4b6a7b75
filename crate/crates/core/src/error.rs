use alloc::string::String;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Malformed text input.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A label or index outside its valid range.
    #[error("index out of range: {0}")]
    Index(String),
    /// Data that contradicts itself or the unit and duality constraints.
    #[error("inconsistent declaration: {0}")]
    Inconsistent(String),
    /// An unknown built-in or census name.
    #[error("unknown name: {0}")]
    UnknownName(String),
    /// Parameters outside the accepted range of a constructor.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// Domain/codomain or basis mismatch between operands.
    #[error("mismatch: {0}")]
    Mismatch(String),
    /// A trace was requested of a non-endomorphism.
    #[error("trace of a non-endomorphism")]
    NotEndomorphism,
    /// A gluing table that is not an involution.
    #[error("non-involutive gluing: {0}")]
    NonInvolutive(String),
    /// A tetrahedron face without a partner.
    #[error("unglued face: tetrahedron {tet}, face {face}")]
    UngluedFace { tet: usize, face: usize },
    /// Gluings that cannot be oriented consistently.
    #[error("non-orientable triangulation")]
    NonOrientable,
    /// A Pachner move whose preconditions fail.
    #[error("inapplicable move: {0}")]
    InapplicableMove(String),
    /// A coloring that violates face admissibility.
    #[error("inadmissible coloring")]
    Inadmissible,
    /// Eigenspaces too close to separate numerically.
    #[error("decomposition failure: {0}")]
    Decomposition(String),
    /// Input outside the supported class of categories.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Modular data failing its structural checks.
    #[error("invalid modular data: {0}")]
    InvalidModularData(String),
}

/// Result alias for the core library.
pub type Result<T> = core::result::Result<T, Error>;
