use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid quiver data: {0}")]
    InvalidSpec(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("label {label:?} out of range: {reason}")]
    Label { label: (u32, u32), reason: String },

    #[error("resource cap exceeded: {what} (cap {cap}), partial results: {partial}")]
    ResourceCap {
        what: String,
        cap: u64,
        partial: u64,
    },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty polynomial")]
    EmptyPolynomial,

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("incoherent grading: {0}")]
    Incoherent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, cap: u64, partial: u64) -> Self {
        Error::ResourceCap {
            what: what.into(),
            cap,
            partial,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
