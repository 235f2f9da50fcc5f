use thiserror::Error;

/// Errors raised by structural checks across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("block index {index} out of range (system has {blocks} blocks)")]
    BlockIndex { index: usize, blocks: usize },
    #[error("cone must have at least one block")]
    EmptyCone,
    #[error("cone block dimension must be positive")]
    ZeroDimBlock,
    #[error("operation requires an all-orthant (polyhedral) system")]
    NotPolyhedral,
    #[error("operation requires exact rational entries: {0}")]
    NotExact(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("classification is partial; undecided indices {0:?}")]
    Partial(Vec<usize>),
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension {
            context,
            expected,
            found,
        })
    }
}
