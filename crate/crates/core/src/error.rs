use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("unknown item label {0:?}")]
    UnknownLabel(String),
    #[error("empty element in sequence")]
    EmptyElement,
    #[error("item id {0} is not in the dictionary")]
    UnknownItem(u32),
    #[error("malformed sequence text at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sequence count ({sequences}) does not match id count ({ids})")]
    IdCountMismatch { sequences: usize, ids: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MineError {
    #[error("invalid miner config: {0}")]
    InvalidConfig(String),
    #[error("sequence {seq} has {len} elements, above the bitmap lane capacity of {capacity}")]
    CapacityExceeded {
        seq: usize,
        len: usize,
        capacity: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("confidence is undefined for {0}")]
    UndefinedConfidence(String),
}
