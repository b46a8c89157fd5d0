use alloc::string::String;

/// Errors raised by the circuit, semantics, learning and data layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A sequential composition whose interface widths disagree.
    #[error(
        "type mismatch in `{subterm}`: left side has {left_outputs} outputs, right side has {right_inputs} inputs"
    )]
    TypeMismatch {
        subterm: String,
        left_outputs: usize,
        right_inputs: usize,
    },

    #[error("width mismatch: expected {expected} bits, got {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: String, right: String },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{what} would need {requested}, limit is {limit}")]
    LimitExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("value {value} outside [{min}, {max}]")]
    Range { value: f64, min: f64, max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
