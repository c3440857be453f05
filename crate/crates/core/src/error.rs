use thiserror::Error;

/// Errors raised by the library.
///
/// Parse and format diagnostics carry a 1-based line number (or a byte
/// offset for expressions) so the CLI can point at the offending input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid value `{0}` (expected a non-negative integer or `inf`)")]
    InvalidValue(String),

    #[error("k must be at least 2, got {0}")]
    InvalidK(u32),

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unbound variable `{0}`")]
    Unbound(String),

    #[error("term shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("enumeration domain too large: {tuples} tuples exceeds cap {cap}")]
    DomainTooLarge { tuples: u128, cap: u128 },

    #[error("reference constant {value} out of range 0..={max}")]
    RefConstRange { value: u32, max: u32 },

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("invalid netlist:\n{0}")]
    Netlist(String),

    #[error("invalid trace: {0}")]
    Trace(String),

    #[error("invalid system config: {0}")]
    Config(String),

    #[error("volley violation: line `{line}` spiked more than once in cycle {cycle}")]
    VolleyViolation { line: String, cycle: usize },

    #[error("jitter magnitude {0} must be strictly below 0.5")]
    JitterTooLarge(f64),

    #[error("arity mismatch: {0}")]
    Arity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
