use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("codeword count {0} is outside 2..=20")]
    CodewordCount(usize),
    #[error("codeword count {m} is not supported here (expected {expected})")]
    UnsupportedCodewordCount { m: usize, expected: &'static str },
    #[error("column index {j} is outside 1..={max} for M = {m}")]
    ColumnIndex { j: u32, m: usize, max: u32 },
    #[error("column {bits:#b} is not a candidate column for M = {m}")]
    NotCandidate { bits: u32, m: usize },
    #[error("message index {index} is outside 1..={m}")]
    MessageIndex { index: usize, m: usize },
    #[error("subset size {size} is outside 2..={m}")]
    SubsetSize { size: usize, m: usize },
    #[error("blocklength {n} is not a multiple of {modulus}")]
    NotMultiple { n: usize, modulus: usize },
    #[error("blocklength {n} is invalid: {reason}")]
    Blocklength { n: usize, reason: &'static str },
    #[error("erasure probability {0} is outside [0, 1)")]
    Delta(f64),
    #[error("Hadamard order {0} is not a power of two >= 4 with at most 20 codewords")]
    HadamardOrder(usize),
    #[error("linear dimension {0} is outside 1..=4")]
    Dimension(usize),
    #[error("oracle enumeration needs n <= {max}, got {n}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("search space of {count} candidates exceeds the limit of {limit}")]
    SearchTooLarge { count: u128, limit: u128 },
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("malformed codebook: {0}")]
    Codebook(String),
    #[error("malformed code file: {0}")]
    Parse(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}
