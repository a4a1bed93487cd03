use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field width m={0} is outside the supported range 1..=16")]
    UnsupportedWidth(u32),

    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {m}")]
    ReducibleModulus { m: u32, modulus: u32 },

    #[error("value {value} does not fit in {m} bits")]
    ElementOutOfRange { value: u64, m: u32 },

    #[error("key index {key} out of range (key space has {size} keys)")]
    KeyOutOfRange { key: u64, size: u64 },

    #[error("message {msg} out of range (message space has {size} messages)")]
    MessageOutOfRange { msg: u64, size: u64 },

    #[error(
        "exact enumeration needs {needed} cells but the budget is {budget}; \
         request sampling mode explicitly or raise the budget"
    )]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid family descriptor `{desc}`: {reason}")]
    Descriptor { desc: String, reason: String },

    #[error("invalid table family: {0}")]
    Table(String),

    #[error("key stream exhausted after {0} pads")]
    PadsExhausted(usize),

    #[error("outcome schemas differ: {0}")]
    SchemaMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDist(String),

    #[error(
        "family is not 1/|T|-almost XOR universal (measured epsilon {measured}, need {required})"
    )]
    NotTightAxu { measured: String, required: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
