//! GF(2) vectors, Hadamard truth tables, and query-counted oracle access
//! with BLR linearity testing and self-correction.

mod analysis;
mod bitvec;
mod format;
mod oracle;
mod table;

pub use analysis::{
    blr_pass_probability, distance_to_nearest_linear, exact_rejection_probability,
    exact_rejection_probability_with_budget, self_corrected_one_probability, LocalTest,
    DEFAULT_ENUMERATION_BUDGET,
};
pub(crate) use analysis::{fwht, self_corrected_ones_all};
pub use bitvec::{inner_product, BitVec};
pub use format::{decode_proof, encode_proof, ProofFormatError, FORMAT_VERSION, MAGIC};
pub use oracle::{puncture, OracleSession, QueryRecord};
pub use table::{hadamard_encode, hadamard_encode_with_limit, MultiProof, ProofTable, DEFAULT_MAX_DIM};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{what} of {requested} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error("part {part} does not exist (proof has {parts} parts)")]
    InvalidPart { part: usize, parts: usize },
    #[error("table length {len} is not a power of two of at least 2")]
    TableLength { len: usize },
    #[error("tables must have positive dimension")]
    ZeroDimension,
    #[error("a proof needs at least one part")]
    NoParts,
    #[error("coin script of {len} bits exhausted")]
    ScriptExhausted { len: u32 },
    #[error("{0}")]
    Parse(String),
}
