//! Deterministic proof-labeling schemes: every node gets its own label, reads
//! its neighbors' labels, and decides without randomness. Includes the cycle
//! gluing attack against short labels.

mod glue;
mod schemes;

pub use glue::{glue_attack, FoolingInstance, GlueOutcome, GLUE_BUDGET_BITS, GLUE_WIDTHS};
pub use schemes::{
    id_bits, lcp_leader_scheme, lcp_prove_span, lcp_verify_leader, lcp_verify_leader_with, lcp_verify_span,
    LcpVerdict, LeaderLayout,
};

use crate::gf2core::BitVec;
use crate::graphmodel::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LcpError {
    #[error("no witness: {0}")]
    Witness(String),
    #[error("labeling covers {actual} vertices, expected {expected}")]
    LabelCount { expected: usize, actual: usize },
    #[error("labeling search over 2^{requested} labelings exceeds 2^{limit}")]
    Capacity { requested: u64, limit: u64 },
    #[error("cannot glue: {0}")]
    Generation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One label per vertex. Bit 0 of a label is its most significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<BitVec>,
}

impl Labeling {
    pub fn new(labels: Vec<BitVec>) -> Self {
        Labeling { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &BitVec {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[BitVec] {
        &self.labels
    }

    pub fn set(&mut self, i: usize, label: BitVec) {
        self.labels[i] = label;
    }

    pub fn max_label_bits(&self) -> usize {
        self.labels.iter().map(BitVec::len).max().unwrap_or(0)
    }
}

/// Concatenate `(value, width)` fields, most significant bit first.
pub fn pack_fields(fields: &[(u64, usize)]) -> BitVec {
    let bits: Vec<bool> = fields
        .iter()
        .flat_map(|&(v, w)| (0..w).rev().map(move |k| v >> k & 1 == 1))
        .collect();
    BitVec::from_bits(&bits)
}

/// Inverse of [`pack_fields`]; `None` when the length does not match.
pub fn unpack_fields(label: &BitVec, widths: &[usize]) -> Option<Vec<u64>> {
    if label.len() != widths.iter().sum::<usize>() {
        return None;
    }
    let mut pos = 0;
    Some(
        widths
            .iter()
            .map(|&w| {
                let v = (pos..pos + w).fold(0u64, |acc, k| acc << 1 | u64::from(label.get(k)));
                pos += w;
                v
            })
            .collect(),
    )
}

/// `label i <hex> <bit-length>` per vertex. The hex digits spell the label
/// as a big-endian number.
pub fn write_labeling(labeling: &Labeling) -> String {
    let mut out = String::new();
    for (i, label) in labeling.labels.iter().enumerate() {
        let mut digits = String::new();
        let padded = label.len().div_ceil(4).max(1) * 4;
        let offset = padded - label.len();
        for chunk in 0..padded / 4 {
            let nibble = (0..4).fold(0u32, |acc, k| {
                let pos = chunk * 4 + k;
                acc << 1 | u32::from(pos >= offset && label.get(pos - offset))
            });
            digits.push(char::from_digit(nibble, 16).expect("nibble"));
        }
        out.push_str(&format!("label {i} {digits} {}\n", label.len()));
    }
    out
}

/// Parse the format written by [`write_labeling`]; every vertex of an
/// `n`-vertex graph must appear exactly once.
pub fn parse_labeling(text: &str, n: usize) -> Result<Labeling, LcpError> {
    let mut labels: Vec<Option<BitVec>> = vec![None; n];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| LcpError::Parse { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let [kw, vertex, hex, len] = words[..] else {
            return Err(err(format!("expected `label i <hex> <bits>`, got {content:?}")));
        };
        if kw != "label" {
            return Err(err(format!("unknown directive {kw:?}")));
        }
        let vertex: usize = vertex.parse().map_err(|_| err(format!("bad vertex {vertex:?}")))?;
        let len: usize = len.parse().map_err(|_| err(format!("bad bit length {len:?}")))?;
        if vertex >= n {
            return Err(err(format!("vertex {vertex} out of range for {n} vertices")));
        }
        if labels[vertex].is_some() {
            return Err(err(format!("vertex {vertex} labeled twice")));
        }
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let d = c.to_digit(16).ok_or_else(|| err(format!("bad hex digit {c:?}")))?;
            bits.extend((0..4).rev().map(|k| d >> k & 1 == 1));
        }
        if bits.len() < len {
            return Err(err(format!("{} hex digits cannot hold {len} bits", hex.len())));
        }
        let (head, tail) = bits.split_at(bits.len() - len);
        if head.iter().any(|&b| b) {
            return Err(err(format!("{hex} does not fit in {len} bits")));
        }
        labels[vertex] = Some(BitVec::from_bits(tail));
    }
    let missing = labels.iter().filter(|l| l.is_none()).count();
    if missing > 0 {
        return Err(LcpError::LabelCount {
            expected: n,
            actual: n - missing,
        });
    }
    Ok(Labeling::new(labels.into_iter().map(Option::unwrap).collect()))
}
