//! Binary proof files.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "DPCP"
//! 4       1     format version (1)
//! 5       1     protocol id
//! 6       2     dim, little-endian
//! 8       2     part count, little-endian
//! 10      ...   parts, each ceil(2^dim / 8) bytes; entry k at byte k/8, bit k mod 8
//! ```
//!
//! Unused high bits in the last byte of a part must be zero.

use super::{MultiProof, ProofTable};

pub const MAGIC: &[u8; 4] = b"DPCP";
pub const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofFormatError {
    #[error("proof file shorter than its {HEADER_LEN}-byte header")]
    TruncatedHeader,
    #[error("bad magic bytes {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("invalid proof shape: dim {dim}, {parts} parts")]
    BadShape { dim: u16, parts: u16 },
    #[error("proof body is {actual} bytes, expected {expected}")]
    BodyLength { expected: usize, actual: usize },
    #[error("nonzero padding bits in part {part}")]
    Padding { part: usize },
}

fn part_bytes(dim: usize) -> usize {
    (1usize << dim).div_ceil(8)
}

/// Serialize `proof` tagged with `protocol_id`.
pub fn encode_proof(proof: &MultiProof, protocol_id: u8) -> Vec<u8> {
    let dim = proof.dim();
    let per = part_bytes(dim);
    let mut out = Vec::with_capacity(HEADER_LEN + per * proof.part_count());
    out.extend_from_slice(MAGIC);
    out.push(FORMAT_VERSION);
    out.push(protocol_id);
    out.extend_from_slice(&(dim as u16).to_le_bytes());
    out.extend_from_slice(&(proof.part_count() as u16).to_le_bytes());
    for table in proof.parts() {
        let bytes: Vec<u8> = table
            .words()
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(per)
            .collect();
        out.extend_from_slice(&bytes);
    }
    out
}

/// Parse a proof file, returning its protocol id and the proof.
pub fn decode_proof(bytes: &[u8]) -> Result<(u8, MultiProof), ProofFormatError> {
    if bytes.len() < HEADER_LEN {
        return Err(ProofFormatError::TruncatedHeader);
    }
    let magic: [u8; 4] = bytes[0..4].try_into().expect("slice of four");
    if &magic != MAGIC {
        return Err(ProofFormatError::BadMagic(magic));
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(ProofFormatError::UnsupportedVersion(bytes[4]));
    }
    let protocol = bytes[5];
    let dim = u16::from_le_bytes([bytes[6], bytes[7]]);
    let parts = u16::from_le_bytes([bytes[8], bytes[9]]);
    if dim == 0 || dim as usize > super::DEFAULT_MAX_DIM || parts == 0 {
        return Err(ProofFormatError::BadShape { dim, parts });
    }
    let dim = dim as usize;
    let per = part_bytes(dim);
    let body = &bytes[HEADER_LEN..];
    let expected = per * parts as usize;
    if body.len() != expected {
        return Err(ProofFormatError::BodyLength {
            expected,
            actual: body.len(),
        });
    }
    let tables = body
        .chunks(per)
        .enumerate()
        .map(|(index, chunk)| {
            if dim < 3 {
                let used = (1u8 << (1 << dim)) - 1;
                if chunk[0] & !used != 0 {
                    return Err(ProofFormatError::Padding { part: index });
                }
            }
            let words = chunk
                .chunks(8)
                .map(|c| {
                    let mut buf = [0u8; 8];
                    buf[..c.len()].copy_from_slice(c);
                    u64::from_le_bytes(buf)
                })
                .collect();
            Ok(ProofTable::from_words(dim, words).expect("sized from the header"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((protocol, MultiProof::new(tables).expect("all parts share dim")))
}
