use super::{BitVec, Gf2Error};

/// Largest dimension accepted by [`hadamard_encode`] unless a caller asks for more.
pub const DEFAULT_MAX_DIM: usize = 20;

/// Hard ceiling for any table; `2^MAX_SUPPORTED_DIM` entries are still addressable.
const MAX_SUPPORTED_DIM: usize = 30;

/// A truth table of `2^dim` bits.
///
/// Entry `k` is the claimed value of the encoded function at the point whose
/// vertex-`j` coordinate is bit `j` of `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProofTable {
    dim: usize,
    words: Vec<u64>,
}

impl ProofTable {
    pub fn zeros(dim: usize) -> Result<Self, Gf2Error> {
        check_dim(dim, MAX_SUPPORTED_DIM)?;
        Ok(ProofTable {
            dim,
            words: vec![0; (1usize << dim).div_ceil(64)],
        })
    }

    pub fn constant(dim: usize, value: bool) -> Result<Self, Gf2Error> {
        let mut t = Self::zeros(dim)?;
        if value {
            for k in 0..t.len() {
                t.set(k, true);
            }
        }
        Ok(t)
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize) -> bool) -> Result<Self, Gf2Error> {
        let mut t = Self::zeros(dim)?;
        for k in 0..t.len() {
            if f(k) {
                t.set(k, true);
            }
        }
        Ok(t)
    }

    /// Build from explicit entries; `bits.len()` must be a power of two.
    pub fn from_bits(bits: &[bool]) -> Result<Self, Gf2Error> {
        if !bits.len().is_power_of_two() || bits.len() < 2 {
            return Err(Gf2Error::TableLength { len: bits.len() });
        }
        let dim = bits.len().trailing_zeros() as usize;
        Self::from_fn(dim, |k| bits[k])
    }

    /// The `n = 2^dim` table whose entries are the low bits of `code` (entry `k` = bit `k`).
    pub fn from_code(dim: usize, code: u64) -> Result<Self, Gf2Error> {
        if dim > 6 {
            return Err(Gf2Error::Capacity {
                what: "table code",
                requested: 1u64 << dim.min(63),
                limit: 64,
            });
        }
        Self::from_fn(dim, |k| (code >> k) & 1 == 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of entries, `2^dim`.
    pub fn len(&self) -> usize {
        1 << self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, k: usize) -> bool {
        debug_assert!(k < self.len());
        (self.words[k >> 6] >> (k & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, k: usize, value: bool) {
        assert!(k < self.len(), "table index {k} out of range");
        let mask = 1u64 << (k & 63);
        if value {
            self.words[k >> 6] |= mask;
        } else {
            self.words[k >> 6] &= !mask;
        }
    }

    pub fn flip(&mut self, k: usize) {
        let b = self.get(k);
        self.set(k, !b);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |k| self.get(k))
    }

    /// Number of entries equal to one.
    pub fn ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when `table(x) ⊕ table(y) = table(x ⊕ y)` for all `x, y`.
    pub fn is_linear(&self) -> bool {
        if self.get(0) {
            return false;
        }
        // A table with f(0) = 0 is linear iff it agrees with the functional
        // read off the basis vectors.
        let mask = (0..self.dim)
            .filter(|&j| self.get(1 << j))
            .fold(0usize, |m, j| m | (1 << j));
        (0..self.len()).all(|k| self.get(k) == parity(k & mask))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(dim: usize, words: Vec<u64>) -> Result<Self, Gf2Error> {
        check_dim(dim, MAX_SUPPORTED_DIM)?;
        let expected = (1usize << dim).div_ceil(64);
        if words.len() != expected {
            return Err(Gf2Error::TableLength {
                len: words.len() * 64,
            });
        }
        let mut t = ProofTable { dim, words };
        if dim < 6 {
            t.words[0] &= (1u64 << (1 << dim)) - 1;
        }
        Ok(t)
    }
}

impl std::fmt::Debug for ProofTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.dim <= 6 {
            let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
            write!(f, "ProofTable[{s}]")
        } else {
            write!(f, "ProofTable(dim={}, ones={})", self.dim, self.ones())
        }
    }
}

#[inline]
pub(crate) fn parity(x: usize) -> bool {
    x.count_ones() & 1 == 1
}

fn check_dim(dim: usize, limit: usize) -> Result<(), Gf2Error> {
    if dim == 0 {
        return Err(Gf2Error::ZeroDimension);
    }
    if dim > limit {
        return Err(Gf2Error::Capacity {
            what: "table dimension",
            requested: dim as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

/// `Had(α)`: the truth table of `v ↦ α·v`, for `α.len() ≤ DEFAULT_MAX_DIM`.
pub fn hadamard_encode(alpha: &BitVec) -> Result<ProofTable, Gf2Error> {
    hadamard_encode_with_limit(alpha, DEFAULT_MAX_DIM)
}

pub fn hadamard_encode_with_limit(alpha: &BitVec, max_dim: usize) -> Result<ProofTable, Gf2Error> {
    check_dim(alpha.len(), max_dim.min(MAX_SUPPORTED_DIM))?;
    let mask = alpha.to_index().expect("dimension already bounded");
    ProofTable::from_fn(alpha.len(), |k| parity(k & mask))
}

/// An ordered list of tables sharing one dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiProof {
    dim: usize,
    parts: Vec<ProofTable>,
}

impl MultiProof {
    pub fn new(parts: Vec<ProofTable>) -> Result<Self, Gf2Error> {
        let dim = parts.first().ok_or(Gf2Error::NoParts)?.dim();
        if let Some(bad) = parts.iter().find(|p| p.dim() != dim) {
            return Err(Gf2Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        Ok(MultiProof { dim, parts })
    }

    pub fn single(table: ProofTable) -> Self {
        MultiProof {
            dim: table.dim(),
            parts: vec![table],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, index: usize) -> Result<&ProofTable, Gf2Error> {
        self.parts.get(index).ok_or(Gf2Error::InvalidPart {
            part: index,
            parts: self.parts.len(),
        })
    }

    pub fn parts(&self) -> &[ProofTable] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<ProofTable> {
        self.parts
    }

    /// Proof length in bits: parts × 2^dim.
    pub fn total_bits(&self) -> u64 {
        self.parts.len() as u64 * (1u64 << self.dim)
    }

    /// Bit `g` of the serialized proof: part `g / 2^dim`, entry `g mod 2^dim`.
    pub fn flat_get(&self, g: u64) -> bool {
        let per = 1u64 << self.dim;
        self.parts[(g / per) as usize].get((g % per) as usize)
    }

    pub fn flat_flip(&mut self, g: u64) {
        let per = 1u64 << self.dim;
        self.parts[(g / per) as usize].flip((g % per) as usize);
    }

    /// A proof of `parts` tables of dimension `dim` whose flat bit `g` is `f(g)`.
    pub fn from_flat_fn(dim: usize, parts: usize, f: impl Fn(u64) -> bool) -> Result<Self, Gf2Error> {
        if parts == 0 {
            return Err(Gf2Error::NoParts);
        }
        let per = 1u64 << dim;
        let tables = (0..parts as u64)
            .map(|p| ProofTable::from_fn(dim, |k| f(p * per + k as u64)))
            .collect::<Result<Vec<_>, _>>()?;
        MultiProof::new(tables)
    }
}

impl std::fmt::Debug for MultiProof {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.parts).finish()
    }
}
