use std::fmt;
use std::str::FromStr;

use super::Gf2Error;

/// A fixed-length vector over GF(2). Coordinate `j` belongs to vertex `j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// The all-ones vector.
    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// The basis vector `e_i`.
    pub fn basis(len: usize, i: usize) -> Result<Self, Gf2Error> {
        if i >= len {
            return Err(Gf2Error::IndexOutOfRange { index: i, len });
        }
        let mut v = Self::zeros(len);
        v.set(i, true);
        Ok(v)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Indicator vector of `members`.
    pub fn indicator(len: usize, members: &[usize]) -> Result<Self, Gf2Error> {
        let mut v = Self::zeros(len);
        for &m in members {
            if m >= len {
                return Err(Gf2Error::IndexOutOfRange { index: m, len });
            }
            v.set(m, true);
        }
        Ok(v)
    }

    /// Build from the low `len` bits of `index`; bit `j` of `index` becomes coordinate `j`.
    pub fn from_index(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        for j in 0..len.min(usize::BITS as usize) {
            v.set(j, (index >> j) & 1 == 1);
        }
        v
    }

    /// The truth-table index of this point, or `None` when it does not fit a `usize`.
    pub fn to_index(&self) -> Option<usize> {
        if self.len >= usize::BITS as usize {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0) as usize)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Coordinates holding a one, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    fn check_len(&self, other: &BitVec) -> Result<(), Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::DimensionMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    /// Coordinate-wise sum over GF(2).
    pub fn xor(&self, other: &BitVec) -> Result<BitVec, Gf2Error> {
        self.check_len(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitVec {
            len: self.len,
            words,
        })
    }

    pub fn xor_assign(&mut self, other: &BitVec) -> Result<(), Gf2Error> {
        self.check_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }
}

/// `⊕_j a_j·b_j`.
pub fn inner_product(a: &BitVec, b: &BitVec) -> Result<bool, Gf2Error> {
    a.check_len(b)?;
    let ones: u32 = a
        .words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x & y).count_ones())
        .sum();
    Ok(ones & 1 == 1)
}

impl fmt::Display for BitVec {
    /// Coordinate 0 first, e.g. `e_0` of length 3 prints as `100`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Gf2Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitVec::from_bits(&bits))
    }
}
