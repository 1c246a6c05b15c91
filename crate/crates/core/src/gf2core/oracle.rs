use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BitVec, Gf2Error, MultiProof};
use crate::seed;

/// Where a session's random bits come from.
#[derive(Clone, Debug)]
enum CoinSource {
    /// Each draw gets its own ChaCha8 stream keyed by the session seed and the draw tag.
    Seeded(u64),
    /// Bits are consumed in order from a fixed script; used to enumerate coin spaces.
    Scripted { coins: u128, len: u32, pos: u32 },
}

/// Identifies one random draw so that it stays fixed when unrelated draws change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DrawTag {
    Blr { part: usize, rep: u32, second: bool },
    Correction { ordinal: u32 },
}

impl DrawTag {
    fn key(self) -> u64 {
        match self {
            DrawTag::Blr { part, rep, second } => {
                (1u64 << 62) | ((part as u64) << 33) | (u64::from(rep) << 1) | u64::from(second)
            }
            DrawTag::Correction { ordinal } => (2u64 << 62) | u64::from(ordinal),
        }
    }
}

/// One table lookup made through a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub part: usize,
    pub index: usize,
    pub value: bool,
}

/// Query-counted access to a committed proof.
///
/// Every table lookup increments [`query_count`](Self::query_count) by one and
/// every random bit drawn increments [`random_bits_used`](Self::random_bits_used)
/// by one. A session is deterministic given its proof and seed.
#[derive(Clone, Debug)]
pub struct OracleSession<'a> {
    proof: &'a MultiProof,
    coins: CoinSource,
    query_count: u64,
    random_bits_used: u64,
    blr_draws: Vec<u32>,
    corrections: u32,
    transcript: Option<Vec<QueryRecord>>,
}

impl<'a> OracleSession<'a> {
    pub fn new(proof: &'a MultiProof, seed: u64) -> Self {
        Self::with_source(proof, CoinSource::Seeded(seed))
    }

    /// A session whose coins are the low `len` bits of `coins`, consumed from bit 0 upward.
    pub fn scripted(proof: &'a MultiProof, coins: u128, len: u32) -> Self {
        assert!(len <= 128, "coin script longer than 128 bits");
        Self::with_source(proof, CoinSource::Scripted { coins, len, pos: 0 })
    }

    fn with_source(proof: &'a MultiProof, coins: CoinSource) -> Self {
        OracleSession {
            proof,
            coins,
            query_count: 0,
            random_bits_used: 0,
            blr_draws: vec![0; proof.part_count()],
            corrections: 0,
            transcript: None,
        }
    }

    /// Record every lookup for later inspection.
    pub fn with_transcript(mut self) -> Self {
        self.transcript = Some(Vec::new());
        self
    }

    pub fn transcript(&self) -> Option<&[QueryRecord]> {
        self.transcript.as_deref()
    }

    pub fn proof(&self) -> &MultiProof {
        self.proof
    }

    pub fn dim(&self) -> usize {
        self.proof.dim()
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    pub fn random_bits_used(&self) -> u64 {
        self.random_bits_used
    }

    /// Look up entry `index` of part `part`.
    pub fn query(&mut self, part: usize, index: usize) -> Result<bool, Gf2Error> {
        let table = self.proof.part(part)?;
        if index >= table.len() {
            return Err(Gf2Error::IndexOutOfRange {
                index,
                len: table.len(),
            });
        }
        let value = table.get(index);
        self.query_count += 1;
        if let Some(log) = &mut self.transcript {
            log.push(QueryRecord { part, index, value });
        }
        Ok(value)
    }

    fn random_point(&mut self, tag: DrawTag) -> Result<usize, Gf2Error> {
        let n = self.dim();
        let point = match &mut self.coins {
            CoinSource::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed::split(*seed, tag.key()));
                (rng.next_u64() & ((1u64 << n) - 1)) as usize
            }
            CoinSource::Scripted { coins, len, pos } => {
                if *pos as usize + n > *len as usize {
                    return Err(Gf2Error::ScriptExhausted { len: *len });
                }
                let bits = ((*coins >> *pos) & ((1u128 << n) - 1)) as usize;
                *pos += n as u32;
                bits
            }
        };
        self.random_bits_used += n as u64;
        Ok(point)
    }

    fn check_part(&self, part: usize) -> Result<(), Gf2Error> {
        self.proof.part(part).map(|_| ())
    }

    /// BLR linearity test on `part`, repeated `repetitions` times.
    ///
    /// Each repetition draws `x, y` (2n bits), queries `x`, `y`, `x ⊕ y` and
    /// fails unless `f(x) ⊕ f(y) = f(x ⊕ y)`. All repetitions run; the test
    /// accepts iff every one passes.
    pub fn blr_linearity_test(&mut self, part: usize, repetitions: u32) -> Result<bool, Gf2Error> {
        self.check_part(part)?;
        let mut ok = true;
        for _ in 0..repetitions {
            let rep = self.blr_draws[part];
            self.blr_draws[part] += 1;
            let x = self.random_point(DrawTag::Blr { part, rep, second: false })?;
            let y = self.random_point(DrawTag::Blr { part, rep, second: true })?;
            let fx = self.query(part, x)?;
            let fy = self.query(part, y)?;
            let fxy = self.query(part, x ^ y)?;
            ok &= fx ^ fy == fxy;
        }
        Ok(ok)
    }

    /// BLR test on several parts with shared points: each repetition draws
    /// one pair `x, y` (2n bits) and checks it on every part. Returns, per
    /// part, whether all repetitions passed there.
    pub fn blr_linearity_test_joint(&mut self, parts: &[usize], repetitions: u32) -> Result<Vec<bool>, Gf2Error> {
        for &part in parts {
            self.check_part(part)?;
        }
        let key = *parts.first().ok_or(Gf2Error::NoParts)?;
        let mut ok = vec![true; parts.len()];
        for _ in 0..repetitions {
            let rep = self.blr_draws[key];
            self.blr_draws[key] += 1;
            let x = self.random_point(DrawTag::Blr { part: key, rep, second: false })?;
            let y = self.random_point(DrawTag::Blr { part: key, rep, second: true })?;
            for (k, &part) in parts.iter().enumerate() {
                let fx = self.query(part, x)?;
                let fy = self.query(part, y)?;
                let fxy = self.query(part, x ^ y)?;
                ok[k] &= fx ^ fy == fxy;
            }
        }
        Ok(ok)
    }

    /// `f(point ⊕ coin) ⊕ f(coin)` with a coin drawn earlier; no new randomness.
    pub fn corrected_read(&mut self, part: usize, point: usize, coin: usize) -> Result<bool, Gf2Error> {
        if (point | coin) >> self.dim() != 0 {
            return Err(Gf2Error::IndexOutOfRange {
                index: point | coin,
                len: 1 << self.dim(),
            });
        }
        let a = self.query(part, point ^ coin)?;
        let b = self.query(part, coin)?;
        Ok(a ^ b)
    }

    /// Self-corrected read of `α·v`: draws `r`, returns `f(v ⊕ r) ⊕ f(r)`.
    pub fn self_corrected_query(&mut self, part: usize, v: &BitVec) -> Result<bool, Gf2Error> {
        if v.len() != self.dim() {
            return Err(Gf2Error::DimensionMismatch {
                left: v.len(),
                right: self.dim(),
            });
        }
        let index = v.to_index().expect("dimension bounded by table size");
        self.self_corrected_query_at(part, index)
    }

    /// [`self_corrected_query`](Self::self_corrected_query) at a point given by its table index.
    pub fn self_corrected_query_at(&mut self, part: usize, point: usize) -> Result<bool, Gf2Error> {
        self.self_corrected_with_coin(part, point).map(|(bit, _)| bit)
    }

    /// Like [`self_corrected_query_at`](Self::self_corrected_query_at) but also returns the
    /// correction coin `r`, so a caller may derive further points from it.
    pub fn self_corrected_with_coin(&mut self, part: usize, point: usize) -> Result<(bool, usize), Gf2Error> {
        self.check_part(part)?;
        if point >> self.dim() != 0 {
            return Err(Gf2Error::IndexOutOfRange {
                index: point,
                len: 1 << self.dim(),
            });
        }
        let ordinal = self.corrections;
        self.corrections += 1;
        let r = self.random_point(DrawTag::Correction { ordinal })?;
        let a = self.query(part, point ^ r)?;
        let b = self.query(part, r)?;
        Ok((a ^ b, r))
    }
}

/// `coin` with coordinate `i` cleared: a uniform point of the subspace `{r : r_i = 0}`
/// whenever `coin` is uniform.
#[inline]
pub fn puncture(coin: usize, i: usize) -> usize {
    coin & !(1usize << i)
}
