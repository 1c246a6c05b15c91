//! Exact analysis of single-table tests for small dimensions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{BitVec, Gf2Error, MultiProof, OracleSession, ProofTable};

/// Default enumeration budget: at most this many coin strings per test.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// A randomized test a single verifier can run against one table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalTest {
    /// BLR linearity test repeated `repetitions` times.
    Blr { repetitions: u32 },
    /// Self-corrected read at `point`, rejecting unless it returns `expected`.
    SelfCorrected { point: BitVec, expected: bool },
}

pub(crate) fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn check_budget(what: &'static str, points: u64, budget: u64) -> Result<(), Gf2Error> {
    if points > budget {
        return Err(Gf2Error::Capacity {
            what,
            requested: points,
            limit: budget,
        });
    }
    Ok(())
}

/// Exact probability that `test` rejects `table`, enumerating every coin string.
pub fn exact_rejection_probability(table: &ProofTable, test: &LocalTest) -> Result<BigRational, Gf2Error> {
    exact_rejection_probability_with_budget(table, test, DEFAULT_ENUMERATION_BUDGET)
}

/// As [`exact_rejection_probability`], with an explicit cap on enumerated coin strings.
///
/// Repetitions of the BLR test use independent coins, so a `k`-fold test is
/// evaluated by enumerating the `2^{2n}` coin strings of one repetition and
/// raising the pass probability to the `k`-th power.
pub fn exact_rejection_probability_with_budget(
    table: &ProofTable,
    test: &LocalTest,
    budget: u64,
) -> Result<BigRational, Gf2Error> {
    let n = table.dim();
    let proof = MultiProof::single(table.clone());
    match test {
        LocalTest::Blr { repetitions } => {
            let bits = 2 * n as u32;
            check_budget("BLR coin space", 1u64 << bits.min(63), budget)?;
            let total = 1u64 << bits;
            let passing = (0..total)
                .filter(|&coins| {
                    let mut s = OracleSession::scripted(&proof, u128::from(coins), bits);
                    s.blr_linearity_test(0, 1).expect("script sized to the test")
                })
                .count() as u64;
            let pass = ratio(passing, total);
            Ok(BigRational::one() - num_traits::pow(pass, *repetitions as usize))
        }
        LocalTest::SelfCorrected { point, expected } => {
            if point.len() != n {
                return Err(Gf2Error::DimensionMismatch {
                    left: point.len(),
                    right: n,
                });
            }
            let bits = n as u32;
            check_budget("correction coin space", 1u64 << bits, budget)?;
            let total = 1u64 << bits;
            let mut wrong = 0u64;
            for coins in 0..total {
                let mut s = OracleSession::scripted(&proof, u128::from(coins), bits);
                if s.self_corrected_query(0, point)? != *expected {
                    wrong += 1;
                }
            }
            Ok(ratio(wrong, total))
        }
    }
}

/// In-place fast Walsh–Hadamard transform of `(-1)^f`.
///
/// Afterwards `w[α] = Σ_x (-1)^{f(x) ⊕ α·x}`, i.e. agreements minus
/// disagreements between `f` and `Had(α)`.
pub(crate) fn walsh_spectrum(table: &ProofTable) -> Vec<i64> {
    let mut w: Vec<i64> = table.iter().map(|b| if b { -1 } else { 1 }).collect();
    fwht(&mut w);
    w
}

pub(crate) fn fwht(w: &mut [i64]) {
    let mut h = 1;
    while h < w.len() {
        for block in w.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Normalized Hamming distance from `table` to the nearest Hadamard codeword,
/// with the witnessing `α` (smallest integer encoding on ties).
pub fn distance_to_nearest_linear(table: &ProofTable) -> Result<(BigRational, BitVec), Gf2Error> {
    let n = table.dim();
    if n > super::DEFAULT_MAX_DIM {
        return Err(Gf2Error::Capacity {
            what: "nearest-codeword search dimension",
            requested: n as u64,
            limit: super::DEFAULT_MAX_DIM as u64,
        });
    }
    let w = walsh_spectrum(table);
    // Distance to Had(α) is (2^n - w[α]) / 2 entries; the first maximum wins ties.
    let (best, &best_w) = w
        .iter()
        .enumerate()
        .fold((0, &i64::MIN), |acc, (a, wa)| if *wa > *acc.1 { (a, wa) } else { acc });
    let size = 1i64 << n;
    let disagreements = ((size - best_w) / 2) as u64;
    Ok((ratio(disagreements, size as u64), BitVec::from_index(n, best)))
}

/// Exact probability that one BLR repetition passes on `table`.
///
/// Counts passing pairs through the Walsh spectrum:
/// `#{(x,y) : pass} = (4^n + 2^{-n} Σ_α w[α]^3) / 2`.
pub fn blr_pass_probability(table: &ProofTable) -> BigRational {
    let n = table.dim();
    let cubes: i128 = walsh_spectrum(table)
        .iter()
        .map(|&w| i128::from(w).pow(3))
        .sum();
    let total = 1i128 << (2 * n);
    let passing = (total + (cubes >> n)) / 2;
    BigRational::new(BigInt::from(passing), BigInt::from(total))
}

/// Number of correction coins `r` for which `f(v ⊕ r) ⊕ f(r) = 1`.
pub(crate) fn self_corrected_ones(table: &ProofTable, point: usize) -> u64 {
    (0..table.len())
        .filter(|&r| table.get(point ^ r) ^ table.get(r))
        .count() as u64
}

/// [`self_corrected_ones`] for every point at once.
///
/// The count of `r` with `f(p ⊕ r) ≠ f(r)` is `(2^n - C(p)) / 2`, where the
/// autocorrelation `C` is the Walsh transform of the squared spectrum over `2^n`.
pub(crate) fn self_corrected_ones_all(table: &ProofTable) -> Vec<u64> {
    let size = table.len() as i64;
    let mut c: Vec<i64> = walsh_spectrum(table).into_iter().map(|w| w * w).collect();
    fwht(&mut c);
    c.into_iter().map(|x| ((size - x / size) / 2) as u64).collect()
}

/// Exact probability that a self-corrected read of `table` at `point` returns one.
pub fn self_corrected_one_probability(table: &ProofTable, point: usize) -> BigRational {
    ratio(self_corrected_ones(table, point), table.len() as u64)
}

/// `1 - p`.
#[cfg(test)]
pub(crate) fn complement(p: &BigRational) -> BigRational {
    BigRational::one() - p
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::gf2core::hadamard_encode;

    fn and2() -> ProofTable {
        ProofTable::from_bits(&[false, false, false, true]).unwrap()
    }

    #[test]
    fn blr_rejection_examples() {
        let had = hadamard_encode(&"101".parse().unwrap()).unwrap();
        let blr = LocalTest::Blr { repetitions: 1 };
        assert!(exact_rejection_probability(&had, &blr).unwrap().is_zero());
        let ones = ProofTable::constant(2, true).unwrap();
        assert!(exact_rejection_probability(&ones, &blr).unwrap().is_one());
        assert_eq!(exact_rejection_probability(&and2(), &blr).unwrap(), ratio(6, 16));
        let twice = LocalTest::Blr { repetitions: 2 };
        assert_eq!(
            exact_rejection_probability(&and2(), &twice).unwrap(),
            ratio(256 - 100, 256)
        );
    }

    #[test]
    fn nearest_codeword_examples() {
        let had = hadamard_encode(&"0110".parse().unwrap()).unwrap();
        let (d, a) = distance_to_nearest_linear(&had).unwrap();
        assert!(d.is_zero());
        assert_eq!(a.to_string(), "0110");
        let (d, a) = distance_to_nearest_linear(&ProofTable::constant(2, true).unwrap()).unwrap();
        // Had(00) is at distance 1; the three other codewords tie at 1/2.
        assert_eq!(d, ratio(1, 2));
        assert_eq!(a.to_string(), "10");
        let (d, a) = distance_to_nearest_linear(&and2()).unwrap();
        assert_eq!(d, ratio(1, 4));
        assert_eq!(a.to_string(), "00");
    }

    #[test]
    fn spectral_blr_matches_enumeration() {
        for code in 0..256u64 {
            let t = ProofTable::from_code(3, code).unwrap();
            let enumerated = exact_rejection_probability(&t, &LocalTest::Blr { repetitions: 1 }).unwrap();
            assert_eq!(complement(&blr_pass_probability(&t)), enumerated, "table {code}");
        }
    }

    #[test]
    fn all_point_counts_match_direct_counts() {
        for code in (0..256u64).step_by(7) {
            let t = ProofTable::from_code(3, code).unwrap();
            let all = self_corrected_ones_all(&t);
            for (p, &c) in all.iter().enumerate() {
                assert_eq!(c, self_corrected_ones(&t, p), "table {code} point {p}");
            }
        }
        let t = ProofTable::from_fn(9, |k| (k * 2654435761) % 7 < 3).unwrap();
        let all = self_corrected_ones_all(&t);
        for p in [0, 1, 17, 300, 511] {
            assert_eq!(all[p], self_corrected_ones(&t, p));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let t = ProofTable::zeros(13).unwrap();
        let err = exact_rejection_probability(&t, &LocalTest::Blr { repetitions: 1 }).unwrap_err();
        assert!(matches!(err, Gf2Error::Capacity { .. }));
        let small = exact_rejection_probability_with_budget(&and2(), &LocalTest::Blr { repetitions: 1 }, 8);
        assert!(small.is_err());
    }

    #[test]
    fn self_corrected_test_rejects_wrong_point_length() {
        let test = LocalTest::SelfCorrected {
            point: BitVec::zeros(3),
            expected: false,
        };
        assert!(exact_rejection_probability(&and2(), &test).is_err());
    }
}
