use std::fmt;

use rayon::prelude::*;

use super::{exact_acceptance_probability, Estimate, HarnessError};
use crate::graphmodel::{Instance, LanguageId};
use crate::prover::{adversarial_proof, exhaustive_space, AdversaryStrategy, EXHAUSTIVE_MAX_BITS};
use crate::protocols::ProtocolConfig;
use crate::Prob;

/// How a cell's acceptance was measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Exact when affordable, Monte Carlo otherwise.
    Auto,
    Exact,
    MonteCarlo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::Exact => "exact",
            Mode::MonteCarlo => "mc",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Mode::Auto),
            "exact" => Ok(Mode::Exact),
            "mc" | "monte-carlo" => Ok(Mode::MonteCarlo),
            _ => Err(HarnessError::Config(format!("unknown mode {s:?}"))),
        }
    }
}

/// An acceptance probability, exact or estimated.
#[derive(Clone, Debug, PartialEq)]
pub enum Measurement {
    Exact(Prob),
    Estimate(Estimate),
}

impl Measurement {
    pub fn mode(&self) -> Mode {
        match self {
            Measurement::Exact(_) => Mode::Exact,
            Measurement::Estimate(_) => Mode::MonteCarlo,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Measurement::Exact(p) => rational_to_f64(p),
            Measurement::Estimate(e) => e.p_hat(),
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        match self {
            Measurement::Exact(p) => (rational_to_f64(p), rational_to_f64(p)),
            Measurement::Estimate(e) => e.interval(),
        }
    }

    pub fn trials(&self) -> u64 {
        match self {
            Measurement::Exact(_) => 0,
            Measurement::Estimate(e) => e.trials,
        }
    }
}

/// `p/q`, always with an explicit denominator.
pub fn render_rational(p: &Prob) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

pub(crate) fn rational_to_f64(p: &Prob) -> f64 {
    use num_traits::ToPrimitive;
    p.to_f64().unwrap_or(f64::NAN)
}

/// Largest acceptance probability found over a proof space.
#[derive(Clone, Debug, PartialEq)]
pub struct SoundnessReport {
    pub max_acceptance: Measurement,
    /// Descriptor of a proof attaining the maximum.
    pub argmax: AdversaryStrategy,
    /// Number of proofs examined.
    pub enumerated: u64,
}

/// Exact acceptance of every proof of the right shape; returns the maximum,
/// attained first at the smallest enumeration index.
pub fn certify_soundness_exhaustive(
    inst: &Instance,
    language: LanguageId,
    cfg: &ProtocolConfig,
) -> Result<SoundnessReport, HarnessError> {
    let n = inst.n();
    let space = exhaustive_space(language, n).ok_or(HarnessError::Capacity {
        what: "exhaustive proof bits",
        requested: crate::prover::part_count(language, n) as u64 * (1u64 << n.min(40)),
        limit: EXHAUSTIVE_MAX_BITS,
    })?;
    let cfg = ProtocolConfig { language, ..*cfg };
    let (best, k) = (0..space)
        .into_par_iter()
        .map(|k| {
            let proof = adversarial_proof(inst, language, &AdversaryStrategy::Exhaustive(k), 0)?;
            Ok::<_, HarnessError>((exact_acceptance_probability(inst, &proof, &cfg)?, k))
        })
        .try_reduce_with(|a: (Prob, u64), b: (Prob, u64)| {
            Ok(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        })
        .expect("proof space is non-empty")?;
    Ok(SoundnessReport {
        max_acceptance: Measurement::Exact(best),
        argmax: AdversaryStrategy::Exhaustive(k),
        enumerated: space,
    })
}
