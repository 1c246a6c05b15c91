use rayon::prelude::*;

use super::HarnessError;
use crate::gf2core::MultiProof;
use crate::graphmodel::Instance;
use crate::protocols::{run_protocol, ProtocolConfig};
use crate::seed;

pub const MIN_TRIALS: u64 = 100;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Acceptance frequency over independent runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub accepted: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn p_hat(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }

    /// Wilson score interval at 95%.
    pub fn interval(&self) -> (f64, f64) {
        let n = self.trials as f64;
        let p = self.p_hat();
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        let lo = if self.accepted == 0 { 0.0 } else { (center - half).max(0.0) };
        let hi = if self.accepted == self.trials { 1.0 } else { (center + half).min(1.0) };
        (lo, hi)
    }
}

/// Run `trials` independent runs; trial `t` uses `seed::trial_seed(seed, t)`.
pub fn estimate_acceptance_probability(
    inst: &Instance,
    proof: &MultiProof,
    cfg: &ProtocolConfig,
    trials: u64,
    seed: u64,
) -> Result<Estimate, HarnessError> {
    if trials < MIN_TRIALS {
        return Err(HarnessError::TooFewTrials(trials));
    }
    let accepted = (0..trials)
        .into_par_iter()
        .map(|t| run_protocol(inst, proof, cfg, seed::trial_seed(seed, t)).map(|r| u64::from(r.accepted())))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(Estimate { accepted, trials })
}
