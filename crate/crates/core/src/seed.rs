//! Seed derivation.
//!
//! Every random choice in an experiment descends from a single 64-bit seed.
//! Child seeds are derived with [`split`], which folds one 64-bit key into a
//! parent seed through the SplitMix64 finalizer. Derivations used by the
//! simulator:
//!
//! | purpose                         | derivation                                              |
//! |---------------------------------|---------------------------------------------------------|
//! | trial `t` of a run              | `split(seed, t)`                                        |
//! | node `i`, pass `p` of a trial   | `split(split(split(trial_seed, NODE ^ i), PASS ^ p))`   |
//! | one random draw inside a pass   | `split(pass_seed, tag)` where `tag` names the draw      |
//!
//! Draw tags are stable across configurations (see
//! [`OracleSession`](crate::gf2core::OracleSession)), so changing a repetition
//! count only adds or removes draws and never reshuffles the others.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

pub(crate) const NODE_DOMAIN: u64 = 0x4e4f_4445_0000_0000;
pub(crate) const PASS_DOMAIN: u64 = 0x5041_5353_0000_0000;
pub(crate) const CELL_DOMAIN: u64 = 0x4345_4c4c_0000_0000;
pub(crate) const INSTANCE_DOMAIN: u64 = 0x494e_5354_0000_0000;
pub(crate) const ADVERSARY_DOMAIN: u64 = 0x4144_5653_0000_0000;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `seed` and `key`.
pub fn split(seed: u64, key: u64) -> u64 {
    mix(seed.wrapping_add(GOLDEN).wrapping_add(mix(key.wrapping_mul(GOLDEN))))
}

/// Seed of trial `trial` within an experiment seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    split(seed, trial)
}

/// Seed of one verifier pass of node `node` inside a trial.
pub fn node_pass_seed(trial_seed: u64, node: usize, pass: u32) -> u64 {
    split(
        split(trial_seed, NODE_DOMAIN ^ node as u64),
        PASS_DOMAIN ^ u64::from(pass),
    )
}
