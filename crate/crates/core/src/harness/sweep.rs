use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::{
    certify_soundness_exhaustive, estimate_acceptance_probability, exact_acceptance_probability, exact_feasible,
    render_rational, HarnessError, Measurement, Mode,
};
use crate::graphmodel::{generate, GeneratorSpec, Instance, LanguageId};
use crate::prover::{adversarial_proof, honest_proof, AdversaryStrategy};
use crate::protocols::{run_protocol, ProtocolConfig};
use crate::seed::{self, ADVERSARY_DOMAIN, CELL_DOMAIN, INSTANCE_DOMAIN};

/// The committed proof of a sweep cell.
#[derive(Clone, Debug, PartialEq)]
pub enum ProofSource {
    Honest,
    Adversary(AdversaryStrategy),
}

impl fmt::Display for ProofSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofSource::Honest => f.write_str("honest"),
            ProofSource::Adversary(a) => a.fmt(f),
        }
    }
}

impl FromStr for ProofSource {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "honest" {
            return Ok(ProofSource::Honest);
        }
        Ok(ProofSource::Adversary(s.parse()?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepInstance {
    pub id: String,
    pub language: LanguageId,
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub instances: Vec<SweepInstance>,
    pub adversaries: Vec<ProofSource>,
    pub blr_repetitions: Vec<u32>,
    pub verifier_repetitions: Vec<u32>,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub language: LanguageId,
    pub instance_id: String,
    pub n: usize,
    pub adversary: String,
    pub blr_reps: u32,
    pub verifier_reps: u32,
    pub measurement: Measurement,
    pub max_queries: u64,
    pub max_random_bits: u64,
    pub proof_bits: u64,
    pub seed: u64,
}

/// Seed of the cell for instance `i` and adversary `a`. It does not depend on
/// the repetition counts, so the same coins are reused along those axes.
pub fn cell_seed(seed: u64, instance: usize, adversary: usize) -> u64 {
    seed::split(
        seed::split(seed, INSTANCE_DOMAIN ^ instance as u64),
        ADVERSARY_DOMAIN ^ adversary as u64,
    )
}

fn measure(
    inst: &Instance,
    proof: &crate::gf2core::MultiProof,
    cfg: &ProtocolConfig,
    mode: Mode,
    trials: u64,
    seed: u64,
) -> Result<Measurement, HarnessError> {
    let exact = match mode {
        Mode::Exact => true,
        Mode::MonteCarlo => false,
        Mode::Auto => exact_feasible(inst.n()),
    };
    Ok(if exact {
        Measurement::Exact(exact_acceptance_probability(inst, proof, cfg)?)
    } else {
        Measurement::Estimate(estimate_acceptance_probability(inst, proof, cfg, trials, seed)?)
    })
}

fn grid(spec_blr: &[u32], spec_ver: &[u32]) -> Vec<(u32, u32)> {
    spec_blr
        .iter()
        .flat_map(|&b| spec_ver.iter().map(move |&v| (b, v)))
        .collect()
}

fn check_suites(spec: &SweepSpec, need_adversaries: bool) -> Result<(), HarnessError> {
    if spec.instances.is_empty() {
        return Err(HarnessError::EmptySuite("instances"));
    }
    if need_adversaries && spec.adversaries.is_empty() {
        return Err(HarnessError::EmptySuite("adversaries"));
    }
    if spec.blr_repetitions.is_empty() || spec.verifier_repetitions.is_empty() {
        return Err(HarnessError::EmptySuite("repetition grid"));
    }
    Ok(())
}

/// Measure every (instance, adversary, repetition) cell. Rows come out in
/// instance, adversary, BLR, verifier-repetition order.
pub fn soundness_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, HarnessError> {
    check_suites(spec, true)?;
    let configs = grid(&spec.blr_repetitions, &spec.verifier_repetitions);
    let cells: Vec<(usize, usize, u32, u32)> = (0..spec.instances.len())
        .flat_map(|i| (0..spec.adversaries.len()).map(move |a| (i, a)))
        .flat_map(|(i, a)| configs.iter().map(move |&(b, v)| (i, a, b, v)))
        .collect();
    cells
        .into_par_iter()
        .map(|(i, a, b, v)| {
            let item = &spec.instances[i];
            let inst = &item.instance;
            let cseed = cell_seed(spec.seed, i, a);
            let proof = match &spec.adversaries[a] {
                ProofSource::Honest => honest_proof(inst, item.language)?,
                ProofSource::Adversary(s) => adversarial_proof(inst, item.language, s, seed::split(cseed, CELL_DOMAIN))?,
            };
            let cfg = ProtocolConfig::new(item.language)
                .with_blr_repetitions(b)
                .with_verifier_repetitions(v);
            let measurement = measure(inst, &proof, &cfg, spec.mode, spec.trials, cseed)?;
            // Counters do not depend on the coins, so one run reports them.
            let probe = run_protocol(inst, &proof, &cfg, cseed)?;
            Ok(SweepRow {
                language: item.language,
                instance_id: item.id.clone(),
                n: inst.n(),
                adversary: spec.adversaries[a].to_string(),
                blr_reps: b,
                verifier_reps: v,
                measurement,
                max_queries: probe.max_queries(),
                max_random_bits: probe.max_random_bits(),
                proof_bits: probe.proof_bits,
                seed: cseed,
            })
        })
        .collect()
}

/// Exhaustive soundness certification for every instance and repetition
/// setting; the adversary column names the maximizing proof.
pub fn certify_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, HarnessError> {
    check_suites(spec, false)?;
    let configs = grid(&spec.blr_repetitions, &spec.verifier_repetitions);
    let mut rows = Vec::new();
    for (i, item) in spec.instances.iter().enumerate() {
        for &(b, v) in &configs {
            let cfg = ProtocolConfig::new(item.language)
                .with_blr_repetitions(b)
                .with_verifier_repetitions(v);
            let report = certify_soundness_exhaustive(&item.instance, item.language, &cfg)?;
            let proof = adversarial_proof(&item.instance, item.language, &report.argmax, 0)?;
            let cseed = cell_seed(spec.seed, i, 0);
            let probe = run_protocol(&item.instance, &proof, &cfg, cseed)?;
            rows.push(SweepRow {
                language: item.language,
                instance_id: item.id.clone(),
                n: item.instance.n(),
                adversary: format!("max:{}", report.argmax),
                blr_reps: b,
                verifier_reps: v,
                measurement: report.max_acceptance,
                max_queries: probe.max_queries(),
                max_random_bits: probe.max_random_bits(),
                proof_bits: probe.proof_bits,
                seed: cseed,
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: [&str; 15] = [
    "language",
    "instance_id",
    "n",
    "adversary",
    "blr_reps",
    "verifier_reps",
    "mode",
    "acceptance",
    "ci_low",
    "ci_high",
    "max_queries",
    "max_random_bits",
    "proof_bits",
    "trials",
    "seed",
];

/// Write rows with the mandatory header. Exact values are `p/q`.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| HarnessError::Csv(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        let (value, lo, hi) = match &r.measurement {
            Measurement::Exact(p) => {
                let s = render_rational(p);
                (s.clone(), s.clone(), s)
            }
            Measurement::Estimate(e) => {
                let (lo, hi) = e.interval();
                (format!("{:.6}", e.p_hat()), format!("{lo:.6}"), format!("{hi:.6}"))
            }
        };
        w.write_record([
            r.language.to_string(),
            r.instance_id.clone(),
            r.n.to_string(),
            r.adversary.clone(),
            r.blr_reps.to_string(),
            r.verifier_reps.to_string(),
            r.measurement.mode().to_string(),
            value,
            lo,
            hi,
            r.max_queries.to_string(),
            r.max_random_bits.to_string(),
            r.proof_bits.to_string(),
            r.measurement.trials().to_string(),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| HarnessError::Csv(e.to_string()))
}

/// Generate `descriptor` with seeds derived from `seed` and `index`, retrying
/// a few derived seeds when a random graph misses the requested membership.
pub fn generate_with_retries(spec: &GeneratorSpec, seed: u64, index: usize) -> Result<Instance, HarnessError> {
    let base = seed::split(seed, INSTANCE_DOMAIN ^ index as u64);
    let mut last = None;
    for attempt in 0..64 {
        match generate(spec, seed::split(base, attempt)) {
            Ok(inst) => return Ok(inst),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt").into())
}

/// Yes-instances for completeness checks: `count` instances, vertex counts up
/// to 12 (10 for Span).
pub fn completeness_suite(language: LanguageId, count: usize, seed: u64) -> Result<Vec<SweepInstance>, HarnessError> {
    let descriptors: Vec<String> = (0..count)
        .map(|k| {
            let m = 3 + k % if language == LanguageId::Span { 8 } else { 10 };
            match (language, k % 4) {
                (LanguageId::Nonbipartite, 0) => format!("cycle:{}+nonbip-yes", m | 1),
                (LanguageId::Nonbipartite, 1) => format!("complete:{}+nonbip-yes", m.min(8)),
                (LanguageId::Nonbipartite, _) => format!("random-connected:{}:0.4+nonbip-yes", m),
                (LanguageId::Leader, 0) => format!("path:{m}+leader:{}", k % m),
                (LanguageId::Leader, 1) => format!("cycle:{m}+leader:{}", (k * 7) % m),
                (LanguageId::Leader, 2) => format!("tree:{m}+leaders:1"),
                (LanguageId::Leader, _) => format!("random-connected:{m}:0.3+leaders:1"),
                (LanguageId::Span, 0) => format!("tree:{m}+span"),
                (LanguageId::Span, 1) => format!("cycle:{m}+span"),
                (LanguageId::Span, 2) => format!("complete:{}+span", m.min(7)),
                (LanguageId::Span, _) => format!("random-connected:{m}:0.3+span"),
            }
        })
        .collect();
    descriptors
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let spec: GeneratorSpec = d.parse()?;
            Ok(SweepInstance {
                id: format!("{d}#{k}"),
                language,
                instance: generate_with_retries(&spec, seed, k)?,
            })
        })
        .collect()
}
