//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints its own status line, pass or fail.

use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use dpcp_core::gf2core::{
    distance_to_nearest_linear, exact_rejection_probability, inner_product, self_corrected_one_probability, BitVec,
    LocalTest, ProofTable,
};
use dpcp_core::graphmodel::{leader_count, parse_instance, path_graph, GeneratorSpec, Instance, LanguageId};
use dpcp_core::harness::{
    certify_soundness_exhaustive, completeness_suite, generate_with_retries, render_rational, soundness_sweep,
    verify_budgets, DPCPParams, Measurement, Mode, ProofSource, SweepInstance, SweepSpec,
};
use dpcp_core::lcpbaseline::{glue_attack, lcp_verify_leader_with, parse_labeling, LeaderLayout};
use dpcp_core::prover::honest_proof;
use dpcp_core::protocols::{run_protocol, ProtocolConfig};
use dpcp_core::Prob;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let held: bool = $cond;
        if !held {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn prob(s: &str) -> Prob {
    s.parse().expect("rational literal")
}

fn adversary(s: &str) -> ProofSource {
    s.parse().expect("adversary literal")
}

const LANGUAGES: [LanguageId; 3] = [LanguageId::Nonbipartite, LanguageId::Leader, LanguageId::Span];

fn max_n(language: LanguageId) -> usize {
    if language == LanguageId::Span {
        10
    } else {
        12
    }
}

fn suite(language: LanguageId) -> Result<Vec<SweepInstance>, String> {
    ok(completeness_suite(language, 50, 0xC0FFEE))
}

fn completeness() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for language in LANGUAGES {
        let instances = suite(language)?;
        ensure!(instances.len() >= 50, "{language}: only {} instances", instances.len());
        for s in &instances {
            ensure!(s.instance.n() <= max_n(language), "{} has {} vertices", s.id, s.instance.n());
        }
        let spec = SweepSpec {
            instances,
            adversaries: vec![ProofSource::Honest],
            blr_repetitions: vec![1],
            verifier_repetitions: vec![1],
            trials: 100,
            seed: 1,
            mode: Mode::MonteCarlo,
        };
        for row in ok(soundness_sweep(&spec))? {
            let Measurement::Estimate(e) = row.measurement else {
                return Err(format!("{}: expected a Monte Carlo estimate", row.instance_id));
            };
            ensure!(e.trials >= 100, "{}: {} seeds", row.instance_id, e.trials);
            ensure!(e.accepted == e.trials, "{} {}: {}/{} accepted", language, row.instance_id, e.accepted, e.trials);
            runs += e.trials;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!("{runs} honest runs over 150 instances, all accepted"))
}

fn exhaustive_p3() -> Outcome {
    let p3 = ok(path_graph(3))?;
    let half = prob("1/2");
    let cases: [(LanguageId, Vec<&str>, &str); 5] = [
        (LanguageId::Nonbipartite, vec!["", "", ""], "125/4096"),
        (LanguageId::Leader, vec!["0", "0", "0"], "125/4096"),
        (LanguageId::Leader, vec!["1", "0", "1"], "547515/16777216"),
        (LanguageId::Leader, vec!["1", "1", "0"], "547515/16777216"),
        (LanguageId::Leader, vec!["0", "1", "1"], "547515/16777216"),
    ];
    let mut found = Vec::new();
    for (language, xs, pinned) in cases {
        let inst = ok(Instance::new(p3.clone(), xs.iter().map(|s| s.to_string()).collect()))?;
        let r = ok(certify_soundness_exhaustive(&inst, language, &ProtocolConfig::new(language)))?;
        let Measurement::Exact(p) = &r.max_acceptance else {
            return Err("exhaustive certification returned an estimate".into());
        };
        ensure!(r.enumerated == 256, "{language} {xs:?}: enumerated {}", r.enumerated);
        ensure!(*p <= half, "{language} {xs:?}: maximum {p} exceeds 1/2");
        ensure!(*p == prob(pinned), "{language} {xs:?}: maximum {p}, pinned {pinned}");
        found.push(format!("{language} {}={}", xs.concat(), render_rational(p)));
    }
    Ok(found.join(", "))
}

/// `table` agrees with some linear functional everywhere.
fn linear_by_search(table: &ProofTable) -> bool {
    let n = table.dim();
    (0..1usize << n).any(|a| (0..1usize << n).all(|v| table.get(v) == ((a & v).count_ones() % 2 == 1)))
}

fn blr_ground_truth() -> Outcome {
    let test = LocalTest::Blr { repetitions: 1 };
    let mut min_nonzero: Option<Prob> = None;
    let mut linear = 0;
    for code in 0..256u64 {
        let table = ok(ProofTable::from_code(3, code))?;
        let p = ok(exact_rejection_probability(&table, &test))?;
        let is_linear = linear_by_search(&table);
        ensure!(p.is_zero() == is_linear, "table {code:#04x}: rejection {p}, linear {is_linear}");
        if is_linear {
            linear += 1;
        } else if min_nonzero.as_ref().is_none_or(|m| p < *m) {
            min_nonzero = Some(p);
        }
    }
    ensure!(linear == 8, "{linear} linear tables");
    // One corrupted nonzero point: 18 of the 64 (x, y) pairs see it an odd
    // number of times.
    let min = min_nonzero.ok_or("no nonlinear table")?;
    ensure!(min == prob("9/32"), "minimum nonzero rejection {min}");
    let and2 = ok(ProofTable::from_bits(&[false, false, false, true]))?;
    let p = ok(exact_rejection_probability(&and2, &test))?;
    ensure!(p == prob("6/16"), "AND rejects with {p}");
    Ok(format!("8 linear of 256, min nonzero rejection {}, AND2 {}", render_rational(&min), render_rational(&p)))
}

fn self_correction() -> Outcome {
    let mut tightest: Option<Prob> = None;
    for code in 0..256u64 {
        let table = ok(ProofTable::from_code(3, code))?;
        let (delta, alpha) = ok(distance_to_nearest_linear(&table))?;
        for v in 0..8usize {
            let truth = ok(inner_product(&alpha, &BitVec::from_index(3, v)))?;
            // Enumerate the 8 correction coins directly.
            let wrong = (0..8usize).filter(|&r| (table.get(v ^ r) ^ table.get(r)) != truth).count() as i64;
            let p_wrong = Prob::new(wrong.into(), 8.into());
            let p_one = self_corrected_one_probability(&table, v);
            let from_lib = if truth { Prob::one() - p_one } else { p_one };
            ensure!(from_lib == p_wrong, "table {code:#04x} point {v}: library {from_lib}, enumeration {p_wrong}");
            let bound = &delta * Prob::from_integer(2.into());
            ensure!(p_wrong <= bound, "table {code:#04x} point {v}: error {p_wrong} > 2 delta = {bound}");
            let slack = bound - p_wrong;
            if tightest.as_ref().is_none_or(|t| slack < *t) {
                tightest = Some(slack);
            }
        }
    }
    let tightest = tightest.ok_or("no tables")?;
    Ok(format!("2048 (table, point) pairs within 2 delta, tightest slack {}", render_rational(&tightest)))
}

fn budgets() -> Outcome {
    let mut checked = 0;
    for language in LANGUAGES {
        // Queries per node at one BLR repetition, the same for every n.
        let q = match language {
            LanguageId::Nonbipartite | LanguageId::Leader => 7,
            LanguageId::Span => 21,
        };
        let cfg = ProtocolConfig::new(language);
        for s in suite(language)? {
            let n = s.instance.n();
            let l = if language == LanguageId::Span { (n as u64 + 1) << n } else { 1u64 << n };
            let params = ok(DPCPParams::new(Prob::one(), prob("1/2"), l, 4 * n as u64, q))?;
            let documented = DPCPParams::documented(&cfg, n);
            ensure!(documented.q == q, "{}: documented q = {} at n = {n}", s.id, documented.q);
            ensure!(documented.l == l && documented.r == 4 * n as u64, "{}: documented (l, r) = ({}, {})", s.id, documented.l, documented.r);
            let proof = ok(honest_proof(&s.instance, language))?;
            for seed in 0..5 {
                let report = ok(run_protocol(&s.instance, &proof, &cfg, seed))?;
                ensure!(report.accepted(), "{}: honest proof rejected", s.id);
                ensure!(
                    verify_budgets(&report, &params),
                    "{}: {} proof bits, {} random bits, {} queries over (l, r, q) = ({l}, {}, {q})",
                    s.id,
                    report.proof_bits,
                    report.max_random_bits(),
                    report.max_queries(),
                    4 * n
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} runs within l = 2^n or (n+1)2^n, r = 4n, q = 7 / 7 / 21"))
}

fn amplification() -> Outcome {
    let instances = ["cycle:4", "cycle:6", "cycle:8"]
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let spec: GeneratorSpec = d.parse().map_err(|e: dpcp_core::graphmodel::GraphError| e.to_string())?;
            Ok(SweepInstance {
                id: d.to_string(),
                language: LanguageId::Nonbipartite,
                instance: ok(generate_with_retries(&spec, 0, k))?,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let spec = SweepSpec {
        instances,
        adversaries: vec![adversary("wrong-witness"), adversary("uniform-random")],
        blr_repetitions: vec![1],
        verifier_repetitions: vec![1, 2, 3],
        trials: 100_000,
        seed: 20_240_601,
        mode: Mode::MonteCarlo,
    };
    let rows = ok(soundness_sweep(&spec))?;
    ensure!(rows.len() == 18, "{} rows", rows.len());
    let mut worst = 0.0f64;
    for cell in rows.chunks(3) {
        let values: Vec<f64> = cell.iter().map(|r| r.measurement.value()).collect();
        ensure!(
            values.windows(2).all(|w| w[1] <= w[0]),
            "{} {}: acceptance {values:?} increases with repetitions",
            cell[0].instance_id,
            cell[0].adversary
        );
        let two = &cell[1];
        ensure!(two.verifier_reps == 2, "row order");
        let (lo, hi) = two.measurement.interval();
        ensure!(two.measurement.trials() == 100_000, "{} trials", two.measurement.trials());
        ensure!(two.measurement.value() < 0.3, "{} {}: {} at 2 repetitions", two.instance_id, two.adversary, two.measurement.value());
        ensure!(hi - lo < 0.05, "{} {}: interval width {}", two.instance_id, two.adversary, hi - lo);
        worst = worst.max(values[0]);
    }
    Ok(format!("6 cells monotone over 1..3 repetitions, worst single-pass acceptance {worst:.5}"))
}

fn span_adversaries() -> Outcome {
    let graphs = ["path:6", "cycle:7", "random-connected:9:0.3", "star:5", "tree:8", "cycle:10"];
    let kinds = ["cycle", "two-roots", "zero-roots", "non-neighbor"];
    let mut instances = Vec::new();
    for kind in kinds {
        for g in graphs {
            let d = format!("{g}+span-corrupt:{kind}");
            let spec: GeneratorSpec = d.parse().map_err(|e: dpcp_core::graphmodel::GraphError| e.to_string())?;
            let instance = ok(generate_with_retries(&spec, 7, instances.len()))?;
            ensure!(instance.n() <= 10, "{d} has {} vertices", instance.n());
            ensure!(
                !ok(dpcp_core::graphmodel::is_member(&instance, LanguageId::Span))?,
                "{d} is a yes-instance"
            );
            instances.push(SweepInstance { id: d, language: LanguageId::Span, instance });
        }
    }
    let count = instances.len();
    ensure!(count >= 20, "only {count} instances");
    let spec = SweepSpec {
        instances,
        adversaries: ["uniform-random", "wrong-witness", "constant:0", "constant:1", "corrupt:flips=3"]
            .into_iter()
            .map(adversary)
            .collect(),
        blr_repetitions: vec![1],
        verifier_repetitions: vec![1],
        trials: 10_000,
        seed: 77,
        mode: Mode::MonteCarlo,
    };
    let mut worst = (0.0f64, String::new());
    for row in ok(soundness_sweep(&spec))? {
        let v = row.measurement.value();
        ensure!(v < 0.5, "{} {}: acceptance {v}", row.instance_id, row.adversary);
        if v >= worst.0 {
            worst = (v, format!("{} {}", row.instance_id, row.adversary));
        }
    }
    Ok(format!("{count} corrupted trees x 5 adversaries below 1/2, worst {:.4} ({})", worst.0, worst.1))
}

fn lcp_demo(bits: usize) -> Result<String, String> {
    let out = ok(Command::new(env!("CARGO_BIN_EXE_dpcp"))
        .args(["lcp-demo", "--bits", &bits.to_string(), "--cycle", "4"])
        .output())?;
    ensure!(out.status.success(), "lcp-demo --bits {bits} exited with {}", out.status);
    ok(String::from_utf8(out.stdout))
}

fn lcp_gluing() -> Outcome {
    let start = Instant::now();
    let layout = LeaderLayout::for_glue(2, 4);
    let outcome = ok(glue_attack(layout, 4))?;
    let f = outcome.fooling.ok_or("no fooling instance at 2-bit labels")?;
    ensure!(ok(leader_count(&f.instance))? != 1, "glued instance is a yes-instance");
    ensure!(ok(lcp_verify_leader_with(&f.instance, &f.labeling, layout))?.accepted(), "glued instance rejected");

    // The CLI prints the same certificate; re-check it from its text alone.
    let text = lcp_demo(2)?;
    let body: String = text
        .lines()
        .skip_while(|l| !l.contains("every node accepts"))
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    let split = body.find("label ").ok_or("no labeling in lcp-demo output")?;
    let inst = ok(parse_instance(&body[..split]))?;
    let labeling = ok(parse_labeling(&body[split..], inst.n()))?;
    ensure!(ok(leader_count(&inst))? != 1, "printed instance is a yes-instance");
    ensure!(ok(lcp_verify_leader_with(&inst, &labeling, layout))?.accepted(), "printed instance rejected");
    ensure!(labeling.max_label_bits() <= 2, "printed labels exceed 2 bits");

    let full = LeaderLayout::for_glue(8, 4);
    let none = ok(glue_attack(full, 4))?;
    ensure!(none.accepting_yes_labelings > 0, "full-length scheme accepts no yes-cycle");
    ensure!(none.fooling.is_none(), "full-length labels were fooled");
    ensure!(lcp_demo(8)?.contains("no splice found"), "lcp-demo --bits 8 did not report failure");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!(
        "C_{} with {} leaders fools 2-bit labels; none at {} bits",
        f.instance.n(),
        ok(leader_count(&f.instance))?,
        full.label_bits()
    ))
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("perfect completeness", completeness),
        ("exhaustive soundness on P3", exhaustive_p3),
        ("BLR ground truth", blr_ground_truth),
        ("self-correction within 2 delta", self_correction),
        ("budget conformance", budgets),
        ("amplification monotonicity", amplification),
        ("span adversary suite", span_adversaries),
        ("LCP gluing demonstration", lcp_gluing),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = format_secs(start.elapsed());
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {took})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}; {took})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn format_secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}
