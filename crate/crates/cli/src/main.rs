mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dpcp_core::gf2core::{decode_proof, encode_proof, Gf2Error};
use dpcp_core::graphmodel::{generate, is_member, parse_instance, write_instance, GeneratorSpec, GraphError, Instance, LanguageId};
use dpcp_core::harness::{
    certify_sweep, generate_with_retries, render_rational, soundness_sweep, write_csv, HarnessError, Measurement, SweepRow,
};
use dpcp_core::lcpbaseline::{glue_attack, write_labeling, LcpError, LeaderLayout};
use dpcp_core::protocols::{run_protocol, ProtocolConfig, ProtocolError};
use dpcp_core::prover::{adversarial_proof, honest_proof, AdversaryStrategy, ProverError};

use config::{ConfigError, ExperimentConfig, Task};

#[derive(Parser)]
#[command(name = "dpcp", version, about = "Distributed PCP simulator: Hadamard proofs checked by a network of local verifiers")]
struct Cli {
    /// Worker threads for sweeps and searches
    #[arg(long, global = true, env = "DPCP_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and report its membership in each language
    Generate(GenerateArgs),
    /// Write the honest proof of a yes-instance
    Prove(ProveArgs),
    /// Run every node's verifier against a proof
    Verify(VerifyArgs),
    /// Write an adversarial proof
    Forge(ForgeArgs),
    /// Run a sweep or certification from a config file or a bundled config
    Experiment(ExperimentArgs),
    /// Glue labeled yes-cycles into a no-instance that short LCP labels cannot reject
    LcpDemo(LcpDemoArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Graph family: cycle, path, complete, star, tree, random-connected (or a full descriptor)
    kind: String,
    /// Family parameters, e.g. `8 0.3` for random-connected
    params: Vec<String>,
    /// Make vertex i the only leader
    #[arg(long, conflicts_with_all = ["leaders", "inputs"])]
    leader: Option<usize>,
    /// Mark this many random leaders
    #[arg(long, conflicts_with = "inputs")]
    leaders: Option<usize>,
    /// Input generator: nonbip-yes, nonbip-no, span, span-corrupt:KIND, leader:i, leaders:k
    #[arg(long)]
    inputs: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout if omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProveArgs {
    graph: PathBuf,
    #[arg(short, long)]
    language: LanguageId,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    proof: PathBuf,
    /// Defaults to the language recorded in the proof file
    #[arg(short, long)]
    language: Option<LanguageId>,
    #[arg(long, default_value_t = 1)]
    blr_repetitions: u32,
    #[arg(long, default_value_t = 1)]
    verifier_repetitions: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ForgeArgs {
    graph: PathBuf,
    #[arg(short, long)]
    language: LanguageId,
    /// e.g. uniform-random, corrupt:flips=3, wrong-witness, constant:1, exhaustive:42
    #[arg(short, long)]
    adversary: AdversaryStrategy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Config file, or one of: nonbip-sweep, completeness, exhaustive-p3
    config: String,
    /// Overrides the config's output path; `-` writes CSV to stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LcpDemoArgs {
    /// Label length the verifier may use
    #[arg(long, default_value_t = 2)]
    bits: usize,
    /// Size of the yes-cycles that get glued
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(3..))]
    cycle: u64,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Reject(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Reject(_) => 1,
            CliError::Format(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Usage(_) => 4,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Capacity { .. } | HarnessError::Gf2(Gf2Error::Capacity { .. }) => CliError::Capacity(e.to_string()),
            HarnessError::Prover(p) => p.into(),
            HarnessError::Protocol(p) => p.into(),
            HarnessError::Graph(GraphError::Generation(_)) | HarnessError::Config(_) | HarnessError::TooFewTrials(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ProverError> for CliError {
    fn from(e: ProverError) -> Self {
        match e {
            ProverError::Witness(_) => CliError::Reject(e.to_string()),
            ProverError::Gf2(Gf2Error::Capacity { .. }) => CliError::Capacity(e.to_string()),
            ProverError::Strategy(_) => CliError::Usage(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::ZeroRepetitions => CliError::Usage(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Harness(h) => h.into(),
            other => CliError::Format(other.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Format(format!("cannot read {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read_text(path)?).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Format(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn membership_report(inst: &Instance) -> String {
    let mut out = String::new();
    for lang in LanguageId::ALL {
        let verdict = match is_member(inst, lang) {
            Ok(true) => "yes".to_string(),
            Ok(false) => "no".to_string(),
            Err(e) => format!("n/a ({e})"),
        };
        let _ = writeln!(out, "{}: {verdict}", display_name(lang));
    }
    out
}

fn display_name(lang: LanguageId) -> &'static str {
    match lang {
        LanguageId::Nonbipartite => "Nonbipartite",
        LanguageId::Leader => "Leader",
        LanguageId::Span => "Span",
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let mut desc = std::iter::once(args.kind.clone()).chain(args.params).collect::<Vec<_>>().join(":");
    let inputs = match (args.leader, args.leaders, args.inputs) {
        (Some(i), _, _) => Some(format!("leader:{i}")),
        (_, Some(k), _) => Some(format!("leaders:{k}")),
        (_, _, inputs) => inputs,
    };
    if let Some(inputs) = inputs {
        desc = format!("{desc}+{inputs}");
    }
    let spec: GeneratorSpec = desc.parse().map_err(|e: GraphError| CliError::Usage(e.to_string()))?;
    // Deterministic graphs never need a retry; random ones get a few derived seeds.
    let inst = match generate(&spec, args.seed) {
        Ok(inst) => inst,
        Err(GraphError::Generation(_)) => generate_with_retries(&spec, args.seed, 0)?,
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let text = write_instance(&inst);
    let report = format!("{spec}: {} vertices, {} edges\n{}", inst.n(), inst.graph().edge_count(), membership_report(&inst));
    match args.output {
        Some(path) => {
            write_atomic(&path, text.as_bytes())?;
            print!("{report}");
        }
        None => {
            print!("{text}");
            eprint!("{report}");
        }
    }
    Ok(())
}

fn cmd_prove(args: ProveArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.graph)?;
    let proof = honest_proof(&inst, args.language)?;
    write_atomic(&args.output, &encode_proof(&proof, args.language.protocol_id()))?;
    println!(
        "{} proof for {} vertices: {} part(s) of {} bits",
        display_name(args.language),
        inst.n(),
        proof.part_count(),
        1u64 << proof.dim()
    );
    println!("proof bits: {}", proof.total_bits());
    Ok(())
}

fn cmd_forge(args: ForgeArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.graph)?;
    let proof = adversarial_proof(&inst, args.language, &args.adversary, args.seed)?;
    write_atomic(&args.output, &encode_proof(&proof, args.language.protocol_id()))?;
    println!("{} proof ({}), proof bits: {}", display_name(args.language), args.adversary, proof.total_bits());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let inst = read_instance(&args.graph)?;
    let bytes =
        std::fs::read(&args.proof).map_err(|e| CliError::Format(format!("cannot read {}: {e}", args.proof.display())))?;
    let (id, proof) = decode_proof(&bytes).map_err(|e| CliError::Format(format!("malformed proof: {e}")))?;
    let recorded = LanguageId::from_protocol_id(id)
        .ok_or_else(|| CliError::Format(format!("malformed proof: unknown protocol id {id}")))?;
    let language = args.language.unwrap_or(recorded);
    if language != recorded {
        return Err(CliError::Format(format!("proof is for {recorded}, not {language}")));
    }
    let cfg = ProtocolConfig::new(language)
        .with_blr_repetitions(args.blr_repetitions)
        .with_verifier_repetitions(args.verifier_repetitions);
    let report = run_protocol(&inst, &proof, &cfg, args.seed)?;
    println!("{:>5}  {:<7}  {:<15}  {:>7}  {:>11}", "node", "verdict", "failed check", "queries", "random bits");
    for (i, node) in report.nodes.iter().enumerate() {
        println!(
            "{i:>5}  {:<7}  {:<15}  {:>7}  {:>11}",
            if node.accepted { "accept" } else { "reject" },
            node.failed_check.map_or("-", |c| c.as_str()),
            node.query_count,
            node.random_bits_used
        );
    }
    if report.accepted() {
        println!("accept: all {} nodes accept", inst.n());
        Ok(())
    } else {
        let who: Vec<String> = report.rejecting_nodes().iter().map(ToString::to_string).collect();
        println!("reject: node(s) {} reject", who.join(", "));
        Err(CliError::Reject(String::new()))
    }
}

fn format_measurement(m: &Measurement) -> (String, String) {
    match m {
        Measurement::Exact(p) => (render_rational(p), "exact".into()),
        Measurement::Estimate(e) => {
            let (lo, hi) = e.interval();
            (format!("{:.6}", e.p_hat()), format!("[{lo:.6}, {hi:.6}] of {}", e.trials))
        }
    }
}

fn summary_table(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let width = rows.iter().map(|r| r.instance_id.len()).max().unwrap_or(8).max(8);
    let adv = rows.iter().map(|r| r.adversary.len()).max().unwrap_or(9).max(9);
    let _ = writeln!(
        out,
        "{:<12}  {:<width$}  {:<adv$}  {:>3}  {:>4}  {:>14}  interval",
        "language", "instance", "adversary", "blr", "reps", "acceptance"
    );
    for r in rows {
        let (value, ci) = format_measurement(&r.measurement);
        let _ = writeln!(
            out,
            "{:<12}  {:<width$}  {:<adv$}  {:>3}  {:>4}  {:>14}  {ci}",
            r.language.to_string(),
            r.instance_id,
            r.adversary,
            r.blr_reps,
            r.verifier_reps,
            value
        );
    }
    out
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let path = Path::new(&args.config);
    let (text, base) = if path.is_file() {
        (read_text(path)?, path.parent().unwrap_or(Path::new(".")).to_path_buf())
    } else if let Some(text) = config::bundled(&args.config) {
        (text.to_string(), PathBuf::from("."))
    } else {
        let names: Vec<&str> = config::BUNDLED.iter().map(|(n, _)| *n).collect();
        return Err(CliError::Usage(format!(
            "no config file {:?} and no bundled config of that name (bundled: {})",
            args.config,
            names.join(", ")
        )));
    };
    let cfg = ExperimentConfig::parse(&text, &base)?;
    let spec = cfg.build()?;
    let rows = match cfg.task {
        Task::Sweep => soundness_sweep(&spec)?,
        Task::Certify => certify_sweep(&spec)?,
    };
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    let output = args.output.or(cfg.output);
    match output {
        Some(p) if p.as_os_str() != "-" => {
            write_atomic(&p, &csv)?;
            let mut text = summary_table(&rows);
            let _ = writeln!(text, "{} rows written to {}", rows.len(), p.display());
            // A closed pipe (e.g. `| head`) is not an error once the CSV is on disk.
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
        _ => {
            std::io::stdout()
                .write_all(&csv)
                .map_err(|e| CliError::Format(format!("cannot write CSV: {e}")))?;
        }
    }
    Ok(())
}

fn cmd_lcp_demo(args: LcpDemoArgs) -> Result<(), CliError> {
    let m = args.cycle as usize;
    let layout = LeaderLayout::for_glue(args.bits, m);
    let outcome = glue_attack(layout, m).map_err(|e| match e {
        LcpError::Capacity { .. } => CliError::Capacity(e.to_string()),
        LcpError::Generation(_) => CliError::Usage(e.to_string()),
        other => CliError::Format(other.to_string()),
    })?;
    println!(
        "Leader verifier with {}-bit labels: {} root-id bits, {} distance bits",
        args.bits, layout.root_bits, layout.dist_bits
    );
    println!(
        "searched {} labeled single-leader cycles C_{m}: {} accepted, {} distinct accepting views",
        outcome.labelings_searched, outcome.accepting_yes_labelings, outcome.accepting_views
    );
    let Some(f) = outcome.fooling else {
        println!("no splice found (window widths 1..3)");
        return Ok(());
    };
    let widths: Vec<String> = outcome.widths_found.iter().map(ToString::to_string).collect();
    println!("splices found at window widths: {}", widths.join(", "));
    println!(
        "fooling instance: C_{} glued from the cycles with leaders at {} and {} (window width {})",
        f.instance.n(),
        f.sources.0,
        f.sources.1,
        f.width
    );
    let leaders = (0..f.instance.n()).filter(|&i| f.instance.input_bit(i) == Ok(true)).count();
    println!("{leaders} leaders, so not in Leader; every node accepts its local view");
    print!("{}", write_instance(&f.instance));
    print!("{}", write_labeling(&f.labeling));
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Prove(a) => cmd_prove(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Forge(a) => cmd_forge(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::LcpDemo(a) => cmd_lcp_demo(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.code())
        }
    }
}
