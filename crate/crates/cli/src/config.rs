//! Experiment configuration files.
//!
//! A config is a flat TOML table:
//!
//! ```toml
//! task = "sweep"                 # sweep | certify
//! language = "nonbipartite"      # default for entries without a `lang@` prefix
//! instances = ["cycle:4", "cycle:6*3", "leader@path:3+leaders:2", "file:graphs/g.txt", "completeness:50"]
//! adversaries = ["wrong-witness", "uniform-random"]   # default ["honest"]
//! blr_repetitions = [1]
//! verifier_repetitions = [1, 2, 3]
//! trials = 100000
//! seed = 7                       # required
//! mode = "auto"                  # auto | exact | mc
//! output = "out.csv"             # relative to the config file
//! ```
//!
//! `*N` replicates a generated entry with independent seeds; `completeness:N`
//! expands to the generated yes-instance suite of the entry's language.

use std::path::{Path, PathBuf};

use dpcp_core::graphmodel::{parse_instance, GeneratorSpec, LanguageId};
use dpcp_core::harness::{completeness_suite, generate_with_retries, Mode, ProofSource, SweepInstance, SweepSpec};
use serde::Deserialize;
use toml::Spanned;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Syntax(String),
    #[error("config line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Harness(#[from] dpcp_core::harness::HarnessError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Sweep,
    Certify,
}

#[derive(Clone, Debug, PartialEq)]
enum Source {
    Generated { spec: GeneratorSpec, copies: usize },
    File(PathBuf),
    Completeness(usize),
}

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    text: String,
    language: LanguageId,
    source: Source,
    line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub task: Task,
    entries: Vec<Entry>,
    pub adversaries: Vec<ProofSource>,
    pub blr_repetitions: Vec<u32>,
    pub verifier_repetitions: Vec<u32>,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    pub output: Option<PathBuf>,
    base: PathBuf,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    task: Option<Spanned<String>>,
    language: Option<Spanned<String>>,
    instances: Option<Spanned<Vec<Spanned<String>>>>,
    adversaries: Option<Vec<Spanned<String>>>,
    blr_repetitions: Option<Spanned<OneOrMany<u32>>>,
    verifier_repetitions: Option<Spanned<OneOrMany<u32>>>,
    trials: Option<Spanned<u64>>,
    seed: Option<Spanned<u64>>,
    mode: Option<Spanned<String>>,
    output: Option<String>,
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn at(&self, offset: usize) -> usize {
        self.0[..offset.min(self.0.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError::Semantic {
            line: self.at(span.start),
            message: message.into(),
        })
    }
}

fn repetitions(lines: &Lines<'_>, raw: Option<Spanned<OneOrMany<u32>>>, key: &str) -> Result<Vec<u32>, ConfigError> {
    let Some(raw) = raw else { return Ok(vec![1]) };
    let span = raw.span();
    let v = raw.into_inner().into_vec();
    if v.is_empty() || v.contains(&0) {
        return lines.err(span, format!("{key} must be a non-empty list of positive counts"));
    }
    Ok(v)
}

impl ExperimentConfig {
    /// Parse `text`; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let raw: Raw = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string().trim_end().to_string()))?;
        let lines = Lines(text);
        let task = match &raw.task {
            None => Task::Sweep,
            Some(t) => match t.get_ref().as_str() {
                "sweep" => Task::Sweep,
                "certify" => Task::Certify,
                other => return lines.err(t.span(), format!("unknown task {other:?}; expected sweep or certify")),
            },
        };
        let default_language = match &raw.language {
            None => None,
            Some(l) => match l.get_ref().parse::<LanguageId>() {
                Ok(id) => Some(id),
                Err(e) => return lines.err(l.span(), e.to_string()),
            },
        };
        let Some(seed) = raw.seed else {
            return Err(ConfigError::Semantic {
                line: lines.at(text.len()),
                message: "missing required key `seed`".into(),
            });
        };
        let Some(instances) = raw.instances else {
            return Err(ConfigError::Semantic {
                line: lines.at(text.len()),
                message: "missing required key `instances`".into(),
            });
        };
        if instances.get_ref().is_empty() {
            return lines.err(instances.span(), "instances must not be empty");
        }
        let mut entries = Vec::new();
        for item in instances.into_inner() {
            entries.push(parse_entry(&lines, item, default_language)?);
        }
        let adversaries = match raw.adversaries {
            None => vec![ProofSource::Honest],
            Some(list) => {
                let mut out = Vec::new();
                for a in list {
                    match a.get_ref().parse::<ProofSource>() {
                        Ok(p) => out.push(p),
                        Err(e) => return lines.err(a.span(), e.to_string()),
                    }
                }
                out
            }
        };
        if task == Task::Sweep && adversaries.is_empty() {
            return Err(ConfigError::Semantic {
                line: 1,
                message: "adversaries must not be empty".into(),
            });
        }
        let trials = match raw.trials {
            None => 10_000,
            Some(t) if *t.get_ref() < dpcp_core::harness::MIN_TRIALS => {
                return lines.err(
                    t.span(),
                    format!("trials must be at least {}", dpcp_core::harness::MIN_TRIALS),
                );
            }
            Some(t) => t.into_inner(),
        };
        let mode = match &raw.mode {
            None => Mode::Auto,
            Some(m) => match m.get_ref().parse::<Mode>() {
                Ok(mode) => mode,
                Err(e) => return lines.err(m.span(), e.to_string()),
            },
        };
        Ok(ExperimentConfig {
            task,
            entries,
            adversaries,
            blr_repetitions: repetitions(&lines, raw.blr_repetitions, "blr_repetitions")?,
            verifier_repetitions: repetitions(&lines, raw.verifier_repetitions, "verifier_repetitions")?,
            trials,
            seed: seed.into_inner(),
            mode,
            output: raw.output.map(|o| base.join(o)),
            base: base.to_path_buf(),
        })
    }

    /// Generate or load every instance and assemble the sweep.
    pub fn build(&self) -> Result<SweepSpec, ConfigError> {
        let mut instances = Vec::new();
        for entry in &self.entries {
            let fail = |message: String| ConfigError::Semantic {
                line: entry.line,
                message,
            };
            match &entry.source {
                Source::Generated { spec, copies } => {
                    for copy in 0..*copies {
                        let index = instances.len();
                        let instance = generate_with_retries(spec, self.seed, index)
                            .map_err(|e| fail(format!("{}: {e}", entry.text)))?;
                        let id = if *copies == 1 { spec.to_string() } else { format!("{spec}#{copy}") };
                        instances.push(SweepInstance {
                            id,
                            language: entry.language,
                            instance,
                        });
                    }
                }
                Source::File(path) => {
                    let full = self.base.join(path);
                    let text = std::fs::read_to_string(&full).map_err(|e| ConfigError::Io {
                        path: full.display().to_string(),
                        message: e.to_string(),
                    })?;
                    let instance = parse_instance(&text).map_err(|e| fail(format!("{}: {e}", full.display())))?;
                    instances.push(SweepInstance {
                        id: path.display().to_string(),
                        language: entry.language,
                        instance,
                    });
                }
                Source::Completeness(count) => {
                    let seed = dpcp_core::seed::split(self.seed, instances.len() as u64);
                    instances.extend(completeness_suite(entry.language, *count, seed)?);
                }
            }
        }
        Ok(SweepSpec {
            instances,
            adversaries: self.adversaries.clone(),
            blr_repetitions: self.blr_repetitions.clone(),
            verifier_repetitions: self.verifier_repetitions.clone(),
            trials: self.trials,
            seed: self.seed,
            mode: self.mode,
        })
    }
}

fn parse_entry(lines: &Lines<'_>, item: Spanned<String>, default: Option<LanguageId>) -> Result<Entry, ConfigError> {
    let span = item.span();
    let text = item.into_inner();
    let (language, rest) = match text.split_once('@') {
        Some((lang, rest)) => match lang.trim().parse::<LanguageId>() {
            Ok(l) => (l, rest.trim()),
            Err(e) => return lines.err(span, e.to_string()),
        },
        None => match default {
            Some(l) => (l, text.trim()),
            None => return lines.err(span, format!("{text:?} has no `lang@` prefix and no default language is set")),
        },
    };
    let source = if let Some(path) = rest.strip_prefix("file:") {
        Source::File(PathBuf::from(path))
    } else if let Some(count) = rest.strip_prefix("completeness:") {
        match count.parse::<usize>() {
            Ok(c) if c > 0 => Source::Completeness(c),
            _ => return lines.err(span, format!("bad suite size {count:?}")),
        }
    } else {
        let (desc, copies) = match rest.rsplit_once('*') {
            Some((d, c)) => match c.parse::<usize>() {
                Ok(c) if c > 0 => (d, c),
                _ => return lines.err(span, format!("bad replication count {c:?}")),
            },
            None => (rest, 1),
        };
        match desc.parse::<GeneratorSpec>() {
            Ok(spec) => Source::Generated { spec, copies },
            Err(e) => return lines.err(span, e.to_string()),
        }
    };
    Ok(Entry {
        line: lines.at(span.start),
        text,
        language,
        source,
    })
}

/// Configs shipped with the binary, by name.
pub const BUNDLED: [(&str, &str); 3] = [
    ("nonbip-sweep", include_str!("../configs/nonbip-sweep.toml")),
    ("completeness", include_str!("../configs/completeness.toml")),
    ("exhaustive-p3", include_str!("../configs/exhaustive-p3.toml")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::parse(text, Path::new("."))
    }

    #[test]
    fn defaults_and_replication() {
        let c = parse("language = \"leader\"\ninstances = [\"path:3+leaders:1*3\"]\nseed = 4\n").unwrap();
        assert_eq!(c.task, Task::Sweep);
        assert_eq!(c.adversaries, vec![ProofSource::Honest]);
        assert_eq!((c.blr_repetitions.clone(), c.verifier_repetitions.clone()), (vec![1], vec![1]));
        let spec = c.build().unwrap();
        assert_eq!(spec.instances.len(), 3);
        assert_eq!(spec.instances[2].id, "path:3+leaders:1#2");
        assert_eq!(spec, c.build().unwrap());
    }

    #[test]
    fn semantic_errors_carry_lines() {
        let missing_seed = parse("language = \"leader\"\ninstances = [\"path:3\"]\n");
        assert!(matches!(missing_seed, Err(ConfigError::Semantic { .. })), "{missing_seed:?}");
        let cases = [
            ("seed = 1\nlanguage = \"leader\"\ninstances = [\n  \"path:3\",\n  \"bogus:3\",\n]\n", 5),
            ("seed = 1\ninstances = [\"path:3\"]\n", 2),
            ("seed = 1\nlanguage = \"span\"\ninstances = [\"path:3\"]\nmode = \"fast\"\n", 4),
            ("seed = 1\nlanguage = \"span\"\ninstances = [\"path:3\"]\n\ntrials = 5\n", 5),
            ("seed = 1\nlanguage = \"span\"\ninstances = [\"path:3\"]\nadversaries = [\"honest\", \"sneaky\"]\n", 4),
            ("seed = 1\nlanguage = \"span\"\ninstances = [\"path:3\"]\nverifier_repetitions = [1, 0]\n", 4),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(ConfigError::Semantic { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        let Err(ConfigError::Syntax(msg)) = parse("seed = \n") else { panic!() };
        assert!(msg.contains("line 1"), "{msg}");
        assert!(matches!(parse("seed = 1\ncolour = 3\n"), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn unsatisfiable_generation_names_its_line() {
        let c = parse("seed = 1\nlanguage = \"nonbipartite\"\n\ninstances = [\"path:4+nonbip-yes\"]\n").unwrap();
        assert!(matches!(c.build(), Err(ConfigError::Semantic { line: 4, .. })));
    }

    #[test]
    fn bundled_configs_parse() {
        for (name, text) in BUNDLED {
            let c = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            c.build().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
