//! Graphs with per-vertex inputs, ground-truth language oracles, instance
//! generators and the text graph format.

mod format;
mod generate;
mod graph;
mod languages;

pub use format::{parse_instance, write_instance};
pub use generate::{
    complete_graph, cycle_graph, generate, path_graph, star_graph, GeneratorSpec, GraphKind, InputKind,
    SpanCorruption,
};
pub use graph::Graph;
pub use languages::{
    find_odd_cycle, is_member, is_nonbipartite, is_valid_spanning_tree, leader_count, parent_map, two_coloring,
    Instance, LanguageId, SpanInput, ROOT_MARKER,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("expected {expected} inputs, got {actual}")]
    InputCount { expected: usize, actual: usize },
    #[error("input of vertex {vertex} is {value:?}, expected 0 or 1")]
    InputFormat { vertex: usize, value: String },
    #[error("unknown language {0:?}")]
    UnknownLanguage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot generate instance: {0}")]
    Generation(String),
}
