use std::sync::OnceLock;

use super::ProtocolError;

/// The one communication round: every node publishes one bit per pass,
/// written once and read after all nodes have written.
#[derive(Debug, Default)]
pub struct NeighborExchange {
    slots: Vec<OnceLock<bool>>,
}

impl NeighborExchange {
    pub fn new(n: usize) -> Self {
        NeighborExchange {
            slots: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn publish(&self, node: usize, value: bool) -> Result<(), ProtocolError> {
        self.slots[node]
            .set(value)
            .map_err(|_| ProtocolError::DuplicatePublication(node))
    }

    pub fn read(&self, node: usize) -> Result<bool, ProtocolError> {
        self.slots
            .get(node)
            .and_then(|s| s.get().copied())
            .ok_or(ProtocolError::MissingPublication(node))
    }
}
