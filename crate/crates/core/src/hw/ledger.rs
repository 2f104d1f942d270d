use serde::{Deserialize, Serialize};

use super::HalfCycle;

/// One measured hop along a latency path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatencyStage {
    pub name: String,
    /// `None` when the run never exercised this hop (e.g. `R = 0`).
    pub half_cycles: Option<u64>,
}

/// Clock-cycle accounting extracted from a simulated trace.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CycleLedger {
    pub path: Vec<LatencyStage>,
    pub variable_change_to_ready: Option<u64>,
    pub reset_to_ready: Option<u64>,
}

impl CycleLedger {
    pub fn push(&mut self, name: &str, half_cycles: Option<u64>) {
        self.path.push(LatencyStage { name: name.to_owned(), half_cycles });
    }

    pub fn stage(&self, name: &str) -> Option<u64> {
        self.path.iter().find(|s| s.name == name).and_then(|s| s.half_cycles)
    }

    /// Sum over the path, if every hop was observed.
    pub fn total(&self) -> Option<HalfCycle> {
        self.path.iter().map(|s| s.half_cycles).sum::<Option<u64>>().map(HalfCycle)
    }

    /// Path total in clock cycles.
    pub fn total_cycles(&self) -> Option<f64> {
        self.total().map(HalfCycle::cycles)
    }

    pub fn variable_change_cycles(&self) -> Option<f64> {
        self.variable_change_to_ready.map(|h| HalfCycle(h).cycles())
    }

    pub fn reset_cycles(&self) -> Option<f64> {
        self.reset_to_ready.map(|h| HalfCycle(h).cycles())
    }
}
