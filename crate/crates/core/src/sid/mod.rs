//! Fixed-point Walsh system identification.
//!
//! Fidelities are quantised to 13-bit words, doubled by a left shift, offset
//! by full scale, and mapped through a `2^14`-entry arcsin table to phase
//! words `γ T X_k` (full scale = π/2). The reconstruction streams
//! `Σ_k (γ T X_k) W_k` through the Sum Weights datapath and a divider by `D`.

mod estimate;
mod metrics;
mod pipeline;
mod table;

pub use estimate::{
    quantize_fidelity, shift_and_offset, weights_estimate, Divisor, FidelityWord, PhaseWord, WeightWord,
};
pub use metrics::{full_scale_field, reference_lsb, upsample, ErrorMetrics};
pub use pipeline::{reconstruct, sid_pipeline, ReconstructionStream, SidRun, SidStatus};
pub use table::{ArcsinTable, ARCSIN_ENTRIES};
