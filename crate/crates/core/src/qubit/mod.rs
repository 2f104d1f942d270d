//! Dephasing-qubit oracle for Walsh-modulated sensing.
//!
//! A control protocol is a [`ControlMatrix`] of constant-Hamiltonian rows.
//! [`propagate`] integrates it exactly against a [`NoiseTrace`] by composing
//! closed-form SU(2) exponentials; [`analytic_protocol`] gives the weak-noise
//! phase `φ_k = γ ∫ W_k(t/T) b(t) dt` and fidelity `P_k = (1 + sin φ_k)/2`.
//!
//! Hamiltonian convention: `H = (Ω/2) n̂·σ + (γ b(t)/2) σ_z`. With the factor
//! one half the accumulated Bloch-sphere phase is exactly `γ ∫ b`, so the
//! unitary and analytic paths share one `γ`.

mod control;
mod noise;
mod protocol;
mod su2;

pub use control::{build_wdd_control, build_wdd_control_native, Axis, ControlMatrix, ControlRow};
pub use noise::{NoiseKind, NoiseParameters, NoiseTrace, Polynomial, SegmentIntegral};
pub use protocol::{
    analytic_phase, analytic_protocol, batch_fidelities, propagate, propagator, FidelityMethod, FidelityVector,
    DEFAULT_PI_TIME_RATIO, REFINEMENT,
};
pub use su2::{QubitState, Su2};
