//! Software model of an embedded Walsh-function controller for qubits.
//!
//! The crate is organised by subsystem:
//!
//! * [`walsh`]: exact Walsh/Rademacher mathematics in Paley order, the fast
//!   transform, and dynamical-decoupling pulse extraction.
//! * [`fixed`]: the 14-bit sign-magnitude word used by every datapath.
//! * [`hw`]: a half-cycle accurate simulation of the controller pipeline
//!   (timing sequencer, modulation generator, filter synthesizer).
//! * [`qubit`]: a dephasing-qubit oracle producing Walsh-modulated fidelities.
//! * [`sid`]: the fixed-point Walsh system-identification chain.
//! * [`bench`]: latency/resource cost models against a microcontroller baseline.
//!
//! Numerical code is generic over the scalar type; the aliases below fix the
//! common instantiations.

pub mod bench;
pub mod error;
pub mod fixed;
pub mod hw;
pub mod qubit;
pub mod scalar;
pub mod sid;
pub mod walsh;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact rational used for moment integrals and exact transforms.
pub type Rational = num_rational::Ratio<i128>;

/// Double-precision Walsh spectrum.
pub type Spectrum = walsh::WalshSpectrum<f64>;
/// Single-precision Walsh spectrum.
pub type Spectrum32 = walsh::WalshSpectrum<f32>;
/// Exact Walsh spectrum over rationals.
pub type ExactSpectrum = walsh::WalshSpectrum<Rational>;

/// Double-precision control matrix.
pub type ControlMatrix = qubit::ControlMatrix<f64>;
/// Double-precision qubit state.
pub type QubitState = qubit::QubitState<f64>;
/// Double-precision SU(2) propagator.
pub type Propagator = qubit::Su2<f64>;
