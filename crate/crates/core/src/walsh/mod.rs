//! Walsh and Rademacher functions in Paley order.
//!
//! Two binary conventions coexist. The *standard* form `W̄_l` starts at 0 and
//! is used for timing (its bit flips are pulse locations); the *complement*
//! form `W_l = W̄_l ⊕ 1` starts at 1 and is used for synthesis, where the
//! signed mapping `b → 2b − 1` turns `W_0` into the constant `+1`.
//!
//! All evaluation is exact segment-index arithmetic: a Rademacher of order
//! `j` on a grid of `2^m` slots is simply bit `m − 1 − j` of the slot index.

mod index;
mod moments;
mod transform;
mod waveform;

pub use index::PaleyIndex;
pub use moments::moment;
pub use transform::{decompose, fwht_in_place, synthesize, WalshSpectrum};
pub use waveform::{
    hamming_order, rademacher_bit, rademacher_eval, sample_grid, signed_waveform, transition_points, transition_slots,
    walsh_bit, walsh_eval, BinaryWaveform, SignedWaveform, Variant, MAX_GRID_EXPONENT,
};

/// Reverses the low `bits` bits of `value`.
#[inline]
pub(crate) fn bit_reverse(value: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        value.reverse_bits() >> (usize::BITS - bits)
    }
}
