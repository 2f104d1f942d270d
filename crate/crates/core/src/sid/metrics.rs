use serde::{Deserialize, Serialize};

use super::Divisor;
use crate::error::{Error, Result};
use crate::fixed::FULL_SCALE;
use crate::qubit::NoiseTrace;

/// Reconstruction error in DAC LSB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    /// Root-mean-square error.
    pub l2_lsb: f64,
    /// Largest absolute error.
    pub linf_lsb: f64,
    pub samples: usize,
}

impl ErrorMetrics {
    /// Compares two equally long sequences.
    pub fn between(estimate: &[f64], reference: &[f64]) -> Result<Self> {
        if estimate.len() != reference.len() {
            return Err(Error::LengthMismatch { expected: reference.len(), actual: estimate.len() });
        }
        if estimate.is_empty() {
            return Err(Error::Config("cannot compare empty signals".into()));
        }
        let (mut sq, mut max) = (0.0f64, 0.0f64);
        for (e, r) in estimate.iter().zip(reference) {
            let d = (e - r).abs();
            sq += d * d;
            max = max.max(d);
        }
        Ok(ErrorMetrics { l2_lsb: (sq / estimate.len() as f64).sqrt(), linf_lsb: max, samples: estimate.len() })
    }
}

/// Repeats each sample `len / samples.len()` times; `len` must be a multiple.
pub fn upsample(samples: &[f64], len: usize) -> Result<Vec<f64>> {
    if samples.is_empty() || !len.is_multiple_of(samples.len()) {
        return Err(Error::LengthMismatch { expected: len, actual: samples.len() });
    }
    let factor = len / samples.len();
    Ok(samples.iter().flat_map(|&s| std::iter::repeat_n(s, factor)).collect())
}

/// Exact cell means of `b` on a `grid`-point partition of `[0, T]`, in DAC LSB
/// for the full scale implied by `D`.
pub fn reference_lsb(noise: &NoiseTrace, gamma: f64, window: f64, divisor: Divisor, grid: usize) -> Vec<f64> {
    let per_lsb = divisor.field_per_lsb(gamma, window);
    let cell = window / grid as f64;
    (0..grid).map(|i| noise.cell_average(i as f64 * cell, (i + 1) as f64 * cell) / per_lsb).collect()
}

/// Full scale of the DAC in field units for divisor `D`.
pub fn full_scale_field(divisor: Divisor, gamma: f64, window: f64) -> f64 {
    divisor.field_per_lsb(gamma, window) * f64::from(FULL_SCALE)
}
