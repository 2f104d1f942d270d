use serde::{Deserialize, Serialize};

use super::{bit_reverse, MAX_GRID_EXPONENT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Walsh weights `X_0 .. X_{N−1}` in Paley order, with the acquisition window `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalshSpectrum<S> {
    weights: Vec<S>,
    /// Window length in seconds; 1 for normalised time.
    pub duration: f64,
}

impl<S: Scalar> WalshSpectrum<S> {
    /// Builds a spectrum; the truncation `N` must be a power of two.
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if !weights.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(weights.len()));
        }
        Ok(WalshSpectrum { weights, duration: 1.0 })
    }

    /// A length-`n` spectrum with the listed `(k, X_k)` entries set.
    pub fn sparse(n: usize, entries: &[(usize, S)]) -> Result<Self> {
        let mut weights = vec![S::zero(); n];
        for (k, x) in entries {
            let slot = weights.get_mut(*k).ok_or(Error::SpectrumTooLong { terms: k + 1, grid: n })?;
            *slot = x.clone();
        }
        Self::new(weights)
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = duration;
        self
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<S> {
        self.weights
    }

    /// Truncation `N`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Keeps the first `n` weights (a power of two ≤ `N`).
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let n = n.min(self.weights.len());
        Ok(WalshSpectrum { weights: self.weights[..n].to_vec(), duration: self.duration })
    }
}

/// Unnormalised in-place Walsh-Hadamard butterfly in natural (Hadamard) order.
pub fn fwht_in_place<S: Scalar>(data: &mut [S]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let sum = a.clone() + b.clone();
                let diff = a.clone() - b.clone();
                *a = sum;
                *b = diff;
            }
        }
        h *= 2;
    }
}

fn grid_exponent(len: usize) -> Result<u32> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let m = len.trailing_zeros();
    if m > MAX_GRID_EXPONENT {
        return Err(Error::GridTooFine(m));
    }
    Ok(m)
}

/// Walsh coefficients `X_k = 2^{−m} Σ_i signal_i W_k^{(±1)}(i)` for every `k < 2^m`.
///
/// On a `2^m` grid the Paley function `W_k` equals Hadamard row `bitrev_m(k)`,
/// so one fast transform followed by a bit-reversal gather gives the whole
/// Paley-ordered spectrum.
pub fn decompose<S: Scalar>(signal: &[S]) -> Result<WalshSpectrum<S>> {
    let m = grid_exponent(signal.len())?;
    let mut work = signal.to_vec();
    fwht_in_place(&mut work);
    let scale = S::from_i64(1 << m);
    let weights = (0..work.len()).map(|k| work[bit_reverse(k, m)].clone() / scale.clone()).collect();
    WalshSpectrum::new(weights)
}

/// Samples `b̂_i = Σ_k X_k W_k^{(±1)}(i)` on a `2^m` grid.
pub fn synthesize<S: Scalar>(spectrum: &WalshSpectrum<S>, m: u32) -> Result<Vec<S>> {
    if m > MAX_GRID_EXPONENT {
        return Err(Error::GridTooFine(m));
    }
    let len = 1usize << m;
    if spectrum.len() > len {
        return Err(Error::SpectrumTooLong { terms: spectrum.len(), grid: len });
    }
    let mut work = vec![S::zero(); len];
    for (k, x) in spectrum.weights().iter().enumerate() {
        work[bit_reverse(k, m)] = x.clone();
    }
    fwht_in_place(&mut work);
    Ok(work)
}
