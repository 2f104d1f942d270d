use std::fmt;

use serde::{Deserialize, Serialize};

use super::PaleyIndex;
use crate::error::{Error, Result};

/// Largest supported grid: `2^16` samples.
pub const MAX_GRID_EXPONENT: u32 = 16;

/// Binary Walsh convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `W̄_l`, starts at 0; used for timing.
    #[default]
    Standard,
    /// `W_l = W̄_l ⊕ 1`, starts at 1; used for synthesis.
    Complement,
}

impl Variant {
    #[inline]
    pub(crate) fn apply(self, standard_bit: u8) -> u8 {
        match self {
            Variant::Standard => standard_bit,
            Variant::Complement => standard_bit ^ 1,
        }
    }
}

/// A `{0,1}` waveform on a uniform grid of `2^m` segments of `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryWaveform {
    bits: Vec<u8>,
    variant: Variant,
}

impl BinaryWaveform {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn grid_exponent(&self) -> u32 {
        self.bits.len().trailing_zeros()
    }

    /// Applies `b → 2b − 1`.
    pub fn to_signed(&self) -> SignedWaveform {
        SignedWaveform { samples: self.bits.iter().map(|&b| 2 * b as i8 - 1).collect() }
    }

    /// Indices `i` with `bits[i] != bits[i − 1]`.
    pub fn transitions(&self) -> Vec<usize> {
        self.bits.windows(2).enumerate().filter(|(_, w)| w[0] != w[1]).map(|(i, _)| i + 1).collect()
    }
}

impl fmt::Display for BinaryWaveform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A `{−1,+1}` waveform on the same grid as its binary source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedWaveform {
    samples: Vec<i8>,
}

impl SignedWaveform {
    pub fn samples(&self) -> &[i8] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn check_unit_interval(x: f64) -> Result<()> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { what: "x", value: x, domain: "[0, 1)" })
    }
}

/// Rademacher bit `R_j(x) = [1 − sgn sin(2^{j+1} π x)] / 2`.
///
/// Evaluated by segment index: `floor(x · 2^{j+1})` even gives 0, odd gives 1.
pub fn rademacher_eval(j: u32, x: f64) -> Result<u8> {
    check_unit_interval(x)?;
    if j > 30 {
        return Err(Error::Domain { what: "rademacher order", value: f64::from(j), domain: "0..=30" });
    }
    // scaling by a power of two is exact
    let segment = (x * (1u64 << (j + 1)) as f64).floor() as u64;
    Ok((segment & 1) as u8)
}

/// `R_j` sampled at `slot` of a `2^m` grid; requires `j < m`.
#[inline]
pub fn rademacher_bit(j: u32, slot: usize, m: u32) -> u8 {
    debug_assert!(j < m);
    ((slot >> (m - 1 - j)) & 1) as u8
}

/// Standard `W̄_l` at `slot` of a `2^m` grid; requires `m ≥ bit_width(l)`.
#[inline]
pub fn walsh_bit(l: PaleyIndex, slot: usize, m: u32) -> u8 {
    let mut out = 0u8;
    for j in 0..l.bit_width() {
        if l.bit(j) {
            out ^= rademacher_bit(j, slot, m);
        }
    }
    out
}

/// Walsh bit `⊕_j b_j R_j(x)`, inverted for the complement variant.
pub fn walsh_eval(l: PaleyIndex, x: f64, variant: Variant) -> Result<u8> {
    check_unit_interval(x)?;
    let mut out = 0u8;
    for j in 0..l.bit_width() {
        if l.bit(j) {
            out ^= rademacher_eval(j, x)?;
        }
    }
    Ok(variant.apply(out))
}

fn check_grid(l: PaleyIndex, m: u32) -> Result<()> {
    if m > MAX_GRID_EXPONENT {
        return Err(Error::GridTooFine(m));
    }
    if m < l.bit_width() {
        return Err(Error::GridTooCoarse { order: l.value(), grid: m, needed: l.bit_width() });
    }
    Ok(())
}

/// Samples `W̄_l` (or `W_l`) on a `2^m` grid; finer grids replicate bits.
pub fn sample_grid(l: PaleyIndex, m: u32, variant: Variant) -> Result<BinaryWaveform> {
    check_grid(l, m)?;
    let bits = (0..1usize << m).map(|i| variant.apply(walsh_bit(l, i, m))).collect();
    Ok(BinaryWaveform { bits, variant })
}

/// Signed complement waveform `W_l^{(±1)}` on a `2^m` grid (so `W_0 ≡ +1`).
pub fn signed_waveform(l: PaleyIndex, m: u32) -> Result<SignedWaveform> {
    Ok(sample_grid(l, m, Variant::Complement)?.to_signed())
}

/// Bit-flip slots of `W̄_l` on its native `2^{m(l)}` grid.
pub fn transition_slots(l: PaleyIndex) -> Vec<usize> {
    let m = l.bit_width();
    (1..1usize << m).filter(|&i| walsh_bit(l, i, m) != walsh_bit(l, i - 1, m)).collect()
}

/// Pulse times of `WDD_l` in normalised time: the bit flips of `W̄_l`.
///
/// Values are dyadic rationals and therefore exact in `f64`.
pub fn transition_points(l: PaleyIndex) -> Vec<f64> {
    let scale = l.native_len() as f64;
    transition_slots(l).into_iter().map(|i| i as f64 / scale).collect()
}

/// Error-suppression order of `WDD_l`: the Hamming weight of `l`.
#[inline]
pub fn hamming_order(l: PaleyIndex) -> u32 {
    l.hamming()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: u8) -> PaleyIndex {
        PaleyIndex::from_u8(v)
    }

    #[test]
    fn rademacher_examples() {
        assert_eq!(rademacher_eval(0, 0.25).unwrap(), 0);
        assert_eq!(rademacher_eval(0, 0.75).unwrap(), 1);
        let r3: Vec<u8> = (0..16).map(|k| rademacher_eval(3, k as f64 / 16.0).unwrap()).collect();
        assert_eq!(r3, [0, 1].repeat(8));
    }

    #[test]
    fn rademacher_domain() {
        assert!(rademacher_eval(0, 1.0).is_err());
        assert!(rademacher_eval(0, -0.1).is_err());
        assert!(rademacher_eval(0, f64::NAN).is_err());
        assert!(rademacher_eval(31, 0.5).is_err());
        assert!(rademacher_eval(30, 0.5).is_ok());
    }

    #[test]
    fn walsh_eval_examples() {
        for k in 0..32 {
            let x = k as f64 / 32.0;
            assert_eq!(walsh_eval(idx(0), x, Variant::Standard).unwrap(), 0);
            assert_eq!(walsh_eval(idx(0), x, Variant::Complement).unwrap(), 1);
        }
        let w12: String = (0..16)
            .map(|k| walsh_eval(idx(12), k as f64 / 16.0 + 1.0 / 64.0, Variant::Standard).unwrap().to_string())
            .collect();
        assert_eq!(w12, "0110011001100110");
        assert!(walsh_eval(idx(1), 1.5, Variant::Standard).is_err());
    }

    #[test]
    fn sample_grid_examples() {
        assert_eq!(sample_grid(idx(3), 3, Variant::Complement).unwrap().to_string(), "11000011");
        assert_eq!(sample_grid(idx(3), 4, Variant::Complement).unwrap().to_string(), "1111000000001111");
        assert_eq!(sample_grid(idx(1), 1, Variant::Standard).unwrap().to_string(), "01");
        assert_eq!(sample_grid(idx(12), 4, Variant::Standard).unwrap().to_string(), "0110011001100110");
    }

    #[test]
    fn sample_grid_rejects_coarse_and_huge_grids() {
        assert_eq!(
            sample_grid(idx(12), 3, Variant::Standard),
            Err(Error::GridTooCoarse { order: 12, grid: 3, needed: 4 })
        );
        assert_eq!(sample_grid(idx(0), 17, Variant::Standard), Err(Error::GridTooFine(17)));
        assert_eq!(sample_grid(idx(0), 1, Variant::Standard).unwrap().len(), 2);
    }

    #[test]
    fn variant_start_bits() {
        for l in PaleyIndex::all() {
            let m = l.bit_width();
            assert_eq!(sample_grid(l, m, Variant::Standard).unwrap().bits()[0], 0);
            assert_eq!(sample_grid(l, m, Variant::Complement).unwrap().bits()[0], 1);
        }
    }

    #[test]
    fn transition_examples() {
        assert_eq!(transition_points(idx(3)), vec![2.0 / 8.0, 6.0 / 8.0]);
        assert_eq!(transition_points(idx(1)), vec![0.5]);
        let expected: Vec<f64> = (0..8).map(|k| (2 * k + 1) as f64 / 16.0).collect();
        assert_eq!(transition_points(idx(12)), expected);
        assert!(transition_points(idx(0)).is_empty());
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_order(idx(12)), 2);
        assert_eq!(hamming_order(idx(0)), 0);
        assert_eq!(hamming_order(idx(7)), 3);
        assert!(idx(7).is_thue_morse());
    }

    #[test]
    fn signed_mapping() {
        assert_eq!(signed_waveform(idx(0), 2).unwrap().samples(), &[1, 1, 1, 1]);
        assert_eq!(signed_waveform(idx(3), 2).unwrap().samples(), &[1, -1, -1, 1]);
    }
}
