use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Paley-ordered Walsh index `l` (8-bit, so `0 ≤ l ≤ 255`).
///
/// The binary digits `b_j` of the index choose which Rademacher functions are
/// XOR-combined; the Hamming weight is the error-suppression order of the
/// matching decoupling sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PaleyIndex(u8);

impl PaleyIndex {
    pub const ZERO: PaleyIndex = PaleyIndex(0);
    pub const MAX: PaleyIndex = PaleyIndex(u8::MAX);

    pub fn new(value: u32) -> Result<Self> {
        u8::try_from(value).map(PaleyIndex).map_err(|_| Error::OrderOutOfRange(value))
    }

    #[inline]
    pub const fn from_u8(value: u8) -> Self {
        PaleyIndex(value)
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    /// Binary digit `b_j`.
    #[inline]
    pub const fn bit(self, j: u32) -> bool {
        j < 8 && (self.0 >> j) & 1 == 1
    }

    /// Digits `b_0 .. b_{m-1}`, least significant first.
    pub fn bits(self) -> impl Iterator<Item = bool> {
        (0..self.bit_width()).map(move |j| self.bit(j))
    }

    /// Hamming weight `r`.
    #[inline]
    pub const fn hamming(self) -> u32 {
        self.0.count_ones()
    }

    /// Bit width `m`: position of the highest set bit plus one, and 1 for `l = 0`.
    #[inline]
    pub const fn bit_width(self) -> u32 {
        if self.0 == 0 {
            1
        } else {
            8 - self.0.leading_zeros()
        }
    }

    /// Native segment count `2^m`.
    #[inline]
    pub const fn native_len(self) -> usize {
        1 << self.bit_width()
    }

    /// Membership in the Thue-Morse subset `l = 2^n − 1` (n ≥ 0, so `l = 0` counts).
    #[inline]
    pub const fn is_thue_morse(self) -> bool {
        (self.0 as u16 + 1).is_power_of_two()
    }

    /// All 256 indices in ascending order.
    pub fn all() -> impl Iterator<Item = PaleyIndex> {
        (0..=u8::MAX).map(PaleyIndex)
    }
}

impl From<u8> for PaleyIndex {
    fn from(value: u8) -> Self {
        PaleyIndex(value)
    }
}

impl TryFrom<u32> for PaleyIndex {
    type Error = Error;
    fn try_from(value: u32) -> Result<Self> {
        PaleyIndex::new(value)
    }
}

impl From<PaleyIndex> for u32 {
    fn from(value: PaleyIndex) -> Self {
        u32::from(value.0)
    }
}

impl std::fmt::Display for PaleyIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_matches_value() {
        for l in PaleyIndex::all() {
            let recomposed: u32 = l.bits().enumerate().map(|(j, b)| u32::from(b) << j).sum();
            assert_eq!(recomposed, u32::from(l.value()));
            assert_eq!(l.bits().filter(|&b| b).count() as u32, l.hamming());
        }
    }

    #[test]
    fn bit_width_edge_cases() {
        assert_eq!(PaleyIndex::ZERO.bit_width(), 1);
        assert_eq!(PaleyIndex::from_u8(1).bit_width(), 1);
        assert_eq!(PaleyIndex::from_u8(3).bit_width(), 2);
        assert_eq!(PaleyIndex::from_u8(12).bit_width(), 4);
        assert_eq!(PaleyIndex::MAX.bit_width(), 8);
    }

    #[test]
    fn range_is_enforced() {
        assert!(PaleyIndex::new(255).is_ok());
        assert_eq!(PaleyIndex::new(256), Err(Error::OrderOutOfRange(256)));
    }

    #[test]
    fn thue_morse_members() {
        let members: Vec<u8> = PaleyIndex::all().filter(|l| l.is_thue_morse()).map(|l| l.value()).collect();
        assert_eq!(members, vec![0, 1, 3, 7, 15, 31, 63, 127, 255]);
        // the member of each bit width has the maximal Hamming weight
        for l in PaleyIndex::all().filter(|l| l.is_thue_morse() && l.value() > 0) {
            assert_eq!(l.hamming(), l.bit_width());
        }
    }
}
