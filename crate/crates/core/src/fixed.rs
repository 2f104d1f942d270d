//! 14-bit sign-magnitude fixed-point words.
//!
//! Every datapath in the controller (weights, DDS outputs, DAC words, arcsin
//! table entries) carries one sign bit and 13 magnitude bits, so the value
//! range is `±(2^13 − 1)` LSB and full scale is `8191`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude bits.
pub const MAGNITUDE_BITS: u32 = 13;
/// Total word width including sign.
pub const WORD_BITS: u32 = MAGNITUDE_BITS + 1;
/// Largest magnitude, `2^13 − 1`.
pub const FULL_SCALE: i32 = (1 << MAGNITUDE_BITS) - 1;

/// Round half away from zero, so `round(−x) = −round(x)`.
#[inline]
pub fn round_half_up(x: f64) -> i64 {
    let mag = (x.abs() + 0.5).floor() as i64;
    if x < 0.0 {
        -mag
    } else {
        mag
    }
}

/// Integer division rounding half away from zero.
#[inline]
pub fn div_round(numerator: i64, denominator: i64) -> i64 {
    assert!(denominator != 0, "division by zero");
    let neg = (numerator < 0) ^ (denominator < 0);
    let (n, d) = (numerator.unsigned_abs(), denominator.unsigned_abs());
    let q = ((2 * n + d) / (2 * d)) as i64;
    if neg {
        -q
    } else {
        q
    }
}

/// A 14-bit sign-magnitude word. Stored as its integer value in LSB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub struct FixedWord(i16);

impl FixedWord {
    pub const ZERO: FixedWord = FixedWord(0);
    pub const MAX: FixedWord = FixedWord(FULL_SCALE as i16);
    pub const MIN: FixedWord = FixedWord(-FULL_SCALE as i16);

    /// Exact construction from an LSB count; errors outside `±8191`.
    pub fn new(lsb: i32) -> Result<Self> {
        if lsb.abs() > FULL_SCALE {
            Err(Error::Domain { what: "fixed-point word", value: f64::from(lsb), domain: "±8191 LSB" })
        } else {
            Ok(FixedWord(lsb as i16))
        }
    }

    /// Clamps to full scale; the flag reports whether clamping happened.
    pub fn saturating(lsb: i64) -> (Self, bool) {
        let clamped = lsb.clamp(-i64::from(FULL_SCALE), i64::from(FULL_SCALE));
        (FixedWord(clamped as i16), clamped != lsb)
    }

    /// Quantises a fraction of full scale, `value · 8191`, rounding half up.
    pub fn from_fraction(value: f64) -> Result<Self> {
        if !value.is_finite() || value.abs() > 1.0 {
            return Err(Error::Domain { what: "full-scale fraction", value, domain: "[-1, 1]" });
        }
        Ok(FixedWord(round_half_up(value * f64::from(FULL_SCALE)) as i16))
    }

    /// Builds a word from sign bit and 13-bit magnitude.
    pub fn from_parts(negative: bool, magnitude: u16) -> Result<Self> {
        let mag = i32::from(magnitude);
        Self::new(if negative { -mag } else { mag })
    }

    #[inline]
    pub const fn lsb(self) -> i32 {
        self.0 as i32
    }

    #[inline]
    pub const fn is_negative(self) -> bool {
        self.0 < 0
    }

    #[inline]
    pub const fn magnitude(self) -> u16 {
        self.0.unsigned_abs()
    }

    /// Value as a fraction of full scale.
    #[inline]
    pub fn to_fraction(self) -> f64 {
        f64::from(self.0) / f64::from(FULL_SCALE)
    }

    /// Raw 14-bit pattern: sign in bit 13, magnitude in bits 0..13.
    pub fn to_bits(self) -> u16 {
        (u16::from(self.is_negative()) << MAGNITUDE_BITS) | self.magnitude()
    }

    pub fn from_bits(bits: u16) -> Self {
        let mag = (bits & FULL_SCALE as u16) as i16;
        FixedWord(if bits >> MAGNITUDE_BITS & 1 == 1 { -mag } else { mag })
    }
}

impl TryFrom<i32> for FixedWord {
    type Error = Error;
    fn try_from(value: i32) -> Result<Self> {
        FixedWord::new(value)
    }
}

impl From<FixedWord> for i32 {
    fn from(value: FixedWord) -> Self {
        value.lsb()
    }
}

impl std::ops::Neg for FixedWord {
    type Output = FixedWord;
    fn neg(self) -> FixedWord {
        FixedWord(-self.0)
    }
}
