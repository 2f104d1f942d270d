use serde::{Deserialize, Serialize};

use super::ArcsinTable;
use crate::error::{Error, Result};
use crate::fixed::{div_round, round_half_up, FixedWord, FULL_SCALE};

/// `γ T X_k` as a word with `±π/2` at full scale.
pub type PhaseWord = FixedWord;
/// Divider output `round(γ T X_k / D)`.
pub type WeightWord = FixedWord;

/// 13-bit fidelity word: `P` in steps of `1/8191`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub struct FidelityWord(u16);

impl FidelityWord {
    pub fn new(word: u16) -> Result<Self> {
        if i32::from(word) > FULL_SCALE {
            return Err(Error::Domain { what: "fidelity word", value: f64::from(word), domain: "0..=8191" });
        }
        Ok(FidelityWord(word))
    }

    pub const fn value(self) -> u16 {
        self.0
    }

    pub fn probability(self) -> f64 {
        f64::from(self.0) / f64::from(FULL_SCALE)
    }
}

impl TryFrom<u16> for FidelityWord {
    type Error = Error;
    fn try_from(word: u16) -> Result<Self> {
        FidelityWord::new(word)
    }
}

impl From<FidelityWord> for u16 {
    fn from(w: FidelityWord) -> u16 {
        w.0
    }
}

/// `round(P · 8191)`.
pub fn quantize_fidelity(p: f64) -> Result<FidelityWord> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain { what: "fidelity", value: p, domain: "[0, 1]" });
    }
    FidelityWord::new(round_half_up(p * f64::from(FULL_SCALE)) as u16)
}

/// Shift left one bit and subtract full scale: `u = 2w − 8191`, i.e. `2P − 1`.
#[inline]
pub fn shift_and_offset(word: FidelityWord) -> i16 {
    ((word.0 << 1) as i32 - FULL_SCALE) as i16
}

/// Integer divisor `D`, dimensionless: `D = γ T B_fs / (π/2)` for a DAC full
/// scale `B_fs` in field units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub struct Divisor(u16);

impl Divisor {
    pub const UNITY: Divisor = Divisor(1);

    /// `1 ≤ d ≤ 8191` (a positive 14-bit word).
    pub fn new(d: u16) -> Result<Self> {
        if d == 0 || i32::from(d) > FULL_SCALE {
            return Err(Error::Domain { what: "divisor D", value: f64::from(d), domain: "1..=8191" });
        }
        Ok(Divisor(d))
    }

    /// Divisor giving a DAC full scale of `full_scale_field`, rounded.
    pub fn from_physical(gamma: f64, window: f64, full_scale_field: f64) -> Result<Self> {
        let d = gamma * window * full_scale_field / std::f64::consts::FRAC_PI_2;
        if !d.is_finite() || d < 0.5 || d >= f64::from(FULL_SCALE) + 0.5 {
            return Err(Error::Domain { what: "divisor D", value: d, domain: "rounds into 1..=8191" });
        }
        Divisor::new(round_half_up(d) as u16)
    }

    pub const fn value(self) -> u16 {
        self.0
    }

    /// Field value of one DAC LSB: `(π/2) / (γ T D)` per LSB of phase.
    pub fn field_per_lsb(self, gamma: f64, window: f64) -> f64 {
        std::f64::consts::FRAC_PI_2 * f64::from(self.0) / (gamma * window * f64::from(FULL_SCALE))
    }

    /// Saturating `round(dividend / D)`; the flag reports saturation.
    pub fn divide(self, dividend: i64) -> (FixedWord, bool) {
        FixedWord::saturating(div_round(dividend, i64::from(self.0)))
    }
}

impl TryFrom<u16> for Divisor {
    type Error = Error;
    fn try_from(d: u16) -> Result<Self> {
        Divisor::new(d)
    }
}

impl From<Divisor> for u16 {
    fn from(d: Divisor) -> u16 {
        d.0
    }
}

/// Phase word `γ T X_k` from a fidelity word (table stage only).
pub fn phase_estimate(word: FidelityWord) -> PhaseWord {
    ArcsinTable::get().lookup(shift_and_offset(word))
}

/// `round(arcsin(2P − 1) / D)` through shift, offset, table and divider.
///
/// Returns the phase word, the quotient, and the divider saturation flag.
pub fn weights_estimate(word: FidelityWord, divisor: Divisor) -> (PhaseWord, WeightWord, bool) {
    let phase = phase_estimate(word);
    let (quotient, saturated) = divisor.divide(i64::from(phase.lsb()));
    (phase, quotient, saturated)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantizer() {
        assert_eq!(quantize_fidelity(0.0).unwrap().value(), 0);
        assert_eq!(quantize_fidelity(1.0).unwrap().value(), 8191);
        assert_eq!(quantize_fidelity(0.5).unwrap().value(), 4096);
        assert!(quantize_fidelity(1.0001).is_err());
        assert!(quantize_fidelity(f64::NAN).is_err());
        assert!(FidelityWord::new(8192).is_err());
    }

    #[test]
    fn shift_register_offset() {
        assert_eq!(shift_and_offset(FidelityWord(0)), -8191);
        assert_eq!(shift_and_offset(FidelityWord(8191)), 8191);
        assert_eq!(shift_and_offset(FidelityWord(4096)), 1);
    }

    #[test]
    fn estimate_anchors() {
        let d = Divisor::new(4).unwrap();
        let (phase, x, sat) = weights_estimate(quantize_fidelity(0.5).unwrap(), d);
        // u = 1 is a hair above zero
        assert_eq!((phase.lsb(), x.lsb(), sat), (1, 0, false));
        let (phase, x, _) = weights_estimate(FidelityWord(8191), d);
        assert_eq!((phase, x.lsb()), (FixedWord::MAX, 2048));
    }

    #[test]
    fn divisor_range() {
        assert!(Divisor::new(0).is_err());
        assert!(Divisor::new(8192).is_err());
        assert_eq!(Divisor::from_physical(2.0, 1.0, std::f64::consts::PI).unwrap().value(), 4);
        let d = Divisor::new(16).unwrap();
        assert_eq!(d.divide(-8).0.lsb(), -1);
        assert_eq!(d.divide(7).0.lsb(), 0);
        assert_eq!(Divisor::UNITY.divide(9000), (FixedWord::MAX, true));
    }
}
