use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::{FixedWord, FULL_SCALE, WORD_BITS};

/// Phase-word width of the DDS: one turn is `2^13` LSB.
pub const DDS_PHASE_BITS: u32 = 13;
const DDS_LEN: usize = 1 << DDS_PHASE_BITS;

/// Synthesizer mode. The 2-bit code enables the amplitude arbitrator (bit 0)
/// and the phase arbitrator (bit 1); QAM enables both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SynthMode {
    #[serde(rename = "AM")]
    Am,
    #[serde(rename = "PM")]
    Pm,
    #[serde(rename = "QAM")]
    Qam,
}

impl SynthMode {
    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0b01 => Ok(SynthMode::Am),
            0b10 => Ok(SynthMode::Pm),
            0b11 => Ok(SynthMode::Qam),
            _ => Err(Error::Config(format!("synth.mode code {code:#04b} selects no arbitrator"))),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            SynthMode::Am => 0b01,
            SynthMode::Pm => 0b10,
            SynthMode::Qam => 0b11,
        }
    }

    fn uses_amplitude(self) -> bool {
        self.code() & 0b01 != 0
    }

    fn uses_phase(self) -> bool {
        self.code() & 0b10 != 0
    }

    /// Clock cycles from channel bits to a valid I/Q word.
    pub fn latency_cycles(self) -> u32 {
        match self {
            SynthMode::Am | SynthMode::Pm => 2,
            SynthMode::Qam => 4,
        }
    }
}

impl std::str::FromStr for SynthMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "AM" => Ok(SynthMode::Am),
            "PM" | "ΦM" | "PHM" => Ok(SynthMode::Pm),
            "QAM" => Ok(SynthMode::Qam),
            other => Err(Error::Config(format!("unknown synth.mode {other:?} (expected AM, PM or QAM)"))),
        }
    }
}

/// Filter Synthesizer programming.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub mode: SynthMode,
    /// One weight per channel. In AM these are amplitudes; in PM they are phase words.
    pub weights: Vec<FixedWord>,
    /// Phase-arbitrator weights for QAM; defaults to `weights`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_weights: Option<Vec<FixedWord>>,
    /// Carrier frequency in rad/s; carried as metadata only.
    #[serde(default)]
    pub carrier_frequency: f64,
}

impl SynthConfig {
    pub fn new(mode: SynthMode, weights: Vec<FixedWord>) -> Self {
        SynthConfig { mode, weights, phase_weights: None, carrier_frequency: 0.0 }
    }

    pub fn validate(&self, channels: usize) -> Result<()> {
        if self.weights.len() != channels {
            return Err(Error::LengthMismatch { expected: channels, actual: self.weights.len() });
        }
        if let Some(p) = &self.phase_weights {
            if p.len() != channels {
                return Err(Error::LengthMismatch { expected: channels, actual: p.len() });
            }
        }
        if !self.carrier_frequency.is_finite() {
            return Err(Error::Config("synth.carrier_frequency must be finite".into()));
        }
        Ok(())
    }

    fn phase_weights(&self) -> &[FixedWord] {
        self.phase_weights.as_deref().unwrap_or(&self.weights)
    }
}

/// Sum Weights result at full accumulator width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccumulatorOutput {
    pub sum: i64,
    /// `ceil(14 + log2 n)` bits including sign.
    pub width: u32,
    /// Set if `sum` does not fit `width`; unreachable for valid words.
    pub overflow: bool,
}

impl AccumulatorOutput {
    /// Saturating conversion to a 14-bit DAC word; the flag reports clamping.
    pub fn to_dac(self) -> (FixedWord, bool) {
        let (word, clamped) = FixedWord::saturating(self.sum);
        (word, clamped || self.overflow)
    }
}

/// Accumulator width `ceil(14 + log2 n)`.
pub fn accumulator_width(n: usize) -> u32 {
    WORD_BITS + (n.max(1) as u64).next_power_of_two().trailing_zeros()
}

/// `Σ_k (±X_k)`, taking `+X_k` where channel `k` is 1 and `−X_k` where it is 0.
pub fn sum_weights(bits: &[u8], weights: &[FixedWord]) -> Result<AccumulatorOutput> {
    if bits.len() != weights.len() {
        return Err(Error::LengthMismatch { expected: weights.len(), actual: bits.len() });
    }
    let sum: i64 =
        bits.iter().zip(weights).map(|(&b, w)| if b == 1 { i64::from(w.lsb()) } else { -i64::from(w.lsb()) }).sum();
    let width = accumulator_width(weights.len());
    let limit = (1i64 << (width - 1)) - 1;
    Ok(AccumulatorOutput { sum, width, overflow: sum.abs() > limit })
}

/// Wraps an accumulator value onto the 13-bit phase circle.
#[inline]
pub fn phase_word(sum: i64) -> u16 {
    sum.rem_euclid(DDS_LEN as i64) as u16
}

fn dds_table() -> &'static [(FixedWord, FixedWord)] {
    static TABLE: OnceLock<Vec<(FixedWord, FixedWord)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let fs = f64::from(FULL_SCALE);
        (0..DDS_LEN)
            .map(|w| {
                let phase = std::f64::consts::TAU * w as f64 / DDS_LEN as f64;
                let (sin, cos) = phase.sin_cos();
                (
                    FixedWord::saturating(crate::fixed::round_half_up(cos * fs)).0,
                    FixedWord::saturating(crate::fixed::round_half_up(sin * fs)).0,
                )
            })
            .collect()
    })
}

/// `(cos, sin)` of `word · 2π / 2^13`; the word wraps.
pub fn dds_lookup(word: u16) -> (FixedWord, FixedWord) {
    dds_table()[usize::from(word) % DDS_LEN]
}

/// Reduced-precision product: only sign and the top six magnitude bits of
/// each operand reach the multiplier.
pub fn qam_multiply(a: FixedWord, b: FixedWord) -> FixedWord {
    const DROP: u32 = 7;
    let mag = (u32::from(a.magnitude() >> DROP) * u32::from(b.magnitude() >> DROP)) << 1;
    FixedWord::from_parts(a.is_negative() != b.is_negative() && mag != 0, mag as u16).expect("63·63·2 fits 13 bits")
}

/// Sum Weights, arbitrators and output registers, clocked on `clk̄`.
#[derive(Debug, Clone)]
pub struct FilterSynthesizer {
    cfg: SynthConfig,
    sum_am: Option<AccumulatorOutput>,
    sum_pm: Option<AccumulatorOutput>,
    align_am: Option<FixedWord>,
    dds: Option<(FixedWord, FixedWord)>,
    product: Option<(FixedWord, FixedWord)>,
    out: Option<(FixedWord, FixedWord)>,
    saturated: bool,
    last_sum: i64,
}

impl FilterSynthesizer {
    pub fn new(cfg: SynthConfig, channels: usize) -> Result<Self> {
        cfg.validate(channels)?;
        Ok(FilterSynthesizer {
            cfg,
            sum_am: None,
            sum_pm: None,
            align_am: None,
            dds: None,
            product: None,
            out: None,
            saturated: false,
            last_sum: 0,
        })
    }

    pub fn config(&self) -> &SynthConfig {
        &self.cfg
    }

    /// Clears pipeline registers; the sticky flag survives.
    pub fn flush(&mut self) {
        self.sum_am = None;
        self.sum_pm = None;
        self.align_am = None;
        self.dds = None;
        self.product = None;
        self.out = None;
    }

    /// Clears pipeline registers and the sticky flag.
    pub fn reset(&mut self) {
        self.flush();
        self.saturated = false;
    }

    fn dac(&mut self, acc: AccumulatorOutput) -> FixedWord {
        let (word, clamped) = acc.to_dac();
        self.saturated |= clamped;
        word
    }

    /// `clk̄` edge with the channel bits and `data_valid` seen just before it.
    pub fn clk_bar_edge(&mut self, bits: &[u8], data_valid: bool) -> Result<()> {
        let mode = self.cfg.mode;
        let (sum_am, sum_pm) = (self.sum_am, self.sum_pm);
        match mode {
            SynthMode::Am => {
                self.out = sum_am.map(|acc| (self.dac(acc), FixedWord::ZERO));
            }
            SynthMode::Pm => {
                self.out = sum_pm.map(|acc| dds_lookup(phase_word(acc.sum)));
            }
            SynthMode::Qam => {
                self.out = self.product;
                self.product = match (self.align_am, self.dds) {
                    (Some(a), Some((cos, sin))) => Some((qam_multiply(a, cos), qam_multiply(a, sin))),
                    _ => None,
                };
                self.align_am = sum_am.map(|acc| self.dac(acc));
                self.dds = sum_pm.map(|acc| dds_lookup(phase_word(acc.sum)));
            }
        }
        self.sum_am = match data_valid && mode.uses_amplitude() {
            true => Some(sum_weights(bits, &self.cfg.weights)?),
            false => None,
        };
        self.sum_pm = match data_valid && mode.uses_phase() {
            true => Some(sum_weights(bits, self.cfg.phase_weights())?),
            false => None,
        };
        if let Some(acc) = self.sum_am.or(self.sum_pm) {
            self.last_sum = acc.sum;
        }
        Ok(())
    }

    /// Registered I/Q output, if valid.
    pub fn output(&self) -> Option<(FixedWord, FixedWord)> {
        self.out
    }

    /// Most recent accumulator value (amplitude path when present).
    pub fn accumulator(&self) -> i64 {
        self.last_sum
    }

    /// Sticky DAC saturation flag.
    pub fn saturated(&self) -> bool {
        self.saturated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walsh::{sample_grid, synthesize, PaleyIndex, Variant, WalshSpectrum};

    fn w(lsb: i32) -> FixedWord {
        FixedWord::new(lsb).unwrap()
    }

    fn channel_bits(n: usize, slot: usize) -> Vec<u8> {
        let m = n.trailing_zeros();
        (0..n)
            .map(|k| sample_grid(PaleyIndex::from_u8(k as u8), m, Variant::Complement).unwrap().bits()[slot])
            .collect()
    }

    #[test]
    fn four_level_envelope() {
        let weights = vec![w(4096), w(0), w(0), w(2048)];
        let sums: Vec<i64> = (0..4).map(|s| sum_weights(&channel_bits(4, s), &weights).unwrap().sum).collect();
        assert_eq!(sums, vec![6144, 2048, 2048, 6144]);
        let spec = WalshSpectrum::sparse(4, &[(0, 4096.0), (3, 2048.0)]).unwrap();
        let oracle = synthesize(&spec, 2).unwrap();
        for (s, o) in sums.iter().zip(oracle) {
            assert_eq!(*s as f64, o);
        }
    }

    #[test]
    fn zero_weights_and_width() {
        let out = sum_weights(&[1, 0, 1, 0], &[FixedWord::ZERO; 4]).unwrap();
        assert_eq!(out.sum, 0);
        let out = sum_weights(&[1; 8], &[FixedWord::MAX; 8]).unwrap();
        assert_eq!((out.sum, out.width, out.overflow), (8 * 8191, 17, false));
        assert_eq!(out.to_dac(), (FixedWord::MAX, true));
        assert_eq!(accumulator_width(1), 14);
        assert_eq!(accumulator_width(256), 22);
    }

    #[test]
    fn dds_cardinal_points() {
        assert_eq!(dds_lookup(0), (FixedWord::MAX, FixedWord::ZERO));
        assert_eq!(dds_lookup(1 << 11), (FixedWord::ZERO, FixedWord::MAX));
        assert_eq!(dds_lookup(1 << 12), (FixedWord::MIN, FixedWord::ZERO));
        assert_eq!(phase_word(-1), 8191);
        assert_eq!(phase_word(8192 + 5), 5);
    }

    #[test]
    fn qam_product_uses_seven_msbs() {
        assert_eq!(qam_multiply(FixedWord::MAX, FixedWord::MAX).lsb(), 63 * 63 * 2);
        assert_eq!(qam_multiply(w(-8191), w(4096)).lsb(), -(63 * 32 * 2));
        assert_eq!(qam_multiply(w(127), FixedWord::MAX).lsb(), 0);
    }

    #[test]
    fn mode_codes() {
        assert!(SynthMode::from_code(0).is_err());
        for m in [SynthMode::Am, SynthMode::Pm, SynthMode::Qam] {
            assert_eq!(SynthMode::from_code(m.code()).unwrap(), m);
        }
        assert_eq!("qam".parse::<SynthMode>().unwrap(), SynthMode::Qam);
        assert!("fm".parse::<SynthMode>().is_err());
    }

    fn latency(mode: SynthMode) -> usize {
        let mut synth = FilterSynthesizer::new(SynthConfig::new(mode, vec![FixedWord::ZERO; 2]), 2).unwrap();
        let mut edges = 0;
        synth.clk_bar_edge(&[1, 1], true).unwrap();
        while synth.output().is_none() {
            synth.clk_bar_edge(&[1, 1], true).unwrap();
            edges += 1;
        }
        edges
    }

    #[test]
    fn pipeline_depths() {
        assert_eq!(latency(SynthMode::Am), 1);
        assert_eq!(latency(SynthMode::Pm), 1);
        assert_eq!(latency(SynthMode::Qam), 3);
    }

    #[test]
    fn pm_zero_sum_is_full_scale_cosine() {
        let mut synth = FilterSynthesizer::new(SynthConfig::new(SynthMode::Pm, vec![FixedWord::ZERO; 2]), 2).unwrap();
        synth.clk_bar_edge(&[1, 0], true).unwrap();
        synth.clk_bar_edge(&[1, 0], true).unwrap();
        assert_eq!(synth.output(), Some((FixedWord::MAX, FixedWord::ZERO)));
    }
}
