use serde::{Deserialize, Serialize};

use super::estimate::phase_estimate;
use super::{quantize_fidelity, shift_and_offset, upsample, Divisor, ErrorMetrics, PhaseWord};
use crate::error::{Error, Result};
use crate::fixed::FixedWord;
use crate::hw::{sum_weights, CycleLedger, ModulationConfig, ModulationGenerator, Trace};
use crate::qubit::FidelityVector;

/// DAC words streamed once per clock cycle; each segment lasts `t2` cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionStream {
    pub words: Vec<FixedWord>,
    pub t2: u8,
}

impl ReconstructionStream {
    /// One word per Walsh segment.
    pub fn segments(&self) -> Vec<FixedWord> {
        self.words.iter().step_by(usize::from(self.t2)).copied().collect()
    }

    pub fn segments_lsb(&self) -> Vec<f64> {
        self.segments().iter().map(|w| f64::from(w.lsb())).collect()
    }
}

/// Sticky diagnostics of one reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SidStatus {
    pub divider_saturated: bool,
    pub accumulator_overflow: bool,
}

fn check_len(n: usize) -> Result<()> {
    if !n.is_power_of_two() || n > 256 {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(())
}

fn check_t2(t2: u8) -> Result<()> {
    if !(1..=15).contains(&t2) {
        return Err(Error::Config(format!("t2 = {t2} outside 1..=15")));
    }
    Ok(())
}

/// `round(Σ_k ±w_k / D)` per clock cycle, combinationally (no pipeline delay).
pub fn reconstruct(weights: &[FixedWord], divisor: Divisor, t2: u8) -> Result<(ReconstructionStream, SidStatus)> {
    check_len(weights.len())?;
    check_t2(t2)?;
    let mut gen = ModulationGenerator::new(ModulationConfig::new(weights.len() as u16, t2)?)?;
    let mut status = SidStatus::default();
    let mut words = Vec::new();
    gen.clk_bar_edge(true);
    gen.clk_bar_edge(false);
    while gen.data_valid() {
        let acc = sum_weights(gen.bits(), weights)?;
        let (word, sat) = divisor.divide(acc.sum);
        status.accumulator_overflow |= acc.overflow;
        status.divider_saturated |= sat;
        words.push(word);
        gen.clk_bar_edge(false);
    }
    Ok((ReconstructionStream { words, t2 }, status))
}

/// Output of [`sid_pipeline`].
#[derive(Debug, Clone)]
pub struct SidRun {
    pub phases: Vec<PhaseWord>,
    pub stream: ReconstructionStream,
    pub ledger: CycleLedger,
    pub status: SidStatus,
    pub metrics: Option<ErrorMetrics>,
    pub trace: Trace,
}

/// Clocked SID chain: input register (shift, offset), arcsin table, Walsh
/// channels, Sum Weights register, divider.
///
/// Fidelities are presented at cycle 0. `reference` (in DAC LSB, one value
/// per cell of any power-of-two grid) enables the error metrics; the coarser
/// of stream and reference is upsampled by replication.
pub fn sid_pipeline(
    fidelities: &FidelityVector,
    divisor: Divisor,
    t2: u8,
    reference: Option<&[f64]>,
) -> Result<SidRun> {
    fidelities.validate()?;
    let n = fidelities.len();
    check_len(n)?;
    check_t2(t2)?;
    let words = fidelities.p.iter().map(|&p| quantize_fidelity(p)).collect::<Result<Vec<_>>>()?;
    let mut gen = ModulationGenerator::new(ModulationConfig::new(n as u16, t2)?)?;

    let mut trace = Trace::new();
    let sig_in = trace.declare("fidelity_valid");
    let sig_est = trace.declare("estimate_valid");
    let sig_ch = trace.declare("data_valid");
    let sig_sum = trace.declare("sum_valid");
    let sig_out = trace.declare("out_valid");
    let sig_dac = trace.declare("dac");
    let sig_sat = trace.declare("divider_saturated");

    let mut offset_reg: Option<Vec<i16>> = None;
    let mut phase_reg: Option<Vec<PhaseWord>> = None;
    let mut sum_reg: Option<i64> = None;
    let mut out_reg: Option<FixedWord> = None;
    let mut status = SidStatus::default();
    let mut stream = Vec::new();
    let mut streaming = false;
    let horizon = 8 + (u64::from(t2) << n.trailing_zeros());

    for cycle in 0..horizon {
        if cycle > 0 {
            // snapshot of pre-edge values
            let offset_valid = offset_reg.is_some();
            let bits = gen.bits().to_vec();
            let channels_valid = gen.data_valid();
            out_reg = match sum_reg {
                Some(sum) => {
                    let (word, sat) = divisor.divide(sum);
                    status.divider_saturated |= sat;
                    Some(word)
                }
                None => None,
            };
            sum_reg = match (&phase_reg, channels_valid) {
                (Some(phases), true) => {
                    let acc = sum_weights(&bits, phases)?;
                    status.accumulator_overflow |= acc.overflow;
                    Some(acc.sum)
                }
                _ => None,
            };
            gen.clk_bar_edge(offset_valid && phase_reg.is_none());
            phase_reg = offset_reg.as_ref().map(|_| words.iter().map(|&w| phase_estimate(w)).collect()).or(phase_reg);
            if cycle == 1 {
                offset_reg = Some(words.iter().map(|&w| shift_and_offset(w)).collect());
            }
        }
        if let Some(word) = out_reg {
            stream.push(word);
            streaming = true;
        } else if streaming {
            break;
        }
        let h = 2 * cycle;
        for hh in [h, h + 1] {
            trace.record(sig_in, hh, 1);
            trace.record(sig_est, hh, i64::from(phase_reg.is_some()));
            trace.record(sig_ch, hh, i64::from(gen.data_valid()));
            trace.record(sig_sum, hh, i64::from(sum_reg.is_some()));
            trace.record(sig_out, hh, i64::from(out_reg.is_some()));
            trace.record(sig_dac, hh, out_reg.map_or(0, |w| i64::from(w.lsb())));
            trace.record(sig_sat, hh, i64::from(status.divider_saturated));
        }
    }

    let rise = |name: &str| trace.rising_edges(name).first().copied();
    let diff = |a: Option<u64>, b: Option<u64>| Some(b? - a?);
    let mut ledger = CycleLedger::default();
    let t_in = rise("fidelity_valid");
    let t_est = rise("estimate_valid");
    let t_sum = rise("sum_valid");
    let t_out = rise("out_valid");
    ledger.push("estimation", diff(t_in, t_est));
    ledger.push("sum_weights", diff(t_est, t_sum));
    ledger.push("divider", diff(t_sum, t_out));

    let stream = ReconstructionStream { words: stream, t2 };
    let metrics = match reference {
        Some(r) => {
            let est = stream.segments_lsb();
            let len = est.len().max(r.len());
            Some(ErrorMetrics::between(&upsample(&est, len)?, &upsample(r, len)?)?)
        }
        None => None,
    };
    let phases = words.iter().map(|&w| phase_estimate(w)).collect();
    Ok(SidRun { phases, stream, ledger, status, metrics, trace })
}
