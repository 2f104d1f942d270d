use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fixed::{MAGNITUDE_BITS, WORD_BITS};
use crate::hw::{accumulator_width, PipelineConfig, SynthMode, DDS_PHASE_BITS};

/// Target device capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviceCapacity {
    pub luts: u32,
    pub flip_flops: u32,
    pub bram_blocks: u32,
}

impl Default for DeviceCapacity {
    fn default() -> Self {
        DeviceCapacity { luts: 17_600, flip_flops: 35_200, bram_blocks: 60 }
    }
}

/// Structural cost coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceModel {
    pub device: DeviceCapacity,
    /// LUTs per Walsh Generator cascade stage.
    pub luts_per_stage: u32,
    /// Cascade stages per generator (width of the order register).
    pub order_cap: u32,
    /// Bits per block RAM.
    pub bram_bits: u32,
    /// Bits of distributed RAM per LUT.
    pub lutram_bits: u32,
}

impl Default for ResourceModel {
    fn default() -> Self {
        ResourceModel {
            device: DeviceCapacity::default(),
            luts_per_stage: 1,
            order_cap: 8,
            bram_bits: 36 * 1024,
            lutram_bits: 64,
        }
    }
}

/// Estimated usage and utilisation percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    /// LUTs of the parallel Walsh Generator bank alone.
    pub generator_luts: u32,
    pub luts: u32,
    pub flip_flops: u32,
    pub bram_blocks: u32,
    pub lut_percent: f64,
    pub flip_flop_percent: f64,
    pub bram_percent: f64,
}

impl ResourceModel {
    fn report(&self, generator_luts: u32, luts: u32, flip_flops: u32, bram_blocks: u32) -> ResourceReport {
        let pct = |used: u32, cap: u32| 100.0 * f64::from(used) / f64::from(cap);
        ResourceReport {
            generator_luts,
            luts,
            flip_flops,
            bram_blocks,
            lut_percent: pct(luts, self.device.luts),
            flip_flop_percent: pct(flip_flops, self.device.flip_flops),
            bram_percent: pct(bram_blocks, self.device.bram_blocks),
        }
    }

    fn generator_luts(&self, generators: u32) -> u32 {
        generators * self.order_cap * self.luts_per_stage
    }

    /// Counter bits for `orders` Rademacher outputs with an `expansion_bits` prescaler,
    /// plus the completion bit.
    fn counter_bits(&self, orders: u32, expansion_bits: u32) -> u32 {
        orders * (expansion_bits + self.order_cap) + 1
    }

    fn blocks(&self, bits: u32) -> u32 {
        bits.div_ceil(self.bram_bits)
    }

    /// Half of an odd-symmetric `2^14`-entry table of 13-bit magnitudes.
    pub fn arcsin_blocks(&self) -> u32 {
        self.blocks((1 << MAGNITUDE_BITS) * MAGNITUDE_BITS)
    }

    /// cos/sin words for every phase.
    pub fn dds_blocks(&self) -> u32 {
        self.blocks((1 << DDS_PHASE_BITS) * 2 * WORD_BITS)
    }
}

/// Coarse structural count for a controller configuration.
pub fn resource_estimate(config: &PipelineConfig, model: &ResourceModel) -> Result<ResourceReport> {
    config.validate()?;
    let n = u32::from(config.modulation.channels);
    let m = n.trailing_zeros();
    let acc = accumulator_width(n as usize);
    let generators = model.generator_luts(n);
    let mut luts = model.generator_luts(1) + generators;
    let mut ffs = 0;
    // Rademacher counters: timing bank (8-bit t1), modulation bank (4-bit t2)
    let counters = model.counter_bits(model.order_cap, 8) + model.counter_bits(m, 4);
    luts += counters;
    ffs += counters;
    // repeat counter, edge detect, ready logic
    luts += 4 + 2 + 3;
    ffs += 4 + 1 + 3;
    // configuration registers
    ffs += 8 + 8 + 4 + 4 + 2 + WORD_BITS * n;
    // Sum Weights: one add/sub leaf per channel at accumulator width, plus the register
    luts += n * acc;
    ffs += acc;
    let mut bram = 0;
    match config.synth.mode {
        SynthMode::Am => ffs += WORD_BITS,
        SynthMode::Pm => {
            bram += model.dds_blocks();
            ffs += 2 * WORD_BITS;
        }
        SynthMode::Qam => {
            bram += model.dds_blocks();
            // second accumulator, 7×7 multipliers and realignment registers
            luts += n * acc + 2 * 7 * 7;
            ffs += acc + 5 * WORD_BITS;
        }
    }
    Ok(model.report(generators, luts, ffs, bram))
}

/// Coarse structural count for the identification chain with `n` sensors.
pub fn sid_resource_estimate(n: u32, model: &ResourceModel) -> ResourceReport {
    let acc = accumulator_width(n as usize);
    let m = n.max(1).trailing_zeros();
    let generators = model.generator_luts(n);
    // phase words in distributed RAM
    let weight_luts = (n * WORD_BITS).div_ceil(model.lutram_bits);
    let counters = model.counter_bits(m, 4);
    // restoring divider: one subtract stage per quotient bit
    let divider_luts = WORD_BITS * WORD_BITS;
    let luts = generators + weight_luts + counters + n * acc + divider_luts + WORD_BITS;
    // shift register, table output, accumulator, divider quotient/remainder, divisor
    let ffs = counters + WORD_BITS + WORD_BITS + acc + 2 * WORD_BITS + WORD_BITS;
    model.report(generators, luts, ffs, model.arcsin_blocks())
}
