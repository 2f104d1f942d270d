use serde::{Deserialize, Serialize};

use super::{HalfCycle, RademacherGenerator, WalshGenerator};
use crate::error::{Error, Result};
use crate::walsh::{PaleyIndex, Variant};

/// Modulation Generator programming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulationConfig {
    /// Parallel channels `n`: a power of two up to 256.
    pub channels: u16,
    /// Clock expansion `t2` in `1..=15`.
    pub t2: u8,
}

impl ModulationConfig {
    pub fn new(channels: u16, t2: u8) -> Result<Self> {
        let cfg = ModulationConfig { channels, t2 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.channels.is_power_of_two() || self.channels > 256 {
            return Err(Error::Config(format!(
                "modulation.channels = {} must be a power of two in 1..=256",
                self.channels
            )));
        }
        if !(1..=15).contains(&self.t2) {
            return Err(Error::Config(format!("modulation.t2 = {} outside 4-bit range 1..=15", self.t2)));
        }
        Ok(())
    }

    /// `m(n) = log2 n`: every channel `k < n` lives on the `2^m` grid.
    pub fn grid_exponent(&self) -> u32 {
        u32::from(self.channels).trailing_zeros()
    }

    /// Clock cycles in one burst.
    pub fn burst_cycles(&self) -> u64 {
        u64::from(self.t2) << self.grid_exponent()
    }
}

/// `n` complement Walsh Generators sharing one Rademacher Generator, clocked on `clk̄`.
#[derive(Debug, Clone)]
pub struct ModulationGenerator {
    cfg: ModulationConfig,
    rad: RademacherGenerator,
    gens: Vec<WalshGenerator>,
    trigger_q: bool,
    active: bool,
    bits: Vec<u8>,
}

impl ModulationGenerator {
    pub fn new(cfg: ModulationConfig) -> Result<Self> {
        cfg.validate()?;
        let gens =
            (0..cfg.channels).map(|k| WalshGenerator::new(PaleyIndex::from_u8(k as u8), Variant::Complement)).collect();
        Ok(ModulationGenerator {
            cfg,
            rad: RademacherGenerator::new(cfg.grid_exponent(), u32::from(cfg.t2)),
            gens,
            trigger_q: false,
            active: false,
            bits: vec![0; usize::from(cfg.channels)],
        })
    }

    pub fn config(&self) -> &ModulationConfig {
        &self.cfg
    }

    pub fn reset(&mut self) {
        self.rad.reset();
        self.trigger_q = false;
        self.active = false;
        self.bits.iter_mut().for_each(|b| *b = 0);
    }

    /// `clk̄` edge. The trigger is registered here and launches a burst one
    /// cycle later; a trigger during a burst restarts it.
    pub fn clk_bar_edge(&mut self, trigger: bool) {
        let launch = self.trigger_q;
        self.trigger_q = trigger;
        if launch {
            self.active = true;
            self.rad.reset();
        } else if self.active {
            self.rad.tick();
            if self.rad.done() {
                self.active = false;
            }
        }
        let r = self.rad.outputs();
        let active = self.active;
        for (bit, gen) in self.bits.iter_mut().zip(&self.gens) {
            *bit = if active { gen.output(r) } else { 0 };
        }
    }

    /// Channel bits `W_0 .. W_{n−1}`.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn data_valid(&self) -> bool {
        self.active
    }
}

/// Result of a stand-alone modulation burst.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulationRun {
    /// Per channel, one bit per clock cycle while `data_valid`.
    pub channels: Vec<Vec<u8>>,
    /// First `clk̄` edge with valid data.
    pub first_valid: HalfCycle,
    /// Half cycles from the trigger rising to `data_valid`.
    pub trigger_to_channels: u64,
}

/// Drives one burst from a trigger raised at the `clk` edge of `trigger_cycle`.
pub fn modulation_generator_run(trigger_cycle: u64, cfg: &ModulationConfig) -> Result<ModulationRun> {
    let mut gen = ModulationGenerator::new(*cfg)?;
    let trigger_h = 2 * trigger_cycle;
    let mut channels = vec![Vec::new(); usize::from(cfg.channels)];
    let mut first_valid = None;
    let end = trigger_h + 2 * cfg.burst_cycles() + 8;
    // The trigger is high for the half cycle [trigger_h, trigger_h + 1).
    for h in (1..end).step_by(2) {
        gen.clk_bar_edge(h == trigger_h + 1);
        if gen.data_valid() {
            first_valid.get_or_insert(h);
            for (out, &b) in channels.iter_mut().zip(gen.bits()) {
                out.push(b);
            }
        }
    }
    let first_valid = first_valid.ok_or(Error::Config("modulation burst never started".into()))?;
    Ok(ModulationRun { channels, first_valid: HalfCycle(first_valid), trigger_to_channels: first_valid - trigger_h })
}
