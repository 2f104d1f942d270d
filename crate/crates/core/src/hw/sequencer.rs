use serde::{Deserialize, Serialize};

use super::{CycleLedger, HalfCycle, RademacherGenerator, WalshGenerator};
use crate::error::{Error, Result};
use crate::walsh::{PaleyIndex, Variant};

/// Clock cycles from a variable change to `ready`: input register, then config register.
pub const VARIABLE_CHANGE_LATENCY_CYCLES: u8 = 2;
/// Clock cycles from reset to `ready`: clear, reload, re-arm.
pub const RESET_LATENCY_CYCLES: u8 = 3;

/// Timing Sequencer programming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingConfig {
    pub order: PaleyIndex,
    /// Clock expansion `t1 ≥ 1`.
    pub t1: u8,
    /// Repeat count `R` in `0..=15`; 0 disables the output.
    pub repeat: u8,
}

impl TimingConfig {
    pub fn new(order: PaleyIndex, t1: u8, repeat: u8) -> Result<Self> {
        let cfg = TimingConfig { order, t1, repeat };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t1 == 0 {
            return Err(Error::Config("timing.t1 must be at least 1".into()));
        }
        if self.repeat > 15 {
            return Err(Error::Config(format!("timing.repeat = {} exceeds 4-bit range 0..=15", self.repeat)));
        }
        Ok(())
    }

    /// Clock cycles in one pass, `t1 · 2^{m(s)}`.
    pub fn pass_cycles(&self) -> u64 {
        u64::from(self.t1) << self.order.bit_width()
    }

    /// Clock cycles of the full repeated sequence.
    pub fn total_cycles(&self) -> u64 {
        self.pass_cycles() * u64::from(self.repeat)
    }
}

/// External inputs sampled at one `clk` edge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SequencerInputs {
    pub start: bool,
    pub reset: bool,
    /// New configuration presented on the input bus.
    pub load: Option<TimingConfig>,
}

/// Timing Sequencer with its Repeat Module, Edge Detect, and ready logic.
#[derive(Debug, Clone)]
pub struct TimingSequencer {
    cfg: TimingConfig,
    staged: Option<TimingConfig>,
    rad: RademacherGenerator,
    gen: WalshGenerator,
    start_q: bool,
    running: bool,
    pass: u8,
    stream: u8,
    edge_q: u8,
    countdown: u8,
    ready: bool,
}

impl TimingSequencer {
    pub fn new(cfg: TimingConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(TimingSequencer {
            cfg,
            staged: None,
            rad: RademacherGenerator::new(cfg.order.bit_width(), u32::from(cfg.t1)),
            gen: WalshGenerator::new(cfg.order, Variant::Standard),
            start_q: false,
            running: false,
            pass: 0,
            stream: 0,
            edge_q: 0,
            countdown: 0,
            ready: true,
        })
    }

    pub fn config(&self) -> &TimingConfig {
        &self.cfg
    }

    fn commit(&mut self, cfg: TimingConfig) {
        self.cfg = cfg;
        self.rad = RademacherGenerator::new(cfg.order.bit_width(), u32::from(cfg.t1));
        self.gen = WalshGenerator::new(cfg.order, Variant::Standard);
    }

    fn halt(&mut self) {
        self.rad.reset();
        self.start_q = false;
        self.running = false;
        self.pass = 0;
        self.stream = 0;
        self.edge_q = 0;
        self.ready = false;
    }

    /// `clk` rising edge.
    pub fn clk_edge(&mut self, inputs: SequencerInputs) -> Result<()> {
        if inputs.reset {
            self.halt();
            self.countdown = RESET_LATENCY_CYCLES;
            return Ok(());
        }
        if let Some(cfg) = inputs.load {
            cfg.validate()?;
            self.halt();
            self.staged = Some(cfg);
            self.countdown = VARIABLE_CHANGE_LATENCY_CYCLES;
            return Ok(());
        }
        if self.countdown > 0 {
            self.countdown -= 1;
            if self.countdown == 1 {
                if let Some(cfg) = self.staged.take() {
                    self.commit(cfg);
                }
            }
            self.ready = self.countdown == 0;
            return Ok(());
        }

        let launch = self.start_q && self.ready && !self.running;
        self.start_q = inputs.start;
        if launch {
            if self.cfg.repeat > 0 {
                self.running = true;
                self.ready = false;
                self.pass = 1;
                self.rad.reset();
            }
        } else if self.running {
            self.rad.tick();
            if self.rad.done() {
                if self.pass < self.cfg.repeat {
                    self.pass += 1;
                    self.rad.reset();
                } else {
                    self.running = false;
                    self.ready = true;
                }
            }
        }
        self.stream = if self.running { self.gen.output(self.rad.outputs()) } else { 0 };
        Ok(())
    }

    /// `clk` falling edge: the Edge Detect register captures the stream.
    pub fn falling_edge(&mut self) {
        self.edge_q = self.stream;
    }

    pub fn ready(&self) -> bool {
        self.ready
    }

    /// High while the repeated sequence is streaming.
    pub fn running(&self) -> bool {
        self.running
    }

    /// Current bit of `[W̄_s]_R`.
    pub fn stream(&self) -> u8 {
        self.stream
    }

    /// Edge Detect output: high for the half cycle after each bit flip.
    pub fn trigger(&self) -> bool {
        self.running && self.stream != self.edge_q
    }
}

/// Control inputs applied at a `clk` edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlEvent {
    Start,
    Reset,
    VariableChange,
}

/// Result of a stand-alone sequencer simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimingRun {
    /// Stream value at each clock cycle while running, in order.
    pub stream: Vec<u8>,
    /// Half cycles at which the trigger goes high.
    pub triggers: Vec<HalfCycle>,
    pub ledger: CycleLedger,
}

/// Simulates the sequencer alone for `cycles` clock cycles.
///
/// Events are `(cycle, event)` pairs applied at the `clk` edge of that cycle.
/// A variable change reloads `cfg` itself.
pub fn timing_sequencer_run(cfg: &TimingConfig, events: &[(u64, ControlEvent)], cycles: u64) -> Result<TimingRun> {
    let mut seq = TimingSequencer::new(*cfg)?;
    let mut stream = Vec::new();
    let mut triggers = Vec::new();
    let mut ledger = CycleLedger::default();
    let mut last_start = None;
    let mut pending_ready: Option<(ControlEvent, u64)> = None;
    let mut start_to_trigger = None;
    for cycle in 0..cycles {
        let h = 2 * cycle;
        let mut inputs = SequencerInputs::default();
        for &(_, ev) in events.iter().filter(|(c, _)| *c == cycle) {
            match ev {
                ControlEvent::Start => {
                    inputs.start = true;
                    last_start = Some(h);
                }
                ControlEvent::Reset => inputs.reset = true,
                ControlEvent::VariableChange => inputs.load = Some(*cfg),
            }
            if ev != ControlEvent::Start {
                pending_ready = Some((ev, h));
            }
        }
        let was_running = seq.running();
        seq.clk_edge(inputs)?;
        if seq.running() {
            stream.push(seq.stream());
            if !was_running && start_to_trigger.is_none() {
                start_to_trigger = last_start.map(|s| h - s);
            }
        }
        if seq.trigger() {
            triggers.push(HalfCycle(h));
        }
        if let Some((ev, at)) = pending_ready {
            if seq.ready() {
                match ev {
                    ControlEvent::Reset => ledger.reset_to_ready = Some(h - at),
                    _ => ledger.variable_change_to_ready = Some(h - at),
                }
                pending_ready = None;
            }
        }
        seq.falling_edge();
    }
    ledger.push("start_to_trigger", start_to_trigger);
    Ok(TimingRun { stream, triggers, ledger })
}
