use serde::{Deserialize, Serialize};

use super::{
    ClockModel, CycleLedger, FilterSynthesizer, ModulationConfig, ModulationGenerator, SequencerInputs, SignalId,
    SynthConfig, TimingConfig, TimingSequencer, Trace,
};
use crate::error::{Error, Result};

/// Complete controller programming.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub timing: TimingConfig,
    pub modulation: ModulationConfig,
    pub synth: SynthConfig,
    #[serde(default)]
    pub clock: ClockModel,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.timing.validate()?;
        self.modulation.validate()?;
        self.synth.validate(usize::from(self.modulation.channels))
    }
}

/// Controller input applied at a `clk` edge.
#[derive(Debug, Clone, PartialEq)]
pub enum PipelineEvent {
    Start,
    Reset,
    VariableChange(Box<PipelineConfig>),
}

/// Sticky diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StatusFlags {
    pub dac_saturated: bool,
}

struct Signals {
    clk: SignalId,
    clk_bar: SignalId,
    start: SignalId,
    reset: SignalId,
    variable_change: SignalId,
    ready: SignalId,
    run: SignalId,
    timing: SignalId,
    trigger: SignalId,
    data_valid: SignalId,
    channels: Vec<SignalId>,
    sigma: SignalId,
    i_dac: SignalId,
    q_dac: SignalId,
    out_valid: SignalId,
    saturated: SignalId,
}

impl Signals {
    fn declare(trace: &mut Trace, channels: usize) -> Self {
        Signals {
            clk: trace.declare("clk"),
            clk_bar: trace.declare("clk_bar"),
            start: trace.declare("start"),
            reset: trace.declare("reset"),
            variable_change: trace.declare("variable_change"),
            ready: trace.declare("ready"),
            run: trace.declare("run"),
            timing: trace.declare("timing"),
            trigger: trace.declare("trigger"),
            data_valid: trace.declare("data_valid"),
            channels: (0..channels).map(|k| trace.declare(format!("w{k}"))).collect(),
            sigma: trace.declare("sigma"),
            i_dac: trace.declare("i_dac"),
            q_dac: trace.declare("q_dac"),
            out_valid: trace.declare("out_valid"),
            saturated: trace.declare("dac_saturated"),
        }
    }
}

/// The wired controller: sequencer on `clk`, modulation and synthesis on `clk̄`.
pub struct Pipeline {
    cfg: PipelineConfig,
    seq: TimingSequencer,
    modgen: ModulationGenerator,
    synth: FilterSynthesizer,
    trace: Trace,
    sig: Signals,
    h: u64,
    held: [bool; 3],
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        let n = usize::from(cfg.modulation.channels);
        let mut trace = Trace::new();
        let sig = Signals::declare(&mut trace, n);
        Ok(Pipeline {
            seq: TimingSequencer::new(cfg.timing)?,
            modgen: ModulationGenerator::new(cfg.modulation)?,
            synth: FilterSynthesizer::new(cfg.synth.clone(), n)?,
            cfg,
            trace,
            sig,
            h: 0,
            held: [false; 3],
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    /// Next half cycle to be simulated.
    pub fn now(&self) -> u64 {
        self.h
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn status(&self) -> StatusFlags {
        StatusFlags { dac_saturated: self.synth.saturated() }
    }

    /// Advances one full clock cycle, applying `events` at its `clk` edge.
    pub fn cycle(&mut self, events: &[PipelineEvent]) -> Result<()> {
        debug_assert!(self.h.is_multiple_of(2));
        let mut inputs = SequencerInputs::default();
        let mut held = [false; 3];
        for ev in events {
            match ev {
                PipelineEvent::Start => {
                    inputs.start = true;
                    held[0] = true;
                }
                PipelineEvent::Reset => {
                    inputs.reset = true;
                    held[1] = true;
                }
                PipelineEvent::VariableChange(cfg) => {
                    cfg.validate()?;
                    if cfg.modulation.channels != self.cfg.modulation.channels {
                        return Err(Error::Config("channel count is fixed when the pipeline is built".into()));
                    }
                    inputs.load = Some(cfg.timing);
                    self.modgen = ModulationGenerator::new(cfg.modulation)?;
                    self.synth = FilterSynthesizer::new(cfg.synth.clone(), usize::from(cfg.modulation.channels))?;
                    self.cfg = (**cfg).clone();
                    held[2] = true;
                }
            }
        }
        self.held = held;

        // clk rising edge
        self.seq.clk_edge(inputs)?;
        if inputs.reset {
            self.modgen.reset();
            self.synth.reset();
        }
        self.record();
        self.h += 1;

        // clk falling edge, clk̄ rising edge: every register sees pre-edge values
        let trigger = self.seq.trigger();
        let bits = self.modgen.bits().to_vec();
        let valid = self.modgen.data_valid();
        self.seq.falling_edge();
        self.modgen.clk_bar_edge(trigger);
        self.synth.clk_bar_edge(&bits, valid)?;
        self.record();
        self.h += 1;
        Ok(())
    }

    fn record(&mut self) {
        let h = self.h;
        let t = &mut self.trace;
        let s = &self.sig;
        let b = |x: bool| i64::from(x);
        t.record(s.clk, h, b(h.is_multiple_of(2)));
        t.record(s.clk_bar, h, b(h % 2 == 1));
        t.record(s.start, h, b(self.held[0]));
        t.record(s.reset, h, b(self.held[1]));
        t.record(s.variable_change, h, b(self.held[2]));
        t.record(s.ready, h, b(self.seq.ready()));
        t.record(s.run, h, b(self.seq.running()));
        t.record(s.timing, h, i64::from(self.seq.stream()));
        t.record(s.trigger, h, b(self.seq.trigger()));
        t.record(s.data_valid, h, b(self.modgen.data_valid()));
        for (id, &bit) in s.channels.iter().zip(self.modgen.bits()) {
            t.record(*id, h, i64::from(bit));
        }
        t.record(s.sigma, h, self.synth.accumulator());
        let (i, q, valid) = match self.synth.output() {
            Some((i, q)) => (i.lsb(), q.lsb(), true),
            None => (0, 0, false),
        };
        t.record(s.i_dac, h, i64::from(i));
        t.record(s.q_dac, h, i64::from(q));
        t.record(s.out_valid, h, b(valid));
        t.record(s.saturated, h, b(self.synth.saturated()));
    }

    /// Ledger measured from the recorded trace.
    pub fn ledger(&self) -> CycleLedger {
        measure_ledger(&self.trace)
    }

    pub fn finish(self) -> PipelineRun {
        PipelineRun { ledger: measure_ledger(&self.trace), status: self.status(), trace: self.trace, config: self.cfg }
    }
}

fn measure_ledger(trace: &Trace) -> CycleLedger {
    let mut ledger = CycleLedger::default();
    let start = trace.rising_edges("start").first().copied();
    let run = start.and_then(|s| trace.first_rise_after("run", s));
    let trigger = run.and_then(|r| trace.first_rise_after("trigger", r));
    let valid = trigger.and_then(|t| trace.first_rise_after("data_valid", t));
    let out = valid.and_then(|v| trace.first_rise_after("out_valid", v));
    let diff = |a: Option<u64>, b: Option<u64>| Some(b? - a?);
    ledger.push("start_to_trigger", diff(start, run));
    ledger.push("trigger_to_channels", diff(trigger, valid));
    ledger.push("channels_to_output", diff(valid, out));
    let after = |event: &str| {
        let at = trace.rising_edges(event).first().copied()?;
        Some(trace.first_rise_after("ready", at + 1)? - at)
    };
    ledger.variable_change_to_ready = after("variable_change");
    ledger.reset_to_ready = after("reset");
    ledger
}

/// Signals and ledger of one scripted run.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub trace: Trace,
    pub ledger: CycleLedger,
    pub status: StatusFlags,
    pub config: PipelineConfig,
}

impl PipelineRun {
    /// Valid I/Q words at each `clk̄` edge, grouped into bursts.
    ///
    /// A burst starts wherever the output becomes valid, or where a trigger
    /// relaunched the modulation generator mid-stream.
    pub fn output_bursts(&self) -> Vec<Vec<(i64, i64)>> {
        let (Some(valid), Some(i), Some(q)) =
            (self.trace.samples("out_valid"), self.trace.samples("i_dac"), self.trace.samples("q_dac"))
        else {
            return Vec::new();
        };
        let delay = 3 + 2 * u64::from(self.config.synth.mode.latency_cycles());
        let starts: Vec<u64> = self.trace.rising_edges("trigger").into_iter().map(|t| t + delay).collect();
        let mut bursts: Vec<Vec<(i64, i64)>> = Vec::new();
        let mut open = false;
        for h in (1..valid.len()).step_by(2) {
            if valid[h] == 0 {
                open = false;
                continue;
            }
            if !open || starts.contains(&(h as u64)) {
                bursts.push(Vec::new());
                open = true;
            }
            bursts.last_mut().expect("burst opened above").push((i[h], q[h]));
        }
        bursts
    }
}

/// Runs the standard script: load the configuration, start when ready, let
/// the sequence and synthesizer drain, then reset.
pub fn run_pipeline(timing: TimingConfig, modulation: ModulationConfig, synth: SynthConfig) -> Result<PipelineRun> {
    let cfg = PipelineConfig { timing, modulation, synth, clock: ClockModel::default() };
    let mut pipe = Pipeline::new(cfg.clone())?;
    pipe.cycle(&[PipelineEvent::VariableChange(Box::new(cfg))])?;
    while !pipe.seq.ready() {
        pipe.cycle(&[])?;
    }
    pipe.cycle(&[PipelineEvent::Start])?;
    let drain = timing.total_cycles() + modulation.burst_cycles() + 8;
    for _ in 0..drain {
        pipe.cycle(&[])?;
    }
    pipe.cycle(&[PipelineEvent::Reset])?;
    for _ in 0..6 {
        pipe.cycle(&[])?;
    }
    Ok(pipe.finish())
}
