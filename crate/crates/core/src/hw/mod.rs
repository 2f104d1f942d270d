//! Half-cycle accurate model of the controller pipeline.
//!
//! Two clocks of equal frequency drive the design: `clk` (Timing Sequencer)
//! and its π-shifted complement `clk̄` (Modulation Generator and Filter
//! Synthesizer). Time is counted in integer half cycles ([`HalfCycle`]); even
//! values are `clk` rising edges and odd values are `clk̄` rising edges, which
//! coincide with `clk` falling edges.
//!
//! Every register updates from a snapshot of the signals taken just before
//! its edge, so simultaneous updates never race.

mod clock;
mod generator;
mod ledger;
mod modulation;
mod pipeline;
mod rademacher;
mod sequencer;
mod synth;
mod trace;

pub use clock::{ClockModel, HalfCycle};
pub use generator::WalshGenerator;
pub use ledger::{CycleLedger, LatencyStage};
pub use modulation::{modulation_generator_run, ModulationConfig, ModulationGenerator, ModulationRun};
pub use pipeline::{run_pipeline, Pipeline, PipelineConfig, PipelineEvent, PipelineRun, StatusFlags};
pub use rademacher::RademacherGenerator;
pub use sequencer::{
    timing_sequencer_run, ControlEvent, SequencerInputs, TimingConfig, TimingRun, TimingSequencer,
    RESET_LATENCY_CYCLES, VARIABLE_CHANGE_LATENCY_CYCLES,
};
pub use synth::{
    accumulator_width, dds_lookup, phase_word, qam_multiply, sum_weights, AccumulatorOutput, FilterSynthesizer,
    SynthConfig, SynthMode, DDS_PHASE_BITS,
};
pub use trace::{SignalId, Trace, TraceRow};
