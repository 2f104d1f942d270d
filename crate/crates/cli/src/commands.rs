use serde::Serialize;

use walshctl_core::bench::{
    compare_report, resource_estimate, sid_resource_estimate, ComparisonReport, ResourceModel, ResourceReport,
};
use walshctl_core::error::Error;
use walshctl_core::hw::{
    run_pipeline, timing_sequencer_run, ControlEvent, CycleLedger, PipelineConfig, PipelineRun, SequencerInputs,
    StatusFlags, SynthMode, TimingConfig, TimingSequencer, Trace,
};
use walshctl_core::qubit::{batch_fidelities, FidelityMethod, FidelityVector, NoiseTrace};
use walshctl_core::sid::{reference_lsb, sid_pipeline, upsample, Divisor, ErrorMetrics, SidRun, SidStatus};
use walshctl_core::walsh::{rademacher_bit, sample_grid};

use crate::config::{mode_name, variant_name, NoiseSpec, RunConfig, SidSection};
use crate::svg::{Figure, Panel, Series, Style};

/// Grid used for the exact reference field in SID reports.
pub const REFERENCE_GRID: usize = 256;

#[derive(Debug)]
pub enum Failure {
    Config(Vec<String>),
    Precondition(String),
    Invariant(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Invariant(_) => 4,
            Failure::Io(_) => 5,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(errs) => {
                writeln!(f, "configuration error ({} problem{}):", errs.len(), if errs.len() == 1 { "" } else { "s" })?;
                for e in errs {
                    writeln!(f, "  - {e}")?;
                }
                Ok(())
            }
            Failure::Precondition(m) => writeln!(f, "precondition failed: {m}"),
            Failure::Invariant(m) => writeln!(f, "internal invariant violated: {m}"),
            Failure::Io(m) => writeln!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

fn invariant(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Invariant(msg()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Default)]
pub struct Output {
    pub artifacts: Vec<Artifact>,
    pub summary: String,
}

impl Output {
    fn push(&mut self, name: &str, bytes: Vec<u8>) {
        self.artifacts.push(Artifact { name: name.to_owned(), bytes });
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::Invariant(e.to_string()))?;
        bytes.push(b'\n');
        self.push(name, bytes);
        Ok(())
    }

    fn trace(&mut self, name: &str, trace: &Trace) -> Result<(), Failure> {
        let mut bytes = Vec::new();
        trace.write_csv(&mut bytes).map_err(|e| Failure::Invariant(e.to_string()))?;
        self.push(name, bytes);
        Ok(())
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| Failure::Invariant(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Invariant(e.to_string()))?;
        self.push(name, bytes);
        Ok(())
    }

    pub fn push_svg(&mut self, name: &str, figure: &Figure) {
        self.svg(name, figure);
    }

    fn svg(&mut self, name: &str, figure: &Figure) {
        self.push(name, figure.render().into_bytes());
    }
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

// ---------------------------------------------------------------- gen

#[derive(Debug, Serialize)]
struct WaveformRow<'a> {
    slot: usize,
    signal_name: &'a str,
    value: u8,
}

#[derive(Debug, Serialize)]
struct WaveformJson {
    signal: String,
    bits: String,
}

#[derive(Debug, Serialize)]
struct GenReport {
    grid_exponent: u32,
    variant: &'static str,
    waveforms: Vec<WaveformJson>,
}

pub fn waveforms(cfg: &RunConfig) -> Result<Vec<(String, Vec<u8>)>, Failure> {
    let g = &cfg.gen;
    let m = g.grid_exponent();
    let mut out = Vec::new();
    for &l in &g.orders {
        out.push((format!("walsh_{l}"), sample_grid(l, m, g.variant)?.bits().to_vec()));
    }
    for &j in &g.rademacher {
        out.push((format!("rademacher_{j}"), (0..1usize << m).map(|i| rademacher_bit(j, i, m)).collect()));
    }
    Ok(out)
}

pub fn gen(cfg: &RunConfig, formats: &[Format]) -> Result<Output, Failure> {
    let waves = waveforms(cfg)?;
    let mut out = Output::default();
    for (name, bits) in &waves {
        out.summary.push_str(&format!("{name} {}\n", bit_string(bits)));
    }
    for f in formats {
        match f {
            Format::Csv => {
                let rows: Vec<WaveformRow> = waves
                    .iter()
                    .flat_map(|(name, bits)| {
                        bits.iter().enumerate().map(move |(slot, &value)| WaveformRow {
                            slot,
                            signal_name: name,
                            value,
                        })
                    })
                    .collect();
                out.csv("waveforms.csv", &rows)?;
            }
            Format::Json => {
                let report = GenReport {
                    grid_exponent: cfg.gen.grid_exponent(),
                    variant: variant_name(cfg.gen.variant),
                    waveforms: waves
                        .iter()
                        .map(|(name, bits)| WaveformJson { signal: name.clone(), bits: bit_string(bits) })
                        .collect(),
                };
                out.json("waveforms.json", &report)?;
            }
            Format::Svg => {
                let panels = waves
                    .iter()
                    .map(|(name, bits)| {
                        Panel::new(
                            name.clone(),
                            vec![Series::steps(name.clone(), &bits.iter().map(|&b| f64::from(b)).collect::<Vec<_>>())],
                        )
                    })
                    .collect();
                let fig = Figure {
                    title: format!("Walsh and Rademacher waveforms, 2^{} grid", cfg.gen.grid_exponent()),
                    x_label: "slot".into(),
                    panels,
                };
                out.svg("waveforms.svg", &fig);
            }
        }
    }
    Ok(out)
}

// ------------------------------------------------------------- timing

#[derive(Debug, Serialize)]
struct TimingReport {
    order: u8,
    t1: u8,
    repeat: u8,
    stream: String,
    triggers: Vec<u64>,
    ledger: CycleLedger,
}

/// Control events by the cycle they were applied in.
pub type Script = Vec<(u64, ControlEvent)>;

/// Clocks the sequencer through load, start, drain and reset, recording a trace.
pub fn timing_trace(cfg: TimingConfig) -> Result<(Trace, Script, u64), Failure> {
    let mut seq = TimingSequencer::new(cfg)?;
    let mut trace = Trace::new();
    let names = ["clk", "start", "reset", "variable_change", "ready", "run", "timing", "trigger"];
    let ids: Vec<_> = names.iter().map(|n| trace.declare(*n)).collect();
    let mut events = vec![(0, ControlEvent::VariableChange)];
    let mut cycle = 0u64;
    let step = |seq: &mut TimingSequencer, trace: &mut Trace, cycle: u64, ev: Option<ControlEvent>| {
        let inputs = SequencerInputs {
            start: ev == Some(ControlEvent::Start),
            reset: ev == Some(ControlEvent::Reset),
            load: (ev == Some(ControlEvent::VariableChange)).then_some(cfg),
        };
        seq.clk_edge(inputs)?;
        let h = 2 * cycle;
        let pulse = |e| i64::from(ev == Some(e));
        let values = [
            1,
            pulse(ControlEvent::Start),
            pulse(ControlEvent::Reset),
            pulse(ControlEvent::VariableChange),
            i64::from(seq.ready()),
            i64::from(seq.running()),
            i64::from(seq.stream()),
            i64::from(seq.trigger()),
        ];
        for (id, v) in ids.iter().zip(values) {
            trace.record(*id, h, v);
        }
        seq.falling_edge();
        trace.record(ids[0], h + 1, 0);
        trace.record(ids[4], h + 1, i64::from(seq.ready()));
        trace.record(ids[7], h + 1, i64::from(seq.trigger()));
        Ok::<_, Error>(())
    };

    step(&mut seq, &mut trace, cycle, Some(ControlEvent::VariableChange))?;
    cycle += 1;
    while !seq.ready() {
        step(&mut seq, &mut trace, cycle, None)?;
        cycle += 1;
    }
    events.push((cycle, ControlEvent::Start));
    step(&mut seq, &mut trace, cycle, Some(ControlEvent::Start))?;
    cycle += 1;
    for _ in 0..cfg.total_cycles() + 4 {
        step(&mut seq, &mut trace, cycle, None)?;
        cycle += 1;
    }
    events.push((cycle, ControlEvent::Reset));
    step(&mut seq, &mut trace, cycle, Some(ControlEvent::Reset))?;
    cycle += 1;
    for _ in 0..5 {
        step(&mut seq, &mut trace, cycle, None)?;
        cycle += 1;
    }
    Ok((trace, events, cycle))
}

pub fn timing(cfg: &RunConfig, formats: &[Format]) -> Result<Output, Failure> {
    let tc = cfg.pipeline.timing;
    let (trace, events, cycles) = timing_trace(tc)?;
    let run = timing_sequencer_run(&tc, &events, cycles)?;
    let rises: Vec<u64> = trace.rising_edges("trigger");
    let run_triggers: Vec<u64> = run.triggers.iter().map(|h| h.0).collect();
    invariant(rises == run_triggers, || format!("trace triggers {rises:?} differ from sequencer {run_triggers:?}"))?;
    invariant(run.stream.len() as u64 == tc.total_cycles(), || {
        format!("stream of {} cycles, expected {}", run.stream.len(), tc.total_cycles())
    })?;
    invariant(run.ledger.variable_change_cycles() == Some(2.0) && run.ledger.reset_cycles() == Some(3.0), || {
        format!("control latencies {:?}", run.ledger)
    })?;

    let summary = if run.stream.is_empty() {
        "stream empty, output disabled\n".to_owned()
    } else {
        format!("stream {} ({} cycles), {} trigger(s)\n", bit_string(&run.stream), run.stream.len(), run_triggers.len())
    };
    let mut out = Output { summary, ..Output::default() };
    for f in formats {
        match f {
            Format::Csv => out.trace("timing_trace.csv", &trace)?,
            Format::Json => out.json(
                "timing_report.json",
                &TimingReport {
                    order: tc.order.value(),
                    t1: tc.t1,
                    repeat: tc.repeat,
                    stream: bit_string(&run.stream),
                    triggers: run_triggers.clone(),
                    ledger: run.ledger.clone(),
                },
            )?,
            Format::Svg => {
                let signals = ["start", "ready", "run", "timing", "trigger"];
                out.svg(
                    "timing_trace.svg",
                    &trace_figure(
                        &trace,
                        &signals,
                        format!("Timing sequencer, s = {}, t1 = {}, R = {}", tc.order, tc.t1, tc.repeat),
                        None,
                    ),
                );
            }
        }
    }
    Ok(out)
}

/// Stacked logic-analyser view of selected trace signals.
fn trace_figure(trace: &Trace, signals: &[&str], title: String, window: Option<(u64, u64)>) -> Figure {
    let (lo, hi) = window.unwrap_or((0, trace.len()));
    let panels = signals
        .iter()
        .filter_map(|name| {
            let samples = trace.samples(name)?;
            let points = (lo..hi.min(samples.len() as u64)).map(|h| (h as f64, samples[h as usize] as f64)).collect();
            Some(Panel::new(*name, vec![Series::new(*name, points, Style::Step)]))
        })
        .collect();
    Figure { title, x_label: "half cycle".into(), panels }
}

// -------------------------------------------------------------- synth

#[derive(Debug, Serialize)]
struct SynthReport<'a> {
    config: &'a PipelineConfig,
    ledger: &'a CycleLedger,
    status: StatusFlags,
    triggers: Vec<u64>,
    /// `[I, Q]` DAC words per burst.
    bursts: Vec<Vec<[i64; 2]>>,
}

fn check_pipeline(run: &PipelineRun) -> Result<(), Failure> {
    let l = &run.ledger;
    invariant(l.variable_change_cycles() == Some(2.0), || format!("variable change latency {l:?}"))?;
    invariant(l.reset_cycles() == Some(3.0), || format!("reset latency {l:?}"))?;
    if !run.trace.rising_edges("trigger").is_empty() {
        let expected = if run.config.synth.mode == SynthMode::Qam { 6.5 } else { 4.5 };
        invariant(l.total_cycles() == Some(expected), || format!("trigger-to-output latency {l:?}"))?;
    }
    Ok(())
}

pub fn synth(cfg: &RunConfig, formats: &[Format]) -> Result<Output, Failure> {
    let p = &cfg.pipeline;
    let run = run_pipeline(p.timing, p.modulation, p.synth.clone())?;
    check_pipeline(&run)?;
    let bursts = run.output_bursts();
    let summary = format!(
        "{} mode, {} burst(s), trigger-to-output {} cycles, variable change {} cycles, reset {} cycles{}\n",
        mode_name(p.synth.mode),
        bursts.len(),
        run.ledger.total_cycles().map_or("n/a".into(), |c| c.to_string()),
        run.ledger.variable_change_cycles().unwrap_or(f64::NAN),
        run.ledger.reset_cycles().unwrap_or(f64::NAN),
        if run.status.dac_saturated { ", DAC saturated" } else { "" }
    );
    let mut out = Output { summary, ..Output::default() };
    for f in formats {
        match f {
            Format::Csv => out.trace("synth_trace.csv", &run.trace)?,
            Format::Json => out.json(
                "synth_report.json",
                &SynthReport {
                    config: &run.config,
                    ledger: &run.ledger,
                    status: run.status,
                    triggers: run.trace.rising_edges("trigger"),
                    bursts: bursts.iter().map(|b| b.iter().map(|&(i, q)| [i, q]).collect()).collect(),
                },
            )?,
            Format::Svg => out.svg("synth_scope.svg", &scope_figure(&run)),
        }
    }
    Ok(out)
}

/// Scope-style view from the start pulse to the end of the last burst.
pub fn scope_figure(run: &PipelineRun) -> Figure {
    let start = run.trace.rising_edges("start").first().copied().unwrap_or(0);
    let end = run
        .trace
        .samples("out_valid")
        .and_then(|v| v.iter().rposition(|&x| x != 0))
        .map_or(run.trace.len(), |i| i as u64 + 4);
    let n = usize::from(run.config.modulation.channels).min(4);
    let channels: Vec<String> = (0..n).map(|k| format!("w{k}")).collect();
    let mut signals = vec!["start", "timing", "trigger", "data_valid"];
    signals.extend(channels.iter().map(String::as_str));
    signals.push("i_dac");
    if run.config.synth.mode != SynthMode::Am {
        signals.push("q_dac");
    }
    let t = &run.config.timing;
    trace_figure(
        &run.trace,
        &signals,
        format!(
            "{} synthesis, s = {}, R = {}, n = {}",
            mode_name(run.config.synth.mode),
            t.order,
            t.repeat,
            run.config.modulation.channels
        ),
        Some((start.saturating_sub(2), end)),
    )
}

// ---------------------------------------------------------------- sid

pub fn build_noise(sid: &SidSection) -> Result<NoiseTrace, Failure> {
    let t = sid.window;
    Ok(match &sid.noise {
        NoiseSpec::WalshBand { terms, max_phase } => {
            let seed = sid.seed.ok_or_else(|| {
                Failure::Config(vec!["sid.seed is required for walsh_band noise (set sid.seed or pass --seed)".into()])
            })?;
            NoiseTrace::walsh_band(*terms, max_phase / (sid.gamma * t), seed, t)?
        }
        NoiseSpec::Constant { value } => NoiseTrace::constant(*value, t)?,
        NoiseSpec::Sinusoid { amplitude, frequency, phase } => NoiseTrace::sinusoid(*amplitude, *frequency, *phase, t)?,
        NoiseSpec::Polynomial { coefficients } => NoiseTrace::polynomial(coefficients.clone(), t)?,
        NoiseSpec::Samples { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", file.display())))?;
            let mut samples = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                samples.push(line.parse::<f64>().map_err(|_| {
                    Failure::Precondition(format!("{} line {}: {line:?} is not a number", file.display(), i + 1))
                })?);
            }
            NoiseTrace::from_samples(samples, t)?
        }
    })
}

pub struct SidOutcome {
    pub noise: NoiseTrace,
    pub fidelities: FidelityVector,
    pub reference: Vec<f64>,
    pub run: SidRun,
}

pub fn run_sid(sid: &SidSection, noise: &NoiseTrace, n: usize, divisor: Divisor) -> Result<SidOutcome, Failure> {
    let fidelities = batch_fidelities(noise, sid.gamma, sid.window, n, sid.method)?;
    let reference = reference_lsb(noise, sid.gamma, sid.window, divisor, REFERENCE_GRID);
    let run = sid_pipeline(&fidelities, divisor, sid.t2, Some(&reference))?;
    let l = &run.ledger;
    let stages = [l.stage("estimation"), l.stage("sum_weights"), l.stage("divider")];
    invariant(stages == [Some(4), Some(4), Some(2)] && l.total_cycles() == Some(5.0), || format!("SID latency {l:?}"))?;
    invariant(run.stream.words.len() == n * usize::from(sid.t2), || {
        format!("{} reconstruction words for N = {n}", run.stream.words.len())
    })?;
    Ok(SidOutcome { noise: noise.clone(), fidelities, reference, run })
}

#[derive(Debug, Serialize)]
struct SidConfigJson {
    gamma: f64,
    #[serde(rename = "T")]
    window: f64,
    #[serde(rename = "N")]
    n: usize,
    t2: u8,
    divisor: u16,
    method: FidelityMethod,
    field_per_lsb: f64,
}

#[derive(Debug, Serialize)]
struct SidReport<'a> {
    config: SidConfigJson,
    noise: &'a NoiseTrace,
    fidelities: &'a FidelityVector,
    phase_words: Vec<i32>,
    reconstruction_lsb: Vec<i32>,
    reference_lsb: &'a [f64],
    metrics: ErrorMetrics,
    status: SidStatus,
    ledger: &'a CycleLedger,
}

#[derive(Debug, Serialize)]
struct ReconstructionRow {
    cell: usize,
    estimate_lsb: f64,
    reference_lsb: f64,
}

pub fn sid(cfg: &RunConfig, formats: &[Format]) -> Result<Output, Failure> {
    let s = &cfg.sid;
    let noise = build_noise(s)?;
    let o = run_sid(s, &noise, s.n, s.divisor)?;
    let metrics = o.run.metrics.ok_or_else(|| Failure::Invariant("metrics missing".into()))?;
    let summary = format!(
        "N = {}, D = {}: L2 = {:.3} LSB, Linf = {:.3} LSB{}{}\n",
        s.n,
        s.divisor.value(),
        metrics.l2_lsb,
        metrics.linf_lsb,
        if o.run.status.divider_saturated { ", divider saturated" } else { "" },
        if o.run.status.accumulator_overflow { ", accumulator overflow" } else { "" },
    );
    let mut out = Output { summary, ..Output::default() };
    for f in formats {
        match f {
            Format::Csv => {
                out.trace("sid_trace.csv", &o.run.trace)?;
                let est = upsample(&o.run.stream.segments_lsb(), REFERENCE_GRID)?;
                let rows: Vec<ReconstructionRow> = est
                    .iter()
                    .zip(&o.reference)
                    .enumerate()
                    .map(|(cell, (&e, &r))| ReconstructionRow { cell, estimate_lsb: e, reference_lsb: r })
                    .collect();
                out.csv("sid_reconstruction.csv", &rows)?;
            }
            Format::Json => out.json(
                "sid_report.json",
                &SidReport {
                    config: SidConfigJson {
                        gamma: s.gamma,
                        window: s.window,
                        n: s.n,
                        t2: s.t2,
                        divisor: s.divisor.value(),
                        method: s.method,
                        field_per_lsb: s.divisor.field_per_lsb(s.gamma, s.window),
                    },
                    noise: &o.noise,
                    fidelities: &o.fidelities,
                    phase_words: o.run.phases.iter().map(|w| w.lsb()).collect(),
                    reconstruction_lsb: o.run.stream.words.iter().map(|w| w.lsb()).collect(),
                    reference_lsb: &o.reference,
                    metrics,
                    status: o.run.status,
                    ledger: &o.run.ledger,
                },
            )?,
            Format::Svg => out.svg("sid_reconstruction.svg", &reconstruction_figure(&[(s.n, &o)])?),
        }
    }
    Ok(out)
}

/// One panel per run: exact cell means against the stepped estimate.
pub fn reconstruction_figure(runs: &[(usize, &SidOutcome)]) -> Result<Figure, Failure> {
    let mut panels = Vec::new();
    for (n, o) in runs {
        let reference: Vec<(f64, f64)> =
            o.reference.iter().enumerate().map(|(i, &v)| (i as f64 / REFERENCE_GRID as f64, v)).collect();
        let est = o.run.stream.segments_lsb();
        let estimate: Vec<(f64, f64)> =
            est.iter().enumerate().map(|(i, &v)| (i as f64 / est.len() as f64, v)).collect();
        panels.push(Panel::new(
            format!("N = {n}"),
            vec![
                Series::new("reference", reference, Style::Step),
                Series::new(format!("estimate N={n}"), estimate, Style::Step),
            ],
        ));
    }
    let mut fig = Figure::new("Walsh SID reconstruction (DAC LSB)", "t / T");
    fig.panels = panels;
    Ok(fig)
}

// -------------------------------------------------------------- bench

#[derive(Debug, Serialize)]
struct Resources {
    pipeline: ResourceReport,
    sid: ResourceReport,
}

#[derive(Debug, Serialize)]
struct BenchReport<'a> {
    comparison: &'a ComparisonReport,
    resources: &'a Resources,
    ledger: &'a CycleLedger,
}

pub fn bench(cfg: &RunConfig, formats: &[Format]) -> Result<Output, Failure> {
    let p = &cfg.pipeline;
    let run = run_pipeline(p.timing, p.modulation, p.synth.clone())?;
    check_pipeline(&run)?;
    if run.ledger.total_cycles().is_none() {
        return Err(Failure::Precondition(
            "bench needs a sequence with bit flips (timing.s > 0 and timing.repeat >= 1)".into(),
        ));
    }
    let report = compare_report(&run.ledger, &run.config, &cfg.bench)?;
    let model = ResourceModel::default();
    let resources = Resources {
        pipeline: resource_estimate(&run.config, &model)?,
        sid: sid_resource_estimate(cfg.sid.n as u32, &model),
    };
    let summary = report.to_table();
    let mut out = Output { summary, ..Output::default() };
    for f in formats {
        match f {
            Format::Csv => out.csv("bench.csv", &report.scenarios)?,
            Format::Json => out.json(
                "bench_report.json",
                &BenchReport { comparison: &report, resources: &resources, ledger: &run.ledger },
            )?,
            Format::Svg => out.svg("bench_ratios.svg", &bench_figure(&report)),
        }
    }
    Ok(out)
}

fn bench_figure(report: &ComparisonReport) -> Figure {
    let bars: Vec<(f64, f64)> = report.scenarios.iter().enumerate().map(|(i, r)| (i as f64, r.ratio.log10())).collect();
    let names: Vec<&str> = report.scenarios.iter().map(|r| r.scenario.name()).collect();
    Figure::new("Baseline / FPGA latency ratio (log10, cost model)", names.join(" | "))
        .panel(Panel::new("log10 ratio", vec![Series::new("ratio", bars, Style::Bars)]))
}
