//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use walshctl_core::bench::{compare_report, CostModel, Scenario};
use walshctl_core::fixed::FixedWord;
use walshctl_core::hw::{
    dds_lookup, run_pipeline, timing_sequencer_run, ControlEvent, ModulationConfig, ModulationGenerator, SynthConfig,
    SynthMode, TimingConfig,
};
use walshctl_core::qubit::{
    analytic_phase, analytic_protocol, batch_fidelities, build_wdd_control, propagate, Axis, FidelityMethod,
    NoiseTrace, Polynomial,
};
use walshctl_core::sid::{reference_lsb, sid_pipeline, ArcsinTable, Divisor};
use walshctl_core::walsh::{decompose, moment, sample_grid, transition_points, PaleyIndex, Variant};
use walshctl_core::Rational;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t0 = Instant::now();
    let detail = f()?;
    let took = t0.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {took:.2?}"))
}

/// Signed Walsh value from the sine definition of the Rademacher functions,
/// sampled at the cell midpoint. Complement convention: `+1` where `W̄ = 0`.
fn oracle_walsh(k: usize, i: usize, len: usize) -> i64 {
    let x = (i as f64 + 0.5) / len as f64;
    let mut sign = 1i64;
    for j in 0..8 {
        if k >> j & 1 == 1 {
            let r = (2f64.powi(j + 1) * PI * x).sin();
            if r < 0.0 {
                sign = -sign;
            }
        }
    }
    sign
}

fn walsh_identities() -> Outcome {
    timed(Duration::from_secs(10), || {
        const N: usize = 256;
        let table: Vec<Vec<i64>> = (0..N).map(|k| (0..N).map(|i| oracle_walsh(k, i, N)).collect()).collect();
        for (k, row) in table.iter().enumerate() {
            let bits = sample_grid(PaleyIndex::from_u8(k as u8), 8, Variant::Complement).map_err(|e| e.to_string())?;
            let signed: Vec<i64> = bits.bits().iter().map(|&b| 2 * i64::from(b) - 1).collect();
            ensure(signed == *row, || format!("sampled W_{k} differs from the sine definition"))?;
        }
        for k in 0..N {
            for l in 0..N {
                let dot: i64 = table[k].iter().zip(&table[l]).map(|(a, b)| a * b).sum();
                ensure(dot == if k == l { N as i64 } else { 0 }, || format!("<W_{k}, W_{l}> = {dot}"))?;
                let group = (0..N).all(|i| table[k][i] * table[l][i] == table[k ^ l][i]);
                ensure(group, || format!("W_{k} W_{l} != W_{}", k ^ l))?;
            }
        }
        for j in 0..8u32 {
            let w = sample_grid(PaleyIndex::from_u8(1 << j), 8, Variant::Standard).unwrap();
            let r: Vec<u8> = (0..N).map(|i| ((i >> (7 - j)) & 1) as u8).collect();
            ensure(w.bits() == r.as_slice(), || format!("W_{} is not R_{j}", 1 << j))?;
        }
        let mut worst = 0.0f64;
        for seed in 0..4u64 {
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let signal: Vec<f64> = (0..N)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                })
                .collect();
            let fast = decompose(&signal).unwrap();
            let brute: Vec<f64> =
                (0..N).map(|k| (0..N).map(|i| signal[i] * table[k][i] as f64).sum::<f64>() / N as f64).collect();
            let scale = brute.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (a, b) in fast.weights().iter().zip(&brute) {
                worst = worst.max((a - b).abs() / scale);
            }
        }
        ensure(worst <= 1e-12, || format!("fast transform relative error {worst:e}"))?;
        Ok(format!("65536 pairs exact, transform rel. err {worst:.1e}"))
    })
}

fn wdd_structure() -> Outcome {
    ensure(transition_points(PaleyIndex::from_u8(3)) == [2.0 / 8.0, 6.0 / 8.0], || "l=3 transitions".into())?;
    ensure(transition_points(PaleyIndex::from_u8(1)) == [0.5], || "l=1 transitions".into())?;
    let tau = 1.0;
    let tp = 1e-3;
    let c = build_wdd_control(PaleyIndex::from_u8(3), 3, 8.0 * tau, tp).map_err(|e| e.to_string())?;
    let rate = PI / tp;
    let expected = [
        (rate, tp / 2.0, Axis::X),
        (0.0, tau - tp / 2.0, Axis::Identity),
        (0.0, tau, Axis::Identity),
        (rate, tp, Axis::X),
        (0.0, tau - tp, Axis::Identity),
        (0.0, tau, Axis::Identity),
        (0.0, tau, Axis::Identity),
        (0.0, tau, Axis::Identity),
        (rate, tp, Axis::X),
        (0.0, tau - tp, Axis::Identity),
        (0.0, tau, Axis::Identity),
        (rate, tp / 2.0, Axis::MinusY),
    ];
    ensure(c.rows().len() == expected.len(), || format!("{} rows", c.rows().len()))?;
    for (i, (row, (r, d, a))) in c.rows().iter().zip(expected).enumerate() {
        let same = row.axis == a && (row.rabi_rate - r).abs() <= 1e-9 * rate && (row.duration - d).abs() < 1e-12;
        ensure(same, || format!("row {i}: {row:?}"))?;
    }
    let pulses = c.pi_pulse_times();
    ensure(pulses.len() == 2 && (pulses[0] - 2.0).abs() < 1e-12 && (pulses[1] - 6.0).abs() < 1e-12, || {
        format!("pulse times {pulses:?}")
    })?;
    Ok("12-row control matrix, pulses at 2τ and 6τ".into())
}

fn suppression_order() -> Outcome {
    let one = Rational::from_integer(1);
    for l in 0..64u8 {
        let idx = PaleyIndex::from_u8(l);
        let r = idx.hamming() as usize;
        for p in 0..=r {
            let phi = analytic_phase(idx, &Polynomial::<Rational>::monomial(p), one, one);
            ensure(phi == moment::<Rational>(idx, p as u32), || format!("l={l} p={p}: phase and moment disagree"))?;
            let vanishes = phi == Rational::from_integer(0);
            ensure(vanishes == (p < r), || format!("l={l} p={p}: φ = {phi}"))?;
        }
        // a generic polynomial of degree r
        let coeffs: Vec<Rational> = (0..=r).map(|i| Rational::new(2 * i as i128 + 3, 7)).collect();
        let phi = analytic_phase(idx, &Polynomial::new(coeffs), one, one);
        ensure(phi != Rational::from_integer(0), || format!("l={l}: generic degree-{r} phase vanished"))?;
    }
    Ok("exact rational phases for l < 64".into())
}

fn latency_ledger() -> Outcome {
    let mut configs = 0;
    for (s, t1, r) in [(1u8, 1u8, 1u8), (3, 2, 2), (12, 5, 15), (255, 1, 3), (6, 15, 1), (128, 3, 2)] {
        for (n, t2) in [(1u16, 1u8), (4, 1), (8, 3), (32, 15), (256, 2)] {
            for mode in [SynthMode::Am, SynthMode::Pm, SynthMode::Qam] {
                let weights: Vec<FixedWord> =
                    (0..n).map(|k| FixedWord::new((i32::from(k) * 37) % 1000 - 500).unwrap()).collect();
                let run = run_pipeline(
                    TimingConfig::new(PaleyIndex::from_u8(s), t1, r).unwrap(),
                    ModulationConfig::new(n, t2).unwrap(),
                    SynthConfig::new(mode, weights),
                )
                .map_err(|e| e.to_string())?;
                let l = &run.ledger;
                let total = if mode == SynthMode::Qam { 6.5 } else { 4.5 };
                ensure(l.total_cycles() == Some(total), || format!("s={s} n={n} {mode:?}: {l:?}"))?;
                ensure(l.stage("start_to_trigger") == Some(2), || format!("start→trigger {l:?}"))?;
                ensure(l.stage("trigger_to_channels") == Some(3), || format!("trigger→channels {l:?}"))?;
                ensure(l.variable_change_cycles() == Some(2.0), || format!("variable change {l:?}"))?;
                ensure(l.reset_cycles() == Some(3.0), || format!("reset {l:?}"))?;
                configs += 1;
            }
        }
    }
    for (n, t2) in [(1usize, 1u8), (16, 1), (32, 4), (256, 15)] {
        let p: Vec<f64> = (0..n).map(|k| (k as f64 * 0.37).sin().abs()).collect();
        let fv = walshctl_core::qubit::FidelityVector::new(p, 1.0, 1.0).unwrap();
        let run = sid_pipeline(&fv, Divisor::new(n as u16).unwrap(), t2, None).map_err(|e| e.to_string())?;
        let l = &run.ledger;
        let stages = [l.stage("estimation"), l.stage("sum_weights"), l.stage("divider")];
        ensure(stages == [Some(4), Some(4), Some(2)], || format!("SID N={n}: {l:?}"))?;
        ensure(l.total_cycles() == Some(5.0), || format!("SID total {l:?}"))?;
    }
    Ok(format!("{configs} pipeline configs at 4.5/2/3 (QAM +2), SID 2+2+1"))
}

fn bit_exact_streams() -> Outcome {
    let mut streams = 0u64;
    for s in 0..=255u8 {
        let order = PaleyIndex::from_u8(s);
        let pass = sample_grid(order, order.bit_width(), Variant::Standard).unwrap();
        for t1 in 1..=15u8 {
            let expanded: Vec<u8> = pass.bits().iter().flat_map(|&b| std::iter::repeat_n(b, usize::from(t1))).collect();
            for r in 0..=15u8 {
                let cfg = TimingConfig::new(order, t1, r).unwrap();
                let run = timing_sequencer_run(&cfg, &[(0, ControlEvent::Start)], cfg.total_cycles() + 3)
                    .map_err(|e| e.to_string())?;
                let expected = expanded.repeat(usize::from(r));
                ensure(run.stream == expected, || format!("timing s={s} t1={t1} R={r}"))?;
                if r == 0 {
                    ensure(run.triggers.is_empty(), || format!("R=0 triggers for s={s}"))?;
                }
                streams += 1;
            }
        }
    }
    for t2 in 1..=15u8 {
        let cfg = ModulationConfig::new(256, t2).unwrap();
        let mut gen = ModulationGenerator::new(cfg).unwrap();
        let mut channels = vec![Vec::new(); 256];
        gen.clk_bar_edge(true);
        gen.clk_bar_edge(false);
        while gen.data_valid() {
            for (c, &b) in channels.iter_mut().zip(gen.bits()) {
                c.push(b);
            }
            gen.clk_bar_edge(false);
        }
        for (k, ch) in channels.iter().enumerate() {
            let grid = sample_grid(PaleyIndex::from_u8(k as u8), 8, Variant::Complement).unwrap();
            let expected: Vec<u8> = grid.bits().iter().flat_map(|&b| std::iter::repeat_n(b, usize::from(t2))).collect();
            ensure(*ch == expected, || format!("modulation channel {k}, t2={t2}"))?;
            streams += 1;
        }
    }
    Ok(format!("{streams} streams bit-exact"))
}

fn fig3_reproduction() -> Outcome {
    let (t1, t2) = (2u8, 1u8);
    let x0 = FixedWord::from_fraction(0.5).unwrap();
    let x3 = FixedWord::from_fraction(0.25).unwrap();
    let run = run_pipeline(
        TimingConfig::new(PaleyIndex::from_u8(3), t1, 2).unwrap(),
        ModulationConfig::new(4, t2).unwrap(),
        SynthConfig::new(SynthMode::Am, vec![x0, FixedWord::ZERO, FixedWord::ZERO, x3]),
    )
    .map_err(|e| e.to_string())?;
    let start = run.trace.rising_edges("start")[0];
    let first_slot = start + 2;
    // bit flips of W̄_3 W̄_3 = 0110 0110
    let expected: Vec<u64> = [1u64, 3, 5, 7].iter().map(|i| first_slot + 2 * u64::from(t1) * i).collect();
    let triggers = run.trace.rising_edges("trigger");
    ensure(triggers == expected, || format!("triggers {triggers:?}, expected {expected:?}"))?;
    let bursts = run.output_bursts();
    ensure(bursts.len() == 4, || format!("{} I-DAC bursts", bursts.len()))?;
    // sum of signed complement Walsh functions at quarter resolution
    let fs = 8191.0;
    let oracle: Vec<f64> = (0..4)
        .flat_map(|i| {
            let v = 0.5 * fs + 0.25 * fs * oracle_walsh(3, i, 4) as f64;
            std::iter::repeat_n(v, usize::from(t2))
        })
        .collect();
    for b in &bursts {
        ensure(b.len() == oracle.len(), || format!("burst length {}", b.len()))?;
        for ((i, q), o) in b.iter().zip(&oracle) {
            ensure((*i as f64 - o).abs() <= 1.0 && *q == 0, || format!("I={i} Q={q} vs {o}"))?;
        }
    }
    let levels: Vec<i64> = bursts[0].iter().map(|p| p.0).collect();
    Ok(format!("4 triggers, envelope {levels:?}"))
}

fn physics_cross_check() -> Outcome {
    let (gamma, window) = (2.0e6, 4.0e-6);
    let max_weight = 0.1 / (gamma * window);
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let noise = NoiseTrace::walsh_band(16, max_weight, 1000 + seed, window).map_err(|e| e.to_string())?;
        for l in [0u8, 1, 3, 5, 12] {
            let idx = PaleyIndex::from_u8(l);
            let control = build_wdd_control(idx, 4, window, 1e-6 * window).map_err(|e| e.to_string())?;
            let psi = propagate(&control, &noise, gamma);
            ensure((psi.norm() - 1.0).abs() <= 1e-12, || format!("norm drift {}", psi.norm()))?;
            let (_, p) = analytic_protocol(idx, &noise, gamma, window);
            worst = worst.max((psi.probability_zero() - p).abs());
        }
    }
    ensure(worst <= 1e-3, || format!("max |ΔP| = {worst:e}"))?;
    Ok(format!("max |ΔP| = {worst:.2e} over 100 runs"))
}

fn sid_round_trip() -> Outcome {
    timed(Duration::from_secs(30), || {
        let (gamma, window) = (1.5e6, 2.0e-6);
        let bound = FRAC_PI_4 / (gamma * window);
        let mut worst_inf = 0.0f64;
        for seed in 0..50u64 {
            let noise = NoiseTrace::walsh_band(16, bound, seed, window).map_err(|e| e.to_string())?;
            let d = Divisor::new(16).unwrap();
            let fv =
                batch_fidelities(&noise, gamma, window, 16, FidelityMethod::Analytic).map_err(|e| e.to_string())?;
            let reference = reference_lsb(&noise, gamma, window, d, 16);
            let run = sid_pipeline(&fv, d, 1, Some(&reference)).map_err(|e| e.to_string())?;
            let m = run.metrics.expect("reference given");
            worst_inf = worst_inf.max(m.linf_lsb);
        }
        ensure(worst_inf <= 2.0, || format!("L∞ = {worst_inf} LSB"))?;

        let d = Divisor::new(32).unwrap();
        let mut pairs = Vec::new();
        for seed in 0..20u64 {
            let noise = NoiseTrace::walsh_band(32, bound, 500 + seed, window).map_err(|e| e.to_string())?;
            let reference = reference_lsb(&noise, gamma, window, d, 32);
            let mut l2 = [0.0; 2];
            for (slot, n) in [16usize, 32].into_iter().enumerate() {
                let fv =
                    batch_fidelities(&noise, gamma, window, n, FidelityMethod::Analytic).map_err(|e| e.to_string())?;
                let run = sid_pipeline(&fv, d, 1, Some(&reference)).map_err(|e| e.to_string())?;
                l2[slot] = run.metrics.expect("reference given").l2_lsb;
            }
            ensure(l2[1] < l2[0], || format!("seed {seed}: L2(N=32) = {} vs L2(N=16) = {}", l2[1], l2[0]))?;
            pairs.push(l2);
        }
        let mean = |i: usize| pairs.iter().map(|p| p[i]).sum::<f64>() / pairs.len() as f64;
        Ok(format!("N=16 L∞ ≤ {worst_inf:.3} LSB; mean L2 N=16 {:.1}, N=32 {:.2} LSB", mean(0), mean(1)))
    })
}

fn dds_and_arcsin() -> Outcome {
    let fs = 8191.0;
    let mut worst = 0.0f64;
    for w in 0..8192u16 {
        let (c, s) = dds_lookup(w);
        let phase = 2.0 * PI * f64::from(w) / 8192.0;
        worst = worst.max((f64::from(c.lsb()) - fs * phase.cos()).abs());
        worst = worst.max((f64::from(s.lsb()) - fs * phase.sin()).abs());
    }
    ensure(worst <= 1.0, || format!("DDS error {worst} LSB"))?;
    let table = ArcsinTable::get();
    let entries = table.entries();
    ensure(entries.len() == 1 << 14, || "table length".into())?;
    ensure(table.lookup(0) == FixedWord::ZERO, || "table(0) != 0".into())?;
    for u in -8191i16..=8191 {
        ensure(table.lookup(-u) == -table.lookup(u), || format!("odd symmetry at u={u}"))?;
        let ideal = (f64::from(u) / fs).asin() / FRAC_PI_2 * fs;
        ensure((f64::from(table.lookup(u).lsb()) - ideal).abs() <= 0.5, || format!("entry u={u}"))?;
    }
    ensure(entries.windows(2).all(|w| w[0] <= w[1]), || "arcsin table not monotone".into())?;
    Ok(format!("DDS max error {worst:.3} LSB; 16384 arcsin entries odd and monotone"))
}

fn bench_report() -> Outcome {
    let n = 16u16;
    let run = run_pipeline(
        TimingConfig::new(PaleyIndex::from_u8(3), 1, 1).unwrap(),
        ModulationConfig::new(n, 1).unwrap(),
        SynthConfig::new(SynthMode::Am, vec![FixedWord::ZERO; usize::from(n)]),
    )
    .map_err(|e| e.to_string())?;
    let report = compare_report(&run.ledger, &run.config, &CostModel::default()).map_err(|e| e.to_string())?;
    let ratio = |s| report.row(s).map(|r| r.ratio).unwrap_or(f64::NAN);
    let vc = ratio(Scenario::VariableChange);
    let trig = ratio(Scenario::TriggerToOutput);
    let walsh = ratio(Scenario::WalshCalc);
    ensure(vc >= 1e5 && (vc - 6.5e5).abs() <= 1e-6 * 6.5e5, || format!("variable-change ratio {vc}"))?;
    ensure((trig - 125.0 / 4.5).abs() < 1e-9 && (trig - 27.8).abs() < 0.05, || format!("trigger ratio {trig}"))?;
    ensure(walsh == 8000.0, || format!("walsh ratio {walsh}"))?;
    ensure(report.payload.computed_bits == 250 && report.payload.reference_bits == 345, || {
        format!("payload {:?}", report.payload)
    })?;
    ensure(report.model_based, || "report not flagged as model-based".into())?;
    ensure(report.scenarios.iter().all(|r| r.ratio.is_finite() && r.ratio > 1.0), || "ratio ≤ 1".into())?;
    Ok(format!("ratios {vc:.3e} / {trig:.2} / {walsh}; payload 250 vs 345 bits"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("walsh identity suite", walsh_identities),
        ("WDD structure", wdd_structure),
        ("suppression order", suppression_order),
        ("latency ledger", latency_ledger),
        ("bit-exact hardware streams", bit_exact_streams),
        ("scope trace reproduction", fig3_reproduction),
        ("unitary vs analytic physics", physics_cross_check),
        ("SID round trip", sid_round_trip),
        ("DDS and arcsin tables", dds_and_arcsin),
        ("bench report", bench_report),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
