//! Flat `section.key = value` run files.
//!
//! Blank lines and `#` comments are ignored. Every key is optional; missing
//! keys take the defaults listed by `walshctl validate`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use walshctl_core::bench::CostModel;
use walshctl_core::fixed::FixedWord;
use walshctl_core::hw::{ModulationConfig, PipelineConfig, SynthConfig, SynthMode, TimingConfig};
use walshctl_core::qubit::{FidelityMethod, DEFAULT_PI_TIME_RATIO};
use walshctl_core::sid::Divisor;
use walshctl_core::walsh::{PaleyIndex, Variant};

#[derive(Debug, Clone, PartialEq)]
pub struct GenSection {
    pub orders: Vec<PaleyIndex>,
    /// Grid exponent; defaults to the widest order's bit width.
    pub grid: Option<u32>,
    pub variant: Variant,
    pub rademacher: Vec<u32>,
}

impl GenSection {
    pub fn grid_exponent(&self) -> u32 {
        self.grid.unwrap_or_else(|| {
            let widest = self.orders.iter().map(|o| o.bit_width()).max().unwrap_or(1);
            let rad = self.rademacher.iter().map(|j| j + 1).max().unwrap_or(1);
            widest.max(rad)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    /// Random weights on the first `terms` Walsh functions, each with
    /// `|γ T X_k| ≤ max_phase`.
    WalshBand {
        terms: usize,
        max_phase: f64,
    },
    Constant {
        value: f64,
    },
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// Coefficients of `(t/T)^p`.
    Polynomial {
        coefficients: Vec<f64>,
    },
    /// One value per line, piecewise constant over `[0, T]`.
    Samples {
        file: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SidSection {
    pub gamma: f64,
    pub window: f64,
    pub n: usize,
    pub t2: u8,
    /// Defaults to `n`.
    pub divisor: Divisor,
    pub method: FidelityMethod,
    pub noise: NoiseSpec,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gen: GenSection,
    pub pipeline: PipelineConfig,
    pub sid: SidSection,
    pub bench: CostModel,
}

impl RunConfig {
    /// Seed for stochastic noise, with `--seed` taking precedence.
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        if seed.is_some() {
            self.sid.seed = seed;
        }
        self
    }

    /// Normalized `key = value` listing.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let list = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(", ");
        let g = &self.gen;
        let _ = writeln!(out, "gen.orders = {}", list(&mut g.orders.iter().map(|o| o.to_string())));
        let _ = writeln!(out, "gen.grid = {}", g.grid_exponent());
        let _ = writeln!(out, "gen.variant = {}", variant_name(g.variant));
        let _ = writeln!(out, "gen.rademacher = {}", list(&mut g.rademacher.iter().map(|j| j.to_string())));
        let p = &self.pipeline;
        let _ = writeln!(out, "timing.s = {}", p.timing.order);
        let _ = writeln!(out, "timing.t1 = {}", p.timing.t1);
        let _ = writeln!(out, "timing.repeat = {}", p.timing.repeat);
        let _ = writeln!(out, "modulation.n = {}", p.modulation.channels);
        let _ = writeln!(out, "modulation.t2 = {}", p.modulation.t2);
        let _ = writeln!(out, "synth.mode = {}", mode_name(p.synth.mode));
        let _ =
            writeln!(out, "synth.weights = {}", list(&mut p.synth.weights.iter().map(|w| w.to_fraction().to_string())));
        if let Some(pw) = &p.synth.phase_weights {
            let _ =
                writeln!(out, "synth.phase_weights = {}", list(&mut pw.iter().map(|w| w.to_fraction().to_string())));
        }
        let _ = writeln!(out, "synth.carrier_frequency = {:e}", p.synth.carrier_frequency);
        let s = &self.sid;
        let _ = writeln!(out, "sid.gamma = {:e}", s.gamma);
        let _ = writeln!(out, "sid.T = {:e}", s.window);
        let _ = writeln!(out, "sid.N = {}", s.n);
        let _ = writeln!(out, "sid.t2 = {}", s.t2);
        let _ = writeln!(out, "sid.divisor = {}", s.divisor.value());
        match s.method {
            FidelityMethod::Analytic => {
                let _ = writeln!(out, "sid.method = analytic");
            }
            FidelityMethod::Unitary { pi_time_ratio } => {
                let _ = writeln!(out, "sid.method = unitary");
                let _ = writeln!(out, "sid.pi_time_ratio = {pi_time_ratio:e}");
            }
        }
        match &s.noise {
            NoiseSpec::WalshBand { terms, max_phase } => {
                let _ = writeln!(
                    out,
                    "sid.noise = walsh_band\nsid.noise.terms = {terms}\nsid.noise.max_phase = {max_phase}"
                );
            }
            NoiseSpec::Constant { value } => {
                let _ = writeln!(out, "sid.noise = constant\nsid.noise.value = {value:e}");
            }
            NoiseSpec::Sinusoid { amplitude, frequency, phase } => {
                let _ = writeln!(
                    out,
                    "sid.noise = sinusoid\nsid.noise.amplitude = {amplitude:e}\nsid.noise.frequency = {frequency:e}\nsid.noise.phase = {phase}"
                );
            }
            NoiseSpec::Polynomial { coefficients } => {
                let c = list(&mut coefficients.iter().map(|c| format!("{c:e}")));
                let _ = writeln!(out, "sid.noise = polynomial\nsid.noise.coefficients = {c}");
            }
            NoiseSpec::Samples { file } => {
                let _ = writeln!(out, "sid.noise = samples\nsid.noise.file = {}", file.display());
            }
        }
        if let Some(seed) = s.seed {
            let _ = writeln!(out, "sid.seed = {seed}");
        }
        let b = &self.bench;
        let _ = writeln!(out, "bench.per_sample_precompile = {}", b.per_sample_precompile);
        let _ = writeln!(out, "bench.demo_samples = {}", b.demo_samples);
        let _ = writeln!(out, "bench.recompute_on_change = {}", b.recompute_on_change);
        let _ = writeln!(out, "bench.trigger_to_output = {}", b.trigger_to_output);
        let _ = writeln!(out, "bench.walsh_calc_slowdown = {}", b.walsh_calc_slowdown);
        out
    }
}

pub fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Standard => "standard",
        Variant::Complement => "complement",
    }
}

pub fn mode_name(m: SynthMode) -> &'static str {
    match m {
        SynthMode::Am => "AM",
        SynthMode::Pm => "PM",
        SynthMode::Qam => "QAM",
    }
}

const KEYS: &[&str] = &[
    "gen.orders",
    "gen.grid",
    "gen.variant",
    "gen.rademacher",
    "timing.s",
    "timing.t1",
    "timing.repeat",
    "modulation.n",
    "modulation.t2",
    "synth.mode",
    "synth.weights",
    "synth.phase_weights",
    "synth.carrier_frequency",
    "sid.gamma",
    "sid.T",
    "sid.N",
    "sid.t2",
    "sid.divisor",
    "sid.method",
    "sid.pi_time_ratio",
    "sid.noise",
    "sid.noise.terms",
    "sid.noise.max_phase",
    "sid.noise.value",
    "sid.noise.amplitude",
    "sid.noise.frequency",
    "sid.noise.phase",
    "sid.noise.coefficients",
    "sid.noise.file",
    "sid.seed",
    "bench.per_sample_precompile",
    "bench.demo_samples",
    "bench.recompute_on_change",
    "bench.trigger_to_output",
    "bench.walsh_calc_slowdown",
];

/// Raw key/value pairs, keyed by dotted name.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>, Vec<String>> {
    let mut map = BTreeMap::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("line {}: expected `key = value`, got {line:?}", i + 1));
            continue;
        };
        let key = key.trim().to_owned();
        if !KEYS.contains(&key.as_str()) {
            errors.push(format!("line {}: unknown key `{key}`", i + 1));
        } else if map.insert(key.clone(), value.trim().to_owned()).is_some() {
            errors.push(format!("line {}: duplicate key `{key}`", i + 1));
        }
    }
    if errors.is_empty() {
        Ok(map)
    } else {
        Err(errors)
    }
}

/// Collects every violation instead of stopping at the first.
struct Checker<'a> {
    raw: &'a BTreeMap<String, String>,
    errors: Vec<String>,
}

impl Checker<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.raw.get(key).map(String::as_str)
    }

    fn int(&mut self, key: &str, default: i64, lo: i64, hi: i64, range: &str) -> i64 {
        let Some(v) = self.get(key) else { return default };
        match v.parse::<i64>() {
            Ok(x) if x > hi => {
                self.errors.push(format!("{key} = {x} exceeds {range}"));
                default
            }
            Ok(x) if x < lo => {
                self.errors.push(format!("{key} = {x} is below {range}"));
                default
            }
            Ok(x) => x,
            Err(_) => {
                self.errors.push(format!("{key} = {v:?} is not an integer"));
                default
            }
        }
    }

    fn real(&mut self, key: &str, default: f64, ok: impl Fn(f64) -> bool, rule: &str) -> f64 {
        let Some(v) = self.get(key) else { return default };
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() && ok(x) => x,
            Ok(x) => {
                self.errors.push(format!("{key} = {x} must be {rule}"));
                default
            }
            Err(_) => {
                self.errors.push(format!("{key} = {v:?} is not a number"));
                default
            }
        }
    }

    fn list<T: std::str::FromStr>(&mut self, key: &str) -> Option<Vec<T>> {
        let v = self.get(key)?;
        let mut out = Vec::new();
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse::<T>() {
                Ok(x) => out.push(x),
                Err(_) => {
                    self.errors.push(format!("{key}: cannot parse {item:?}"));
                    return None;
                }
            }
        }
        Some(out)
    }

    /// Weights as fractions of full scale: either a full list, or sparse
    /// `index:value` pairs with the rest zero.
    fn weights(&mut self, key: &str, n: usize, default: &[(usize, f64)]) -> Option<Vec<FixedWord>> {
        let mut dense = vec![0.0; n];
        match self.get(key) {
            None => {
                for &(k, x) in default.iter().filter(|(k, _)| *k < n) {
                    dense[k] = x;
                }
            }
            Some(v) if v.contains(':') => {
                for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let parsed = item
                        .split_once(':')
                        .and_then(|(k, x)| Some((k.trim().parse::<usize>().ok()?, x.trim().parse::<f64>().ok()?)));
                    match parsed {
                        Some((k, x)) if k < n => dense[k] = x,
                        Some((k, _)) => {
                            self.errors.push(format!("{key}: channel {k} does not exist for modulation.n = {n}"));
                            return None;
                        }
                        None => {
                            self.errors.push(format!("{key}: cannot parse {item:?} as index:value"));
                            return None;
                        }
                    }
                }
            }
            Some(_) => {
                dense = self.list::<f64>(key)?;
                if dense.len() != n {
                    self.errors.push(format!("{key} has {} entries, modulation.n = {n}", dense.len()));
                    return None;
                }
            }
        }
        let mut words = Vec::with_capacity(n);
        for (k, x) in dense.into_iter().enumerate() {
            match FixedWord::from_fraction(x) {
                Ok(w) => words.push(w),
                Err(_) => {
                    self.errors.push(format!("{key}[{k}] = {x} lies outside the 14-bit range [-1, 1]"));
                    return None;
                }
            }
        }
        Some(words)
    }
}

/// Checks every field and returns the normalized configuration or all
/// violations at once.
pub fn validate(raw: &BTreeMap<String, String>) -> Result<RunConfig, Vec<String>> {
    let mut c = Checker { raw, errors: Vec::new() };

    let orders: Vec<PaleyIndex> = match c.list::<u32>("gen.orders") {
        None => vec![PaleyIndex::from_u8(12)],
        Some(list) => list
            .into_iter()
            .filter_map(|l| match PaleyIndex::try_from(l) {
                Ok(i) => Some(i),
                Err(_) => {
                    c.errors.push(format!("gen.orders: {l} exceeds 8-bit range 0..=255"));
                    None
                }
            })
            .collect(),
    };
    let grid = c.raw.contains_key("gen.grid").then(|| c.int("gen.grid", 0, 0, 16, "grid range 0..=16") as u32);
    let variant = match c.get("gen.variant") {
        None | Some("standard") => Variant::Standard,
        Some("complement") => Variant::Complement,
        Some(v) => {
            c.errors.push(format!("gen.variant = {v:?} must be standard or complement"));
            Variant::Standard
        }
    };
    let rademacher: Vec<u32> = c.list("gen.rademacher").unwrap_or_default();
    if let Some(j) = rademacher.iter().find(|&&j| j > 15) {
        c.errors.push(format!("gen.rademacher: order {j} exceeds 0..=15"));
    }
    let gen = GenSection { orders, grid, variant, rademacher };
    if let Some(m) = grid {
        if let Some(o) = gen.orders.iter().find(|o| o.bit_width() > m) {
            c.errors.push(format!("gen.grid = {m} is too coarse for order {o} (needs {})", o.bit_width()));
        }
        if let Some(j) = gen.rademacher.iter().find(|&&j| j >= m) {
            c.errors.push(format!("gen.grid = {m} is too coarse for Rademacher order {j}"));
        }
    }

    let s = c.int("timing.s", 3, 0, 255, "8-bit range 0..=255");
    let t1 = c.int("timing.t1", 2, 1, 255, "expansion range 1..=255 (expansion must be at least 1)");
    let repeat = c.int("timing.repeat", 2, 0, 15, "4-bit range 0..=15");
    let timing =
        TimingConfig::new(PaleyIndex::from_u8(s as u8), t1 as u8, repeat as u8).expect("fields range-checked above");

    let n = c.int("modulation.n", 4, 1, 256, "channel range 1..=256");
    if !(n as u64).is_power_of_two() {
        c.errors.push(format!("modulation.n = {n} must be a power of two"));
    }
    let n = if (n as u64).is_power_of_two() { n as u16 } else { 4 };
    let t2 = c.int("modulation.t2", 1, 1, 15, "4-bit range 1..=15");
    let modulation = ModulationConfig::new(n, t2 as u8).expect("fields range-checked above");

    let mode = match c.get("synth.mode") {
        None => SynthMode::Am,
        Some(v) => v.parse().unwrap_or_else(|e: walshctl_core::error::Error| {
            c.errors.push(e.to_string());
            SynthMode::Am
        }),
    };
    let weights = c.weights("synth.weights", usize::from(n), &[(0, 0.5), (3, 0.25)]).unwrap_or_default();
    let phase_weights = if c.get("synth.phase_weights").is_some() {
        c.weights("synth.phase_weights", usize::from(n), &[])
    } else {
        None
    };
    let carrier = c.real("synth.carrier_frequency", 0.0, |x| x >= 0.0, "non-negative");
    let synth = SynthConfig { mode, weights, phase_weights, carrier_frequency: carrier };
    let pipeline = PipelineConfig { timing, modulation, synth, clock: Default::default() };

    let gamma = c.real("sid.gamma", 1.5e6, |x| x > 0.0, "positive");
    let window = c.real("sid.T", 2.0e-6, |x| x > 0.0, "positive");
    let sid_n = c.int("sid.N", 16, 1, 256, "channel range 1..=256");
    if !(sid_n as u64).is_power_of_two() {
        c.errors.push(format!("sid.N = {sid_n} must be a power of two"));
    }
    let sid_n = if (sid_n as u64).is_power_of_two() { sid_n as usize } else { 16 };
    let sid_t2 = c.int("sid.t2", 1, 1, 15, "4-bit range 1..=15") as u8;
    let divisor = c.int("sid.divisor", sid_n as i64, 1, 8191, "13-bit range 1..=8191");
    let divisor = Divisor::new(divisor as u16).expect("range-checked above");
    let method = match c.get("sid.method") {
        None | Some("analytic") => FidelityMethod::Analytic,
        Some("unitary") => FidelityMethod::Unitary {
            pi_time_ratio: c.real("sid.pi_time_ratio", DEFAULT_PI_TIME_RATIO, |x| x > 0.0 && x < 0.5, "in (0, 0.5)"),
        },
        Some(v) => {
            c.errors.push(format!("sid.method = {v:?} must be analytic or unitary"));
            FidelityMethod::Analytic
        }
    };
    let noise = match c.get("sid.noise") {
        None | Some("walsh_band") => NoiseSpec::WalshBand {
            terms: c.int("sid.noise.terms", sid_n as i64, 1, 256, "range 1..=256") as usize,
            max_phase: c.real("sid.noise.max_phase", FRAC_PI_4, |x| x >= 0.0, "non-negative"),
        },
        Some("constant") => NoiseSpec::Constant { value: c.real("sid.noise.value", 0.0, |_| true, "finite") },
        Some("sinusoid") => NoiseSpec::Sinusoid {
            amplitude: c.real("sid.noise.amplitude", 0.0, |_| true, "finite"),
            frequency: c.real("sid.noise.frequency", 0.0, |x| x >= 0.0, "non-negative"),
            phase: c.real("sid.noise.phase", 0.0, |_| true, "finite"),
        },
        Some("polynomial") => {
            NoiseSpec::Polynomial { coefficients: c.list("sid.noise.coefficients").unwrap_or_default() }
        }
        Some("samples") => match c.get("sid.noise.file") {
            Some(f) => NoiseSpec::Samples { file: PathBuf::from(f) },
            None => {
                c.errors.push("sid.noise = samples needs sid.noise.file".into());
                NoiseSpec::Constant { value: 0.0 }
            }
        },
        Some(v) => {
            c.errors.push(format!("sid.noise = {v:?} must be walsh_band, constant, sinusoid, polynomial or samples"));
            NoiseSpec::Constant { value: 0.0 }
        }
    };
    if let NoiseSpec::WalshBand { terms, .. } = noise {
        if !terms.is_power_of_two() {
            c.errors.push(format!("sid.noise.terms = {terms} must be a power of two"));
        }
    }
    let seed = c.raw.contains_key("sid.seed").then(|| c.int("sid.seed", 0, 0, i64::MAX, "range 0..=2^63-1") as u64);
    let sid = SidSection { gamma, window, n: sid_n, t2: sid_t2, divisor, method, noise, seed };

    let d = CostModel::default();
    let pos = |x: f64| x >= 0.0;
    let bench = CostModel {
        per_sample_precompile: c.real("bench.per_sample_precompile", d.per_sample_precompile, pos, "non-negative"),
        demo_samples: c.int("bench.demo_samples", d.demo_samples as i64, 0, i64::MAX, "range") as u64,
        recompute_on_change: c.real("bench.recompute_on_change", d.recompute_on_change, pos, "non-negative"),
        trigger_to_output: c.real("bench.trigger_to_output", d.trigger_to_output, pos, "non-negative"),
        walsh_calc_slowdown: c.real("bench.walsh_calc_slowdown", d.walsh_calc_slowdown, pos, "non-negative"),
    };

    if c.errors.is_empty() {
        Ok(RunConfig { gen, pipeline, sid, bench })
    } else {
        Err(c.errors)
    }
}

/// Resolves relative noise files against the run file's directory.
pub fn resolve_paths(mut cfg: RunConfig, base: Option<&Path>) -> RunConfig {
    if let (NoiseSpec::Samples { file }, Some(base)) = (&mut cfg.sid.noise, base) {
        if file.is_relative() {
            *file = base.join(&*file);
        }
    }
    cfg
}
