use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::walsh::{synthesize, WalshSpectrum};

/// Exact integral of a field over `[t0, t1]`.
pub trait SegmentIntegral<S> {
    fn integral(&self, t0: &S, t1: &S) -> S;
}

/// `b(t) = Σ_p c_p t^p` with coefficients in any scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    pub coefficients: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(coefficients: Vec<S>) -> Self {
        Polynomial { coefficients }
    }

    /// The monomial `t^p`.
    pub fn monomial(p: usize) -> Self {
        let mut coefficients = vec![S::zero(); p + 1];
        coefficients[p] = S::one();
        Polynomial { coefficients }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    fn antiderivative(&self, t: &S) -> S {
        let mut acc = S::zero();
        let mut power = t.clone();
        for (p, c) in self.coefficients.iter().enumerate() {
            acc = acc + c.clone() * power.clone() / S::from_i64(p as i64 + 1);
            power = power * t.clone();
        }
        acc
    }
}

impl<S: Scalar> SegmentIntegral<S> for Polynomial<S> {
    fn integral(&self, t0: &S, t1: &S) -> S {
        self.antiderivative(t1) - self.antiderivative(t0)
    }
}

/// Family of a [`NoiseTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Constant,
    Sinusoid,
    /// Seeded random weights on the first `terms` Walsh functions.
    WalshBand,
    /// Piecewise-constant samples on a uniform grid of `[0, T]`.
    Samples,
    /// `Σ_p c_p (t/T)^p`.
    Polynomial,
}

/// Scalar parameters; only the fields of the trace's kind are set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseParameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Hz.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    /// Largest `|X_k|` drawn for a Walsh-band trace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<f64>,
}

/// A dephasing field `b(t)` on `[0, T]`; held at `b(T)` afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseTrace {
    pub kind: NoiseKind,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub parameters: NoiseParameters,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<f64>,
    #[serde(rename = "T")]
    pub duration: f64,
}

fn check_duration(duration: f64) -> Result<()> {
    if duration.is_finite() && duration > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "noise duration T", value: duration, domain: "T > 0" })
    }
}

impl NoiseTrace {
    fn plain(kind: NoiseKind, parameters: NoiseParameters, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        Ok(NoiseTrace { kind, seed: None, parameters, samples: Vec::new(), duration })
    }

    pub fn zero(duration: f64) -> Result<Self> {
        Self::constant(0.0, duration)
    }

    pub fn constant(value: f64, duration: f64) -> Result<Self> {
        Self::plain(NoiseKind::Constant, NoiseParameters { value: Some(value), ..Default::default() }, duration)
    }

    /// `A sin(2π f t + φ₀)`.
    pub fn sinusoid(amplitude: f64, frequency: f64, phase: f64, duration: f64) -> Result<Self> {
        let parameters = NoiseParameters {
            amplitude: Some(amplitude),
            frequency: Some(frequency),
            phase: Some(phase),
            ..Default::default()
        };
        Self::plain(NoiseKind::Sinusoid, parameters, duration)
    }

    /// `Σ_p c_p (t/T)^p`.
    pub fn polynomial(coefficients: Vec<f64>, duration: f64) -> Result<Self> {
        Self::plain(NoiseKind::Polynomial, NoiseParameters { coefficients, ..Default::default() }, duration)
    }

    pub fn from_samples(samples: Vec<f64>, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        if samples.is_empty() {
            return Err(Error::Config("sampled noise needs at least one sample".into()));
        }
        Ok(NoiseTrace { kind: NoiseKind::Samples, seed: None, parameters: Default::default(), samples, duration })
    }

    /// Field whose Walsh spectrum on `[0, T]` is exactly `weights`.
    pub fn from_spectrum(weights: &[f64], duration: f64) -> Result<Self> {
        let spectrum = WalshSpectrum::new(weights.to_vec())?;
        let m = weights.len().trailing_zeros();
        let mut trace = Self::from_samples(synthesize(&spectrum, m)?, duration)?;
        trace.parameters.weights = weights.to_vec();
        trace.parameters.terms = Some(weights.len());
        Ok(trace)
    }

    /// Random spectrum on the first `terms` Walsh functions, `X_k ~ U[−max, max]`.
    pub fn walsh_band(terms: usize, max_weight: f64, seed: u64, duration: f64) -> Result<Self> {
        if !terms.is_power_of_two() || terms > 1 << 16 {
            return Err(Error::NotPowerOfTwo(terms));
        }
        if !(max_weight.is_finite() && max_weight >= 0.0) {
            return Err(Error::Domain { what: "max_weight", value: max_weight, domain: "finite, ≥ 0" });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(-max_weight..=max_weight)).collect();
        let mut trace = Self::from_spectrum(&weights, duration)?;
        trace.kind = NoiseKind::WalshBand;
        trace.seed = Some(seed);
        trace.parameters.max_weight = Some(max_weight);
        Ok(trace)
    }

    /// Checks that the fields required by `kind` are present.
    pub fn validate(&self) -> Result<()> {
        check_duration(self.duration)?;
        let p = &self.parameters;
        let missing = |what: &str| Err(Error::Config(format!("{what} noise is missing a parameter")));
        match self.kind {
            NoiseKind::Constant if p.value.is_none() => missing("constant"),
            NoiseKind::Sinusoid if p.amplitude.is_none() || p.frequency.is_none() => missing("sinusoid"),
            NoiseKind::WalshBand | NoiseKind::Samples if self.samples.is_empty() => missing("sampled"),
            NoiseKind::WalshBand if self.seed.is_none() => Err(Error::Config("walsh_band noise needs a seed".into())),
            _ => Ok(()),
        }
    }

    /// Walsh weights used to build the trace, if it was built from a spectrum.
    pub fn weights(&self) -> &[f64] {
        &self.parameters.weights
    }

    /// `b(t)`, clamped to the window.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        let x = t / self.duration;
        let p = &self.parameters;
        match self.kind {
            NoiseKind::Constant => p.value.unwrap_or(0.0),
            NoiseKind::Sinusoid => {
                let w = std::f64::consts::TAU * p.frequency.unwrap_or(0.0);
                p.amplitude.unwrap_or(0.0) * (w * t + p.phase.unwrap_or(0.0)).sin()
            }
            NoiseKind::Polynomial => p.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c),
            NoiseKind::WalshBand | NoiseKind::Samples => {
                let n = self.samples.len();
                self.samples[((x * n as f64) as usize).min(n - 1)]
            }
        }
    }

    /// `∫_0^t b`, continued past `T` with the held value `b(T)`.
    pub fn antiderivative(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return t * self.eval(0.0);
        }
        if t > self.duration {
            return self.antiderivative(self.duration) + (t - self.duration) * self.eval(self.duration);
        }
        let big_t = self.duration;
        let x = t / big_t;
        let p = &self.parameters;
        match self.kind {
            NoiseKind::Constant => p.value.unwrap_or(0.0) * t,
            NoiseKind::Sinusoid => {
                let (a, f, ph) = (p.amplitude.unwrap_or(0.0), p.frequency.unwrap_or(0.0), p.phase.unwrap_or(0.0));
                if f == 0.0 {
                    a * ph.sin() * t
                } else {
                    let w = std::f64::consts::TAU * f;
                    a * (ph.cos() - (w * t + ph).cos()) / w
                }
            }
            NoiseKind::Polynomial => {
                let mut acc = 0.0;
                let mut power = x;
                for (k, c) in p.coefficients.iter().enumerate() {
                    acc += c * power / (k + 1) as f64;
                    power *= x;
                }
                big_t * acc
            }
            NoiseKind::WalshBand | NoiseKind::Samples => {
                let n = self.samples.len();
                let cell = big_t / n as f64;
                let full = ((x * n as f64) as usize).min(n);
                let head: f64 = self.samples[..full].iter().sum::<f64>() * cell;
                let rest = if full < n { (t - full as f64 * cell) * self.samples[full] } else { 0.0 };
                head + rest
            }
        }
    }

    /// Mean of `b` over `[t0, t1]`; the point value when the cell is empty.
    pub fn cell_average(&self, t0: f64, t1: f64) -> f64 {
        if t1 > t0 {
            (self.antiderivative(t1) - self.antiderivative(t0)) / (t1 - t0)
        } else {
            self.eval(t0)
        }
    }

    /// Same trace with every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        let p = &mut out.parameters;
        for v in [&mut p.value, &mut p.amplitude, &mut p.max_weight].into_iter().flatten() {
            *v *= factor;
        }
        p.coefficients.iter_mut().chain(p.weights.iter_mut()).for_each(|c| *c *= factor);
        out.samples.iter_mut().for_each(|s| *s *= factor);
        out
    }
}

impl<F: Real> SegmentIntegral<F> for NoiseTrace {
    fn integral(&self, t0: &F, t1: &F) -> F {
        let (a, b) = (Scalar::to_f64(t0), Scalar::to_f64(t1));
        F::lit(self.antiderivative(b) - self.antiderivative(a))
    }
}
