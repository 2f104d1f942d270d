use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_wdd_control, ControlMatrix, NoiseTrace, QubitState, SegmentIntegral, Su2};
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::walsh::{signed_waveform, PaleyIndex};

/// Sub-steps per minimal grid segment in [`propagate`].
pub const REFINEMENT: usize = 64;
/// `τ_π / T` standing in for instantaneous pulses.
pub const DEFAULT_PI_TIME_RATIO: f64 = 1e-6;

/// `φ_l = γ ∫_0^T W_l(t/T) b(t) dt`, exact whenever `noise` integrates exactly in `S`.
pub fn analytic_phase<S: Scalar, N: SegmentIntegral<S>>(l: PaleyIndex, noise: &N, gamma: S, window: S) -> S {
    let waveform = signed_waveform(l, l.bit_width()).expect("native grid is always valid");
    let n = S::from_i64(waveform.len() as i64);
    let at = |i: usize| window.clone() * S::from_i64(i as i64) / n.clone();
    let mut acc = S::zero();
    for (i, &s) in waveform.samples().iter().enumerate() {
        let part = noise.integral(&at(i), &at(i + 1));
        acc = if s > 0 { acc + part } else { acc - part };
    }
    gamma * acc
}

/// Weak-noise phase and fidelity `(φ_l, (1 + sin φ_l)/2)`.
pub fn analytic_protocol<F: Real, N: SegmentIntegral<F>>(l: PaleyIndex, noise: &N, gamma: F, window: F) -> (F, F) {
    let phi = analytic_phase(l, noise, gamma, window);
    (phi, (F::one() + phi.sin()) / F::lit(2.0))
}

/// Composite propagator of `control` under `H = (Ω/2) n̂·σ + (γ b/2) σ_z`.
///
/// Each row is cut into steps no longer than `τ / 64`, with `b` replaced by
/// its exact mean over the step.
pub fn propagator<F: Real>(control: &ControlMatrix<F>, noise: &NoiseTrace, gamma: F) -> Su2<F> {
    let max_step = Scalar::to_f64(&control.segment) / REFINEMENT as f64;
    let mut u = Su2::identity();
    let mut t = 0.0f64;
    for row in control.rows() {
        let duration = Scalar::to_f64(&row.duration);
        let steps = ((duration / max_step).ceil() as usize).max(1);
        let dt = duration / steps as f64;
        let [nx, ny, nz] = row.axis.vector().map(|c| F::lit(f64::from(c)) * row.rabi_rate);
        for k in 0..steps {
            let t0 = t + k as f64 * dt;
            let b = F::lit(noise.cell_average(t0, t0 + dt));
            u = Su2::exp([nx, ny, nz + gamma * b], F::lit(dt)) * u;
        }
        t += duration;
    }
    u
}

/// Final state from `|0⟩`.
pub fn propagate<F: Real>(control: &ControlMatrix<F>, noise: &NoiseTrace, gamma: F) -> QubitState<F> {
    propagator(control, noise, gamma).apply(&QubitState::ground())
}

/// How [`batch_fidelities`] evaluates each `P_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum FidelityMethod {
    Analytic,
    /// Exact propagation with `τ_π = pi_time_ratio · T`.
    Unitary {
        pi_time_ratio: f64,
    },
}

impl FidelityMethod {
    pub fn unitary() -> Self {
        FidelityMethod::Unitary { pi_time_ratio: DEFAULT_PI_TIME_RATIO }
    }
}

/// Fidelities `P_0 .. P_{N−1}` of `N` sensors sharing one noise trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityVector {
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    pub gamma: f64,
    #[serde(rename = "T")]
    pub duration: f64,
}

impl FidelityVector {
    pub fn new(p: Vec<f64>, gamma: f64, duration: f64) -> Result<Self> {
        let v = FidelityVector { p, gamma, duration };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.p.len()));
        }
        if let Some(&bad) = self.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Domain { what: "fidelity", value: bad, domain: "[0, 1]" });
        }
        if !(self.gamma.is_finite() && self.gamma != 0.0) {
            return Err(Error::Domain { what: "gamma", value: self.gamma, domain: "finite, non-zero" });
        }
        check_window(self.duration)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

fn check_window(window: f64) -> Result<()> {
    if window.is_finite() && window > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "window T", value: window, domain: "T > 0" })
    }
}

/// `P_k` for `k < N`, computed in parallel.
pub fn batch_fidelities(
    noise: &NoiseTrace,
    gamma: f64,
    window: f64,
    n: usize,
    method: FidelityMethod,
) -> Result<FidelityVector> {
    if !n.is_power_of_two() || n > 256 {
        return Err(Error::NotPowerOfTwo(n));
    }
    check_window(window)?;
    noise.validate()?;
    let m = n.trailing_zeros();
    let p = (0..n)
        .into_par_iter()
        .map(|k| {
            let l = PaleyIndex::from_u8(k as u8);
            match method {
                FidelityMethod::Analytic => Ok(analytic_protocol(l, noise, gamma, window).1),
                FidelityMethod::Unitary { pi_time_ratio } => {
                    let control = build_wdd_control(l, m.max(l.bit_width()), window, pi_time_ratio * window)?;
                    Ok(propagate(&control, noise, gamma).probability_zero().clamp(0.0, 1.0))
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    FidelityVector::new(p, gamma, window)
}
