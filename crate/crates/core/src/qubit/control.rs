use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::walsh::{walsh_bit, PaleyIndex, MAX_GRID_EXPONENT};

/// Rotation axis of a control row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Identity,
    X,
    Y,
    MinusY,
    Z,
}

impl Axis {
    /// Unit vector `(n_x, n_y, n_z)`; zero for the identity.
    pub fn vector(self) -> [i8; 3] {
        match self {
            Axis::Identity => [0, 0, 0],
            Axis::X => [1, 0, 0],
            Axis::Y => [0, 1, 0],
            Axis::MinusY => [0, -1, 0],
            Axis::Z => [0, 0, 1],
        }
    }
}

/// One row: Rabi rate (rad/s), duration (s), axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlRow<F> {
    pub rabi_rate: F,
    pub duration: F,
    pub axis: Axis,
}

impl<F: Real> ControlRow<F> {
    /// Rotation angle `Ω · duration`.
    pub fn angle(&self) -> F {
        self.rabi_rate * self.duration
    }

    pub fn is_free(&self) -> bool {
        self.axis == Axis::Identity || self.rabi_rate == F::zero()
    }
}

/// Sequence of piecewise-constant control rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlMatrix<F> {
    rows: Vec<ControlRow<F>>,
    /// π-time `τ_π`.
    pub tau_pi: F,
    /// Sensing window `T`.
    pub window: F,
    /// Grid segment `τ = T / 2^m`.
    pub segment: F,
}

impl<F: Real> ControlMatrix<F> {
    pub fn rows(&self) -> &[ControlRow<F>] {
        &self.rows
    }

    pub fn total_duration(&self) -> F {
        self.rows.iter().fold(F::zero(), |acc, r| acc + r.duration)
    }

    /// Start times of the π pulses.
    pub fn pi_pulse_times(&self) -> Vec<F> {
        let pi = F::PI();
        let mut t = F::zero();
        let mut out = Vec::new();
        for row in &self.rows {
            if !row.is_free() && (row.angle() - pi).abs() <= F::lit(1e-9) * pi {
                out.push(t);
            }
            t = t + row.duration;
        }
        out
    }
}

/// `WDD_l` on a `2^m` grid of the window `T`.
///
/// Rows: `π/2` about σx lasting `τ_π/2`, one free row per grid segment, a π
/// pulse about σx starting at each bit flip of `W̄_l` (the free row after it
/// is shortened by `τ_π`), and a closing `π/2` about `−σy` after `T`.
// negated comparisons also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn build_wdd_control<F: Real>(l: PaleyIndex, m: u32, window: F, tau_pi: F) -> Result<ControlMatrix<F>> {
    if m > MAX_GRID_EXPONENT {
        return Err(Error::GridTooFine(m));
    }
    if m < l.bit_width() {
        return Err(Error::GridTooCoarse { order: l.value(), grid: m, needed: l.bit_width() });
    }
    if !(window > F::zero()) || !window.is_finite() {
        return Err(Error::Domain { what: "window T", value: Scalar::to_f64(&window), domain: "T > 0" });
    }
    if !(tau_pi > F::zero()) {
        return Err(Error::Domain { what: "π-time", value: Scalar::to_f64(&tau_pi), domain: "τ_π > 0" });
    }
    let slots = 1usize << m;
    let segment = window / F::lit(slots as f64);
    if tau_pi >= segment {
        return Err(Error::PulseTooLong { tau_pi: Scalar::to_f64(&tau_pi), segment: Scalar::to_f64(&segment) });
    }
    let rate = F::PI() / tau_pi;
    let half = tau_pi / F::lit(2.0);
    let free = |duration| ControlRow { rabi_rate: F::zero(), duration, axis: Axis::Identity };
    let mut rows = vec![ControlRow { rabi_rate: rate, duration: half, axis: Axis::X }, free(segment - half)];
    for i in 1..slots {
        if walsh_bit(l, i, m) != walsh_bit(l, i - 1, m) {
            rows.push(ControlRow { rabi_rate: rate, duration: tau_pi, axis: Axis::X });
            rows.push(free(segment - tau_pi));
        } else {
            rows.push(free(segment));
        }
    }
    rows.push(ControlRow { rabi_rate: rate, duration: half, axis: Axis::MinusY });
    Ok(ControlMatrix { rows, tau_pi, window, segment })
}

/// [`build_wdd_control`] on the native grid of `l`.
pub fn build_wdd_control_native<F: Real>(l: PaleyIndex, window: F, tau_pi: F) -> Result<ControlMatrix<F>> {
    build_wdd_control(l, l.bit_width(), window, tau_pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_three_rows() {
        let tau = 1.0f64;
        let tp = 0.01;
        let c = build_wdd_control(PaleyIndex::from_u8(3), 3, 8.0 * tau, tp).unwrap();
        let pi = std::f64::consts::PI;
        let expected: Vec<(f64, f64, Axis)> = vec![
            (pi / tp, tp / 2.0, Axis::X),
            (0.0, tau - tp / 2.0, Axis::Identity),
            (0.0, tau, Axis::Identity),
            (pi / tp, tp, Axis::X),
            (0.0, tau - tp, Axis::Identity),
            (0.0, tau, Axis::Identity),
            (0.0, tau, Axis::Identity),
            (0.0, tau, Axis::Identity),
            (pi / tp, tp, Axis::X),
            (0.0, tau - tp, Axis::Identity),
            (0.0, tau, Axis::Identity),
            (pi / tp, tp / 2.0, Axis::MinusY),
        ];
        assert_eq!(c.rows().len(), expected.len());
        for (row, (rate, dur, axis)) in c.rows().iter().zip(expected) {
            assert_eq!(row.axis, axis);
            assert!((row.rabi_rate - rate).abs() < 1e-9 && (row.duration - dur).abs() < 1e-12);
        }
        let times = c.pi_pulse_times();
        assert_eq!(times.len(), 2);
        assert!((times[0] - 2.0).abs() < 1e-12 && (times[1] - 6.0).abs() < 1e-12);
        assert!((c.total_duration() - 8.0 - tp / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ramsey_and_echo() {
        let ramsey = build_wdd_control_native(PaleyIndex::ZERO, 1.0f64, 1e-6).unwrap();
        assert!(ramsey.pi_pulse_times().is_empty());
        assert_eq!(ramsey.rows().first().unwrap().axis, Axis::X);
        assert_eq!(ramsey.rows().last().unwrap().axis, Axis::MinusY);
        let echo = build_wdd_control_native(PaleyIndex::from_u8(1), 1.0f64, 1e-6).unwrap();
        let t = echo.pi_pulse_times();
        assert_eq!(t.len(), 1);
        assert!((t[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pulse_must_fit() {
        let err = build_wdd_control(PaleyIndex::from_u8(3), 3, 8.0f64, 1.0).unwrap_err();
        assert!(matches!(err, Error::PulseTooLong { .. }));
        assert!(build_wdd_control(PaleyIndex::from_u8(3), 1, 8.0f64, 0.1).is_err());
        assert!(build_wdd_control(PaleyIndex::from_u8(3), 2, 8.0f64, 0.0).is_err());
    }

    #[test]
    fn single_precision() {
        let c = build_wdd_control_native(PaleyIndex::from_u8(5), 1.0f32, 1e-4).unwrap();
        assert_eq!(c.pi_pulse_times().len(), crate::walsh::transition_slots(PaleyIndex::from_u8(5)).len());
    }
}
