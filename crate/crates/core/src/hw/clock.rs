use serde::{Deserialize, Serialize};

/// A timestamp or duration in half clock cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct HalfCycle(pub u64);

impl HalfCycle {
    #[inline]
    pub const fn from_cycles(cycles: u64) -> Self {
        HalfCycle(2 * cycles)
    }

    #[inline]
    pub fn cycles(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Even half cycles are `clk` rising edges.
    #[inline]
    pub const fn is_clk_edge(self) -> bool {
        self.0.is_multiple_of(2)
    }

    #[inline]
    pub const fn is_clk_bar_edge(self) -> bool {
        self.0 % 2 == 1
    }
}

/// System clock: period `T_c` (10 ns by default) and a π-shifted complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockModel {
    pub period: f64,
}

impl Default for ClockModel {
    fn default() -> Self {
        ClockModel { period: 10e-9 }
    }
}

impl ClockModel {
    /// Wall-clock time of a half-cycle timestamp.
    pub fn time_of(&self, h: HalfCycle) -> f64 {
        h.0 as f64 * self.period / 2.0
    }

    /// Minimum segment duration for a clock-expansion factor, `τ = t · T_c`.
    pub fn segment_duration(&self, expansion: u32) -> f64 {
        f64::from(expansion) * self.period
    }

    /// `clk̄` edge following a `clk` edge.
    pub fn clk_bar_edge_after(h: HalfCycle) -> HalfCycle {
        HalfCycle(h.0 + 1)
    }
}
