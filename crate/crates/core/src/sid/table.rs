use std::sync::OnceLock;

use crate::fixed::{round_half_up, FixedWord, FULL_SCALE, WORD_BITS};

/// Table length `2^14`, one entry per 14-bit input.
pub const ARCSIN_ENTRIES: usize = 1 << WORD_BITS;

/// `u ↦ round(arcsin(u/8191) / (π/2) · 8191)` for 14-bit signed `u`.
///
/// Index `u + 8192`; the lone input `−8192` has no positive mirror in 14
/// bits and is clamped to `−8191`.
#[derive(Debug)]
pub struct ArcsinTable {
    entries: Vec<FixedWord>,
}

impl ArcsinTable {
    fn build() -> Self {
        let fs = f64::from(FULL_SCALE);
        let entries = (0..ARCSIN_ENTRIES as i32)
            .map(|idx| {
                let u = (idx - ARCSIN_ENTRIES as i32 / 2).max(-FULL_SCALE);
                let angle = (f64::from(u) / fs).asin();
                FixedWord::saturating(round_half_up(angle / std::f64::consts::FRAC_PI_2 * fs)).0
            })
            .collect();
        ArcsinTable { entries }
    }

    /// The shared table, built on first use.
    pub fn get() -> &'static ArcsinTable {
        static TABLE: OnceLock<ArcsinTable> = OnceLock::new();
        TABLE.get_or_init(ArcsinTable::build)
    }

    /// Entry for `u ∈ [−8192, 8191]`.
    pub fn lookup(&self, u: i16) -> FixedWord {
        self.entries[(i32::from(u) + ARCSIN_ENTRIES as i32 / 2) as usize]
    }

    pub fn entries(&self) -> &[FixedWord] {
        &self.entries
    }
}
