/// Counter-based Rademacher Generator.
///
/// One counter per order `j` toggles `R_j` whenever it reaches
/// `β · 2^{m−1−j}` clock cycles, so every native segment of the `2^m` grid
/// lasts exactly `β` cycles. A separate elapsed counter carries the auxiliary
/// completion bit that marks the end of a full `β · 2^m` cycle pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RademacherGenerator {
    expansion: u32,
    orders: u32,
    counters: Vec<u32>,
    outputs: u32,
    elapsed: u32,
}

impl RademacherGenerator {
    /// `orders` Rademacher outputs `R_0 .. R_{orders−1}`, each segment held `expansion ≥ 1` cycles.
    pub fn new(orders: u32, expansion: u32) -> Self {
        assert!(expansion >= 1, "clock expansion must be at least 1");
        assert!(orders <= 16, "at most 16 Rademacher orders");
        RademacherGenerator { expansion, orders, counters: vec![0; orders as usize], outputs: 0, elapsed: 0 }
    }

    pub fn orders(&self) -> u32 {
        self.orders
    }

    pub fn expansion(&self) -> u32 {
        self.expansion
    }

    pub fn reset(&mut self) {
        self.counters.iter_mut().for_each(|c| *c = 0);
        self.outputs = 0;
        self.elapsed = 0;
    }

    /// Bit `j` holds `R_j`.
    #[inline]
    pub fn outputs(&self) -> u32 {
        self.outputs
    }

    #[inline]
    pub fn bit(&self, j: u32) -> u8 {
        ((self.outputs >> j) & 1) as u8
    }

    /// Clock cycles in one full pass.
    #[inline]
    pub fn pass_length(&self) -> u32 {
        self.expansion << self.orders
    }

    /// Auxiliary completion bit.
    #[inline]
    pub fn done(&self) -> bool {
        self.elapsed >= self.pass_length()
    }

    /// Advances one clock cycle.
    pub fn tick(&mut self) {
        for (j, counter) in self.counters.iter_mut().enumerate() {
            *counter += 1;
            let half_period = self.expansion << (self.orders - 1 - j as u32);
            if *counter == half_period {
                *counter = 0;
                self.outputs ^= 1 << j;
            }
        }
        self.elapsed = self.elapsed.saturating_add(1);
    }
}
