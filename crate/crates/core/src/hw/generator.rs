use crate::walsh::{PaleyIndex, Variant};

/// Cascaded-LUT Walsh Generator.
///
/// Stage `j` forwards `In ⊕ R_j` when bit `j` of the order register is high
/// and `In` otherwise; the chain is combinational and settles within the
/// clock cycle. The complement variant adds a final inverter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalshGenerator {
    order: PaleyIndex,
    variant: Variant,
}

/// LUT stages in the cascade: one per bit of the 8-bit order register.
pub const CASCADE_STAGES: u32 = 8;

impl WalshGenerator {
    pub fn new(order: PaleyIndex, variant: Variant) -> Self {
        WalshGenerator { order, variant }
    }

    pub fn order(&self) -> PaleyIndex {
        self.order
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Combinational output for Rademacher bits (bit `j` = `R_j`).
    #[inline]
    pub fn output(&self, rademachers: u32) -> u8 {
        let mut carry = 0u8;
        for j in 0..CASCADE_STAGES {
            let r = ((rademachers >> j) & 1) as u8;
            carry = if self.order.bit(j) { carry ^ r } else { carry };
        }
        self.variant.apply(carry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hw::RademacherGenerator;
    use crate::walsh::sample_grid;

    #[test]
    fn xor_of_r2_r3() {
        let gen = WalshGenerator::new(PaleyIndex::from_u8(12), Variant::Standard);
        assert_eq!(gen.output(0b1100), 0);
        assert_eq!(gen.output(0b0100), 1);
    }

    #[test]
    fn streamed_order_twelve() {
        let gen = WalshGenerator::new(PaleyIndex::from_u8(12), Variant::Standard);
        let mut rad = RademacherGenerator::new(4, 1);
        let mut bits = String::new();
        for _ in 0..16 {
            bits.push_str(&gen.output(rad.outputs()).to_string());
            rad.tick();
        }
        assert_eq!(bits, "0110011001100110");
        assert_eq!(bits, sample_grid(PaleyIndex::from_u8(12), 4, Variant::Standard).unwrap().to_string());
    }

    #[test]
    fn order_zero_is_constant() {
        let std = WalshGenerator::new(PaleyIndex::ZERO, Variant::Standard);
        let comp = WalshGenerator::new(PaleyIndex::ZERO, Variant::Complement);
        for mask in 0..256 {
            assert_eq!(std.output(mask), 0);
            assert_eq!(comp.output(mask), 1);
        }
    }
}
