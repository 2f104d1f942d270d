use super::{walsh_bit, PaleyIndex};
use crate::scalar::Scalar;

/// Moment `∫_0^1 x^p W_l^{(±1)}(x) dx` summed segment by segment over the
/// native grid with the monomial antiderivative `x^{p+1}/(p+1)`.
///
/// Over [`Rational`](crate::Rational) the result is exact, which lets the
/// suppression order (first non-vanishing moment at `p = hamming(l)`) be
/// checked with equality.
pub fn moment<S: Scalar>(l: PaleyIndex, p: u32) -> S {
    let m = l.bit_width();
    let n = 1usize << m;
    let scale = S::from_i64(n as i64);
    let pow = |i: usize| -> S {
        let x = S::from_i64(i as i64) / scale.clone();
        (0..=p).fold(S::one(), |acc, _| acc * x.clone())
    };
    let mut acc = S::zero();
    let mut lower = pow(0);
    for i in 0..n {
        let upper = pow(i + 1);
        let piece = upper.clone() - lower;
        // complement sign: standard bit 0 → +1
        if walsh_bit(l, i, m) == 0 {
            acc = acc + piece;
        } else {
            acc = acc - piece;
        }
        lower = upper;
    }
    acc / S::from_i64(i64::from(p) + 1)
}
