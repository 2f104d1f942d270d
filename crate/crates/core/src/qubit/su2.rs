use std::ops::Mul;

use num_complex::Complex;

use crate::scalar::Real;

/// An SU(2) element `[[a, −b*], [b, a*]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2<F> {
    pub a: Complex<F>,
    pub b: Complex<F>,
}

impl<F: Real> Su2<F> {
    pub fn identity() -> Self {
        Su2 { a: Complex::new(F::one(), F::zero()), b: Complex::new(F::zero(), F::zero()) }
    }

    /// `exp(−i (t/2) v·σ)`: rotation by `|v| t` about `v̂`.
    pub fn exp(v: [F; 3], t: F) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r == F::zero() {
            return Self::identity();
        }
        let half = r * t / F::lit(2.0);
        let (s, c) = half.sin_cos();
        let (nx, ny, nz) = (v[0] / r, v[1] / r, v[2] / r);
        Su2 { a: Complex::new(c, -s * nz), b: Complex::new(s * ny, -s * nx) }
    }

    pub fn dagger(&self) -> Self {
        Su2 { a: self.a.conj(), b: -self.b }
    }

    /// `‖U†U − 1‖`; for this parametrisation `U†U = (|a|² + |b|²) 1`.
    pub fn unitarity_defect(&self) -> F {
        (self.a.norm_sqr() + self.b.norm_sqr() - F::one()).abs()
    }

    /// Matrix entries, row-major.
    pub fn matrix(&self) -> [[Complex<F>; 2]; 2] {
        [[self.a, -self.b.conj()], [self.b, self.a.conj()]]
    }

    pub fn apply(&self, psi: &QubitState<F>) -> QubitState<F> {
        let [[u00, u01], [u10, u11]] = self.matrix();
        QubitState { c0: u00 * psi.c0 + u01 * psi.c1, c1: u10 * psi.c0 + u11 * psi.c1 }
    }
}

impl<F: Real> Mul for Su2<F> {
    type Output = Su2<F>;

    /// Matrix product `self · rhs` (apply `rhs` first).
    fn mul(self, rhs: Su2<F>) -> Su2<F> {
        Su2 { a: self.a * rhs.a - self.b.conj() * rhs.b, b: self.b * rhs.a + self.a.conj() * rhs.b }
    }
}

/// Pure qubit state `c0|0⟩ + c1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState<F> {
    pub c0: Complex<F>,
    pub c1: Complex<F>,
}

impl<F: Real> QubitState<F> {
    pub fn ground() -> Self {
        QubitState { c0: Complex::new(F::one(), F::zero()), c1: Complex::new(F::zero(), F::zero()) }
    }

    pub fn norm(&self) -> F {
        (self.c0.norm_sqr() + self.c1.norm_sqr()).sqrt()
    }

    /// Probability of measuring `|0⟩`.
    pub fn probability_zero(&self) -> F {
        self.c0.norm_sqr()
    }

    /// Bloch vector `(x, y, z)`.
    pub fn bloch(&self) -> [F; 3] {
        let rho01 = self.c0 * self.c1.conj();
        let two = F::lit(2.0);
        [two * rho01.re, -two * rho01.im, self.c0.norm_sqr() - self.c1.norm_sqr()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: [f64; 3], b: [f64; 3]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn quarter_turn_about_x_points_along_minus_y() {
        let u = Su2::exp([1.0, 0.0, 0.0], PI / 2.0);
        let psi = u.apply(&QubitState::ground());
        assert!(close(psi.bloch(), [0.0, -1.0, 0.0]));
    }

    #[test]
    fn z_rotation_is_counter_clockwise() {
        let phi = 0.3;
        let psi =
            Su2::exp([0.0, 0.0, 1.0], phi).apply(&Su2::exp([1.0, 0.0, 0.0], PI / 2.0).apply(&QubitState::ground()));
        assert!(close(psi.bloch(), [phi.sin(), -phi.cos(), 0.0]));
    }

    #[test]
    fn product_matches_matrix_multiplication() {
        let u = Su2::<f64>::exp([0.3, -1.2, 0.7], 0.9);
        let v = Su2::exp([-0.5, 0.1, 2.0], 1.7);
        let uv = (u * v).matrix();
        let (mu, mv) = (u.matrix(), v.matrix());
        for i in 0..2 {
            for j in 0..2 {
                let e = mu[i][0] * mv[0][j] + mu[i][1] * mv[1][j];
                assert!((uv[i][j] - e).norm() < 1e-14);
            }
        }
        assert!((u * u.dagger()).unitarity_defect() < 1e-15);
        assert!(((u * u.dagger()).a.re - 1.0).abs() < 1e-15);
    }
}
