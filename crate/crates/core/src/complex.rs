//! Minimal complex arithmetic for exponential sums.
//!
//! Only what the additive-character machinery needs: e(α) = e^{2πiα}
//! evaluated at reduced rational phases, products, and moduli.

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

/// A complex number with finite f64 parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// e(t/ℓ) = e^{2πi t/ℓ} with t reduced mod ℓ before the trig call,
    /// so the argument never leaves [0, 2π).
    pub fn root_of_unity(t: u64, ell: u64) -> Self {
        debug_assert!(ell > 0);
        let tr = t % ell;
        let angle = TAU * (tr as f64) / (ell as f64);
        Self::new(angle.cos(), angle.sin())
    }

    /// e(α) for a real phase α (reduced to its fractional part).
    pub fn unit_phase(alpha: f64) -> Self {
        let angle = TAU * alpha.fract();
        Self::new(angle.cos(), angle.sin())
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.im * s)
    }
}

impl Add for ComplexValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for ComplexValue {
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for ComplexValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for ComplexValue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for ComplexValue {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_basics() {
        let z = ComplexValue::root_of_unity(0, 4);
        assert_eq!(z, ComplexValue::ONE);
        let z = ComplexValue::root_of_unity(1, 4);
        assert!((z.re).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        let z = ComplexValue::root_of_unity(2, 4);
        assert!((z.re + 1.0).abs() < 1e-15);
        // reduction mod ell
        assert_eq!(
            ComplexValue::root_of_unity(7, 4),
            ComplexValue::root_of_unity(3, 4)
        );
    }

    #[test]
    fn field_ops() {
        let a = ComplexValue::new(1.0, 2.0);
        let b = ComplexValue::new(-3.0, 0.5);
        let p = a * b;
        assert_eq!(p, ComplexValue::new(-3.0 - 1.0, 0.5 - 6.0));
        let q = p / b;
        assert!((q - a).abs() < 1e-14);
        assert_eq!(a.conj().im, -2.0);
        assert!((a.abs() - 5.0f64.sqrt()).abs() < 1e-15);
    }
}
