//! 2x2 complex matrices.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Default for Mat2 {
    fn default() -> Self {
        Mat2::zero()
    }
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub const fn sigma1() -> Self {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma2() -> Self {
        Mat2::new(ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO)
    }

    pub const fn sigma3() -> Self {
        Mat2::new(ONE, ZERO, ZERO, C64::new(-1.0, 0.0))
    }

    pub fn from_cols(c0: [C64; 2], c1: [C64; 2]) -> Self {
        Mat2::new(c0[0], c1[0], c0[1], c1[1])
    }

    pub fn from_rows(r0: [C64; 2], r1: [C64; 2]) -> Self {
        Mat2([r0, r1])
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn col(&self, j: usize) -> [C64; 2] {
        [self.0[0][j], self.0[1][j]]
    }

    pub fn row(&self, i: usize) -> [C64; 2] {
        self.0[i]
    }

    #[inline]
    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let [[a, b], [c, e]] = self.0;
        Some(Mat2::new(e / d, -b / d, -c / d, a / d))
    }

    /// Inverse of a unimodular matrix.
    #[inline]
    pub fn adjugate(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(d, -b, -c, a)
    }

    pub fn conj(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a.conj(), b.conj(), c.conj(), d.conj())
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a * s, b * s, c * s, d * s)
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Exponential of a trace-free matrix, `cosh(q) I + sinh(q)/q A` with
    /// `q^2 = -det A`. Only the trace-free part of `self` is used.
    pub fn exp_traceless(&self) -> Mat2 {
        let half = (self.0[0][0] - self.0[1][1]) * 0.5;
        let b = self.0[0][1];
        let c = self.0[1][0];
        let q2 = half * half + b * c;
        let (ch, sh_over_q) = if q2.norm() < 1e-8 {
            (
                ONE + q2 * (0.5 + q2 / 24.0),
                ONE + q2 * (1.0 / 6.0 + q2 / 120.0),
            )
        } else {
            let q = q2.sqrt();
            (q.cosh(), q.sinh() / q)
        };
        Mat2::new(
            ch + sh_over_q * half,
            sh_over_q * b,
            sh_over_q * c,
            ch - sh_over_q * half,
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let mut out = self;
        out += o;
        out
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, o: Mat2) {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += o.0[i][j];
            }
        }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, o: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: C64) -> Mat2 {
        self.scale(s)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        self.scale(C64::new(s, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_products() {
        let s1 = Mat2::sigma1();
        let s2 = Mat2::sigma2();
        let s3 = Mat2::sigma3();
        let i_s3 = s3.scale(c(0.0, 1.0));
        assert_eq!(s1 * s2, i_s3);
        assert_eq!(s1 * s1, Mat2::identity());
    }

    #[test]
    fn exp_traceless_matches_series() {
        let a = Mat2::new(c(0.3, -0.2), c(0.1, 0.4), c(-0.7, 0.05), c(-0.3, 0.2));
        let mut term = Mat2::identity();
        let mut sum = Mat2::identity();
        for k in 1..40 {
            term = term * a * (1.0 / k as f64);
            sum += term;
        }
        let e = a.exp_traceless();
        assert!((e - sum).max_abs() < 1e-14);
        assert!((e.det() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn exp_traceless_small_and_nilpotent() {
        let n = Mat2::new(ZERO, c(2.0, 1.0), ZERO, ZERO);
        assert_eq!(n.exp_traceless(), Mat2::identity() + n);
        let a = Mat2::new(c(1e-6, 0.0), ZERO, ZERO, c(-1e-6, 0.0));
        let e = a.exp_traceless();
        assert!((e.at(0, 0) - c(1e-6f64.exp(), 0.0)).norm() < 1e-16);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Mat2::new(c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0), c(3.0, -1.0));
        let b = a.inverse().unwrap();
        assert!((a * b - Mat2::identity()).max_abs() < 1e-15);
        assert!(Mat2::zero().inverse().is_none());
    }
}
