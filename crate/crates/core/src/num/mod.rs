//! Scalar abstraction shared by the f64 and double-double code paths.

mod dd;

pub use dd::Dd;

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};
use num_complex::Complex64;

/// Real scalar the dense linear algebra is generic over.
pub trait Real:
    Copy
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    const PI: Self;
    const TAU: Self;
    /// Working machine epsilon of the type.
    const EPS: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
    fn atan2(y: Self, x: Self) -> Self;
    fn maxv(self, o: Self) -> Self;
}

impl Real for f64 {
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;
    const PI: f64 = core::f64::consts::PI;
    const TAU: f64 = core::f64::consts::TAU;
    const EPS: f64 = f64::EPSILON;

    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn sin(self) -> f64 {
        f64::sin(self)
    }
    fn cos(self) -> f64 {
        f64::cos(self)
    }
    fn sin_cos(self) -> (f64, f64) {
        f64::sin_cos(self)
    }
    fn atan2(y: f64, x: f64) -> f64 {
        f64::atan2(y, x)
    }
    fn maxv(self, o: f64) -> f64 {
        f64::max(self, o)
    }
}

impl Real for Dd {
    const ZERO: Dd = Dd::ZERO;
    const ONE: Dd = Dd::ONE;
    const PI: Dd = Dd::PI;
    const TAU: Dd = Dd::TAU;
    const EPS: f64 = Dd::EPS;

    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    fn sin(self) -> Dd {
        Dd::sin(self)
    }
    fn cos(self) -> Dd {
        Dd::cos(self)
    }
    fn sin_cos(self) -> (Dd, Dd) {
        Dd::sin_cos(self)
    }
    fn atan2(y: Dd, x: Dd) -> Dd {
        Dd::atan2(y, x)
    }
    fn maxv(self, o: Dd) -> Dd {
        Dd::max(self, o)
    }
}

/// Complex number over a generic real scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub const fn new(re: R, im: R) -> Cx<R> {
        Cx { re, im }
    }

    pub fn zero() -> Cx<R> {
        Cx::new(R::ZERO, R::ZERO)
    }

    pub fn one() -> Cx<R> {
        Cx::new(R::ONE, R::ZERO)
    }

    pub fn from_f64(re: f64, im: f64) -> Cx<R> {
        Cx::new(R::from_f64(re), R::from_f64(im))
    }

    /// e^{iθ}
    pub fn cis(theta: R) -> Cx<R> {
        let (s, c) = theta.sin_cos();
        Cx::new(c, s)
    }

    pub fn conj(self) -> Cx<R> {
        Cx::new(self.re, -self.im)
    }

    pub fn scale(self, s: R) -> Cx<R> {
        Cx::new(self.re * s, self.im * s)
    }

    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> R {
        self.norm_sqr().sqrt()
    }

    pub fn arg(self) -> R {
        R::atan2(self.im, self.re)
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn from_c64(z: Complex64) -> Cx<R> {
        Cx::from_f64(z.re, z.im)
    }
}

impl<R: Real> Add for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn add(self, o: Cx<R>) -> Cx<R> {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}

impl<R: Real> Sub for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn sub(self, o: Cx<R>) -> Cx<R> {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}

impl<R: Real> Mul for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn mul(self, o: Cx<R>) -> Cx<R> {
        Cx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl<R: Real> Div for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn div(self, o: Cx<R>) -> Cx<R> {
        let n = o.norm_sqr();
        let p = self * o.conj();
        Cx::new(p.re / n, p.im / n)
    }
}

impl<R: Real> Neg for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn neg(self) -> Cx<R> {
        Cx::new(-self.re, -self.im)
    }
}

/// Principal value of the phase difference arg(w1) - arg(w0), computed as
/// arg(w1 * conj(w0)) so nearby unimodular values never straddle the cut.
pub fn phase_step<R: Real>(w1: Cx<R>, w0: Cx<R>) -> R {
    (w1 * w0.conj()).arg()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cx_dd_arithmetic_matches_f64_shape() {
        let a: Cx<Dd> = Cx::from_f64(0.3, -0.7);
        let b: Cx<Dd> = Cx::from_f64(-1.1, 0.2);
        let p = a * b;
        let q = Complex64::new(0.3, -0.7) * Complex64::new(-1.1, 0.2);
        assert!((p.to_c64() - q).norm() < 1e-15);
        let d = (a / b * b - a).abs().to_f64();
        assert!(d < 1e-30);
    }

    #[test]
    fn cis_unimodular() {
        for i in 0..50 {
            let z = Cx::<Dd>::cis(Dd::from_f64(i as f64 * 0.37 - 8.0));
            assert!((z.norm_sqr().to_f64() - 1.0).abs() < 1e-30);
        }
    }
}
