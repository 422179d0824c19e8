//! Third order truncated Taylor arithmetic.
//!
//! A [`Jet`] carries `[f, f', f'', f''']` at a point. Products follow Leibniz'
//! rule and compositions Faà di Bruno's formula, so curve derivatives are exact
//! up to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T>(pub [T; 4]);

impl<T: Scalar> Jet<T> {
    pub fn new(v: T, d1: T, d2: T, d3: T) -> Self {
        Jet([v, d1, d2, d3])
    }

    pub fn constant(v: T) -> Self {
        Jet([v, T::zero(), T::zero(), T::zero()])
    }

    pub fn value(&self) -> T {
        self.0[0]
    }

    pub fn d(&self, k: usize) -> T {
        self.0[k]
    }

    pub fn scale(self, s: f64) -> Self {
        Jet(self.0.map(|x| x * s))
    }

    /// `F ∘ self`, given `F` and its first three derivatives at `self.value()`.
    pub fn chain(self, f: [T; 4]) -> Self {
        let [_, g1, g2, g3] = self.0;
        let [f0, f1, f2, f3] = f;
        Jet([
            f0,
            f1 * g1,
            f2 * g1 * g1 + f1 * g2,
            f3 * g1 * g1 * g1 + f2 * g1 * g2 * 3.0 + f1 * g3,
        ])
    }
}

impl Jet<f64> {
    /// Jet of the identity map at `t`.
    pub fn variable(t: f64) -> Self {
        Jet([t, 1.0, 0.0, 0.0])
    }

    pub fn exp(self) -> Self {
        let e = self.0[0].exp();
        self.chain([e; 4])
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.chain([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.chain([c, -s, -c, s])
    }

    pub fn recip(self) -> Self {
        let x = self.0[0];
        let r = 1.0 / x;
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn powi(self, n: i32) -> Self {
        let x = self.0[0];
        let nf = n as f64;
        self.chain([
            x.powi(n),
            nf * x.powi(n - 1),
            nf * (nf - 1.0) * x.powi(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * x.powi(n - 3),
        ])
    }

    pub fn to_complex(self) -> Jet<Complex64> {
        Jet(self.0.map(|x| Complex64::new(x, 0.0)))
    }

    /// `e^{i·self}` as a complex jet.
    pub fn cis(self) -> Jet<Complex64> {
        let e = Complex64::from_polar(1.0, self.0[0]);
        let i = Complex64::i();
        self.to_complex().chain([e, i * e, -e, -i * e])
    }
}

impl Jet<Complex64> {
    pub fn re(self) -> Jet<f64> {
        Jet(self.0.map(|z| z.re))
    }

    pub fn im(self) -> Jet<f64> {
        Jet(self.0.map(|z| z.im))
    }

    pub fn recip(self) -> Self {
        let r = self.0[0].inv();
        self.chain([r, -r * r, r * r * r * 2.0, -(r * r * r * r) * 6.0])
    }
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet(self.0.map(|x| -x))
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = o.0;
        Jet([
            a0 * b0,
            a1 * b0 + a0 * b1,
            a2 * b0 + a1 * b1 * 2.0 + a0 * b2,
            a3 * b0 + a2 * b1 * 3.0 + a1 * b2 * 3.0 + a0 * b3,
        ])
    }
}
