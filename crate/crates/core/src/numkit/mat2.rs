use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use super::jet::{CJet, Orders};

/// 2×2 matrix over complex numbers or jets.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }
}

impl<T> Mat2<T>
where
    for<'a> &'a T: Mul<&'a T, Output = T> + Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    pub fn matmul(&self, o: &Mat2<T>) -> Mat2<T> {
        let e = |i: usize, j: usize| &(&self.m[i][0] * &o.m[0][j]) + &(&self.m[i][1] * &o.m[1][j]);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn det(&self) -> T {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn trace(&self) -> T {
        &self.m[0][0] + &self.m[1][1]
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[T; 2]) -> [T; 2] {
        [
            &(&self.m[0][0] * &v[0]) + &(&self.m[0][1] * &v[1]),
            &(&self.m[1][0] * &v[0]) + &(&self.m[1][1] * &v[1]),
        ]
    }

    pub fn add(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2::new(
            &self.m[0][0] + &o.m[0][0],
            &self.m[0][1] + &o.m[0][1],
            &self.m[1][0] + &o.m[1][0],
            &self.m[1][1] + &o.m[1][1],
        )
    }

    pub fn sub(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2::new(
            &self.m[0][0] - &o.m[0][0],
            &self.m[0][1] - &o.m[0][1],
            &self.m[1][0] - &o.m[1][0],
            &self.m[1][1] - &o.m[1][1],
        )
    }

    pub fn commutator(&self, o: &Mat2<T>) -> Mat2<T> {
        self.matmul(o).sub(&o.matmul(self))
    }
}

impl Mat2<C64> {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Mat2::new(one, zero, zero, one)
    }

    pub fn zero() -> Self {
        let zero = C64::new(0.0, 0.0);
        Mat2::new(zero, zero, zero, zero)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|v| v * s)
    }

    pub fn adjoint(&self) -> Self {
        Mat2::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        Mat2::new(self.m[1][1] / d, -self.m[0][1] / d, -self.m[1][0] / d, self.m[0][0] / d)
    }

    pub fn frobenius(&self) -> f64 {
        self.m.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn to_jet(&self, orders: Orders) -> Mat2<CJet> {
        self.map(|c| CJet::constant(*c, orders))
    }
}

impl Mat2<CJet> {
    pub fn value(&self) -> Mat2<C64> {
        self.map(CJet::value)
    }

    pub fn identity_jet(orders: Orders) -> Self {
        Mat2::<C64>::identity().to_jet(orders)
    }

    pub fn truncate(&self, orders: Orders) -> Self {
        self.map(|j| j.truncate(orders))
    }

    pub fn orders(&self) -> Orders {
        self.m[0][0].orders()
    }
}
