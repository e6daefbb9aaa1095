//! Truncated bivariate Taylor expansions with complex coefficients.
//!
//! A [`CJet`] stores the normalized coefficients `∂ₓᵃ∂ₜᵇ f / (a! b!)` of a
//! field at a point for `a ≤ ox`, `b ≤ ot`. Arithmetic follows the Cauchy
//! product, elementary functions are composed as truncated power series
//! around the value coefficient, so every derivative extracted from a jet is
//! exact up to roundoff.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum derivative orders carried by a jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orders {
    pub x: usize,
    pub t: usize,
}

impl Orders {
    pub const fn new(x: usize, t: usize) -> Self {
        Orders { x, t }
    }

    pub fn min(self, other: Orders) -> Orders {
        Orders::new(self.x.min(other.x), self.t.min(other.t))
    }

    pub fn covers(self, needed: Orders) -> bool {
        self.x >= needed.x && self.t >= needed.t
    }

    /// Orders widened by `dx` in x and `dt` in t.
    pub fn plus(self, dx: usize, dt: usize) -> Orders {
        Orders::new(self.x + dx, self.t + dt)
    }

    fn len(self) -> usize {
        (self.x + 1) * (self.t + 1)
    }
}

impl Default for Orders {
    /// Two x-orders per discrete step plus four for the quartic σ₂ terms;
    /// two t-orders for the second-order time equation.
    fn default() -> Self {
        Orders::new(12, 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq)]
pub struct CJet {
    orders: Orders,
    coeff: Vec<C64>,
}

impl fmt::Debug for CJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CJet{:?}[", (self.orders.x, self.orders.t))?;
        for (i, c) in self.coeff.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl CJet {
    pub fn zero(orders: Orders) -> Self {
        CJet {
            orders,
            coeff: vec![C64::new(0.0, 0.0); orders.len()],
        }
    }

    pub fn constant(value: C64, orders: Orders) -> Self {
        let mut j = Self::zero(orders);
        j.coeff[0] = value;
        j
    }

    /// The coordinate function `x` expanded at `x0`.
    pub fn var_x(x0: f64, orders: Orders) -> Self {
        let mut j = Self::constant(C64::new(x0, 0.0), orders);
        if orders.x >= 1 {
            j.set(1, 0, C64::new(1.0, 0.0));
        }
        j
    }

    /// The coordinate function `t` expanded at `t0`.
    pub fn var_t(t0: f64, orders: Orders) -> Self {
        let mut j = Self::constant(C64::new(t0, 0.0), orders);
        if orders.t >= 1 {
            j.set(0, 1, C64::new(1.0, 0.0));
        }
        j
    }

    /// Builds a jet from normalized coefficients laid out row-major in `a`.
    pub fn from_coeffs(orders: Orders, coeff: Vec<C64>) -> Self {
        assert_eq!(coeff.len(), orders.len(), "coefficient count");
        CJet { orders, coeff }
    }

    /// Builds a jet from raw partial derivatives `∂ₓᵃ∂ₜᵇ f`.
    pub fn from_derivatives(orders: Orders, mut derivs: impl FnMut(usize, usize) -> C64) -> Self {
        let mut j = Self::zero(orders);
        for a in 0..=orders.x {
            for b in 0..=orders.t {
                j.set(a, b, derivs(a, b) / (factorial(a) * factorial(b)));
            }
        }
        j
    }

    #[inline]
    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.orders.t + 1) + b
    }

    pub fn orders(&self) -> Orders {
        self.orders
    }

    pub fn value(&self) -> C64 {
        self.coeff[0]
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeff
    }

    /// Normalized coefficient; zero beyond the carried orders.
    pub fn coeff(&self, a: usize, b: usize) -> C64 {
        if a <= self.orders.x && b <= self.orders.t {
            self.coeff[self.idx(a, b)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, a: usize, b: usize, value: C64) {
        let i = self.idx(a, b);
        self.coeff[i] = value;
    }

    /// The partial derivative `∂ₓⁱ∂ₜʲ f` at the expansion point.
    pub fn deriv(&self, i: usize, j: usize) -> Result<C64> {
        if i > self.orders.x || j > self.orders.t {
            return Err(Error::InsufficientOrder {
                needed: Orders::new(i, j),
                have: self.orders,
            });
        }
        Ok(self.coeff(i, j) * factorial(i) * factorial(j))
    }

    pub fn truncate(&self, orders: Orders) -> CJet {
        if orders == self.orders {
            return self.clone();
        }
        debug_assert!(self.orders.covers(orders));
        let mut out = CJet::zero(orders);
        for a in 0..=orders.x {
            for b in 0..=orders.t {
                out.set(a, b, self.coeff(a, b));
            }
        }
        out
    }

    /// Jet of `∂ₓ f`; the x-order drops by one.
    pub fn dx(&self) -> Result<CJet> {
        if self.orders.x == 0 {
            return Err(Error::InsufficientOrder {
                needed: Orders::new(1, 0),
                have: self.orders,
            });
        }
        let orders = Orders::new(self.orders.x - 1, self.orders.t);
        let mut out = CJet::zero(orders);
        for a in 0..=orders.x {
            for b in 0..=orders.t {
                out.set(a, b, self.coeff(a + 1, b) * (a + 1) as f64);
            }
        }
        Ok(out)
    }

    /// Jet of `∂ₜ f`; the t-order drops by one.
    pub fn dt(&self) -> Result<CJet> {
        if self.orders.t == 0 {
            return Err(Error::InsufficientOrder {
                needed: Orders::new(0, 1),
                have: self.orders,
            });
        }
        let orders = Orders::new(self.orders.x, self.orders.t - 1);
        let mut out = CJet::zero(orders);
        for a in 0..=orders.x {
            for b in 0..=orders.t {
                out.set(a, b, self.coeff(a, b + 1) * (b + 1) as f64);
            }
        }
        Ok(out)
    }

    pub fn dxn(&self, n: usize) -> Result<CJet> {
        let mut j = self.clone();
        for _ in 0..n {
            j = j.dx()?;
        }
        Ok(j)
    }

    /// Coefficient-wise conjugate: the jet of `f*` for real variables x, t.
    pub fn conj(&self) -> CJet {
        CJet {
            orders: self.orders,
            coeff: self.coeff.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CJet {
        CJet {
            orders: self.orders,
            coeff: self.coeff.iter().map(|c| c * s).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeff.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeff.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Strict binary arithmetic: orders must agree and divisors must have a
    /// nonzero value coefficient.
    pub fn combine(&self, op: JetOp, other: &CJet) -> Result<CJet> {
        if self.orders != other.orders {
            return Err(Error::OrderMismatch {
                left: self.orders,
                right: other.orders,
            });
        }
        Ok(match op {
            JetOp::Add => self + other,
            JetOp::Sub => self - other,
            JetOp::Mul => self * other,
            JetOp::Div => self.checked_div(other)?,
        })
    }

    pub fn checked_div(&self, other: &CJet) -> Result<CJet> {
        if other.value() == C64::new(0.0, 0.0) {
            return Err(Error::ZeroValue { op: "division" });
        }
        Ok(div_raw(self, other))
    }

    pub fn recip(&self) -> Result<CJet> {
        CJet::constant(C64::new(1.0, 0.0), self.orders).checked_div(self)
    }

    /// Evaluates `Σ d_k hᵏ` where `h = self − value`; `h` is nilpotent so the
    /// sum stops at total degree `ox + ot`.
    fn compose(&self, series: impl Fn(usize) -> C64) -> CJet {
        let degree = self.orders.x + self.orders.t;
        let mut h = self.clone();
        h.coeff[0] = C64::new(0.0, 0.0);
        let mut acc = CJet::constant(series(degree), self.orders);
        for k in (0..degree).rev() {
            acc = &acc * &h;
            acc.coeff[0] += series(k);
        }
        acc
    }

    pub fn exp(&self) -> CJet {
        let e0 = self.value().exp();
        self.compose(|k| e0 / factorial(k))
    }

    /// Principal logarithm around the value coefficient.
    pub fn ln(&self) -> Result<CJet> {
        let a0 = self.value();
        if a0 == C64::new(0.0, 0.0) {
            return Err(Error::ZeroValue { op: "logarithm" });
        }
        let l0 = a0.ln();
        let inv = a0.inv();
        Ok(self.compose(|k| {
            if k == 0 {
                l0
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                inv.powi(k as i32) * (sign / k as f64)
            }
        }))
    }

    /// Principal power `f^p` for real `p`.
    pub fn powf(&self, p: f64) -> Result<CJet> {
        let a0 = self.value();
        if a0 == C64::new(0.0, 0.0) {
            return Err(Error::ZeroValue { op: "power" });
        }
        let base = a0.powf(p);
        let inv = a0.inv();
        Ok(self.compose(|k| {
            let mut binom = 1.0;
            for i in 0..k {
                binom *= (p - i as f64) / (i + 1) as f64;
            }
            base * inv.powi(k as i32) * binom
        }))
    }

    /// Principal square root (argument of the value in (−π/2, π/2]).
    pub fn sqrt(&self) -> Result<CJet> {
        let a0 = self.value();
        if a0 == C64::new(0.0, 0.0) {
            return Err(Error::ZeroValue { op: "square root" });
        }
        let root = a0.sqrt();
        let inv = a0.inv();
        Ok(self.compose(|k| {
            let mut binom = 1.0;
            for i in 0..k {
                binom *= (0.5 - i as f64) / (i + 1) as f64;
            }
            root * inv.powi(k as i32) * binom
        }))
    }

    pub fn powi(&self, n: u32) -> CJet {
        let mut acc = CJet::constant(C64::new(1.0, 0.0), self.orders);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

fn common(a: &CJet, b: &CJet) -> (CJet, CJet) {
    if a.orders == b.orders {
        (a.clone(), b.clone())
    } else {
        let o = a.orders.min(b.orders);
        (a.truncate(o), b.truncate(o))
    }
}

fn mul_raw(a: &CJet, b: &CJet) -> CJet {
    let o = a.orders;
    let mut out = CJet::zero(o);
    for i in 0..=o.x {
        for j in 0..=o.t {
            let ca = a.coeff[a.idx(i, j)];
            if ca == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..=(o.x - i) {
                for l in 0..=(o.t - j) {
                    let dst = out.idx(i + k, j + l);
                    out.coeff[dst] += ca * b.coeff[b.idx(k, l)];
                }
            }
        }
    }
    out
}

fn div_raw(a: &CJet, b: &CJet) -> CJet {
    let o = a.orders;
    let inv0 = b.value().inv();
    let mut q = CJet::zero(o);
    for i in 0..=o.x {
        for j in 0..=o.t {
            let mut acc = a.coeff[a.idx(i, j)];
            for k in 0..=i {
                for l in 0..=j {
                    if k == 0 && l == 0 {
                        continue;
                    }
                    acc -= b.coeff[b.idx(k, l)] * q.coeff[q.idx(i - k, j - l)];
                }
            }
            let dst = q.idx(i, j);
            q.coeff[dst] = acc * inv0;
        }
    }
    q
}

// Operator impls truncate to the common orders; `combine` is the strict form.
macro_rules! jet_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CJet> for &CJet {
            type Output = CJet;
            fn $method(self, rhs: &CJet) -> CJet {
                let (a, b) = common(self, rhs);
                $body(&a, &b)
            }
        }
        impl $trait<CJet> for CJet {
            type Output = CJet;
            fn $method(self, rhs: CJet) -> CJet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CJet> for CJet {
            type Output = CJet;
            fn $method(self, rhs: &CJet) -> CJet {
                (&self).$method(rhs)
            }
        }
        impl $trait<CJet> for &CJet {
            type Output = CJet;
            fn $method(self, rhs: CJet) -> CJet {
                self.$method(&rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a: &CJet, b: &CJet| {
    let mut out = a.clone();
    for (o, v) in out.coeff.iter_mut().zip(&b.coeff) {
        *o += v;
    }
    out
});
jet_binop!(Sub, sub, |a: &CJet, b: &CJet| {
    let mut out = a.clone();
    for (o, v) in out.coeff.iter_mut().zip(&b.coeff) {
        *o -= v;
    }
    out
});
jet_binop!(Mul, mul, mul_raw);
jet_binop!(Div, div, div_raw);

impl Neg for CJet {
    type Output = CJet;
    fn neg(self) -> CJet {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Neg for &CJet {
    type Output = CJet;
    fn neg(self) -> CJet {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl AddAssign<&CJet> for CJet {
    fn add_assign(&mut self, rhs: &CJet) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CJet> for CJet {
    fn sub_assign(&mut self, rhs: &CJet) {
        *self = &*self - rhs;
    }
}

macro_rules! jet_scalar_op {
    ($s:ty, $conv:expr) => {
        impl Mul<$s> for &CJet {
            type Output = CJet;
            fn mul(self, rhs: $s) -> CJet {
                self.scale($conv(rhs))
            }
        }
        impl Mul<$s> for CJet {
            type Output = CJet;
            fn mul(self, rhs: $s) -> CJet {
                self.scale($conv(rhs))
            }
        }
        impl Add<$s> for &CJet {
            type Output = CJet;
            fn add(self, rhs: $s) -> CJet {
                let mut out = self.clone();
                out.coeff[0] += $conv(rhs);
                out
            }
        }
        impl Add<$s> for CJet {
            type Output = CJet;
            fn add(mut self, rhs: $s) -> CJet {
                self.coeff[0] += $conv(rhs);
                self
            }
        }
        impl Sub<$s> for &CJet {
            type Output = CJet;
            fn sub(self, rhs: $s) -> CJet {
                let mut out = self.clone();
                out.coeff[0] -= $conv(rhs);
                out
            }
        }
        impl Sub<$s> for CJet {
            type Output = CJet;
            fn sub(mut self, rhs: $s) -> CJet {
                self.coeff[0] -= $conv(rhs);
                self
            }
        }
        impl Div<$s> for &CJet {
            type Output = CJet;
            fn div(self, rhs: $s) -> CJet {
                self.scale($conv(rhs).inv())
            }
        }
        impl Div<$s> for CJet {
            type Output = CJet;
            fn div(self, rhs: $s) -> CJet {
                self.scale($conv(rhs).inv())
            }
        }
    };
}

jet_scalar_op!(C64, |c: C64| c);
jet_scalar_op!(f64, |r: f64| C64::new(r, 0.0));
