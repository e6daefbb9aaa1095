//! Linear dressing factors `P(λ) = [[λ+A, B], [C, λ+D]]` and sequential chains.

use std::sync::Arc;

use super::spec::DressingStep;
use crate::error::{Error, Result};
use crate::field::{Background, FieldPair, GroupProvider, PointJets};
use crate::numkit::{CJet, Mat2, Orders, C64};

/// Relative size of the kernel Wronskian below which two kernel lines are
/// treated as coincident.
pub const KERNEL_DEGENERACY: f64 = 1e-13;

/// Kernel vector `g(λ)·(1, α)` rescaled by a constant so that its larger
/// value component has unit modulus.
pub fn kernel_vector(g: &Mat2<CJet>, alpha: C64) -> [CJet; 2] {
    let [a, b] = g.apply(&[
        CJet::constant(C64::new(1.0, 0.0), g.orders()),
        CJet::constant(alpha, g.orders()),
    ]);
    let s = a.value().norm().max(b.value().norm());
    if s > 0.0 && s.is_finite() {
        [a * (1.0 / s), b * (1.0 / s)]
    } else {
        [a, b]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DressingFactor {
    pub a: CJet,
    pub b: CJet,
    pub c: CJet,
    pub d: CJet,
    pub lambda1: C64,
    pub lambda2: C64,
}

impl DressingFactor {
    /// Factor with kernel lines `ξ₁` at `λ₁` and `ξ₂` at `λ₂`.
    ///
    /// In ratio form `F = ξ¹/ξ²`: `C = −(λ₁−λ₂)/(F₁−F₂)`,
    /// `B = (λ₁−λ₂)F₁F₂/(F₁−F₂)`, `A = −λ₁ − B/F₁`, `D = −λ₁ − C·F₁`.
    pub fn from_kernels(lambda1: C64, xi1: &[CJet; 2], lambda2: C64, xi2: &[CJet; 2], at: (f64, f64)) -> Result<Self> {
        let w = &(&xi1[0] * &xi2[1]) - &(&xi2[0] * &xi1[1]);
        let scale = xi1[0].value().norm().max(xi1[1].value().norm())
            * xi2[0].value().norm().max(xi2[1].value().norm());
        if !(w.value().norm() > KERNEL_DEGENERACY * scale) {
            return Err(Error::DressingSingularity { x: at.0, t: at.1 });
        }
        let dl = lambda1 - lambda2;
        let winv = w.recip()?;
        let b = (&xi1[0] * &xi2[0]) * &winv * dl;
        let c = (&xi1[1] * &xi2[1]) * &winv * (-dl);
        let a = (&xi2[0] * &xi1[1]) * &winv * (-dl) - lambda1;
        let d = (&xi1[0] * &xi2[1]) * &winv * dl - lambda1;
        Ok(DressingFactor {
            a,
            b,
            c,
            d,
            lambda1,
            lambda2,
        })
    }

    /// `P(λ)` as a jet matrix.
    pub fn p(&self, lambda: C64) -> Mat2<CJet> {
        Mat2::new(&self.a + lambda, self.b.clone(), self.c.clone(), &self.d + lambda)
    }

    pub fn p_value(&self, lambda: C64) -> Mat2<C64> {
        self.p(lambda).value()
    }

    /// `A + D`, equal to `−(λ₁ + λ₂)`.
    pub fn trace(&self) -> C64 {
        self.a.value() + self.d.value()
    }

    /// `AD − BC`, equal to `λ₁λ₂`.
    pub fn minor(&self) -> C64 {
        self.a.value() * self.d.value() - self.b.value() * self.c.value()
    }

    pub fn orders(&self) -> Orders {
        self.a.orders()
    }
}

/// Factor for one step on a background at a point.
pub fn single_dressing(
    background: &dyn Background,
    step: &DressingStep,
    x: f64,
    t: f64,
    orders: Orders,
) -> Result<DressingFactor> {
    let g1 = background.group(step.lambda1, x, t, orders)?;
    let g2 = background.group(step.lambda2, x, t, orders)?;
    DressingFactor::from_kernels(
        step.lambda1,
        &kernel_vector(&g1, step.alpha1),
        step.lambda2,
        &kernel_vector(&g2, step.alpha2),
        (x, t),
    )
}

/// New fields `(U, V) = (u − 2B, v + 2C)`.
pub fn apply_dressing(fields: &PointJets, factor: &DressingFactor) -> PointJets {
    let o = fields.orders().min(factor.orders());
    PointJets {
        u: fields.u.truncate(o) - factor.b.truncate(o) * 2.0,
        v: fields.v.truncate(o) + factor.c.truncate(o) * 2.0,
    }
}

/// Sequential dressing `Gₖ(λ) = Pₖ(λ)·Gₖ₋₁(λ)` over a background.
#[derive(Clone)]
pub struct DressingChain {
    pub background: Arc<dyn Background>,
    pub steps: Vec<DressingStep>,
}

impl DressingChain {
    pub fn new(background: Arc<dyn Background>, steps: Vec<DressingStep>) -> Self {
        DressingChain { background, steps }
    }

    /// All factors at a point, in application order.
    pub fn factors(&self, x: f64, t: f64, orders: Orders) -> Result<Vec<DressingFactor>> {
        let mut out: Vec<DressingFactor> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let mut g1 = self.background.group(step.lambda1, x, t, orders)?;
            let mut g2 = self.background.group(step.lambda2, x, t, orders)?;
            for f in &out {
                g1 = f.p(step.lambda1).matmul(&g1);
                g2 = f.p(step.lambda2).matmul(&g2);
            }
            out.push(DressingFactor::from_kernels(
                step.lambda1,
                &kernel_vector(&g1, step.alpha1),
                step.lambda2,
                &kernel_vector(&g2, step.alpha2),
                (x, t),
            )?);
        }
        Ok(out)
    }
}

impl FieldPair for DressingChain {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        let mut fields = self.background.jets(x, t, orders)?;
        for f in self.factors(x, t, orders)? {
            fields = apply_dressing(&fields, &f);
        }
        Ok(fields)
    }
}

impl GroupProvider for DressingChain {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
        let mut g = self.background.group(lambda, x, t, orders)?;
        for f in self.factors(x, t, orders)? {
            g = f.p(lambda).matmul(&g);
        }
        Ok(g)
    }
}
