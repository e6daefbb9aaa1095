//! The n-step factor `Gₙ(λ)` obtained at once from its `2n` kernel conditions.

use std::sync::Arc;

use super::dressing::kernel_vector;
use super::spec::SolitonSpec;
use crate::error::{Error, Result};
use crate::field::{sample_field, Background, FieldPair, GroupProvider, PointJets, SampleGrid, SampledField, Vacuum};
use crate::numkit::{det_dense, solve_dense, CJet, Mat2, Orders, C64};

/// `Gₙ(λ) = [[λⁿ + ΣP₁₁ᵏλᵏ, ΣP₁₂ᵏλᵏ], [ΣP₂₁ᵏλᵏ, λⁿ + ΣP₂₂ᵏλᵏ]]`, `k < n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialDressing {
    pub n: usize,
    pub p11: Vec<CJet>,
    pub p12: Vec<CJet>,
    pub p21: Vec<CJet>,
    pub p22: Vec<CJet>,
}

impl PolynomialDressing {
    pub fn p(&self, lambda: C64, orders: Orders) -> Mat2<CJet> {
        let poly = |cs: &[CJet], monic: bool| {
            let mut acc = CJet::constant(if monic { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }, orders);
            for c in cs.iter().rev() {
                acc = acc * lambda + c;
            }
            acc
        };
        Mat2::new(poly(&self.p11, true), poly(&self.p12, false), poly(&self.p21, false), poly(&self.p22, true))
    }

    /// `P₁₂^{n−1}`; the new `u` is `u − 2·P₁₂^{n−1}`.
    pub fn top_p12(&self) -> Option<&CJet> {
        self.p12.last()
    }

    /// `P₂₁^{n−1}`; the new `v` is `v + 2·P₂₁^{n−1}`.
    pub fn top_p21(&self) -> Option<&CJet> {
        self.p21.last()
    }
}

/// Coefficient rows `(λᵏξ¹ | λᵏξ²)` and the right-hand sides of both block rows.
fn assemble<T>(points: &[(C64, [T; 2])], n: usize) -> (Vec<Vec<T>>, Vec<T>, Vec<T>)
where
    T: Clone + std::ops::Mul<C64, Output = T>,
{
    let mut rows = Vec::with_capacity(2 * n);
    let mut rhs1 = Vec::with_capacity(2 * n);
    let mut rhs2 = Vec::with_capacity(2 * n);
    for (lambda, xi) in points {
        let mut row = Vec::with_capacity(2 * n);
        for comp in xi {
            let mut pw = C64::new(1.0, 0.0);
            for _ in 0..n {
                row.push(comp.clone() * pw);
                pw *= lambda;
            }
        }
        let ln = lambda.powu(n as u32);
        rhs1.push(xi[0].clone() * (-ln));
        rhs2.push(xi[1].clone() * (-ln));
        rows.push(row);
    }
    (rows, rhs1, rhs2)
}

/// Solves the kernel conditions `Gₙ(λᵢ)·g(λᵢ)·(1, αᵢ) = 0` for all `2n` points.
pub fn direct_n_dressing_jets(
    spec: &SolitonSpec,
    background: &dyn Background,
    x: f64,
    t: f64,
    orders: Orders,
) -> Result<(PolynomialDressing, PointJets)> {
    let n = spec.n();
    let base = background.jets(x, t, orders)?;
    if n == 0 {
        let p = PolynomialDressing {
            n,
            p11: vec![],
            p12: vec![],
            p21: vec![],
            p22: vec![],
        };
        return Ok((p, base));
    }
    let mut points = Vec::with_capacity(2 * n);
    for (lambda, alpha) in spec.dressing_points() {
        let g = background.group(lambda, x, t, orders)?;
        points.push((lambda, kernel_vector(&g, alpha)));
    }
    let (rows, rhs1, rhs2) = assemble(&points, n);
    let singular = |e: Error| match e {
        Error::Singular { .. } => Error::DressingSingularity { x, t },
        e => e,
    };
    let s1 = solve_dense(rows.clone(), rhs1).map_err(singular)?;
    let s2 = solve_dense(rows, rhs2).map_err(singular)?;
    let p = PolynomialDressing {
        n,
        p11: s1[..n].to_vec(),
        p12: s1[n..].to_vec(),
        p21: s2[..n].to_vec(),
        p22: s2[n..].to_vec(),
    };
    let o = base.orders().min(orders);
    let fields = PointJets {
        u: base.u.truncate(o) - p.p12[n - 1].truncate(o) * 2.0,
        v: base.v.truncate(o) + p.p21[n - 1].truncate(o) * 2.0,
    };
    Ok((p, fields))
}

/// New `(U, V)` values at a point.
pub fn direct_n_dressing(spec: &SolitonSpec, background: &dyn Background, x: f64, t: f64) -> Result<(C64, C64)> {
    let (_, j) = direct_n_dressing_jets(spec, background, x, t, Orders::new(0, 0))?;
    Ok(j.values())
}

/// `(P₁₂^{n−1}, P₂₁^{n−1})` as ratios of `2n × 2n` determinants, from the
/// kernel ratios `Fᵢ = ξᵢ¹/ξᵢ²` at the points `λᵢ`.
pub fn cramer_p_coefficients(lambdas: &[C64], f_values: &[C64], point: (f64, f64)) -> Result<(C64, C64)> {
    let m = lambdas.len();
    if m == 0 || m % 2 != 0 || f_values.len() != m {
        return Err(Error::InvalidSpec("need an even, nonzero number of points".into()));
    }
    let n = m / 2;
    let one = C64::new(1.0, 0.0);
    let points: Vec<(C64, [C64; 2])> = lambdas
        .iter()
        .zip(f_values)
        .map(|(&l, &f)| {
            let s = f.norm().max(1.0);
            (l, [f / s, one / s])
        })
        .collect();
    let (rows, rhs1, rhs2) = assemble(&points, n);
    let den = det_dense(rows.clone(), &one);
    if den == C64::new(0.0, 0.0) || !den.is_finite() {
        return Err(Error::VanishingDeterminant {
            index: m,
            x: point.0,
            t: point.1,
        });
    }
    let replaced = |col: usize, rhs: &[C64]| {
        let mut a = rows.clone();
        for (row, r) in a.iter_mut().zip(rhs) {
            row[col] = *r;
        }
        det_dense(a, &one)
    };
    Ok((replaced(2 * n - 1, &rhs1) / den, replaced(n - 1, &rhs2) / den))
}

/// The n-fold dressing of a background, evaluated through the direct system.
#[derive(Clone)]
pub struct NSoliton {
    pub spec: SolitonSpec,
    pub background: Arc<dyn Background>,
}

impl NSoliton {
    pub fn new(spec: SolitonSpec, background: Arc<dyn Background>) -> Self {
        NSoliton { spec, background }
    }

    pub fn on_vacuum(spec: SolitonSpec) -> Self {
        Self::new(spec, Arc::new(Vacuum))
    }
}

impl FieldPair for NSoliton {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        direct_n_dressing_jets(&self.spec, self.background.as_ref(), x, t, orders).map(|(_, j)| j)
    }
}

impl GroupProvider for NSoliton {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
        let (p, _) = direct_n_dressing_jets(&self.spec, self.background.as_ref(), x, t, orders)?;
        let g = self.background.group(lambda, x, t, orders)?;
        Ok(p.p(lambda, orders).matmul(&g))
    }
}

/// σ₁-constrained n-soliton from the zero seed, sampled on a grid. Points
/// where the dressing degenerates are kept as missing samples.
pub fn nsoliton_field(spec: &SolitonSpec, grid: &SampleGrid) -> Result<SampledField> {
    if !spec.enforce_sigma1 {
        return Err(Error::InvalidSpec("n-soliton sampling needs σ₁-constrained parameters".into()));
    }
    grid.validate()?;
    Ok(sample_field(&NSoliton::on_vacuum(spec.clone()), grid))
}
