//! Point-evaluable solution pairs `(u, v)` and group-element providers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{CJet, Mat2, Orders, C64, I};

/// Jets of `u` and `v` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointJets {
    pub u: CJet,
    pub v: CJet,
}

impl PointJets {
    pub fn orders(&self) -> Orders {
        self.u.orders().min(self.v.orders())
    }

    pub fn truncate(&self, orders: Orders) -> PointJets {
        PointJets {
            u: self.u.truncate(orders),
            v: self.v.truncate(orders),
        }
    }

    pub fn values(&self) -> (C64, C64) {
        (self.u.value(), self.v.value())
    }
}

/// A solution pair of the coupled system, evaluable as jets at any point.
pub trait FieldPair: Send + Sync {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets>;
}

/// Supplies the Lax group element `g(λ)` as a matrix of jets.
pub trait GroupProvider: Send + Sync {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>>;
}

/// A single complex field evaluable as jets (tau seeds, determinants).
pub trait ScalarField: Send + Sync {
    fn jet(&self, x: f64, t: f64, orders: Orders) -> Result<CJet>;
}

/// A solution together with its group element.
pub trait Background: FieldPair + GroupProvider {}
impl<T: FieldPair + GroupProvider> Background for T {}

impl<T: FieldPair + ?Sized> FieldPair for Arc<T> {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        (**self).jets(x, t, orders)
    }
}

impl<T: GroupProvider + ?Sized> GroupProvider for Arc<T> {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
        (**self).group(lambda, x, t, orders)
    }
}

impl<T: FieldPair + ?Sized> FieldPair for &T {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        (**self).jets(x, t, orders)
    }
}

impl<T: GroupProvider + ?Sized> GroupProvider for &T {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
        (**self).group(lambda, x, t, orders)
    }
}

/// `λx + λ²t` as a jet.
pub fn vacuum_phase(lambda: C64, x: f64, t: f64, orders: Orders) -> CJet {
    CJet::var_x(x, orders) * lambda + CJet::var_t(t, orders) * (lambda * lambda)
}

/// The zero solution `u = v = 0` with `g = diag(e^{i(λx+λ²t)}, e^{−i(λx+λ²t)})`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Vacuum;

impl FieldPair for Vacuum {
    fn jets(&self, _x: f64, _t: f64, orders: Orders) -> Result<PointJets> {
        Ok(PointJets {
            u: CJet::zero(orders),
            v: CJet::zero(orders),
        })
    }
}

impl GroupProvider for Vacuum {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
        let phase = vacuum_phase(lambda, x, t, orders) * I;
        Ok(Mat2::new(phase.exp(), CJet::zero(orders), CJet::zero(orders), (-phase).exp()))
    }
}

/// A field pair given by a closure over jets of the coordinates.
pub struct ClosureField<F>(pub F);

impl<F> FieldPair for ClosureField<F>
where
    F: Fn(&CJet, &CJet) -> Result<(CJet, CJet)> + Send + Sync,
{
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        let (u, v) = (self.0)(&CJet::var_x(x, orders), &CJet::var_t(t, orders))?;
        Ok(PointJets { u, v })
    }
}

/// Tensor grid of sample points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl SampleGrid {
    pub fn new(x: (f64, f64, usize), t: (f64, f64, usize)) -> Self {
        SampleGrid {
            x_min: x.0,
            x_max: x.1,
            nx: x.2,
            t_min: t.0,
            t_max: t.1,
            nt: t.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.nt < 1 {
            return Err(Error::InvalidSpec("grid needs nx ≥ 2 and nt ≥ 1".into()));
        }
        if !(self.x_min < self.x_max) || !(self.t_min <= self.t_max) {
            return Err(Error::InvalidSpec("grid bounds must be increasing".into()));
        }
        if self.nt >= 2 && self.t_min == self.t_max {
            return Err(Error::InvalidSpec("degenerate t range with nt ≥ 2".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn t(&self, j: usize) -> f64 {
        if self.nt == 1 {
            self.t_min
        } else if j + 1 == self.nt {
            self.t_max
        } else {
            self.t_min + j as f64 * (self.t_max - self.t_min) / (self.nt - 1) as f64
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in t-major order: all x for the first t, then the next t.
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.nt)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .map(|(i, j)| (self.x(i), self.t(j)))
            .collect()
    }
}

/// One grid sample; failed evaluations are kept with their error.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub t: f64,
    pub value: std::result::Result<(C64, C64), Error>,
}

/// Values of a field pair on a grid, in [`SampleGrid::points`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub grid: SampleGrid,
    pub samples: Vec<Sample>,
}

impl SampledField {
    pub fn missing(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.value.is_err())
    }

    /// `(x, t, u, v)` of every successful sample.
    pub fn values(&self) -> impl Iterator<Item = (f64, f64, C64, C64)> + '_ {
        self.samples
            .iter()
            .filter_map(|s| s.value.as_ref().ok().map(|&(u, v)| (s.x, s.t, u, v)))
    }

    /// Row of `u` values at time index `j`, `None` where missing.
    pub fn u_row(&self, j: usize) -> Vec<Option<C64>> {
        let nx = self.grid.nx;
        self.samples[j * nx..(j + 1) * nx]
            .iter()
            .map(|s| s.value.as_ref().ok().map(|v| v.0))
            .collect()
    }
}

/// Evaluates `(u, v)` at every grid point in parallel.
pub fn sample_field(field: &dyn FieldPair, grid: &SampleGrid) -> SampledField {
    use rayon::prelude::*;
    let samples = grid
        .points()
        .into_par_iter()
        .map(|(x, t)| Sample {
            x,
            t,
            value: field.jets(x, t, Orders::new(0, 0)).map(|j| j.values()),
        })
        .collect();
    SampledField { grid: *grid, samples }
}

/// Residuals of `−2i u_t + u_xx + 2uv·u` and `2i v_t + v_xx + 2uv·v`.
pub fn scnl_residual(j: &PointJets) -> Result<(C64, C64)> {
    let need = Orders::new(2, 1);
    if !j.orders().covers(need) {
        return Err(Error::InsufficientOrder {
            needed: need,
            have: j.orders(),
        });
    }
    let (u, v) = j.values();
    let uv = u * v;
    let ru = -2.0 * I * j.u.deriv(0, 1)? + j.u.deriv(2, 0)? + 2.0 * uv * u;
    let rv = 2.0 * I * j.v.deriv(0, 1)? + j.v.deriv(2, 0)? + 2.0 * uv * v;
    Ok((ru, rv))
}

/// Residual of `−2iψ_t + ψ_xx + 2|ψ|²ψ` for a single complex field.
pub fn cnl_residual(psi: &CJet) -> Result<C64> {
    let p = psi.value();
    Ok(-2.0 * I * psi.deriv(0, 1)? + psi.deriv(2, 0)? + 2.0 * p.norm_sqr() * p)
}
