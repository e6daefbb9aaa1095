//! Exponential seeds, the σ₁ ladder symmetry and the Hankel-determinant ladder.

use std::sync::Arc;

use rayon::prelude::*;

use super::discrete::{forward_jets, inverse_jets};
use crate::error::{Error, Result};
use crate::field::{FieldPair, PointJets, SampleGrid, ScalarField};
use crate::numkit::{det_dense, CJet, Orders, C64, I};

/// `F = Σ cₖ e^{i(kₖx − kₖ²t/2)}`, a solution of `2iF_t + F_xx = 0`. As a
/// field pair it is the ladder base `(u, v) = (0, F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentialSeed {
    pub ks: Vec<C64>,
    pub cs: Vec<C64>,
}

impl ExponentialSeed {
    pub fn new(ks: Vec<C64>, cs: Vec<C64>) -> Result<Self> {
        if ks.len() != cs.len() {
            return Err(Error::InvalidSpec("ks and cs differ in length".into()));
        }
        Ok(ExponentialSeed { ks, cs })
    }

    /// Seed whose `2m`-rung ladder closes with `u₂ₘ = F*`.
    ///
    /// The wave numbers must come in conjugate pairs. Each coefficient obeys
    /// `c*_{π(k)} = −1/(cₖ Π_{j≠k}(kₖ − kⱼ)²)` where `π` maps a wave number to
    /// its conjugate; no real wave number can satisfy this. `free` supplies
    /// `cₖ` for `Im kₖ > 0`; other entries are ignored.
    pub fn sigma1_closing(ks: &[C64], free: &[C64]) -> Result<Self> {
        let n = ks.len();
        if free.len() != n {
            return Err(Error::InvalidSpec("free parameters must match ks".into()));
        }
        let partner = conjugate_partners(ks)?;
        let prod = |k: usize| -> C64 {
            (0..n)
                .filter(|&j| j != k)
                .map(|j| (ks[k] - ks[j]).powu(2))
                .product()
        };
        let mut cs = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let p = prod(k);
            if ks[k].im == 0.0 {
                return Err(Error::InvalidSpec(format!("real wave number k[{k}] cannot close")));
            } else if ks[k].im > 0.0 {
                if free[k] == C64::new(0.0, 0.0) {
                    return Err(Error::InvalidSpec(format!("c[{k}] must be nonzero")));
                }
                cs[k] = free[k];
                cs[partner[k]] = (-1.0 / (free[k] * p)).conj();
            }
        }
        Self::new(ks.to_vec(), cs)
    }

    fn phase(&self, k: C64, x: &CJet, t: &CJet) -> CJet {
        ((x * k - t * (k * k / 2.0)) * I).exp()
    }
}

fn conjugate_partners(ks: &[C64]) -> Result<Vec<usize>> {
    let tol = 1e-12;
    ks.iter()
        .map(|k| {
            ks.iter()
                .position(|j| (j - k.conj()).norm() <= tol * (1.0 + k.norm()))
                .ok_or_else(|| Error::InvalidSpec(format!("wave number {k} has no conjugate partner")))
        })
        .collect()
}

impl ScalarField for ExponentialSeed {
    fn jet(&self, x: f64, t: f64, orders: Orders) -> Result<CJet> {
        let (xj, tj) = (CJet::var_x(x, orders), CJet::var_t(t, orders));
        let mut f = CJet::zero(orders);
        for (k, c) in self.ks.iter().zip(&self.cs) {
            f += &(self.phase(*k, &xj, &tj) * *c);
        }
        Ok(f)
    }
}

impl FieldPair for ExponentialSeed {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        Ok(PointJets {
            u: CJet::zero(orders),
            v: self.jet(x, t, orders)?,
        })
    }
}

/// Defects of the σ₁ ladder symmetry around a centre rung.
#[derive(Clone, Debug, PartialEq)]
pub struct Sigma1LadderReport {
    pub m: usize,
    /// Per offset `j = 0..=m`: max relative defect of `U⁺ʲ = (v⁻ʲ)*`, `V⁺ʲ = (u⁻ʲ)*`.
    pub defects: Vec<f64>,
    /// The same for the literal `U⁺ʲ = (u⁻ʲ)*`, `V⁺ʲ = (v⁻ʲ)*`.
    pub literal_defects: Vec<f64>,
    pub max_defect: f64,
    pub worst_point: (f64, f64),
    pub points: usize,
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Applies the forward map `j` times and the inverse map `j` times from
/// `centre` for `j ≤ m` and compares `U⁺ʲ` with `(v⁻ʲ)*` and `V⁺ʲ` with `(u⁻ʲ)*`.
pub fn sigma1_ladder_check(centre: &dyn FieldPair, m: usize, grid: &SampleGrid) -> Result<Sigma1LadderReport> {
    grid.validate()?;
    let per_point: Vec<(f64, f64, Vec<f64>, Vec<f64>)> = grid
        .points()
        .into_par_iter()
        .map(|(x, t)| {
            let j0 = centre.jets(x, t, Orders::new(2 * m, 0))?;
            let (mut up, mut down) = (j0.clone(), j0);
            let mut d = Vec::with_capacity(m + 1);
            let mut lit = Vec::with_capacity(m + 1);
            for step in 0..=m {
                if step > 0 {
                    let sing = |_| Error::LadderSingularity { step: step as i32, x, t };
                    up = forward_jets(&up).map_err(sing)?;
                    down = inverse_jets(&down).map_err(sing)?;
                }
                let (uu, uv) = up.values();
                let (du, dv) = down.values();
                d.push(rel(uu, dv.conj()).max(rel(uv, du.conj())));
                lit.push(rel(uu, du.conj()).max(rel(uv, dv.conj())));
            }
            Ok((x, t, d, lit))
        })
        .collect::<Result<_>>()?;
    let mut defects = vec![0.0f64; m + 1];
    let mut literal = vec![0.0f64; m + 1];
    let (mut max_defect, mut worst_point) = (0.0f64, (grid.x_min, grid.t_min));
    for (x, t, d, lit) in &per_point {
        for j in 0..=m {
            defects[j] = defects[j].max(d[j]);
            literal[j] = literal[j].max(lit[j]);
            if d[j] > max_defect {
                max_defect = d[j];
                worst_point = (*x, *t);
            }
        }
    }
    Ok(Sigma1LadderReport {
        m,
        defects,
        literal_defects: literal,
        max_defect,
        worst_point,
        points: per_point.len(),
    })
}

/// Hankel determinants `D_s = det[∂ₓ^{i+j}F]_{i,j<s}` of a seed and the ladder
/// rungs `u_s = D_{s−1}/D_s`, `v_s = D_{s+1}/D_s`.
#[derive(Clone)]
pub struct HankelLadder {
    pub seed: Arc<dyn ScalarField>,
}

/// `|D_s|` below this fraction of the Hadamard bound counts as vanishing.
pub const HANKEL_DEGENERACY: f64 = 1e-12;

impl HankelLadder {
    pub fn new(seed: Arc<dyn ScalarField>) -> Self {
        HankelLadder { seed }
    }

    /// `D_0 … D_smax` at the given output orders.
    pub fn determinants(&self, smax: usize, x: f64, t: f64, orders: Orders) -> Result<Vec<CJet>> {
        let extra = 2 * smax.saturating_sub(1);
        let f = self.seed.jet(x, t, orders.plus(extra, 0))?;
        let mut derivs = Vec::with_capacity(extra + 1);
        let mut cur = f;
        derivs.push(cur.clone());
        for _ in 0..extra {
            cur = cur.dx()?;
            derivs.push(cur.clone());
        }
        let derivs: Vec<CJet> = derivs.iter().map(|d| d.truncate(orders)).collect();
        let unit = CJet::constant(C64::new(1.0, 0.0), orders);
        let mut out = vec![unit.clone()];
        for s in 1..=smax {
            let m: Vec<Vec<CJet>> = (0..s).map(|i| (0..s).map(|j| derivs[i + j].clone()).collect()).collect();
            out.push(det_dense(m, &unit));
        }
        Ok(out)
    }

    /// Whether `D_s` is numerically zero at a point.
    pub fn vanishes(&self, s: usize, x: f64, t: f64) -> Result<bool> {
        if s == 0 {
            return Ok(false);
        }
        let o = Orders::new(0, 0);
        let f = self.seed.jet(x, t, Orders::new(2 * s - 2, 0))?;
        let vals: Vec<C64> = (0..=2 * s - 2).map(|k| f.deriv(k, 0)).collect::<Result<_>>()?;
        let m: Vec<Vec<C64>> = (0..s).map(|i| (0..s).map(|j| vals[i + j]).collect()).collect();
        let bound: f64 = m.iter().map(|r| r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()).product();
        let d = self.determinants(s, x, t, o)?[s].value();
        Ok(!(d.norm() > HANKEL_DEGENERACY * bound))
    }

    /// Rung `s` as jets.
    pub fn rung(&self, s: usize, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        if self.vanishes(s, x, t)? {
            return Err(Error::VanishingDeterminant { index: s, x, t });
        }
        let d = self.determinants(s + 1, x, t, orders)?;
        let u = if s == 0 {
            CJet::zero(orders)
        } else {
            d[s - 1].checked_div(&d[s])?
        };
        let v = d[s + 1].checked_div(&d[s])?;
        Ok(PointJets { u, v })
    }
}

/// Centre rung `m` of the `2m`-rung ladder built on a closing seed, which
/// carries an m-soliton with `u = v*`.
pub fn sigma1_centre(seed: Arc<ExponentialSeed>, m: usize) -> HankelRung {
    HankelRung {
        ladder: HankelLadder::new(seed),
        s: m,
    }
}

/// Values `(u_s, v_s)` of the Hankel ladder at a point.
pub fn hankel_ladder(seed: Arc<dyn ScalarField>, s: usize, x: f64, t: f64) -> Result<(C64, C64)> {
    Ok(HankelLadder::new(seed).rung(s, x, t, Orders::new(0, 0))?.values())
}

/// A fixed Hankel rung as a field pair.
#[derive(Clone)]
pub struct HankelRung {
    pub ladder: HankelLadder,
    pub s: usize,
}

impl FieldPair for HankelRung {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        self.ladder.rung(self.s, x, t, orders)
    }
}
