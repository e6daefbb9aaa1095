//! Phase variables `v = e^{iθ}`, `u = e^{−iθ}(R − iθₓₓ/2)` and the equations
//! they satisfy.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::PointJets;
use crate::numkit::{CJet, Orders, C64, I};

#[derive(Clone, Debug, PartialEq)]
pub struct Sigma2Fields {
    pub theta: CJet,
    pub r: CJet,
}

impl Sigma2Fields {
    pub fn orders(&self) -> Orders {
        self.theta.orders().min(self.r.orders())
    }
}

/// Shifts the real part of `theta` by a multiple of 2π so its value lies
/// within π of `reference`.
pub fn unwrap_to(theta: &mut CJet, reference: C64) {
    let d = theta.value().re - reference.re;
    let k = (d / (2.0 * PI)).round();
    if k != 0.0 {
        let v = theta.value();
        theta.set(0, 0, v - 2.0 * PI * k);
    }
}

/// `θ = −i ln v`, `R = uv + iθₓₓ/2`. Consumes two x-orders. With a
/// `reference` the branch of `θ` is chosen closest to it.
pub fn to_sigma2(j: &PointJets, reference: Option<C64>) -> Result<Sigma2Fields> {
    if j.v.value() == C64::new(0.0, 0.0) {
        return Err(Error::ZeroValue { op: "phase of v" });
    }
    let mut theta = j.v.ln()? * (-I);
    if let Some(r) = reference {
        unwrap_to(&mut theta, r);
    }
    let txx = theta.dxn(2)?;
    let o = txx.orders();
    let r = &j.u.truncate(o) * &j.v.truncate(o) + txx * (I * 0.5);
    Ok(Sigma2Fields {
        theta: theta.truncate(o),
        r,
    })
}

/// `v = e^{iθ}`, `u = e^{−iθ}(R − iθₓₓ/2)`. Consumes two x-orders.
pub fn from_sigma2(s: &Sigma2Fields) -> Result<PointJets> {
    let txx = s.theta.dxn(2)?;
    let o = txx.orders().min(s.r.orders());
    let th = s.theta.truncate(o);
    let v = (&th * I).exp();
    let u = (-(&th * I)).exp() * (s.r.truncate(o) - txx.truncate(o) * (I * 0.5));
    Ok(PointJets { u, v })
}

fn need(have: Orders, needed: Orders) -> Result<()> {
    if have.covers(needed) {
        Ok(())
    } else {
        Err(Error::InsufficientOrder { needed, have })
    }
}

/// Residuals of `2θₜ + θₓ² − 2R = 0` and `2Rₜ + ½θₓₓₓₓ + 2(θₓR)ₓ = 0`,
/// the form equivalent to the coupled system under the change of variables.
pub fn schl1_residual(s: &Sigma2Fields) -> Result<(C64, C64)> {
    need(s.theta.orders(), Orders::new(4, 1))?;
    need(s.r.orders(), Orders::new(1, 1))?;
    let th = &s.theta;
    let (tx, tt, txx, txxxx) = (th.deriv(1, 0)?, th.deriv(0, 1)?, th.deriv(2, 0)?, th.deriv(4, 0)?);
    let (r, rx, rt) = (s.r.value(), s.r.deriv(1, 0)?, s.r.deriv(0, 1)?);
    let first = 2.0 * tt + tx * tx - 2.0 * r;
    let second = 2.0 * rt + 0.5 * txxxx + 2.0 * (txx * r + tx * rx);
    Ok((first, second))
}

/// The literal second equation `2Rₜ − ½θₓₓₓₓ − 2(θₓR)ₓ` (first as above).
pub fn schl1_literal_residual(s: &Sigma2Fields) -> Result<(C64, C64)> {
    let (first, _) = schl1_residual(s)?;
    let th = &s.theta;
    let (tx, txx, txxxx) = (th.deriv(1, 0)?, th.deriv(2, 0)?, th.deriv(4, 0)?);
    let (r, rx, rt) = (s.r.value(), s.r.deriv(1, 0)?, s.r.deriv(0, 1)?);
    Ok((first, 2.0 * rt - 0.5 * txxxx - 2.0 * (txx * r + tx * rx)))
}

/// Residual of `θₜₜ + ¼θₓₓₓₓ + (θₜ + 3/2·θₓ²)θₓₓ + 2θₓθₓₜ = 0`, obtained by
/// eliminating `R`.
pub fn s2_residual(theta: &CJet) -> Result<C64> {
    need(theta.orders(), Orders::new(4, 2))?;
    let d = |i, j| theta.deriv(i, j);
    let (tx, tt, txx, txt) = (d(1, 0)?, d(0, 1)?, d(2, 0)?, d(1, 1)?);
    Ok(d(0, 2)? + 0.25 * d(4, 0)? + (tt + 1.5 * tx * tx) * txx + 2.0 * tx * txt)
}

/// The literal `θₜₜ − ¼θₓₓₓₓ + (3/2·θₓ² + θₜ)θₓₓ`.
pub fn s2_literal_residual(theta: &CJet) -> Result<C64> {
    need(theta.orders(), Orders::new(4, 2))?;
    let d = |i, j| theta.deriv(i, j);
    let (tx, tt, txx) = (d(1, 0)?, d(0, 1)?, d(2, 0)?);
    Ok(d(0, 2)? - 0.25 * d(4, 0)? + (1.5 * tx * tx + tt) * txx)
}
