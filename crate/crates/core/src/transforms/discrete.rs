//! The discrete substitution `U = 1/v`, `V = v(uv + (ln v)ₓₓ)` and its inverse.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldPair, PointJets};
use crate::numkit::{Orders, C64};

/// `(ln f)ₓₓ` computed as `(fₓ/f)ₓ`, so no logarithm branch is involved.
fn log_xx(f: &crate::numkit::CJet) -> Result<crate::numkit::CJet> {
    let fx = f.dx()?;
    fx.checked_div(&f.truncate(fx.orders()))?.dx()
}

/// One forward step on jets; consumes two x-orders.
pub fn forward_jets(j: &PointJets) -> Result<PointJets> {
    let o = j.orders();
    if o.x < 2 {
        return Err(Error::InsufficientOrder {
            needed: Orders::new(2, o.t),
            have: o,
        });
    }
    let (u, v) = (j.u.truncate(o), j.v.truncate(o));
    if v.value() == C64::new(0.0, 0.0) {
        return Err(Error::ZeroValue { op: "discrete step (v)" });
    }
    let lxx = log_xx(&v)?;
    let o2 = lxx.orders();
    let (u, v) = (u.truncate(o2), v.truncate(o2));
    let big_v = &v * &(&(&u * &v) + &lxx);
    Ok(PointJets {
        u: v.recip()?,
        v: big_v,
    })
}

/// One inverse step on jets: `v = 1/U`, `u = U(UV + (ln U)ₓₓ)`.
pub fn inverse_jets(j: &PointJets) -> Result<PointJets> {
    let swapped = PointJets {
        u: j.v.clone(),
        v: j.u.clone(),
    };
    let r = forward_jets(&swapped).map_err(|e| match e {
        Error::ZeroValue { .. } => Error::ZeroValue { op: "discrete step (U)" },
        e => e,
    })?;
    Ok(PointJets { u: r.v, v: r.u })
}

/// `steps` forward (positive) or inverse (negative) steps on jets.
pub fn iterate_jets(j: &PointJets, steps: i32, at: (f64, f64)) -> Result<PointJets> {
    let mut cur = j.clone();
    for s in 0..steps.unsigned_abs() as i32 {
        let step = if steps > 0 { s + 1 } else { -(s + 1) };
        cur = if steps > 0 { forward_jets(&cur) } else { inverse_jets(&cur) }.map_err(|e| match e {
            Error::ZeroValue { .. } => Error::LadderSingularity { step, x: at.0, t: at.1 },
            e => e,
        })?;
    }
    Ok(cur)
}

pub fn discrete_forward(fields: &dyn FieldPair, x: f64, t: f64) -> Result<(C64, C64)> {
    let j = fields.jets(x, t, Orders::new(2, 0))?;
    Ok(forward_jets(&j)?.values())
}

pub fn discrete_inverse(fields: &dyn FieldPair, x: f64, t: f64) -> Result<(C64, C64)> {
    let j = fields.jets(x, t, Orders::new(2, 0))?;
    Ok(inverse_jets(&j)?.values())
}

/// A field pair moved `steps` rungs along the discrete ladder.
#[derive(Clone)]
pub struct Discrete {
    pub inner: Arc<dyn FieldPair>,
    pub steps: i32,
}

impl Discrete {
    pub fn new(inner: Arc<dyn FieldPair>, steps: i32) -> Self {
        Discrete { inner, steps }
    }
}

impl FieldPair for Discrete {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        let need = orders.plus(2 * self.steps.unsigned_abs() as usize, 0);
        let j = self.inner.jets(x, t, need)?;
        Ok(iterate_jets(&j, self.steps, (x, t))?.truncate(orders))
    }
}

/// A rung of the ladder together with the rungs visited to reach it.
#[derive(Clone)]
pub struct LadderState {
    pub index: i32,
    pub fields: Arc<dyn FieldPair>,
    pub history: Vec<(i32, Arc<dyn FieldPair>)>,
}

impl LadderState {
    pub fn new(fields: Arc<dyn FieldPair>) -> Self {
        LadderState {
            index: 0,
            fields,
            history: Vec::new(),
        }
    }

    fn moved(&self, d: i32) -> LadderState {
        let mut history = self.history.clone();
        history.push((self.index, self.fields.clone()));
        LadderState {
            index: self.index + d,
            fields: Arc::new(Discrete::new(self.fields.clone(), d)),
            history,
        }
    }

    pub fn forward(&self) -> LadderState {
        self.moved(1)
    }

    pub fn inverse(&self) -> LadderState {
        self.moved(-1)
    }
}
