//! The B, C evolution system of a single dressing step, the reconstruction of
//! the seed fields from `B`, `C`, and constancy of `A + D`, `AD − BC`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Background, SampleGrid};
use crate::numkit::{CJet, Orders, C64, I};
use crate::soliton_engine::{single_dressing, DressingFactor, DressingStep};

/// `k = λ₁ + λ₂`, `ε = ((λ₁ − λ₂)/2)²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AppendixParams {
    pub k: C64,
    pub eps: C64,
}

impl AppendixParams {
    pub fn new(lambda1: C64, lambda2: C64) -> Self {
        AppendixParams {
            k: lambda1 + lambda2,
            eps: ((lambda1 - lambda2) / 2.0).powu(2),
        }
    }

    pub fn of(factor: &DressingFactor) -> Self {
        Self::new(factor.lambda1, factor.lambda2)
    }
}

struct Parts {
    b: C64,
    c: C64,
    bx: C64,
    cx: C64,
    bxx: C64,
    cxx: C64,
    bt: C64,
    ct: C64,
}

fn parts(b: &CJet, c: &CJet) -> Result<Parts> {
    Ok(Parts {
        b: b.value(),
        c: c.value(),
        bx: b.deriv(1, 0)?,
        cx: c.deriv(1, 0)?,
        bxx: b.deriv(2, 0)?,
        cxx: c.deriv(2, 0)?,
        bt: b.deriv(0, 1)?,
        ct: c.deriv(0, 1)?,
    })
}

/// Residuals `(r_B, r_C)` of the evolution system obeyed by `B`, `C` when the
/// seed solves the coupled system:
///
/// `iB_t − ½B_xx + B²C − [CB_x² + 2BB_xC_x + k²B²C − 2ikB²C_x]/(4(ε−BC)) = 0`,
/// `(ε−BC)C_t − [−iεBC² + iεC_xx/2 + ik²BC²/4 − kC²B_x/2 + iB²C³
///   − iBCC_xx/2 + iBC_x²/4 + iCB_xC_x/2] = 0`.
pub fn bc_system_residual(p: AppendixParams, b: &CJet, c: &CJet) -> Result<(C64, C64)> {
    let Parts {
        b,
        c,
        bx,
        cx,
        bxx,
        cxx,
        bt,
        ct,
    } = parts(b, c)?;
    let (k, eps) = (p.k, p.eps);
    let w = eps - b * c;
    let rb = I * bt - bxx / 2.0 + b * b * c
        - (c * bx * bx + 2.0 * b * bx * cx + k * k * b * b * c - 2.0 * I * k * b * b * cx) / (4.0 * w);
    let rhs_c = -I * eps * b * c * c + I * eps * cxx / 2.0 + I * k * k * b * c * c / 4.0 - k * c * c * bx / 2.0
        + I * b * b * c * c * c
        - I * b * c * cxx / 2.0
        + I * b * cx * cx / 4.0
        + I * c * bx * cx / 2.0;
    Ok((rb, w * ct - rhs_c))
}

/// The system in the literal form
/// `iB_t − ½(B_xx − 4ikB_x + 4k²B) − B(BC) + B_x²C/(4(ε−CB)) = 0`,
/// `−iC_t − ½(C_xx + 4ikC_x + 4k²C) − C(BC) + C_x²B/(4(ε−CB)) = 0`.
pub fn bc_system_literal_residual(p: AppendixParams, b: &CJet, c: &CJet) -> Result<(C64, C64)> {
    let Parts {
        b,
        c,
        bx,
        cx,
        bxx,
        cxx,
        bt,
        ct,
    } = parts(b, c)?;
    let (k, eps) = (p.k, p.eps);
    let w = eps - c * b;
    let rb = I * bt - (bxx - 4.0 * I * k * bx + 4.0 * k * k * b) / 2.0 - b * (b * c) + bx * bx * c / (4.0 * w);
    let rc = -I * ct - (cxx + 4.0 * I * k * cx + 4.0 * k * k * c) / 2.0 - c * (b * c) + cx * cx * b / (4.0 * w);
    Ok((rb, rc))
}

/// Seed fields rebuilt from `B`, `C` with `s` one of the roots of `ε − BC`:
/// `u = B + (iB_x + kB)/(2s)`, `v = −C − (iC_x − kC)/(2s)`.
pub fn reconstruct(p: AppendixParams, b: &CJet, c: &CJet, s: C64) -> Result<(C64, C64)> {
    let (bv, cv) = (b.value(), c.value());
    let (bx, cx) = (b.deriv(1, 0)?, c.deriv(1, 0)?);
    Ok((bv + (I * bx + p.k * bv) / (2.0 * s), -cv - (I * cx - p.k * cv) / (2.0 * s)))
}

/// The literal reconstruction `u = B + (iB_x − kC)/(2s)`, `v = −C − (iC_x + kC)/(2s)`.
pub fn reconstruct_literal(p: AppendixParams, b: &CJet, c: &CJet, s: C64) -> Result<(C64, C64)> {
    let (bv, cv) = (b.value(), c.value());
    let (bx, cx) = (b.deriv(1, 0)?, c.deriv(1, 0)?);
    Ok((bv + (I * bx - p.k * cv) / (2.0 * s), -cv - (I * cx + p.k * cv) / (2.0 * s)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixReport {
    pub params: AppendixParams,
    pub system_residual: f64,
    pub literal_system_residual: f64,
    /// Best-branch defect of the rebuilt seed, maximized over the grid.
    pub reconstruction_defect: f64,
    pub literal_reconstruction_defect: f64,
    /// Per grid point: `+1` if the principal root of `ε − BC` was chosen, `−1` otherwise.
    pub branch_map: Vec<i8>,
    /// Standard deviation over the grid relative to `max(1, |mean|)`.
    pub trace_spread: f64,
    pub minor_spread: f64,
    pub trace_defect: f64,
    pub minor_defect: f64,
    pub det_p_roots: f64,
}

/// Standard deviation of `v` relative to `max(1, |mean|)`.
pub fn relative_spread(v: &[C64]) -> f64 {
    let n = v.len() as f64;
    let mean: C64 = v.iter().sum::<C64>() / n;
    let var = v.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n;
    var.sqrt() / mean.norm().max(1.0)
}

/// Evaluates every appendix relation for one dressing step over a grid.
pub fn appendix_residuals(background: &dyn Background, step: &DressingStep, grid: &SampleGrid) -> Result<AppendixReport> {
    grid.validate()?;
    let p = AppendixParams::new(step.lambda1, step.lambda2);
    struct Row {
        sys: f64,
        lit: f64,
        rec: f64,
        lit_rec: f64,
        branch: i8,
        trace: C64,
        minor: C64,
        roots: f64,
    }
    let rows: Vec<Row> = grid
        .points()
        .into_par_iter()
        .map(|(x, t)| {
            let o = Orders::new(2, 1);
            let f = single_dressing(background, step, x, t, o)?;
            let seed = background.jets(x, t, Orders::new(0, 0))?.values();
            let (rb, rc) = bc_system_residual(p, &f.b, &f.c)?;
            let (lb, lc) = bc_system_literal_residual(p, &f.b, &f.c)?;
            let root = (p.eps - f.b.value() * f.c.value()).sqrt();
            let mut best = (f64::INFINITY, 1i8);
            let mut lit_best = f64::INFINITY;
            for (sign, s) in [(1i8, root), (-1i8, -root)] {
                if s == C64::new(0.0, 0.0) {
                    continue;
                }
                let (u, v) = reconstruct(p, &f.b, &f.c, s)?;
                let d = (u - seed.0).norm().max((v - seed.1).norm());
                if d < best.0 {
                    best = (d, sign);
                }
                let (u, v) = reconstruct_literal(p, &f.b, &f.c, s)?;
                lit_best = lit_best.min((u - seed.0).norm().max((v - seed.1).norm()));
            }
            if !best.0.is_finite() {
                return Err(Error::BranchFailure { x, t });
            }
            let roots = f
                .p_value(step.lambda1)
                .det()
                .norm()
                .max(f.p_value(step.lambda2).det().norm());
            Ok(Row {
                sys: rb.norm().max(rc.norm()),
                lit: lb.norm().max(lc.norm()),
                rec: best.0,
                lit_rec: lit_best,
                branch: best.1,
                trace: f.trace(),
                minor: f.minor(),
                roots,
            })
        })
        .collect::<Result<_>>()?;
    let max = |g: &dyn Fn(&Row) -> f64| rows.iter().map(g).fold(0.0, f64::max);
    let traces: Vec<C64> = rows.iter().map(|r| r.trace).collect();
    let minors: Vec<C64> = rows.iter().map(|r| r.minor).collect();
    Ok(AppendixReport {
        params: p,
        system_residual: max(&|r| r.sys),
        literal_system_residual: max(&|r| r.lit),
        reconstruction_defect: max(&|r| r.rec),
        literal_reconstruction_defect: max(&|r| r.lit_rec),
        branch_map: rows.iter().map(|r| r.branch).collect(),
        trace_spread: relative_spread(&traces),
        minor_spread: relative_spread(&minors),
        trace_defect: max(&|r| (r.trace + p.k).norm()),
        minor_defect: max(&|r| (r.minor - step.lambda1 * step.lambda2).norm()),
        det_p_roots: max(&|r| r.roots),
    })
}
