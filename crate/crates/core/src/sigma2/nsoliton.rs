//! σ₂ n-solitons from Hankel determinants of an odd exponential sum.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fields::{s2_residual, schl1_residual, Sigma2Fields};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::numkit::{CJet, Orders, C64, I};
use crate::transforms::HankelLadder;

/// Exponent of the seed terms: `e^{−iLₖ}` or `e^{−2iLₖ}` with `Lₖ = λₖ²t + λₖx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    HalfPhase,
    FullPhase,
}

impl PhaseConvention {
    pub fn multiplier(self) -> f64 {
        match self {
            PhaseConvention::HalfPhase => 1.0,
            PhaseConvention::FullPhase => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseConvention::HalfPhase => "half_phase",
            PhaseConvention::FullPhase => "full_phase",
        }
    }
}

/// Relative tolerance of the modulus condition on `cₖ`.
pub const MODULUS_TOLERANCE: f64 = 1e-12;

/// `Π′ₖ = Π_{j≠k}(λₖ − λⱼ)²`; the empty product is 1.
pub fn pi_prime(lambdas: &[C64], k: usize) -> C64 {
    lambdas
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, l)| (lambdas[k] - l).powu(2))
        .product()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sigma2Spec {
    pub lambdas: Vec<C64>,
    pub cs: Vec<C64>,
    pub convention: PhaseConvention,
}

impl Sigma2Spec {
    pub fn new(lambdas: Vec<C64>, cs: Vec<C64>, convention: PhaseConvention) -> Result<Self> {
        let s = Sigma2Spec {
            lambdas,
            cs,
            convention,
        };
        s.validate()?;
        Ok(s)
    }

    /// Spec with the modulus conditions built in: for real `λₖ`,
    /// `cₖ = phaseₖ·√Π′ₖ` (only the phase of the given value is used); for a
    /// pair `λₖ`, `λⱼ = λₖ*` with `Im λₖ > 0`, `cₖ` is taken as given and
    /// `cⱼ = (Π′ₖ/cₖ)*`.
    pub fn normalized(lambdas: Vec<C64>, free: &[C64], convention: PhaseConvention) -> Result<Self> {
        if free.len() != lambdas.len() {
            return Err(Error::InvalidSpec("one free value per λ".into()));
        }
        let partner = partners(&lambdas)?;
        let mut cs = vec![C64::new(0.0, 0.0); lambdas.len()];
        for k in 0..lambdas.len() {
            if free[k] == C64::new(0.0, 0.0) && lambdas[k].im >= 0.0 {
                return Err(Error::InvalidSpec(format!("free value {k} is zero")));
            }
            let p = pi_prime(&lambdas, k);
            if lambdas[k].im == 0.0 {
                cs[k] = free[k] / free[k].norm() * p.re.max(0.0).sqrt();
            } else if lambdas[k].im > 0.0 {
                cs[k] = free[k];
                cs[partner[k]] = (p / free[k]).conj();
            }
        }
        Self::new(lambdas, cs, convention)
    }

    /// `n` for `2n + 1` terms.
    pub fn n(&self) -> usize {
        self.lambdas.len() / 2
    }

    pub fn with_convention(&self, convention: PhaseConvention) -> Sigma2Spec {
        Sigma2Spec {
            convention,
            ..self.clone()
        }
    }

    /// Checks odd length, the real/conjugate-pair structure, distinctness and
    /// the modulus conditions `|cₖ|² = Π′ₖ` (real `λₖ`) and `cₖcⱼ* = Π′ₖ` (pairs).
    pub fn validate(&self) -> Result<()> {
        let m = self.lambdas.len();
        if m % 2 != 1 || self.cs.len() != m {
            return Err(Error::InvalidSpec("need 2n+1 values of λ and c".into()));
        }
        for i in 0..m {
            for j in 0..i {
                if (self.lambdas[i] - self.lambdas[j]).norm() < 1e-12 {
                    return Err(Error::InvalidSpec(format!("λ {j} and {i} coincide")));
                }
            }
        }
        let partner = partners(&self.lambdas)?;
        for k in 0..m {
            let p = pi_prime(&self.lambdas, k);
            let lhs = self.cs[k] * self.cs[partner[k]].conj();
            if !((lhs - p).norm() <= MODULUS_TOLERANCE * p.norm().max(1.0)) {
                return Err(Error::InvalidSpec(format!(
                    "c[{k}] violates the modulus condition: {lhs} vs Π′ = {p}"
                )));
            }
            if self.lambdas[k].im == 0.0 && !(p.re > 0.0) {
                return Err(Error::InvalidSpec(format!("Π′ for real λ {k} is not positive")));
            }
        }
        Ok(())
    }
}

fn partners(lambdas: &[C64]) -> Result<Vec<usize>> {
    lambdas
        .iter()
        .map(|l| {
            if l.im == 0.0 {
                return lambdas.iter().position(|m| m == l).ok_or_else(|| unreachable_partner(*l));
            }
            lambdas
                .iter()
                .position(|m| (m - l.conj()).norm() <= 1e-12 * (1.0 + l.norm()))
                .ok_or_else(|| unreachable_partner(*l))
        })
        .collect()
}

fn unreachable_partner(l: C64) -> Error {
    Error::InvalidSpec(format!("λ = {l} has no conjugate partner"))
}

/// `τ = Σₖ cₖ/(m^{2n}Π′ₖ)·e^{−imLₖ}` with `m` the convention multiplier.
#[derive(Clone, Debug)]
pub struct Sigma2Tau {
    pub spec: Sigma2Spec,
}

impl ScalarField for Sigma2Tau {
    fn jet(&self, x: f64, t: f64, orders: Orders) -> Result<CJet> {
        let s = &self.spec;
        let mult = s.convention.multiplier();
        let norm = mult.powi(2 * s.n() as i32);
        let (xj, tj) = (CJet::var_x(x, orders), CJet::var_t(t, orders));
        let mut f = CJet::zero(orders);
        for (k, (l, c)) in s.lambdas.iter().zip(&s.cs).enumerate() {
            let phase = (&xj * *l + &tj * (l * l)) * (-I * mult);
            f += &(phase.exp() * (c / (norm * pi_prime(&s.lambdas, k))));
        }
        Ok(f)
    }
}

/// `θ = i ln(D_n/D_{n+1})`, `R = ½(ln D_n D_n*)ₓₓ` at a point.
pub fn sigma2_nsoliton(spec: &Sigma2Spec, x: f64, t: f64, orders: Orders) -> Result<Sigma2Fields> {
    let n = spec.n();
    let ladder = HankelLadder::new(Arc::new(Sigma2Tau { spec: spec.clone() }));
    for s in [n, n + 1] {
        if ladder.vanishes(s, x, t)? {
            return Err(Error::VanishingDeterminant { index: s, x, t });
        }
    }
    let d = ladder.determinants(n + 1, x, t, orders.plus(2, 0))?;
    let (dn, dn1) = (&d[n], &d[n + 1]);
    let theta = dn.checked_div(dn1)?.ln()? * I;
    let q = dn * &dn.conj();
    let qx = q.dx()?;
    let r = qx.checked_div(&q.truncate(qx.orders()))?.dx()? * 0.5;
    Ok(Sigma2Fields {
        theta: theta.truncate(orders),
        r: r.truncate(orders),
    })
}

/// Largest SCHL1 and s2 residual of a spec at a point.
pub fn sigma2_residual(spec: &Sigma2Spec, x: f64, t: f64) -> Result<f64> {
    let f = sigma2_nsoliton(spec, x, t, Orders::new(4, 2))?;
    let (a, b) = schl1_residual(&f)?;
    let c = s2_residual(&f.theta)?;
    Ok(a.norm().max(b.norm()).max(c.norm()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConventionReport {
    pub selected: PhaseConvention,
    /// `(convention, spec index, max residual)` for every candidate.
    pub residuals: Vec<(PhaseConvention, usize, f64)>,
    pub tolerance: f64,
}

/// Picks the seed exponent under which every probe spec yields SCHL1 and s2
/// residuals within `tolerance` at all probe points.
pub fn resolve_convention(specs: &[Sigma2Spec], points: &[(f64, f64)], tolerance: f64) -> Result<ConventionReport> {
    let mut residuals = Vec::new();
    let mut passing = Vec::new();
    for conv in [PhaseConvention::HalfPhase, PhaseConvention::FullPhase] {
        let mut ok = true;
        for (i, s) in specs.iter().enumerate() {
            let s = s.with_convention(conv);
            let mut worst = 0.0f64;
            for &(x, t) in points {
                worst = worst.max(sigma2_residual(&s, x, t).unwrap_or(f64::INFINITY));
            }
            ok &= worst <= tolerance;
            residuals.push((conv, i, worst));
        }
        if ok {
            passing.push(conv);
        }
    }
    match passing.as_slice() {
        [c] => Ok(ConventionReport {
            selected: *c,
            residuals,
            tolerance,
        }),
        _ => Err(Error::NoConvention(format!(
            "{} conventions pass; residuals {:?}",
            passing.len(),
            residuals
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::c64;

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    #[test]
    fn modulus_condition_example() {
        let l = [r(1.0), r(2.0), r(3.0)];
        assert!((pi_prime(&l, 0) - 4.0).norm() < 1e-15);
        let ok = Sigma2Spec::new(l.to_vec(), vec![r(2.0), r(1.0), c64(0.0, 2.0)], PhaseConvention::FullPhase);
        assert!(ok.is_ok());
        let bad = Sigma2Spec::new(l.to_vec(), vec![r(2.0), r(1.1), r(2.0)], PhaseConvention::FullPhase);
        assert!(bad.is_err());
        assert!(Sigma2Spec::new(vec![r(1.0)], vec![c64(0.6, 0.8)], PhaseConvention::FullPhase).is_ok());
    }

    #[test]
    fn single_term_is_linear_phase() {
        let s = Sigma2Spec::new(vec![r(0.7)], vec![r(1.0)], PhaseConvention::FullPhase).unwrap();
        let f = sigma2_nsoliton(&s, 0.3, 0.2, Orders::new(4, 2)).unwrap();
        let l = 0.7 * 0.3 + 0.49 * 0.2;
        assert!((f.theta.value() + 2.0 * l).norm() < 1e-14);
        assert!(sigma2_residual(&s, 0.3, 0.2).unwrap() < 1e-12);
        let h = s.with_convention(PhaseConvention::HalfPhase);
        assert!(sigma2_residual(&h, 0.3, 0.2).unwrap() > 1e-3);
    }
}
