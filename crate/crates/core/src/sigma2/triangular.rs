//! Bäcklund constraints on the σ₂ vacuum `θ = −2L₀`, `R = 0`, i.e. `u = 0`,
//! `v = e^{−2iL₀}` with `L₀ = λ₀²t + λ₀x`, whose group element is lower
//! triangular.

use crate::error::{Error, Result};
use crate::field::{vacuum_phase, FieldPair, GroupProvider, PointJets};
use crate::numkit::{CJet, Mat2, Orders, C64, I};

/// Background `u = 0`, `v = e^{−2iL₀}` with real `λ₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangularVacuum {
    pub lambda0: f64,
}

impl TriangularVacuum {
    fn v(&self, x: f64, t: f64, orders: Orders) -> CJet {
        (vacuum_phase(C64::new(self.lambda0, 0.0), x, t, orders) * (-2.0 * I)).exp()
    }
}

impl FieldPair for TriangularVacuum {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        Ok(PointJets {
            u: CJet::zero(orders),
            v: self.v(x, t, orders),
        })
    }
}

impl GroupProvider for TriangularVacuum {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
        triangular_vacuum_g(lambda, self.lambda0, x, t, orders)
    }
}

/// `g = [[e^τ, 0], [a·e^τ, e^{−τ}]]` with `τ = i(λ²t + λx)` and
/// `a = ½e^{−2iL₀}/(λ − λ₀)`.
pub fn triangular_vacuum_g(lambda: C64, lambda0: f64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
    if lambda == C64::new(lambda0, 0.0) {
        return Err(Error::Pole(lambda0));
    }
    let tau = vacuum_phase(lambda, x, t, orders) * I;
    let a = (vacuum_phase(C64::new(lambda0, 0.0), x, t, orders) * (-2.0 * I)).exp() * (0.5 / (lambda - lambda0));
    let e = tau.exp();
    Ok(Mat2::new(e.clone(), CJet::zero(orders), &a * &e, (-tau).exp()))
}

/// Coordinates `g = e^{αX₊}e^{τH}e^{βX₋}` of the vacuum element with kernel
/// parameter `ν`, and the first integral `e^{iθ}e^{−(τ*−τ)} = c₁β + c₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularGaugeState {
    pub lambda: C64,
    pub lambda0: f64,
    pub point: (f64, f64),
    pub alpha: CJet,
    pub beta: CJet,
    pub tau: CJet,
    pub nu: C64,
    pub c0: C64,
    pub c1: C64,
    pub nu_tilde: C64,
    /// `|∂ₓc₁| + |∂ₓc₀|`, zero when the integral constants are constant.
    pub extra_defect: f64,
}

impl TriangularGaugeState {
    pub fn new(lambda: C64, lambda0: f64, nu: C64, x: f64, t: f64) -> Result<Self> {
        let o = Orders::new(2, 1);
        let g = triangular_vacuum_g(lambda, lambda0, x, t, o)?;
        let tau = vacuum_phase(lambda, x, t, o) * I;
        // β e^{−τ} = g₂₁
        let beta = &g.m[1][0] * &tau.exp();
        let alpha = CJet::zero(o);
        let theta = vacuum_phase(C64::new(lambda0, 0.0), x, t, o) * -2.0;
        let lhs = (&theta * I).exp() * (-(&tau.conj() - &tau)).exp();
        let c1 = lhs.dx()?.checked_div(&beta.dx()?)?;
        let c0 = &lhs.truncate(c1.orders()) - &(&c1 * &beta.truncate(c1.orders()));
        let extra_defect = c1.deriv(1, 0)?.norm() + c0.deriv(1, 0)?.norm();
        let (c0, c1) = (c0.value(), c1.value());
        if c1 == C64::new(0.0, 0.0) {
            return Err(Error::ZeroValue { op: "first-integral coefficient c₁" });
        }
        Ok(TriangularGaugeState {
            lambda,
            lambda0,
            point: (x, t),
            alpha,
            beta,
            tau,
            nu,
            c0,
            c1,
            nu_tilde: nu - c0 / c1,
            extra_defect,
        })
    }

    /// `iv − βₓe^{−2τ}`, zero for the vacuum element.
    pub fn par_defect(&self) -> Result<C64> {
        let (x, t) = self.point;
        let v = (-2.0 * I * (self.lambda0 * self.lambda0 * t + self.lambda0 * x)).exp();
        Ok(I * v - self.beta.deriv(1, 0)? * (-2.0 * self.tau.value()).exp())
    }

    /// `F = e^{2τ}/(β + ν) + α` as a jet.
    pub fn ratio(&self) -> Result<CJet> {
        let den = &self.beta + self.nu;
        Ok((&self.tau * 2.0).exp().checked_div(&den)? + &self.alpha)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma2Branch {
    /// Both λ real with `|ν̃ₖ|² = 1/|c₁ᵏ|²`.
    RealPair,
    /// `λ₁ = λ₂*` with `ν̃₁ν̃₂* = 1/(c₁¹(c₁²)*)`.
    ConjugatePair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport {
    /// `C` from `1/C = −(F₁ − F₂)/(λ₁ − λ₂)`.
    pub c: C64,
    /// `|v/C + v*/C* + 2|`.
    pub cc_defect: f64,
    /// `|X + X*|` with `X = Φₓ/(i(λ₁−λ₂))`.
    pub vic_defect: f64,
    pub extra_defect: f64,
    pub real_pair_defect: Option<f64>,
    pub conjugate_pair_defect: Option<f64>,
    pub branch: Option<Sigma2Branch>,
}

/// Tolerance for declaring a parameter branch satisfied.
pub const BRANCH_TOLERANCE: f64 = 1e-10;

/// Evaluates the σ₂ Bäcklund constraints for two kernel states on the same
/// vacuum, with `v` the background field at the point (`|v| = 1` required).
pub fn sigma2_backlund_constraints(s1: &TriangularGaugeState, s2: &TriangularGaugeState, v: &CJet) -> Result<ConstraintReport> {
    let vv = v.value();
    if ((vv.norm_sqr()) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidSpec(format!("background is not unimodular: |v| = {}", vv.norm())));
    }
    let dl = s1.lambda - s2.lambda;
    let (f1, f2) = (s1.ratio()?, s2.ratio()?);
    let inv_c = -(f1.value() - f2.value()) / dl;
    if inv_c == C64::new(0.0, 0.0) {
        return Err(Error::ZeroValue { op: "1/C" });
    }
    let c = 1.0 / inv_c;
    let cc = (vv * inv_c + vv.conj() * inv_c.conj() + 2.0).norm();
    // Φₓ = βₓ¹/(β¹+ν₁) − τₓ¹ − βₓ²/(β²+ν₂) + τₓ²
    let phi_x = |s: &TriangularGaugeState| -> Result<C64> {
        Ok(s.beta.deriv(1, 0)? / (s.beta.value() + s.nu) - s.tau.deriv(1, 0)?)
    };
    let xv = (phi_x(s1)? - phi_x(s2)?) / (I * dl);
    let vic = (xv + xv.conj()).norm();
    let real = (s1.lambda.im == 0.0 && s2.lambda.im == 0.0).then(|| {
        [s1, s2]
            .iter()
            .map(|s| (s.nu_tilde.norm_sqr() * s.c1.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    });
    let conj = ((s1.lambda - s2.lambda.conj()).norm() < 1e-12 && s1.lambda.im != 0.0)
        .then(|| (s1.nu_tilde * s2.nu_tilde.conj() * s1.c1 * s2.c1.conj() - 1.0).norm());
    let branch = match (real, conj) {
        (Some(d), _) if d <= BRANCH_TOLERANCE => Some(Sigma2Branch::RealPair),
        (_, Some(d)) if d <= BRANCH_TOLERANCE => Some(Sigma2Branch::ConjugatePair),
        _ => None,
    };
    Ok(ConstraintReport {
        c,
        cc_defect: cc,
        vic_defect: vic,
        extra_defect: s1.extra_defect.max(s2.extra_defect),
        real_pair_defect: real,
        conjugate_pair_defect: conj,
        branch,
    })
}

/// `V = C(1 + i√(1/|C|² − 1))`, which has `|V| = 1` for `0 < |C| ≤ 1`.
pub fn unimodular_pair(c: C64) -> Result<C64> {
    let m = c.norm_sqr();
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::InvalidSpec(format!("|C| = {} outside (0, 1]", m.sqrt())));
    }
    Ok(c * (1.0 + I * (1.0 / m - 1.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laxpair::zero_curvature_residual;
    use crate::numkit::c64;

    #[test]
    fn value_at_origin() {
        let g = triangular_vacuum_g(c64(2.0, 0.0), 1.0, 0.0, 0.0, Orders::new(0, 0)).unwrap().value();
        assert!((g.m[1][0] - 0.5).norm() < 1e-15);
        assert!((g.m[0][0] - 1.0).norm() < 1e-15);
        assert!(triangular_vacuum_g(c64(1.0, 0.0), 1.0, 0.0, 0.0, Orders::new(0, 0)).is_err());
    }

    #[test]
    fn solves_lax_system() {
        let bg = TriangularVacuum { lambda0: 0.6 };
        let lambda = c64(1.3, 0.2);
        let o = Orders::new(1, 1);
        let g = bg.group(lambda, 0.4, -0.3, o).unwrap();
        let j = bg.jets(0.4, -0.3, Orders::new(1, 0)).unwrap();
        let gx = g.map(|e| e.dx().unwrap().value());
        let conn = crate::laxpair::ux_matrix(lambda, j.u.value(), j.v.value());
        assert!(gx.sub(&conn.matmul(&g.value())).frobenius() < 1e-13);
        let gt = g.map(|e| e.dt().unwrap().value());
        let ut = crate::laxpair::ut_matrix(lambda, &j.u, &j.v).unwrap();
        assert!(gt.sub(&ut.matmul(&g.value())).frobenius() < 1e-13);
        assert!(zero_curvature_residual(&bg, lambda, 0.4, -0.3).unwrap().frobenius() < 1e-13);
    }

    #[test]
    fn large_lambda_is_nearly_diagonal() {
        let g = triangular_vacuum_g(c64(1e8, 0.0), 1.0, 0.3, 0.1, Orders::new(0, 0)).unwrap().value();
        assert!(g.m[1][0].norm() < 1e-8);
    }

    #[test]
    fn unimodular_identity() {
        let v = unimodular_pair(c64(0.3, -0.4)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!(unimodular_pair(c64(1.0, 1.0)).is_err());
    }
}
