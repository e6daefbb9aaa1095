//! The Lax connection, propagation of the group element and the checks built
//! on it (zero curvature, unitarity, Riccati relations for kernel ratios).
//!
//! Conventions: `g_x g⁻¹ = i[[λ, u], [v, −λ]]` and
//! `g_t g⁻¹ = i[[λ² − uv/2, λu − iu_x/2], [λv + iv_x/2, −λ² + uv/2]]`.
//! The kernel ratio is `F = (gc)₁/(gc)₂` with `c = (1, α)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldPair, GroupProvider, PointJets};
use crate::numkit::{CJet, Mat2, Orders, C64, I};

const OVERFLOW_GUARD: f64 = 1e150;

pub fn ux_matrix(lambda: C64, u: C64, v: C64) -> Mat2<C64> {
    Mat2::new(I * lambda, I * u, I * v, -I * lambda)
}

pub fn ut_matrix(lambda: C64, u: &CJet, v: &CJet) -> Result<Mat2<C64>> {
    let (uv, uu, vv) = (u.value() * v.value(), u.value(), v.value());
    let ux = u.deriv(1, 0)?;
    let vx = v.deriv(1, 0)?;
    Ok(Mat2::new(
        I * (lambda * lambda - uv / 2.0),
        I * (lambda * uu - I * ux / 2.0),
        I * (lambda * vv + I * vx / 2.0),
        I * (-lambda * lambda + uv / 2.0),
    ))
}

/// The x-connection as jets.
pub fn ux_jet(lambda: C64, j: &PointJets) -> Mat2<CJet> {
    let o = j.orders();
    let lam = CJet::constant(I * lambda, o);
    Mat2::new(lam.clone(), j.u.truncate(o) * I, j.v.truncate(o) * I, -lam)
}

/// The t-connection as jets; one x-order is consumed by `u_x`, `v_x`.
pub fn ut_jet(lambda: C64, j: &PointJets) -> Result<Mat2<CJet>> {
    let ux = j.u.dx()?;
    let vx = j.v.dx()?;
    let o = ux.orders().min(vx.orders());
    let (u, v) = (j.u.truncate(o), j.v.truncate(o));
    let half_uv = (&u * &v) * 0.5;
    let l2 = lambda * lambda;
    let a = (-half_uv.clone() + l2) * I;
    let b = (&u * lambda - ux.truncate(o) * (I * 0.5)) * I;
    let c = (&v * lambda + vx.truncate(o) * (I * 0.5)) * I;
    let d = (half_uv - l2) * I;
    Ok(Mat2::new(a, b, c, d))
}

/// `∂ₜUₓ − ∂ₓUₜ + [Uₓ, Uₜ]` at a point, with exact jet derivatives.
pub fn zero_curvature_residual(
    fields: &dyn FieldPair,
    lambda: C64,
    x: f64,
    t: f64,
) -> Result<Mat2<C64>> {
    let j = fields.jets(x, t, Orders::new(2, 1))?;
    let ux = ux_jet(lambda, &j);
    let ut = ut_jet(lambda, &j)?;
    let dt_ux = ux.map(|e| e.dt().map(|d| d.value()).unwrap_or_default());
    let dx_ut = ut.map(|e| e.dx().map(|d| d.value()).unwrap_or_default());
    let comm = ux.value().commutator(&ut.value());
    Ok(dt_ux.sub(&dx_ut).add(&comm))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub g: Mat2<C64>,
    pub lambda: C64,
    pub base_point: (f64, f64),
    pub value_point: (f64, f64),
}

/// `‖g gᴴ − I‖_F`.
pub fn unitarity_defect(g: &GroupElement) -> f64 {
    g.g.matmul(&g.g.adjoint()).sub(&Mat2::identity()).frobenius()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathOrder {
    XThenT,
    TThenX,
}

#[derive(Clone, Copy, Debug)]
pub struct PropagationOptions {
    /// Initial RK4 step; halved until the path defect meets `tolerance`.
    pub step: f64,
    pub tolerance: f64,
    pub max_halvings: u32,
    pub path: PathOrder,
    pub base_point: (f64, f64),
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions {
            step: 1e-2,
            tolerance: 1e-6,
            max_halvings: 8,
            path: PathOrder::XThenT,
            base_point: (0.0, 0.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Propagation {
    pub element: GroupElement,
    /// Relative difference between the x-then-t and t-then-x results.
    pub path_defect: f64,
    pub step: f64,
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    T,
}

fn connection_at(fields: &dyn FieldPair, lambda: C64, axis: Axis, x: f64, t: f64) -> Result<Mat2<C64>> {
    match axis {
        Axis::X => {
            let j = fields.jets(x, t, Orders::new(0, 0))?;
            Ok(ux_matrix(lambda, j.u.value(), j.v.value()))
        }
        Axis::T => {
            let j = fields.jets(x, t, Orders::new(1, 0))?;
            ut_matrix(lambda, &j.u, &j.v)
        }
    }
}

/// Classical RK4 for `g' = M(s) g` along one axis.
fn rk4_leg(
    fields: &dyn FieldPair,
    lambda: C64,
    mut g: Mat2<C64>,
    axis: Axis,
    fixed: f64,
    from: f64,
    to: f64,
    step: f64,
) -> Result<Mat2<C64>> {
    let span = to - from;
    if span == 0.0 {
        return Ok(g);
    }
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let at = |s: f64| match axis {
        Axis::X => (s, fixed),
        Axis::T => (fixed, s),
    };
    let conn = |s: f64| {
        let (x, t) = at(s);
        connection_at(fields, lambda, axis, x, t)
    };
    let mut s = from;
    let mut m0 = conn(s)?;
    for _ in 0..n {
        let mh = conn(s + h / 2.0)?;
        let m1 = conn(s + h)?;
        let k1 = m0.matmul(&g);
        let k2 = mh.matmul(&g.add(&k1.scale((h / 2.0).into())));
        let k3 = mh.matmul(&g.add(&k2.scale((h / 2.0).into())));
        let k4 = m1.matmul(&g.add(&k3.scale(h.into())));
        let incr = k1.add(&k2.scale(2.0.into())).add(&k3.scale(2.0.into())).add(&k4);
        g = g.add(&incr.scale((h / 6.0).into()));
        s += h;
        m0 = m1;
        if !g.is_finite() || g.frobenius() > OVERFLOW_GUARD {
            let (x, t) = at(s);
            return Err(Error::Overflow { x, t });
        }
    }
    Ok(g)
}

fn propagate_path(
    fields: &dyn FieldPair,
    lambda: C64,
    g0: Mat2<C64>,
    from: (f64, f64),
    to: (f64, f64),
    step: f64,
    path: PathOrder,
) -> Result<Mat2<C64>> {
    match path {
        PathOrder::XThenT => {
            let g = rk4_leg(fields, lambda, g0, Axis::X, from.1, from.0, to.0, step)?;
            rk4_leg(fields, lambda, g, Axis::T, to.0, from.1, to.1, step)
        }
        PathOrder::TThenX => {
            let g = rk4_leg(fields, lambda, g0, Axis::T, from.0, from.1, to.1, step)?;
            rk4_leg(fields, lambda, g, Axis::X, to.1, from.0, to.0, step)
        }
    }
}

/// Integrates the Lax system from `from` (where `g = g0`) to `to` along
/// axis-aligned legs, halving the step until both leg orders agree.
pub fn propagate_g(
    fields: &dyn FieldPair,
    lambda: C64,
    g0: Mat2<C64>,
    from: (f64, f64),
    to: (f64, f64),
    opts: &PropagationOptions,
) -> Result<Propagation> {
    let other = match opts.path {
        PathOrder::XThenT => PathOrder::TThenX,
        PathOrder::TThenX => PathOrder::XThenT,
    };
    let mut step = opts.step;
    let mut defect = f64::INFINITY;
    for _ in 0..=opts.max_halvings {
        let a = propagate_path(fields, lambda, g0.clone(), from, to, step, opts.path)?;
        let b = propagate_path(fields, lambda, g0.clone(), from, to, step, other)?;
        defect = a.sub(&b).frobenius() / a.frobenius().max(1.0);
        if defect <= opts.tolerance {
            return Ok(Propagation {
                element: GroupElement {
                    g: a,
                    lambda,
                    base_point: from,
                    value_point: to,
                },
                path_defect: defect,
                step,
            });
        }
        step /= 2.0;
    }
    Err(Error::NotConverged {
        tolerance: opts.tolerance,
        defect,
    })
}

/// Expands `g` into a bivariate jet from its value at a point, using
/// `g_x = Uₓ g` along x and then `g_t = Uₜ g`.
pub fn lift_group_jet(
    fields: &dyn FieldPair,
    lambda: C64,
    g_value: &Mat2<C64>,
    x: f64,
    t: f64,
    orders: Orders,
) -> Result<Mat2<CJet>> {
    let j = fields.jets(x, t, orders.plus(1, 0))?;
    let ux = ux_jet(lambda, &j);
    let ut = ut_jet(lambda, &j)?;
    let (ox, ot) = (orders.x, orders.t);
    let coef = |m: &Mat2<CJet>, a: usize, b: usize| m.map(|e| e.coeff(a, b));
    let mut g = vec![vec![Mat2::<C64>::zero(); ot + 1]; ox + 1];
    g[0][0] = g_value.clone();
    for a in 0..ox {
        let mut acc = Mat2::zero();
        for i in 0..=a {
            acc = acc.add(&coef(&ux, i, 0).matmul(&g[a - i][0]));
        }
        g[a + 1][0] = acc.scale((1.0 / (a + 1) as f64).into());
    }
    for b in 0..ot {
        for a in 0..=ox {
            let mut acc = Mat2::zero();
            for i in 0..=a {
                for jj in 0..=b {
                    acc = acc.add(&coef(&ut, i, jj).matmul(&g[a - i][b - jj]));
                }
            }
            g[a][b + 1] = acc.scale((1.0 / (b + 1) as f64).into());
        }
    }
    let entry = |r: usize, c: usize| {
        let mut coeffs = Vec::with_capacity((ox + 1) * (ot + 1));
        for row in &g {
            for m in row {
                coeffs.push(m.m[r][c]);
            }
        }
        CJet::from_coeffs(orders, coeffs)
    };
    Ok(Mat2::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)))
}

/// Group element obtained by numerical propagation from a base point where
/// `g = I`, then lifted to a jet.
pub struct PropagatedGroup {
    pub fields: Arc<dyn FieldPair>,
    pub options: PropagationOptions,
}

impl PropagatedGroup {
    pub fn new(fields: Arc<dyn FieldPair>) -> Self {
        PropagatedGroup {
            fields,
            options: PropagationOptions::default(),
        }
    }

    pub fn propagate(&self, lambda: C64, x: f64, t: f64) -> Result<Propagation> {
        propagate_g(
            self.fields.as_ref(),
            lambda,
            Mat2::identity(),
            self.options.base_point,
            (x, t),
            &self.options,
        )
    }
}

impl GroupProvider for PropagatedGroup {
    fn group(&self, lambda: C64, x: f64, t: f64, orders: Orders) -> Result<Mat2<CJet>> {
        let p = self.propagate(lambda, x, t)?;
        lift_group_jet(self.fields.as_ref(), lambda, &p.element.g, x, t, orders)
    }
}

impl FieldPair for PropagatedGroup {
    fn jets(&self, x: f64, t: f64, orders: Orders) -> Result<PointJets> {
        self.fields.jets(x, t, orders)
    }
}

/// Kernel ratio `F(λ, α)` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioF {
    pub value: C64,
    pub lambda: C64,
    pub alpha: C64,
}

/// `(g₁₁ + g₁₂α)/(g₂₁ + g₂₂α)` as a jet.
pub fn ratio_jet(g: &Mat2<CJet>, alpha: C64) -> Result<CJet> {
    let num = &g.m[0][0] + &(&g.m[0][1] * alpha);
    let den = &g.m[1][0] + &(&g.m[1][1] * alpha);
    num.checked_div(&den)
}

pub fn ratio_value(g: &Mat2<C64>, lambda: C64, alpha: C64) -> Result<RatioF> {
    let den = g.m[1][0] + g.m[1][1] * alpha;
    if den == C64::new(0.0, 0.0) {
        return Err(Error::ZeroValue { op: "kernel ratio" });
    }
    Ok(RatioF {
        value: (g.m[0][0] + g.m[0][1] * alpha) / den,
        lambda,
        alpha,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    X,
    T,
}

/// Which Riccati equation is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RiccatiForm {
    /// `F_x = i(u + 2λF − vF²)` for `F = (gc)₁/(gc)₂`.
    Ratio,
    /// `G_x = i(v − 2λG − uG²)` for the reciprocal `G = 1/F`.
    Reciprocal,
}

/// Residual of the Riccati relation satisfied by a kernel ratio jet.
pub fn riccati_residual(
    j: &PointJets,
    ratio: &CJet,
    lambda: C64,
    direction: Direction,
    form: RiccatiForm,
) -> Result<C64> {
    let r = match form {
        RiccatiForm::Ratio => ratio.clone(),
        RiccatiForm::Reciprocal => ratio.recip()?,
    };
    let f = r.value();
    let (u, v) = j.values();
    let (p, q, s, deriv) = match direction {
        Direction::X => (u, lambda, v, r.deriv(1, 0)?),
        Direction::T => {
            let ux = j.u.deriv(1, 0)?;
            let vx = j.v.deriv(1, 0)?;
            let b = lambda * u - I * ux / 2.0;
            let a = lambda * lambda - u * v / 2.0;
            let c = lambda * v + I * vx / 2.0;
            (b, a, c, r.deriv(0, 1)?)
        }
    };
    // Ratio:      F' = i(p + 2qF − sF²)
    // Reciprocal: G' = i(s − 2qG − pG²)
    let rhs = match form {
        RiccatiForm::Ratio => I * (p + 2.0 * q * f - s * f * f),
        RiccatiForm::Reciprocal => I * (s - 2.0 * q * f - p * f * f),
    };
    Ok(deriv - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ClosureField, Vacuum};
    use crate::numkit::c64;

    #[test]
    fn ux_examples() {
        let m = ux_matrix(c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0));
        assert_eq!(m, Mat2::new(I, c64(0.0, 0.0), c64(0.0, 0.0), -I));
        let m = ux_matrix(c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0));
        assert_eq!(m, Mat2::new(c64(0.0, 0.0), I, I, c64(0.0, 0.0)));
        let m = ux_matrix(I, c64(2.0, 0.0), c64(-2.0, 0.0));
        assert_eq!(m, Mat2::new(c64(-1.0, 0.0), c64(0.0, 2.0), c64(0.0, -2.0), c64(1.0, 0.0)));
    }

    #[test]
    fn ut_examples() {
        let o = Orders::new(1, 0);
        let z = CJet::zero(o);
        let m = ut_matrix(c64(1.0, 0.0), &z, &z).unwrap();
        assert_eq!(m, Mat2::new(I, c64(0.0, 0.0), c64(0.0, 0.0), -I));
        let two = CJet::constant(c64(2.0, 0.0), o);
        let m = ut_matrix(c64(0.0, 0.0), &two, &two).unwrap();
        assert!(m.sub(&Mat2::new(-2.0 * I, c64(0.0, 0.0), c64(0.0, 0.0), 2.0 * I)).frobenius() < 1e-15);
        assert!(ut_matrix(c64(0.0, 0.0), &CJet::zero(Orders::new(0, 0)), &z).is_err());
    }

    #[test]
    fn vacuum_curvature_vanishes_and_non_solution_does_not() {
        let r = zero_curvature_residual(&Vacuum, c64(0.3, 0.2), 0.1, 0.4).unwrap();
        assert_eq!(r.frobenius(), 0.0);
        let f = ClosureField(|x: &CJet, _t: &CJet| Ok((x * x, CJet::zero(x.orders()))));
        let r = zero_curvature_residual(&f, c64(1.0, 0.0), 0.3, 0.1).unwrap();
        assert!(r.frobenius() > 0.1);
    }

    #[test]
    fn vacuum_propagation_matches_closed_form() {
        let opts = PropagationOptions::default();
        let one = c64(1.0, 0.0);
        for to in [(1.0, 0.0), (0.0, 1.0)] {
            let p = propagate_g(&Vacuum, one, Mat2::identity(), (0.0, 0.0), to, &opts).unwrap();
            let g = p.element.g.clone();
            assert!((g.m[0][0] - I.exp()).norm() < 1e-9);
            assert!((g.m[1][1] - (-I).exp()).norm() < 1e-9);
            assert!(g.m[0][1].norm() < 1e-15);
            assert!(unitarity_defect(&p.element) < 1e-9);
        }
    }

    #[test]
    fn unitarity_of_diagonal_phases() {
        let phi = 0.7;
        let e = GroupElement {
            g: Mat2::new(c64(0.0, phi).exp(), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -phi).exp()),
            lambda: c64(0.0, 0.0),
            base_point: (0.0, 0.0),
            value_point: (0.0, 0.0),
        };
        assert!(unitarity_defect(&e) < 1e-15);
        let id = GroupElement { g: Mat2::identity(), ..e };
        assert_eq!(unitarity_defect(&id), 0.0);
    }

    #[test]
    fn vacuum_riccati_both_forms() {
        let lambda = c64(0.4, 0.3);
        let alpha = c64(1.5, -0.5);
        let o = Orders::new(2, 1);
        let g = Vacuum.group(lambda, 0.2, -0.1, o).unwrap();
        let f = ratio_jet(&g, alpha).unwrap();
        // F = e^{2i(λx+λ²t)}/α
        let expect = (c64(0.0, 2.0) * (lambda * 0.2 + lambda * lambda * -0.1)).exp() / alpha;
        assert!((f.value() - expect).norm() < 1e-14);
        let j = Vacuum.jets(0.2, -0.1, o).unwrap();
        for dir in [Direction::X, Direction::T] {
            for form in [RiccatiForm::Ratio, RiccatiForm::Reciprocal] {
                let r = riccati_residual(&j, &f, lambda, dir, form).unwrap();
                assert!(r.norm() < 1e-13, "{dir:?} {form:?} {r}");
            }
        }
    }

    #[test]
    fn lifted_vacuum_jet_matches_closed_form() {
        let lambda = c64(0.8, 0.1);
        let o = Orders::new(4, 2);
        let exact = Vacuum.group(lambda, 0.5, 0.3, o).unwrap();
        let lifted = lift_group_jet(&Vacuum, lambda, &exact.value(), 0.5, 0.3, o).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                for (a, b) in lifted.m[r][c].coeffs().iter().zip(exact.m[r][c].coeffs()) {
                    assert!((a - b).norm() < 1e-13);
                }
            }
        }
    }
}
