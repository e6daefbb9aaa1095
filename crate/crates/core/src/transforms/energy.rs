//! Energy `∫|ψ|² dx` of sampled solutions.

use crate::error::Result;
use crate::field::{sample_field, FieldPair, SampleGrid};
use crate::numkit::C64;
use crate::soliton_engine::{NSoliton, SolitonSpec};

/// `|ψ|` above this at either end of a row triggers a boundary warning.
pub const BOUNDARY_DECAY: f64 = 1e-6;

pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dx * (values[1..n - 1].iter().sum::<f64>() + (values[0] + values[n - 1]) / 2.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergySample {
    pub t: f64,
    pub raw: f64,
    /// `n·raw/Σₖ raw₁(λₖ)` when one-soliton references are available.
    pub normalized: Option<f64>,
    pub boundary: f64,
}

impl EnergySample {
    pub fn decayed(&self) -> bool {
        self.boundary < BOUNDARY_DECAY
    }
}

/// Raw energy of one row of samples on a uniform grid with spacing `dx`,
/// together with the larger boundary modulus.
pub fn energy(psi: &[C64], dx: f64) -> (f64, f64) {
    let dens: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
    let boundary = match (psi.first(), psi.last()) {
        (Some(a), Some(b)) => a.norm().max(b.norm()),
        _ => 0.0,
    };
    (trapezoid(&dens, dx), boundary)
}

/// Raw energy of `u` at each grid time. Missing samples count as zero.
pub fn energy_series(field: &dyn FieldPair, grid: &SampleGrid) -> Result<Vec<EnergySample>> {
    grid.validate()?;
    let sampled = sample_field(field, grid);
    Ok((0..grid.nt)
        .map(|j| {
            let row: Vec<C64> = sampled.u_row(j).into_iter().map(|v| v.unwrap_or_default()).collect();
            let (raw, boundary) = energy(&row, grid.dx());
            EnergySample {
                t: grid.t(j),
                raw,
                normalized: None,
                boundary,
            }
        })
        .collect())
}

/// Reference energy of the single soliton `(λ, 1)` at `t = 0` on the x-range of `grid`.
pub fn one_soliton_energy(lambda: C64, grid: &SampleGrid) -> Result<f64> {
    let spec = SolitonSpec::sigma1(&[(lambda, C64::new(1.0, 0.0))])?;
    let g = SampleGrid { t_min: 0.0, t_max: 0.0, nt: 1, ..*grid };
    Ok(energy_series(&NSoliton::on_vacuum(spec), &g)?[0].raw)
}

/// Energies of an n-soliton, normalized by the sum of its one-soliton references.
pub fn nsoliton_energy(spec: &SolitonSpec, grid: &SampleGrid) -> Result<Vec<EnergySample>> {
    let mut series = energy_series(&NSoliton::on_vacuum(spec.clone()), grid)?;
    let refs: f64 = spec
        .pairs
        .iter()
        .map(|(l, _)| one_soliton_energy(*l, grid))
        .sum::<Result<f64>>()?;
    let n = spec.n() as f64;
    for s in &mut series {
        s.normalized = (refs > 0.0).then(|| n * s.raw / refs);
    }
    Ok(series)
}
