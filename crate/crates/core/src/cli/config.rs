//! Run configuration: one JSON document, complex numbers as `[re, im]`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::numkit::{Orders, C64};
use crate::sigma2::PhaseConvention;
use crate::soliton_engine::SolitonSpec;
use crate::field::SampleGrid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// PDE, zero-curvature and sample residuals.
    pub residual: f64,
    /// Algebraic invariants (reality, determinant roots, commutativity).
    pub invariant: f64,
    /// Conservation of raw energy in t; required by `energy`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetOrders {
    pub ox: usize,
    pub ot: usize,
}

impl From<JetOrders> for Orders {
    fn from(o: JetOrders) -> Orders {
        Orders::new(o.ox, o.ot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair {
    pub lambda: C64,
    pub alpha: C64,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonParams {
    pub pairs: Vec<Pair>,
    /// Pair every `(λ, α)` with `(λ*, −1/α*)`; otherwise consecutive pairs form the steps.
    #[serde(default = "yes")]
    pub sigma1: bool,
}

impl SolitonParams {
    pub fn spec(&self) -> Result<SolitonSpec, CliError> {
        let pairs = self.pairs.iter().map(|p| (p.lambda, p.alpha)).collect();
        SolitonSpec::new(pairs, self.sigma1).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Seed {
    /// `(u, v) = (0, Σ cₖ e^{i(kₖx − kₖ²t/2)})`.
    Exponential { ks: Vec<C64>, cs: Vec<C64> },
    Soliton(SolitonParams),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteParams {
    pub seed: Seed,
    /// Forward steps if positive, inverse steps if negative.
    pub steps: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BacklundParams {
    pub pairs: Vec<Pair>,
    #[serde(default = "yes")]
    pub sigma1: bool,
    /// Exchange these two steps of the chain before evaluating it.
    #[serde(default)]
    pub swap: Option<[usize; 2]>,
    /// Also evaluate the B, C system and seed reconstruction for the first step.
    #[serde(default)]
    pub appendix: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConventionChoice {
    Auto,
    HalfPhase,
    FullPhase,
}

impl ConventionChoice {
    pub fn fixed(self) -> Option<PhaseConvention> {
        match self {
            ConventionChoice::Auto => None,
            ConventionChoice::HalfPhase => Some(PhaseConvention::HalfPhase),
            ConventionChoice::FullPhase => Some(PhaseConvention::FullPhase),
        }
    }
}

fn auto() -> ConventionChoice {
    ConventionChoice::Auto
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangularParams {
    pub lambda0: f64,
    pub lambda1: C64,
    pub lambda2: C64,
    pub nu1: C64,
    pub nu2: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sigma2Params {
    /// `2n + 1` values, real or in conjugate pairs.
    pub lambdas: Vec<C64>,
    /// Phase of `cₖ` for real `λₖ`, `cₖ` itself for `Im λₖ > 0`; the rest follow.
    pub free: Vec<C64>,
    #[serde(default = "auto")]
    pub convention: ConventionChoice,
    #[serde(default)]
    pub triangular: Option<TriangularParams>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Soliton,
    Discrete,
    Backlund,
    Sigma2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    /// Solution CSV, relative to the config file.
    pub input: PathBuf,
    /// Construction whose parameters (from the same config) produced the file.
    pub model: Model,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: SampleGrid,
    pub tolerances: Tolerances,
    #[serde(default)]
    pub jet_orders: Option<JetOrders>,
    #[serde(default)]
    pub soliton: Option<SolitonParams>,
    #[serde(default)]
    pub discrete: Option<DiscreteParams>,
    #[serde(default)]
    pub backlund: Option<BacklundParams>,
    #[serde(default)]
    pub sigma2: Option<Sigma2Params>,
    #[serde(default)]
    pub energy: Option<SolitonParams>,
    #[serde(default)]
    pub verify: Option<VerifyParams>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.grid;
        if g.nx < 2 || g.nt < 2 {
            return Err(CliError::Config("grid needs nx ≥ 2 and nt ≥ 2".into()));
        }
        if !(g.x_min < g.x_max && g.t_min < g.t_max) || !(g.x_min.is_finite() && g.x_max.is_finite() && g.t_min.is_finite() && g.t_max.is_finite()) {
            return Err(CliError::Config("grid needs finite x_min < x_max and t_min < t_max".into()));
        }
        let t = &self.tolerances;
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(t.residual) || !positive(t.invariant) || t.energy.is_some_and(|e| !positive(e)) {
            return Err(CliError::Config("tolerances must be positive and finite".into()));
        }
        Ok(())
    }

    /// Configured jet orders, which must cover `needed`; `needed` if absent.
    pub fn orders(&self, needed: Orders) -> Result<Orders, CliError> {
        match self.jet_orders {
            None => Ok(needed),
            Some(o) if Orders::from(o).covers(needed) => Ok(o.into()),
            Some(o) => Err(CliError::Config(format!(
                "jet_orders ({}, {}) below the required ({}, {})",
                o.ox, o.ot, needed.x, needed.t
            ))),
        }
    }
}

pub fn require<'a, T>(block: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    block
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("missing `{name}` parameter block")))
}
