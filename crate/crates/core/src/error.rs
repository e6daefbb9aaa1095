use thiserror::Error;

use crate::numkit::Orders;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("jet order mismatch: {left:?} vs {right:?}")]
    OrderMismatch { left: Orders, right: Orders },

    #[error("{op} of a jet with zero value coefficient")]
    ZeroValue { op: &'static str },

    #[error("insufficient jet order: need {needed:?}, have {have:?}")]
    InsufficientOrder { needed: Orders, have: Orders },

    #[error("singular matrix: pivot {pivot} below threshold")]
    Singular { pivot: usize },

    #[error("dressing singularity at (x={x}, t={t}): coincident kernel ratios")]
    DressingSingularity { x: f64, t: f64 },

    #[error("group element overflow while propagating near (x={x}, t={t})")]
    Overflow { x: f64, t: f64 },

    #[error("propagation did not reach tolerance {tolerance:e} (defect {defect:e})")]
    NotConverged { tolerance: f64, defect: f64 },

    #[error("ladder singularity at step {step} near (x={x}, t={t})")]
    LadderSingularity { step: i32, x: f64, t: f64 },

    #[error("vanishing determinant D_{index} at (x={x}, t={t})")]
    VanishingDeterminant { index: usize, x: f64, t: f64 },

    #[error("pole: spectral parameter coincides with {0}")]
    Pole(f64),

    #[error("no square-root branch reconstructs the fields at (x={x}, t={t})")]
    BranchFailure { x: f64, t: f64 },

    #[error("invalid parameters: {0}")]
    InvalidSpec(String),

    #[error("no convention passes: {0}")]
    NoConvention(String),
}
