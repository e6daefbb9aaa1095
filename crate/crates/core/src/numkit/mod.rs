//! Exact-derivative arithmetic and small dense complex linear algebra.

mod jet;
mod linalg;
mod mat2;

pub use jet::{CJet, JetOp, Orders, C64};
pub use linalg::{det_dense, solve_dense, vec_norm, ComplexMatrix, Scalar, PIVOT_THRESHOLD};
pub use mat2::Mat2;

/// `i`, used throughout the connection formulas.
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
