//! Construction and verification of multi-soliton solutions of the coupled
//! nonlinear Schrödinger system `−2iu_t + u_xx + 2u²v = 0`,
//! `2iv_t + v_xx + 2uv² = 0` and its reductions.

pub mod cli;
pub mod error;
pub mod field;
pub mod laxpair;
pub mod numkit;
pub mod sigma2;
pub mod soliton_engine;
pub mod transforms;

pub use error::{Error, Result};
pub use field::{Background, FieldPair, GroupProvider, PointJets, SampleGrid, Vacuum};
pub use numkit::{c64, CJet, Mat2, Orders, C64, I};
