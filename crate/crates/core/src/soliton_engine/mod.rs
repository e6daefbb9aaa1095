//! Dressing (Bäcklund) construction of solutions: single linear factors,
//! sequential chains, and the direct n-step system.

mod direct;
mod dressing;
mod spec;

pub use direct::{cramer_p_coefficients, direct_n_dressing, direct_n_dressing_jets, nsoliton_field, NSoliton, PolynomialDressing};
pub use dressing::{apply_dressing, kernel_vector, single_dressing, DressingChain, DressingFactor, KERNEL_DEGENERACY};
pub use spec::{conjugate_pair, DressingStep, SolitonSpec};
