//! The σ₂ sector: phase variables, Hankel n-solitons on odd ladders and
//! Bäcklund constraints on the triangular vacuum.

mod fields;
mod nsoliton;
mod triangular;

pub use fields::{
    from_sigma2, s2_literal_residual, s2_residual, schl1_literal_residual, schl1_residual, to_sigma2, unwrap_to,
    Sigma2Fields,
};
pub use nsoliton::{
    pi_prime, resolve_convention, sigma2_nsoliton, sigma2_residual, ConventionReport, PhaseConvention, Sigma2Spec,
    Sigma2Tau, MODULUS_TOLERANCE,
};
pub use triangular::{
    sigma2_backlund_constraints, triangular_vacuum_g, unimodular_pair, ConstraintReport, Sigma2Branch,
    TriangularGaugeState, TriangularVacuum, BRANCH_TOLERANCE,
};
