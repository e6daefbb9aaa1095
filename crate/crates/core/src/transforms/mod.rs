//! Solution-to-solution maps and the quantities checked along them.

mod appendix;
mod discrete;
mod energy;
mod ladder;

pub use appendix::{
    appendix_residuals, bc_system_literal_residual, bc_system_residual, reconstruct, reconstruct_literal, relative_spread, AppendixParams,
    AppendixReport,
};
pub use discrete::{discrete_forward, discrete_inverse, forward_jets, inverse_jets, iterate_jets, Discrete, LadderState};
pub use energy::{energy, energy_series, nsoliton_energy, one_soliton_energy, trapezoid, EnergySample, BOUNDARY_DECAY};
pub use ladder::{
    hankel_ladder, sigma1_centre, sigma1_ladder_check, ExponentialSeed, HankelLadder, HankelRung, Sigma1LadderReport, HANKEL_DEGENERACY,
};
