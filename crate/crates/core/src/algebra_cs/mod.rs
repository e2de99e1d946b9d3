//! Ladder algebras (intrinsic, linear, natural) and coherent states of a
//! Hamiltonian with analytic spectrum and of its second-order partners.

mod coherent;
mod ladder;
mod spectrum;

pub use coherent::{
    coherent_coefficients, eigenvalue_residual, evolution_check, kernel_degeneracy, linear_kernel,
    moment_check, moments, reproducing_kernel, CoherentState, MomentReport, DEFAULT_TOLERANCE,
    MAX_TRUNCATION,
};
pub use ladder::{
    commutator, ladder_apply, ladder_coefficient, Direction, LadderKind, LadderSpec, LadderState,
};
pub use spectrum::SpectrumFunction;
