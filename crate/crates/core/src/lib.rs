//! Supersymmetric (Darboux) transformations of one-dimensional Schrödinger
//! Hamiltonians, Floquet analysis of periodic potentials, and the ladder
//! algebras and coherent states of the resulting Hamiltonians.
//!
//! All numerical code is generic over a [`Real`] scalar (`f32` or `f64`).
//! The aliases at the crate root fix the scalar to `f64`.

pub mod algebra_cs;
pub mod error;
pub mod model;
pub mod numerics;
pub mod periodic;
pub mod poschl_teller;
pub mod scalar;
pub mod susy;

pub use error::{Result, SusyError};
pub use scalar::{cx, Cx, Real};

pub type Grid = numerics::grid::Grid1D<f64>;
pub type Sampled = numerics::grid::SampledFunction<f64>;
pub type Model = model::PotentialModel<f64>;
pub type Seed = model::SeedSolution<f64>;
pub type Partner = susy::PartnerResult<f64>;
pub type Bands = periodic::BandStructure<f64>;
pub type Ladder = algebra_cs::LadderSpec<f64>;
pub type Coherent = algebra_cs::CoherentState<f64>;
