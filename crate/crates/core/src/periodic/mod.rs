//! Periodic potentials: Floquet analysis, the Lamé family and SUSY
//! transformations with Bloch or combination seeds.

pub mod floquet;
pub mod lame;
pub mod transform;

pub use floquet::{
    band_edges, bloch_functions, discriminant, discriminant_batch, floquet_data, transfer_matrix,
    BandEdge, BandStructure, BlochFunctions, Floquet, FloquetData, Periodicity, Regime,
    TransferMatrix,
};
pub use lame::{
    lame1_band_edge_states, lame_grid, lame_model, lame_potential, lame_potential_with_derivative,
    multi_cell_grid, BandEdgeState, LameParams, DEFAULT_CELLS, DEFAULT_POINTS_PER_CELL,
};
pub use transform::{
    bloch_combination, bloch_multiplier, far_cell_model, far_cell_translates, gap_seed_pair,
    periodicity_defect, susy_periodic_first, susy_periodic_first_general, susy_periodic_second,
    whole_line, TranslateMatch, FAR_CELLS,
};
