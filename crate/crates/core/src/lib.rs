//! Quiver mutation for 2-Calabi-Yau tilted algebras.
//!
//! Besides Fomin-Zelevinsky mutation this covers mutation at an oriented
//! cycle of summands, mutation at vertices with loops or 2-cycles through a
//! cyclic Galois cover, the finite-type catalog, and polygon triangulations
//! as an independent check for type A.

pub mod canonical;
pub mod catalog;
pub mod covering;
pub mod cycle;
pub mod error;
pub mod explore;
pub mod fixtures;
pub mod json;
pub mod matrix;
pub mod potential;
pub mod quiver;
pub mod triangulation;

pub use canonical::{canonical_form, is_isomorphic, CanonicalForm};
pub use covering::{
    build_cyclic_cover, mutate_at_vertex_via_cover, project, CoverPreset, CoveringMap,
};
pub use cycle::{
    build_exchange_matrix, congruence_mutate, derive_cb_indices, find_fz_sequence, mutate_cycle,
    verify_block_identities, CycleBlocks, CycleSpec, ExchangeMatrix,
};
pub use error::{Error, Result};
pub use matrix::{fz_mutate_matrix, SkewMatrix};
pub use potential::{
    cyclic_derivative, sum_of_minimal_cycles_potential, Potential, QuiverWithPotential,
};
pub use quiver::{fz_mutate_quiver, minimal_cycles, skew_matrix, Arrow, Quiver};
