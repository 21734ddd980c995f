//! Matrix representations, character tables and isotypic decomposition.

mod chartable;
mod decompose;
mod modp;
mod representation;

pub use chartable::CharacterTable;
pub use decompose::{
    block_diagonalize, invariant_inner_product, isotypic_projectors, multiplicities, Block, Decomposition,
};
pub use representation::{permutation_matrix, Representation};
