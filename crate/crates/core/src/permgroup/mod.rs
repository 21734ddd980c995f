//! Permutations, enumerated permutation groups and their actions.

mod action;
mod charpoly;
mod group;
pub mod named;
mod perm;

pub use action::{coset_action, regular_action, CosetAction};
pub use charpoly::{charpoly_from_cycle_type, IntPoly};
pub use group::{orbit_partition, ClassData, ClosureOptions, FiniteGroup};
pub use perm::{CycleType, Perm};
