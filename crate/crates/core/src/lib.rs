//! Cubic graphs of bialternating cycle quotient type: the parametric
//! families, their automorphisms, and an independent brute-force oracle.

pub mod analysis;
pub mod aut_search;
pub mod automorphisms;
pub mod constructions;
pub mod graph_core;
pub mod perm;
pub mod perm_group;
pub mod verify;

pub use constructions::XbParams;
pub use graph_core::{FactorGraph, Grid, VertexId};
pub use perm::Perm;
pub use perm_group::PermGroup;
