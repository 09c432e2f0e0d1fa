//! Minimum k-cut toolkit.
//!
//! Random contraction (sequential and recursive), the exponential clock
//! formulation of contraction, forest-peeling sparsification, an exact
//! brute-force oracle, and the set-family machinery used to study how many
//! small cuts a graph can have.

pub mod contracted;
pub mod contraction;
pub mod dsu;
pub mod error;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod ratio;
pub mod rng;
pub mod setfamily;
pub mod sparsifier;

pub use contracted::{ContractedState, DegreeProfile};
pub use error::{KcutError, Result};
pub use graph::{cut_weight, cut_weight_mask, kcut_weight, Cut, Edge, KPartition, LamBar, Weight, WeightedGraph};
pub use ratio::Ratio;
