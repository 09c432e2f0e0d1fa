//! Set families over a universe of at most 64 elements: Venn atoms,
//! sunflower search, and the small-cut structure checks built on them.

mod family;
mod structure;
mod sunflower;

pub use family::{cuts_atoms, greedy_venn_kcut, venn_atom_count, CutFamily};
pub use structure::{
    check_small_cut_structure, erdos_rado_bound, sunflower_petal_parameter, StructureReport,
};
pub use sunflower::{
    count_sunflower_cores, distinct_core_sunflowers, find_sunflower, CoreCount, DistinctCores,
    SearchBudget, SearchOutcome, Sunflower,
};
