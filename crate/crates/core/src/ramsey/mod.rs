//! Partition arrows `C -> (B)^A_k`, Ramsey witnesses, rigidity, and
//! indiscernible extraction against a palette.

mod arrow;
mod coloring;
mod hypergraph;
mod indiscernible;
mod rigidity;

pub use arrow::{decide_arrow, find_witness, weak_coloring, ArrowStats, ArrowVerdict, WitnessSearch};
pub use coloring::{Assignment, Coloring, Palette, PaletteEntry};
pub use hypergraph::{copy_hypergraph, CopyHypergraph};
pub use indiscernible::{extract_indiscernible, extract_indiscernible_iterated};
pub use rigidity::{check_rigidity, nonrigid_bad_coloring, NonRigidModel, RigidityReport};
