//! Shared fixtures for the criterion benchmarks in `benches/`.

use tga_core::mealy::MealyAutomaton;
use tga_core::schreier::SchreierMultigraph;
use tga_core::tree::OrientedTree;

/// The level-`n` graph over the path on three vertices.
pub fn tangled_odometer_level(n: u32) -> SchreierMultigraph {
    let tree = OrientedTree::path(3);
    SchreierMultigraph::build(&MealyAutomaton::from_tree(&tree), n).expect("within cap")
}
