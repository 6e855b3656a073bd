//! Tree graph automata: the Schreier multigraphs of automaton groups built
//! from finite trees.
//!
//! From a seed tree on `k` vertices the crate builds the associated
//! invertible Mealy automaton ([`mealy`]), materializes the level-`n`
//! Schreier multigraph of its word action ([`schreier`]), evaluates exact
//! closed forms for its invariants — diameter, cycle census, perfect
//! matchings, Tutte polynomial and its specializations, Wiener and Szeged
//! indices ([`formulas`]) — and cross-checks every one of them against
//! independent brute-force computations on the explicit graph ([`oracle`],
//! [`verify`]).

pub mod error;
pub mod formulas;
pub mod mealy;
pub mod oracle;
pub mod schreier;
pub mod tree;
pub mod verify;

pub use error::{FormulaError, MealyError, OracleError, SchreierError, TreeError};
pub use formulas::{
    ChromaticVariant, FactoredTutte, PMGeneratingMonomial, PowerProduct, TuttePoly, Variant,
};
pub use mealy::{MealyAutomaton, Word};
pub use schreier::{ECycle, Generator, SchreierMultigraph, DEFAULT_VERTEX_CAP};
pub use tree::{EdgeSplit, OrientedTree};
