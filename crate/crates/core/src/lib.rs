//! Certified algorithms around leaf powers and strongly chordal graphs.
//!
//! The crate covers elimination orderings, alternating cycles and their
//! satisfiability on trees, required quartets and quartet compatibility, an
//! exact leaf-power oracle backed by a rational simplex, the `G_{r,q}` family
//! of strongly chordal non-leaf-powers, and the reduction from restricted
//! chordless cycles to induced `G_{r,q}` detection.
//!
//! Numeric code is generic over the scalar: the simplex runs over any ordered
//! field ([`lp::Scalar`]) and weighted trees over any [`tree::Weight`]. The
//! aliases below fix the types used on the decision path.

pub mod cycles;
pub mod error;
pub mod graph;
pub mod grq;
pub mod leafroot;
pub mod lp;
pub mod quartets;
pub mod rcc;
pub mod tree;

pub use error::{Error, Result};
pub use graph::Graph;
pub use tree::{PhyloTree, Quartet, QuartetSet, WeightedTree};

/// Exact rational used by the feasibility solver.
pub type Rational = num_rational::BigRational;

/// Integer-weighted tree; the form in which leaf roots are reported.
pub type LeafRoot = WeightedTree<u64>;

/// Rational-weighted tree, as produced directly by the feasibility solver.
pub type RationalTree = WeightedTree<Rational>;

/// Default label cap for exhaustive topology searches.
pub const DEFAULT_TOPOLOGY_CAP: usize = 9;
