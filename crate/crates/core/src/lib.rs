//! Random-to-front shuffles on pure rooted trees.
//!
//! A state is a local ordering of the tree (a linear order of the children at every
//! inner node). A step picks a leaf subset `E` with probability `w_E` and, at every
//! inner node, moves the children with a descendant in `E` to the front. This crate
//! builds the exact transition matrix of that chain, computes its spectrum from the
//! partition-lattice closed form, and checks the closed form against brute-force
//! oracles: trace identities, an annihilating polynomial, Möbius recursion, chamber
//! counts, and Monte Carlo runs.
//!
//! ```
//! use tree_shuffle::{PureTree, WeightDistribution, spectrum::spectrum};
//!
//! let tree: PureTree = r#"{"id":"r","children":[{"id":"a"},{"id":"b"},{"id":"c"}]}"#.parse().unwrap();
//! let dist = WeightDistribution::uniform_singletons(&tree);
//! let table = spectrum(&tree, &dist, 1000).unwrap();
//! let agg: Vec<String> = table.aggregated().iter().map(|(e, m)| format!("{e}:{m}")).collect();
//! assert_eq!(agg, ["0:2", "1/3:3", "1:1"]);
//! ```

pub mod combinatorics;
pub mod distribution;
pub mod error;
mod exact;
pub mod lattice;
pub mod ordering;
pub mod semigroup;
pub mod spectrum;
pub mod tree;
pub mod verify;
pub mod walk;

pub use distribution::WeightDistribution;
pub use error::{Error, Result};
pub use lattice::PartitionFamily;
pub use ordering::LocalOrdering;
pub use semigroup::{OrderedPartition, OrderedPartitionFamily};
pub use tree::{LeafSubset, NodeId, PureTree};

/// Size caps for the enumerations behind each operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Local orderings (matrix rows).
    pub max_states: u64,
    /// Partition families in the support lattice.
    pub max_lattice: u64,
    /// Elements of the ordered-partition semigroup.
    pub max_semigroup: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 5000,
            max_lattice: 200_000,
            max_semigroup: 5000,
        }
    }
}
