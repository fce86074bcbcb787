//! Strategy trees: construction, validation, root fixing and realization.
//!
//! A tree whose labels are distinct, whose every root-to-leaf branch contains
//! a copy of `S`, whose internal non-root vertices branch at least twice and
//! whose leaves sit at most `N-1` edges deep gives Maker an `N`-move strategy:
//! take the root, then always step to a child whose subtree Breaker has not
//! touched.

mod builders;
mod fixtures;
mod realize;
mod tree;
mod validate;

pub use builders::{
    build_generic4, build_size3, build_strategy, build_sym4, generic4_labels, Construction,
    Strategy, GENERIC_VERTEX_NAMES,
};
pub use fixtures::{ex0236_witness_copies, example_tree, ExampleName};
pub use realize::{fix_root_outdegree, prepare_agent_tree, realize, RealizedTree, RootGraft};
pub use tree::StrategyTree;
pub use validate::{validate_tree, Condition, Failure, ValidationReport};
