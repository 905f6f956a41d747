//! Tree, branch and carving decompositions: validators, exact solvers and
//! conversions.

mod branch;
mod carving;
mod partition;
mod tree;
mod tree_decomposition;
mod treedepth;

pub use branch::{branch_to_carving, carving_to_branch, validate_branch, BranchDecomposition};
pub use carving::{
    carving_by_components, carving_cuts, caterpillar_carving_from_arrangement, exact_carving_width,
    random_carving, validate_carving, CarvingDecomposition,
};
pub use partition::{restricted_partition, validate_restricted_partition, RestrictedPartition};
pub use tree::{random_binary_tree, Rooted, Tree};
pub use tree_decomposition::{exact_treewidth, validate_tree_decomposition, TreeDecomposition};
pub use treedepth::{exact_treedepth, EliminationForest};

pub(crate) use tree::{check_leaf_labels, Editable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("not a tree: {reason}")]
    NotATree { reason: String },
    #[error("bag {bag} names vertex {vertex}, graph has {n} vertices")]
    BagVertexOutOfRange { bag: usize, vertex: usize, n: usize },
    #[error("vertex {vertex} is in no bag")]
    VertexNotCovered { vertex: usize },
    #[error("edge ({u}, {v}) is in no bag")]
    EdgeNotCovered { u: usize, v: usize },
    #[error("the bags containing vertex {vertex} are not connected")]
    DisconnectedBags { vertex: usize },
    #[error("{labels} labels for {nodes} tree nodes")]
    LabelCount { labels: usize, nodes: usize },
    #[error("internal node {node} has degree {degree}, expected 3")]
    BadDegree { node: usize, degree: usize },
    #[error("leaf {node} has no label")]
    UnlabeledLeaf { node: usize },
    #[error("internal node {node} carries a label")]
    LabeledInternal { node: usize },
    #[error("leaf {node} has label {label}, which does not exist")]
    UnknownLabel { node: usize, label: usize },
    #[error("label {label} appears on two leaves")]
    DuplicateLabel { label: usize },
    #[error("label {label} is on no leaf")]
    MissingLabel { label: usize },
    #[error("vertex {vertex} is isolated")]
    IsolatedVertex { vertex: usize },
    #[error("graph has no {what}; no decomposition exists")]
    Empty { what: &'static str },
    #[error("edge ({u}, {v}) joins two vertices that are not ancestor and descendant")]
    NotAncestral { u: usize, v: usize },
    #[error("forest parent array is invalid: {reason}")]
    BadForest { reason: String },
    #[error("restricted partition: {reason}")]
    Partition { reason: String },
}
