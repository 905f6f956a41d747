//! Constructive planarizations.
//!
//! Every construction returns a [`PlanarizationReport`] whose validated
//! width is recomputed by a validator on the output, never copied from the
//! claimed width.

mod clustered;
mod convex;
mod guided;
mod zarankiewicz;

pub use clustered::{clustered_carving, clustered_carving_with, default_z, ClusterStats};
pub use convex::{convex_lift, convex_lift_with};
pub use guided::{carving_guided, carving_guided_with, inversions, Embedding, RectangleRouting};
pub use zarankiewicz::{cr_pair_k3n, zarankiewicz_k3n};

use serde::{Deserialize, Serialize};

use crate::arrangement::LinearArrangement;
use crate::decomposition::CarvingDecomposition;
use crate::planarization::Planarization;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Arrangement of the planarization's vertices; width is edge separation.
    Arrangement(LinearArrangement),
    /// Carving decomposition of the planarization.
    Carving(CarvingDecomposition),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarizationReport {
    pub strategy: String,
    pub planarization: Planarization,
    pub crossings_added: usize,
    pub witness: Witness,
    /// Width of the input witness (arrangement or carving) on the input graph.
    pub claimed_width: usize,
    /// Width of `witness` on the planarization, from the validator.
    pub validated_width: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub routings: Vec<RectangleRouting>,
}

impl PlanarizationReport {
    pub fn witness_arrangement(&self) -> Option<&LinearArrangement> {
        match &self.witness {
            Witness::Arrangement(a) => Some(a),
            Witness::Carving(_) => None,
        }
    }

    pub fn witness_carving(&self) -> Option<&CarvingDecomposition> {
        match &self.witness {
            Witness::Carving(c) => Some(c),
            Witness::Arrangement(_) => None,
        }
    }
}
