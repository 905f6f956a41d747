//! Planarizing graphs while keeping their width parameters under control.
//!
//! The crate is organised bottom-up: [`graph`] and [`generators`] for input,
//! [`drawing`] and [`planarization`] for exact straight-line drawings and
//! their planarizations, [`arrangement`] and [`decomposition`] for width
//! parameters (validators and exact solvers), [`planarize`] for the
//! constructive planarizers, and [`experiment`] for the experiment runner.

pub mod arrangement;
pub mod decomposition;
pub mod drawing;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod limits;
pub mod oracle;
pub mod par;
pub mod planarization;
pub mod planarize;
mod solver;
mod subset;
pub mod svg;

pub use error::{Error, Result};
pub use graph::{parse_graph, EdgeId, Graph, VertexId, VertexKind};
pub use limits::SolverLimits;
pub use par::Execution;
pub use solver::Solver;
