use serde::{Deserialize, Serialize};

/// Vertex-count ceilings for the exact solvers. Exceeding one is an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverLimits {
    pub cutwidth: usize,
    pub pathwidth: usize,
    pub bandwidth: usize,
    pub treewidth: usize,
    pub treedepth: usize,
    pub carving: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        Self {
            cutwidth: 20,
            pathwidth: 20,
            bandwidth: 16,
            treewidth: 24,
            treedepth: 15,
            carving: 10,
        }
    }
}

/// Bitmask dynamic programs index states with `u32`.
pub(crate) const HARD_SUBSET_LIMIT: usize = 30;

impl SolverLimits {
    /// Defaults overridden by `PLANARWIDTH_LIMIT_<SOLVER>` environment variables,
    /// e.g. `PLANARWIDTH_LIMIT_TREEWIDTH=26`.
    pub fn from_env() -> Self {
        Self::default().with_env()
    }

    /// `self` with any `PLANARWIDTH_LIMIT_<SOLVER>` variables applied.
    pub fn with_env(self) -> Self {
        let mut limits = self;
        let fields: [(&str, &mut usize); 6] = [
            ("CUTWIDTH", &mut limits.cutwidth),
            ("PATHWIDTH", &mut limits.pathwidth),
            ("BANDWIDTH", &mut limits.bandwidth),
            ("TREEWIDTH", &mut limits.treewidth),
            ("TREEDEPTH", &mut limits.treedepth),
            ("CARVING", &mut limits.carving),
        ];
        for (name, slot) in fields {
            if let Ok(v) = std::env::var(format!("PLANARWIDTH_LIMIT_{name}")) {
                if let Ok(v) = v.trim().parse() {
                    *slot = v;
                }
            }
        }
        limits
    }
}
