use crate::error::{Error, Result};
use crate::limits::{SolverLimits, HARD_SUBSET_LIMIT};
use crate::par::Execution;

/// Configuration shared by the exact solvers. The free functions
/// (`exact_cutwidth` and friends) use `Solver::default()`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solver {
    pub limits: SolverLimits,
    pub exec: Execution,
}

impl Solver {
    pub fn new(limits: SolverLimits, exec: Execution) -> Self {
        Self { limits, exec }
    }

    pub fn sequential() -> Self {
        Self {
            exec: Execution::Sequential,
            ..Self::default()
        }
    }

    pub(crate) fn check(&self, solver: &'static str, n: usize, limit: usize) -> Result<()> {
        let limit = if matches!(solver, "cutwidth" | "pathwidth" | "treewidth" | "treedepth") {
            limit.min(HARD_SUBSET_LIMIT)
        } else {
            limit
        };
        if n > limit {
            return Err(Error::SizeLimit { solver, n, limit });
        }
        Ok(())
    }
}
