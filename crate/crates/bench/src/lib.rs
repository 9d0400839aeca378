//! Shared fixtures for the pipeline benchmarks.

use ergopose_core::{CapacityState, DrillingScenario, PostureProblem, Result};

/// The default drilling problem with fresh capacity.
pub fn default_problem() -> Result<(DrillingScenario, PostureProblem, CapacityState)> {
    let scenario = DrillingScenario::default();
    let problem = scenario.problem()?;
    let fresh = scenario.fresh_capacity(&problem)?;
    Ok((scenario, problem, fresh))
}
