//! Objective functions over solutions.
//!
//! Both objectives count time steps. A plan's cost is the time of its final
//! arrival at its end location: waiting at the target after that final
//! arrival is free, but any target visit the agent later leaves is charged
//! in full. An agent that reaches its target at step 3, leaves at step 5,
//! and returns for good at step 7 therefore costs 7. Because only trailing
//! waits are free, the value is the same whether agents stay at their
//! targets or disappear.

use crate::model::{Plan, Solution};

/// The time step by which every agent has completed its plan: the maximum
/// plan cost over the solution (0 for an empty solution).
pub fn makespan(solution: &Solution) -> usize {
    solution.plans.iter().map(plan_cost).max().unwrap_or(0)
}

/// Total of all per-agent plan costs (also known as flowtime).
pub fn sum_of_costs(solution: &Solution) -> usize {
    solution.plans.iter().map(plan_cost).sum()
}

/// The smallest step from which the plan rests at its final location, i.e.
/// the time of final arrival. For a canonical plan this is its action
/// count; trailing waits never add cost.
pub fn plan_cost(plan: &Plan) -> usize {
    let locations = &plan.locations;
    let last = *locations.last().expect("plans are never empty");
    let mut arrival = locations.len() - 1;
    while arrival > 0 && locations[arrival - 1] == last {
        arrival -= 1;
    }
    arrival
}
