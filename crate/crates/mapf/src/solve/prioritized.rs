//! Prioritized planning: agents are planned one at a time in index order,
//! and each later agent must route around the committed plans of all
//! earlier ones.
//!
//! The committed plans are translated into constraints for the single-agent
//! search: occupied cells become vertex constraints, traversed edges become
//! matching-traversal bans (against same-cell-pair conflicts), and reversed
//! edges become swap bans — whichever of those conflict kinds the profile
//! forbids. Following and cycle conflicts involve the joint motion of agent
//! groups and cannot be reserved against one agent at a time, so profiles
//! forbidding them are rejected.
//!
//! The scheme is fast but incomplete: an earlier agent may park on or cross
//! the only corridor a later agent needs, in which case the search reports
//! [`SolveOutcome::Incomplete`] even though a cooperative solution may
//! exist. Costs carry no optimality claim.

use crate::model::{ConflictKind, Instance, Plan, SemanticsProfile, Solution};
use crate::solve::astar::{space_time_astar, PathQuery, PathSearch};
use crate::solve::{Constraint, ConstraintTable, SolveError, SolveOutcome, SolverBudget};

pub fn prioritized(
    instance: &Instance,
    profile: &SemanticsProfile,
    budget: &SolverBudget,
) -> Result<SolveOutcome, SolveError> {
    let unsupported: Vec<&str> = [ConflictKind::Following, ConflictKind::Cycle]
        .into_iter()
        .filter(|&k| profile.is_forbidden(k))
        .map(ConflictKind::name)
        .collect();
    if !unsupported.is_empty() {
        return Err(SolveError::UnsupportedProfile {
            solver: "prioritized planning",
            reason: format!(
                "per-agent reservations cannot rule out {} conflicts",
                unsupported.join(" and ")
            ),
        });
    }

    let grid = instance.grid();
    let behavior = profile.target_behavior;
    let vertex_forbidden = profile.is_forbidden(ConflictKind::Vertex);
    let edge_forbidden = profile.is_forbidden(ConflictKind::Edge);
    let swap_forbidden = profile.is_forbidden(ConflictKind::Swapping);

    let mut plans: Vec<Plan> = Vec::with_capacity(instance.agent_count());
    for agent in 0..instance.agent_count() {
        if budget.expired() {
            return Ok(SolveOutcome::Timeout);
        }
        // Once every earlier agent has arrived the world is static, so any
        // feasible arrival happens within one static shortest path after
        // the last earlier arrival.
        let settled_by = plans.iter().map(Plan::action_count).max().unwrap_or(0);
        let horizon = grid.passable_count() + settled_by + 1;

        let mut reservations: Vec<Constraint> = Vec::new();
        for plan in &plans {
            for time in 0..=horizon {
                let cur = plan.location_at(time, behavior);
                let next = plan.location_at(time + 1, behavior);
                if let (Some(cur), Some(next)) = (cur, next) {
                    if edge_forbidden {
                        reservations.push(Constraint::Edge { from: cur, to: next, time });
                    }
                    if swap_forbidden {
                        reservations.push(Constraint::Edge { from: next, to: cur, time });
                    }
                }
                match cur {
                    Some(cur) if vertex_forbidden => {
                        reservations.push(Constraint::Vertex { vertex: cur, time });
                    }
                    Some(_) => {}
                    None => break,
                }
            }
        }

        let dist = grid.bfs_distances(instance.target(agent));
        let table = ConstraintTable::new(reservations);
        let query = PathQuery {
            grid,
            source: instance.source(agent),
            target: instance.target(agent),
            dist_to_target: &dist,
            constraints: &table,
            behavior,
            horizon,
            avoid: None,
        };
        match space_time_astar(&query, budget) {
            PathSearch::Found(plan) => plans.push(plan),
            PathSearch::Exhausted => return Ok(SolveOutcome::Incomplete),
            PathSearch::OutOfBudget => return Ok(SolveOutcome::Timeout),
        }
    }
    Ok(SolveOutcome::Solved(Solution::new(plans)))
}
