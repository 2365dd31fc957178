//! Solution validation: structural replay of every plan against the
//! instance, then conflict detection under a semantics profile.
//!
//! Validation never stops at the first problem; the report carries every
//! structural error and every forbidden conflict so a failing solution can
//! be debugged in one pass. Plans that arrive and then idle at their target
//! are accepted with a warning and canonicalized before objectives and
//! conflicts are computed.

use std::fmt;

use thiserror::Error;

use crate::conflict::{solution_conflicts, Conflict};
use crate::model::{Instance, SemanticsProfile, Solution};
use crate::objective;

/// A violation of the single-agent movement rules.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructuralError {
    pub agent: usize,
    pub time: usize,
    pub description: String,
}

impl fmt::Display for StructuralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "agent {} at step {}: {}", self.agent, self.time, self.description)
    }
}

/// The outcome of [`validate`]: `valid` holds exactly when there are no
/// structural errors and no forbidden conflicts. Objectives are computed on
/// the canonicalized plans whether or not the solution is valid.
#[derive(Clone, PartialEq, Debug)]
pub struct ValidationReport {
    pub valid: bool,
    pub structural_errors: Vec<StructuralError>,
    pub conflicts: Vec<Conflict>,
    pub warnings: Vec<String>,
    pub makespan: usize,
    pub sum_of_costs: usize,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        writeln!(f, "makespan: {}", self.makespan)?;
        writeln!(f, "sum_of_costs: {}", self.sum_of_costs)?;
        writeln!(f, "structural_errors: {}", self.structural_errors.len())?;
        for e in &self.structural_errors {
            writeln!(f, "  {e}")?;
        }
        writeln!(f, "conflicts: {}", self.conflicts.len())?;
        for c in &self.conflicts {
            let agents: Vec<String> = c.agents.iter().map(usize::to_string).collect();
            let cells: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
            writeln!(
                f,
                "  {} conflict between agents {} at step {} on {}",
                c.kind,
                agents.join(", "),
                c.time,
                cells.join(" -> ")
            )?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Raised when the solution cannot even be lined up with the instance.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("instance has {expected} agents but the solution has {got} plans")]
    AgentCountMismatch { expected: usize, got: usize },
}

/// Checks a solution against an instance under a profile.
///
/// Structural checks per agent: the plan starts at the agent's source, ends
/// at its target, every step is a wait or a move between adjacent cells, and
/// every visited cell is passable. Conflict detection then reports every
/// forbidden conflict among the canonicalized plans.
pub fn validate(
    instance: &Instance,
    solution: &Solution,
    profile: &SemanticsProfile,
) -> Result<ValidationReport, ValidateError> {
    if solution.agent_count() != instance.agent_count() {
        return Err(ValidateError::AgentCountMismatch {
            expected: instance.agent_count(),
            got: solution.agent_count(),
        });
    }

    let grid = instance.grid();
    let mut structural_errors = Vec::new();
    let mut warnings = Vec::new();

    for (agent, plan) in solution.plans.iter().enumerate() {
        if plan.start() != instance.source(agent) {
            structural_errors.push(StructuralError {
                agent,
                time: 0,
                description: format!(
                    "starts at {} but the source is {}",
                    plan.start(),
                    instance.source(agent)
                ),
            });
        }
        if plan.final_location() != instance.target(agent) {
            structural_errors.push(StructuralError {
                agent,
                time: plan.action_count(),
                description: format!(
                    "ends at {} but the target is {}",
                    plan.final_location(),
                    instance.target(agent)
                ),
            });
        }
        for (time, &loc) in plan.locations.iter().enumerate() {
            if !grid.is_passable(loc) {
                structural_errors.push(StructuralError {
                    agent,
                    time,
                    description: format!("occupies blocked or out-of-bounds cell {loc}"),
                });
            }
        }
        for (time, pair) in plan.locations.windows(2).enumerate() {
            let (from, to) = (pair[0], pair[1]);
            if from != to && from.x.abs_diff(to.x) + from.y.abs_diff(to.y) != 1 {
                structural_errors.push(StructuralError {
                    agent,
                    time,
                    description: format!("steps from {from} to {to}, which are not adjacent"),
                });
            }
        }
        if !plan.is_canonical() {
            warnings.push(format!(
                "agent {agent}: plan carries trailing waits at its final location; \
                 canonicalized before scoring"
            ));
        }
    }

    let canonical = solution.canonical();
    let conflicts = solution_conflicts(&canonical, profile);
    let makespan = objective::makespan(&canonical);
    let sum_of_costs = objective::sum_of_costs(&canonical);

    Ok(ValidationReport {
        valid: structural_errors.is_empty() && conflicts.is_empty(),
        structural_errors,
        conflicts,
        warnings,
        makespan,
        sum_of_costs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{v, ConflictKind, Grid, Objective, Plan, TargetBehavior, Vertex};
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn open_grid(w: u32, h: u32) -> Grid {
        Grid::new(w, h, &HashSet::new()).unwrap()
    }

    fn plan(locs: &[(u32, u32)]) -> Plan {
        Plan::new(locs.iter().map(|&(x, y)| v(x, y)).collect()).unwrap()
    }

    #[test]
    fn disjoint_corridor_solution_is_valid() {
        let instance = Instance::new(
            open_grid(3, 3),
            vec![v(0, 0), v(0, 2)],
            vec![v(2, 0), v(2, 2)],
        )
        .unwrap();
        let solution = Solution::new(vec![
            plan(&[(0, 0), (1, 0), (2, 0)]),
            plan(&[(0, 2), (1, 2), (2, 2)]),
        ]);
        let report =
            validate(&instance, &solution, &SemanticsProfile::search_based()).unwrap();
        assert!(report.valid);
        assert!(report.structural_errors.is_empty());
        assert!(report.conflicts.is_empty());
        assert_eq!(report.makespan, 2);
        assert_eq!(report.sum_of_costs, 4);
    }

    #[test]
    fn teleporting_plan_is_a_structural_error() {
        let instance = Instance::new(open_grid(3, 1), vec![v(0, 0)], vec![v(2, 0)]).unwrap();
        let solution = Solution::new(vec![plan(&[(0, 0), (2, 0)])]);
        let report =
            validate(&instance, &solution, &SemanticsProfile::search_based()).unwrap();
        assert!(!report.valid);
        assert_eq!(report.structural_errors.len(), 1);
        let err = &report.structural_errors[0];
        assert_eq!((err.agent, err.time), (0, 0));
        assert!(err.description.contains("not adjacent"));
    }

    #[test]
    fn head_on_swap_is_invalid_under_the_search_profile() {
        let instance = Instance::new(
            open_grid(2, 1),
            vec![v(0, 0), v(1, 0)],
            vec![v(1, 0), v(0, 0)],
        )
        .unwrap();
        let solution = Solution::new(vec![plan(&[(0, 0), (1, 0)]), plan(&[(1, 0), (0, 0)])]);
        let report =
            validate(&instance, &solution, &SemanticsProfile::search_based()).unwrap();
        assert!(!report.valid);
        assert!(report.structural_errors.is_empty());
        assert_eq!(report.conflicts.len(), 1);
        assert_eq!(report.conflicts[0].kind, ConflictKind::Swapping);
        assert_eq!(report.conflicts[0].time, 0);
    }

    #[test]
    fn padded_plans_validate_with_a_warning() {
        let instance = Instance::new(open_grid(3, 1), vec![v(0, 0)], vec![v(2, 0)]).unwrap();
        let solution = Solution::new(vec![plan(&[(0, 0), (1, 0), (2, 0), (2, 0), (2, 0)])]);
        let report =
            validate(&instance, &solution, &SemanticsProfile::search_based()).unwrap();
        assert!(report.valid);
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.makespan, 2, "scored on the canonical plan");
        assert_eq!(report.sum_of_costs, 2);
    }

    #[test]
    fn padded_plan_does_not_block_a_disappearing_passer() {
        // Agent 0 idles at its target after arriving; under disappearing
        // semantics the canonicalized plan leaves the cell free for agent 1.
        let instance = Instance::new(
            open_grid(3, 2),
            vec![v(0, 0), v(2, 0)],
            vec![v(1, 0), v(0, 0)],
        )
        .unwrap();
        let solution = Solution::new(vec![
            plan(&[(0, 0), (1, 0), (1, 0), (1, 0)]),
            plan(&[(2, 0), (2, 1), (1, 1), (1, 0), (0, 0)]),
        ]);
        let disappear = SemanticsProfile::new(
            [ConflictKind::Vertex],
            TargetBehavior::Disappear,
            Objective::SumOfCosts,
        );
        let report = validate(&instance, &solution, &disappear).unwrap();
        assert!(report.valid, "{report}");

        let stay = disappear.with_target_behavior(TargetBehavior::Stay);
        let report = validate(&instance, &solution, &stay).unwrap();
        assert!(!report.valid, "staying agent 0 blocks (1, 0) at step 3");
    }

    #[test]
    fn wrong_endpoints_and_blocked_cells_are_reported_together() {
        let grid = Grid::new(2, 2, &[(1, 1)].into_iter().collect()).unwrap();
        let instance = Instance::new(grid, vec![v(0, 0)], vec![v(0, 1)]).unwrap();
        // Starts off-source, walks across the blocked cell, ends off-target.
        let solution = Solution::new(vec![plan(&[(1, 0), (1, 1), (1, 0)])]);
        let report =
            validate(&instance, &solution, &SemanticsProfile::search_based()).unwrap();
        assert!(!report.valid);
        let descriptions: Vec<&str> =
            report.structural_errors.iter().map(|e| e.description.as_str()).collect();
        assert!(descriptions.iter().any(|d| d.contains("starts at")));
        assert!(descriptions.iter().any(|d| d.contains("ends at")));
        assert!(descriptions.iter().any(|d| d.contains("blocked")));
    }

    #[test]
    fn plan_count_mismatch_is_an_error_not_a_report() {
        let instance = Instance::new(
            open_grid(3, 3),
            vec![v(0, 0), v(0, 2)],
            vec![v(2, 0), v(2, 2)],
        )
        .unwrap();
        let solution = Solution::new(vec![plan(&[(0, 0), (1, 0), (2, 0)])]);
        assert_eq!(
            validate(&instance, &solution, &SemanticsProfile::search_based()).unwrap_err(),
            ValidateError::AgentCountMismatch { expected: 2, got: 1 }
        );
    }

    fn arb_walk(len: usize) -> impl Strategy<Value = Vec<Vertex>> {
        // A random walk with waits on an open 3x3 grid.
        ((0u32..3, 0u32..3), prop::collection::vec(0usize..5, 0..len)).prop_map(
            |((x, y), steps)| {
                let mut cur = v(x, y);
                let mut locs = vec![cur];
                for s in steps {
                    let candidates = [
                        (cur.x.wrapping_add(1), cur.y),
                        (cur.x, cur.y.wrapping_add(1)),
                        (cur.x.wrapping_sub(1), cur.y),
                        (cur.x, cur.y.wrapping_sub(1)),
                        (cur.x, cur.y),
                    ];
                    let (nx, ny) = candidates[s];
                    if nx < 3 && ny < 3 {
                        cur = v(nx, ny);
                    }
                    locs.push(cur);
                }
                locs
            },
        )
    }

    proptest! {
        /// Relaxing the profile (forbidding fewer kinds) never invalidates
        /// a solution: its reported conflicts are a subset.
        #[test]
        fn fewer_forbidden_kinds_report_fewer_conflicts(
            walks in prop::collection::vec(arb_walk(5), 2..4),
            mask in 0u8..32,
            submask_seed in 0u8..32,
        ) {
            let submask = mask & submask_seed;
            let kinds_of = |m: u8| {
                ConflictKind::ALL
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(move |&(i, _)| m & (1 << i) != 0)
                    .map(|(_, k)| k)
            };
            let strict = SemanticsProfile::new(
                kinds_of(mask),
                TargetBehavior::Stay,
                Objective::SumOfCosts,
            );
            let relaxed = SemanticsProfile::new(
                kinds_of(submask),
                TargetBehavior::Stay,
                Objective::SumOfCosts,
            );
            // Only meaningful when closure kept the subset relation.
            prop_assume!(relaxed
                .forbidden_kinds()
                .iter()
                .all(|&k| strict.is_forbidden(k)));
            let solution = Solution::new(
                walks.into_iter().map(|w| Plan::new(w).unwrap()).collect(),
            );
            let strict_conflicts = solution_conflicts(&solution, &strict);
            let relaxed_conflicts = solution_conflicts(&solution, &relaxed);
            for c in &relaxed_conflicts {
                prop_assert!(strict_conflicts.contains(c));
            }
        }
    }
}
