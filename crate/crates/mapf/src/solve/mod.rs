//! Solvers that produce conflict-free solutions.
//!
//! Two algorithms over a shared single-agent search core:
//!
//! * [`prioritized`]: plans agents one at a time in index order, each
//!   treating the plans of earlier agents as movable obstacles. Fast, but
//!   incomplete — a bad ordering can paint the search into a corner — and
//!   makes no optimality claim.
//! * [`cbs`]: conflict-based search. A high-level best-first search over
//!   conflicts branches on single-agent constraints; a low-level space-time
//!   A* replans one agent per node. Returns an objective-optimal solution,
//!   and proves unsolvability within a completeness horizon by exhausting
//!   the constraint tree.
//!
//! Both report through [`SolveOutcome`] and honor a wall-clock
//! [`SolverBudget`].

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::model::{Instance, SemanticsProfile, Solution, Vertex};

mod astar;
mod cbs;
mod joint;
mod prioritized;

pub use cbs::{cbs, cbs_with_horizon};
pub use prioritized::prioritized;

/// A single-agent restriction used by the solvers' searches.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Constraint {
    /// The agent may not occupy `vertex` at time `time`.
    Vertex { vertex: Vertex, time: usize },
    /// The agent may not be at `from` at `time` and at `to` at `time + 1`.
    /// `from == to` forbids waiting in place at that step.
    Edge { from: Vertex, to: Vertex, time: usize },
}

/// Wall-clock budget for one solve call. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolverBudget {
    pub deadline: Option<Instant>,
}

impl SolverBudget {
    pub fn unlimited() -> Self {
        SolverBudget { deadline: None }
    }

    /// A budget expiring `limit` from now.
    pub fn time_limited(limit: Duration) -> Self {
        SolverBudget { deadline: Some(Instant::now() + limit) }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// What a solve call established.
#[derive(Clone, PartialEq, Debug)]
pub enum SolveOutcome {
    /// A solution free of every conflict the profile forbids.
    Solved(Solution),
    /// No solution exists in which every agent reaches its target within the
    /// solver's completeness horizon.
    Unsolvable,
    /// The solver's strategy failed on this instance even though a solution
    /// may exist (for prioritized planning: the fixed agent ordering left a
    /// later agent with no path).
    Incomplete,
    /// The budget ran out before any of the above could be established.
    Timeout,
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveOutcome::Solved(_))
    }
}

/// Hard errors: the call itself was malformed, as opposed to the instance
/// resisting the solver (which is a [`SolveOutcome`]).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("{solver} cannot enforce this semantics profile: {reason}")]
    UnsupportedProfile { solver: &'static str, reason: String },
}

/// Object-safe face of the solvers, so harnesses can drive any of them (or
/// a test double) through one handle.
pub trait Solver {
    fn name(&self) -> &'static str;

    fn solve(
        &self,
        instance: &Instance,
        profile: &SemanticsProfile,
        budget: &SolverBudget,
    ) -> Result<SolveOutcome, SolveError>;
}

/// [`cbs`] as a [`Solver`].
pub struct Cbs;

impl Solver for Cbs {
    fn name(&self) -> &'static str {
        "cbs"
    }

    fn solve(
        &self,
        instance: &Instance,
        profile: &SemanticsProfile,
        budget: &SolverBudget,
    ) -> Result<SolveOutcome, SolveError> {
        cbs(instance, profile, budget)
    }
}

/// [`prioritized`] as a [`Solver`].
pub struct Prioritized;

impl Solver for Prioritized {
    fn name(&self) -> &'static str {
        "prioritized"
    }

    fn solve(
        &self,
        instance: &Instance,
        profile: &SemanticsProfile,
        budget: &SolverBudget,
    ) -> Result<SolveOutcome, SolveError> {
        prioritized(instance, profile, budget)
    }
}

/// Looks up a solver by its command-line name.
pub fn solver_by_name(name: &str) -> Option<Box<dyn Solver>> {
    match name {
        "cbs" => Some(Box::new(Cbs)),
        "prioritized" => Some(Box::new(Prioritized)),
        _ => None,
    }
}

/// The horizon within which exhaustive search is decisive: number of
/// passable cells plus number of agents. Plans are restricted to arrive by
/// this time, making "no solution found" mean "no solution with makespan
/// within the horizon".
pub fn completeness_horizon(instance: &Instance) -> usize {
    instance.grid().passable_count() + instance.agent_count()
}

/// Constraint lookup table for the single-agent search.
pub(crate) struct ConstraintTable {
    vertex: HashSet<(Vertex, usize)>,
    edge: HashSet<(Vertex, Vertex, usize)>,
    /// Per vertex, the last time a vertex constraint or a wait-in-place edge
    /// constraint touches it — the times that forbid settling there.
    latest_settle_block: HashMap<Vertex, usize>,
    max_time: usize,
}

impl ConstraintTable {
    pub fn new(constraints: impl IntoIterator<Item = Constraint>) -> Self {
        let mut table = ConstraintTable {
            vertex: HashSet::new(),
            edge: HashSet::new(),
            latest_settle_block: HashMap::new(),
            max_time: 0,
        };
        let note_settle_block = |map: &mut HashMap<Vertex, usize>, v: Vertex, t: usize| {
            let slot = map.entry(v).or_insert(t);
            *slot = (*slot).max(t);
        };
        for c in constraints {
            match c {
                Constraint::Vertex { vertex, time } => {
                    table.vertex.insert((vertex, time));
                    note_settle_block(&mut table.latest_settle_block, vertex, time);
                    table.max_time = table.max_time.max(time);
                }
                Constraint::Edge { from, to, time } => {
                    table.edge.insert((from, to, time));
                    if from == to {
                        note_settle_block(&mut table.latest_settle_block, from, time);
                    }
                    table.max_time = table.max_time.max(time);
                }
            }
        }
        table
    }

    pub fn vertex_blocked(&self, vertex: Vertex, time: usize) -> bool {
        self.vertex.contains(&(vertex, time))
    }

    pub fn edge_blocked(&self, from: Vertex, to: Vertex, time: usize) -> bool {
        self.edge.contains(&(from, to, time))
    }

    /// Earliest arrival time from which an agent can occupy `vertex` forever
    /// without hitting a constraint.
    pub fn earliest_settle(&self, vertex: Vertex) -> usize {
        self.latest_settle_block.get(&vertex).map_or(0, |&t| t + 1)
    }

    /// The largest time any constraint mentions.
    pub fn max_time(&self) -> usize {
        self.max_time
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::v;

    #[test]
    fn constraint_table_answers_point_queries() {
        let table = ConstraintTable::new([
            Constraint::Vertex { vertex: v(1, 0), time: 3 },
            Constraint::Edge { from: v(1, 0), to: v(2, 0), time: 5 },
        ]);
        assert!(table.vertex_blocked(v(1, 0), 3));
        assert!(!table.vertex_blocked(v(1, 0), 2));
        assert!(!table.vertex_blocked(v(2, 0), 3));
        assert!(table.edge_blocked(v(1, 0), v(2, 0), 5));
        assert!(!table.edge_blocked(v(2, 0), v(1, 0), 5));
        assert_eq!(table.max_time(), 5);
    }

    #[test]
    fn settling_is_allowed_only_after_the_last_block() {
        let table = ConstraintTable::new([
            Constraint::Vertex { vertex: v(0, 0), time: 2 },
            Constraint::Vertex { vertex: v(0, 0), time: 7 },
            // A wait-in-place ban also prevents settling at that step.
            Constraint::Edge { from: v(1, 0), to: v(1, 0), time: 4 },
            // A moving edge does not.
            Constraint::Edge { from: v(2, 0), to: v(3, 0), time: 9 },
        ]);
        assert_eq!(table.earliest_settle(v(0, 0)), 8);
        assert_eq!(table.earliest_settle(v(1, 0)), 5);
        assert_eq!(table.earliest_settle(v(2, 0)), 0);
        assert_eq!(table.earliest_settle(v(5, 5)), 0);
    }

    #[test]
    fn budgets_expire() {
        assert!(!SolverBudget::unlimited().expired());
        assert!(SolverBudget { deadline: Some(Instant::now()) }.expired());
        assert!(!SolverBudget::time_limited(Duration::from_secs(3600)).expired());
    }

    #[test]
    fn solvers_are_reachable_by_name() {
        assert_eq!(solver_by_name("cbs").unwrap().name(), "cbs");
        assert_eq!(solver_by_name("prioritized").unwrap().name(), "prioritized");
        assert!(solver_by_name("magic").is_none());
    }
}
