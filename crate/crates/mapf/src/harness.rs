//! Progressive benchmark harness.
//!
//! A scenario file lists agent endpoints; the harness turns its prefixes
//! into problems of 2, 3, 4, ... agents and feeds them to a solver, each
//! under a fresh wall-clock budget, stopping at the first problem the
//! solver fails to solve. Every claimed solution is re-validated, so a
//! solver that returns a bad plan is scored as `invalid`, not `solved`.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::io::{scenario_instance, Scenario, ScenarioInstanceError};
use crate::model::{Grid, Objective, SemanticsProfile};
use crate::objective::{makespan, sum_of_costs};
use crate::solve::{SolveError, SolveOutcome, Solver, SolverBudget};
use crate::validate::validate;

/// How one benchmark problem ended.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RunStatus {
    Solved,
    Unsolvable,
    Incomplete,
    Timeout,
    /// The solver claimed success but its solution failed validation.
    Invalid,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RunStatus::Solved => "solved",
            RunStatus::Unsolvable => "unsolvable",
            RunStatus::Incomplete => "incomplete",
            RunStatus::Timeout => "timeout",
            RunStatus::Invalid => "invalid",
        };
        f.write_str(name)
    }
}

/// One problem of a progressive run.
#[derive(Clone, PartialEq, Debug)]
pub struct ProblemResult {
    pub agents: usize,
    pub status: RunStatus,
    /// Objective value of the validated solution, for solved problems.
    pub cost: Option<usize>,
    pub seconds: f64,
}

/// A full progressive run over one scenario.
#[derive(Clone, PartialEq, Debug)]
pub struct ScenarioRun {
    pub scenario: String,
    pub results: Vec<ProblemResult>,
    /// Largest agent count solved, or 0 when even the first problem failed.
    pub max_agents_solved: usize,
    /// Problems the scenario offers (its entry count minus one, since runs
    /// start at two agents).
    pub problems_available: usize,
}

/// Failures of the harness itself, as opposed to a problem merely resisting
/// the solver (which is a [`RunStatus`]).
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("building the {agents}-agent problem failed: {source}")]
    Problem {
        agents: usize,
        #[source]
        source: ScenarioInstanceError,
    },
    #[error(transparent)]
    Solver(#[from] SolveError),
}

/// Runs `solver` on the 2-agent, 3-agent, ... prefixes of `scenario`, each
/// under a fresh `time_limit`, stopping at the first problem not solved.
pub fn run_scenario(
    grid: &Grid,
    scenario: &Scenario,
    scenario_name: &str,
    solver: &dyn Solver,
    profile: &SemanticsProfile,
    time_limit: Duration,
) -> Result<ScenarioRun, HarnessError> {
    let available = scenario.entries.len();
    let mut results = Vec::new();
    let mut max_agents_solved = 0;
    for agents in 2..=available {
        let instance = scenario_instance(grid, scenario, agents)
            .map_err(|source| HarnessError::Problem { agents, source })?;
        let budget = SolverBudget::time_limited(time_limit);
        let started = Instant::now();
        let outcome = solver.solve(&instance, profile, &budget)?;
        let seconds = started.elapsed().as_secs_f64();
        let (status, cost) = match outcome {
            SolveOutcome::Solved(solution) => {
                let valid = validate(&instance, &solution, profile)
                    .map(|report| report.valid)
                    .unwrap_or(false);
                if valid {
                    let cost = match profile.objective {
                        Objective::SumOfCosts => sum_of_costs(&solution),
                        Objective::Makespan => makespan(&solution),
                    };
                    (RunStatus::Solved, Some(cost))
                } else {
                    (RunStatus::Invalid, None)
                }
            }
            SolveOutcome::Unsolvable => (RunStatus::Unsolvable, None),
            SolveOutcome::Incomplete => (RunStatus::Incomplete, None),
            SolveOutcome::Timeout => (RunStatus::Timeout, None),
        };
        results.push(ProblemResult { agents, status, cost, seconds });
        if status != RunStatus::Solved {
            break;
        }
        max_agents_solved = agents;
    }
    Ok(ScenarioRun {
        scenario: scenario_name.to_string(),
        results,
        max_agents_solved,
        problems_available: available.saturating_sub(1),
    })
}

/// Aggregate of all scenario runs on one map.
#[derive(Clone, PartialEq, Debug)]
pub struct MapSummary {
    pub map: String,
    pub scenarios: usize,
    /// Total problems solved: per scenario, solving up to n agents means
    /// n - 1 problems (they start at two agents).
    pub problems_solved: usize,
    pub min_agents_solved: usize,
    pub max_agents_solved: usize,
}

pub fn summarize_map(map: &str, runs: &[ScenarioRun]) -> MapSummary {
    MapSummary {
        map: map.to_string(),
        scenarios: runs.len(),
        problems_solved: runs.iter().map(|r| r.max_agents_solved.saturating_sub(1)).sum(),
        min_agents_solved: runs.iter().map(|r| r.max_agents_solved).min().unwrap_or(0),
        max_agents_solved: runs.iter().map(|r| r.max_agents_solved).max().unwrap_or(0),
    }
}

/// One CSV row per problem across all runs.
pub fn problems_csv(runs: &[ScenarioRun]) -> String {
    let mut out = String::from("scenario,agents,status,cost,seconds\n");
    for run in runs {
        for result in &run.results {
            let cost = result.cost.map(|c| c.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{:.3}\n",
                run.scenario, result.agents, result.status, cost, result.seconds
            ));
        }
    }
    out
}

/// Per-map summary CSV, prefixed with a comment line describing the machine
/// the numbers were measured on.
pub fn summary_csv(summaries: &[MapSummary]) -> String {
    let cpus = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let mut out = format!(
        "# machine: {} {}, {} cpu(s)\n",
        std::env::consts::OS,
        std::env::consts::ARCH,
        cpus
    );
    out.push_str("map,scenarios,problems_solved,min_agents_solved,max_agents_solved\n");
    for summary in summaries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            summary.map,
            summary.scenarios,
            summary.problems_solved,
            summary.min_agents_solved,
            summary.max_agents_solved
        ));
    }
    out
}

/// Plain-text summary table for terminals.
pub fn summary_table(summaries: &[MapSummary]) -> String {
    let map_width = summaries
        .iter()
        .map(|s| s.map.len())
        .chain(std::iter::once("map".len()))
        .max()
        .unwrap_or(3);
    let mut out = format!(
        "{:map_width$}  {:>9}  {:>6}  {:>10}  {:>10}\n",
        "map", "scenarios", "solved", "min agents", "max agents"
    );
    for summary in summaries {
        out.push_str(&format!(
            "{:map_width$}  {:>9}  {:>6}  {:>10}  {:>10}\n",
            summary.map,
            summary.scenarios,
            summary.problems_solved,
            summary.min_agents_solved,
            summary.max_agents_solved
        ));
    }
    out
}
