//! Exhaustive reference solver for small instances.
//!
//! A best-first search over explicit joint states: every agent's position,
//! the set of agents whose plans have ended, and the time step. Costs are
//! made additive by an explicit end-of-plan transition — an agent standing
//! on its target may *commit*, after which it never moves again (and, when
//! agents disappear on arrival, stops occupying space). Until it commits,
//! an agent pays one unit per step, so the path cost to the all-committed
//! goal is exactly the sum of final arrival times; waiting on the target
//! before a later departure is paid, waiting after the final arrival is
//! not, because committing at the final arrival is always cheapest. Each
//! joint state is expanded at most once, so the search visits a bounded
//! state space no matter how tangled the instance is — exponential only in
//! the number of agents, which is what makes it an oracle for small inputs
//! rather than a solver for large ones.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::conflict::{solution_conflicts, step_rings};
use crate::model::{
    ConflictKind, Instance, Objective, Plan, SemanticsProfile, Solution, TargetBehavior, Vertex,
};
use crate::objective::{makespan, sum_of_costs};
use crate::solve::completeness_horizon;

/// What the exhaustive search established.
#[derive(Clone, PartialEq, Debug)]
pub enum OracleOutcome {
    /// A provably optimal solution and its objective value.
    Optimal { cost: usize, solution: Solution },
    /// No solution exists in which every agent finishes within `horizon`
    /// actions.
    UnsolvableWithinHorizon { horizon: usize },
}

/// Finds a provably optimal solution by exhaustive search, or proves there
/// is none within the horizon. The default horizon (passable cells plus
/// agent count) is long enough that exhausting it settles solvability
/// outright.
pub fn brute_force_optimal(
    instance: &Instance,
    profile: &SemanticsProfile,
    horizon: Option<usize>,
) -> OracleOutcome {
    let horizon = horizon.unwrap_or_else(|| completeness_horizon(instance));
    JointSearch::new(instance, profile, horizon).run()
}

/// Cell marker for an agent that has vanished from the grid.
const GONE: u32 = u32::MAX;

/// One joint configuration: where every agent stands (by grid cell index,
/// [`GONE`] once vanished), which agents have committed to never moving
/// again, and the step count. Time is part of the state because the search
/// contract is "solvable within the horizon".
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    cells: Box<[u32]>,
    committed: u32,
    time: u32,
}

impl State {
    fn all_committed(&self, agent_count: usize) -> bool {
        self.committed == full_mask(agent_count)
    }
}

fn full_mask(agent_count: usize) -> u32 {
    (1u32 << agent_count) - 1
}

struct NodeInfo {
    cost: usize,
    parent: Option<State>,
    settled: bool,
}

struct JointSearch<'a> {
    instance: &'a Instance,
    profile: &'a SemanticsProfile,
    horizon: usize,
    /// Walking distance from every cell to each agent's target.
    dist: Vec<Vec<u32>>,
    nodes: HashMap<State, NodeInfo>,
    /// Priority queue of (estimated total, insertion id); states live in
    /// `queued` because heap entries must be totally ordered.
    heap: BinaryHeap<Reverse<(usize, usize)>>,
    queued: Vec<State>,
    vanish: bool,
    forbid_vertex: bool,
    forbid_edge: bool,
    forbid_following: bool,
    forbid_swapping: bool,
    forbid_cycle: bool,
}

impl<'a> JointSearch<'a> {
    fn new(instance: &'a Instance, profile: &'a SemanticsProfile, horizon: usize) -> Self {
        let grid = instance.grid();
        let agent_count = instance.agent_count();
        let dist = (0..agent_count)
            .map(|agent| grid.bfs_distances(instance.target(agent)))
            .collect();
        JointSearch {
            instance,
            profile,
            horizon,
            dist,
            nodes: HashMap::new(),
            heap: BinaryHeap::new(),
            queued: Vec::new(),
            vanish: profile.target_behavior == TargetBehavior::Disappear,
            forbid_vertex: profile.is_forbidden(ConflictKind::Vertex),
            forbid_edge: profile.is_forbidden(ConflictKind::Edge),
            forbid_following: profile.is_forbidden(ConflictKind::Following),
            forbid_swapping: profile.is_forbidden(ConflictKind::Swapping),
            forbid_cycle: profile.is_forbidden(ConflictKind::Cycle),
        }
    }

    fn run(&mut self) -> OracleOutcome {
        self.seed();
        while let Some(Reverse((_, id))) = self.heap.pop() {
            let state = self.queued[id].clone();
            let info = self.nodes.get_mut(&state).expect("queued states have node records");
            if info.settled {
                continue;
            }
            info.settled = true;
            let cost = info.cost;
            if state.all_committed(self.instance.agent_count()) {
                return self.reconstruct(&state, cost);
            }
            if (state.time as usize) < self.horizon {
                self.expand(&state, cost);
            }
        }
        OracleOutcome::UnsolvableWithinHorizon { horizon: self.horizon }
    }

    /// Enqueues every way the start can look at time zero. An agent born on
    /// its target may have an already-finished plan — for vanishing agents
    /// that is forced (finishing immediately occupies less and costs the
    /// same), while a staying agent may instead remain in play to step
    /// aside for others later. A finished agent still occupies its cell at
    /// time zero; vanishing takes effect from the following step.
    fn seed(&mut self) {
        let agent_count = self.instance.agent_count();
        let grid = self.instance.grid();
        let home: Vec<usize> = (0..agent_count)
            .filter(|&agent| self.instance.source(agent) == self.instance.target(agent))
            .collect();
        let cells: Vec<u32> = (0..agent_count)
            .map(|agent| grid.index(self.instance.source(agent)) as u32)
            .collect();
        let choices = if self.vanish { 0 } else { home.len() };
        for pick in 0..(1usize << choices) {
            let mut committed = 0u32;
            for (slot, &agent) in home.iter().enumerate() {
                if self.vanish || pick & (1 << slot) != 0 {
                    committed |= 1 << agent;
                }
            }
            let state =
                State { cells: cells.clone().into_boxed_slice(), committed, time: 0 };
            self.relax(state, 0, None);
        }
    }

    /// Admissible remaining-cost estimate: an uncommitted agent must fund
    /// at least one step per unit of distance to its target, or one final
    /// committing step if it is already there. Each transition reduces any
    /// agent's term by at most one while charging for that agent, so the
    /// estimate is consistent for both objectives.
    fn estimate(&self, state: &State) -> usize {
        let terms = (0..self.instance.agent_count()).map(|agent| {
            if state.committed & (1 << agent) != 0 {
                return 0;
            }
            let cell = state.cells[agent] as usize;
            (self.dist[agent][cell] as usize).max(1)
        });
        match self.profile.objective {
            Objective::SumOfCosts => terms.sum(),
            Objective::Makespan => terms.max().unwrap_or(0),
        }
    }

    fn relax(&mut self, state: State, cost: usize, parent: Option<State>) {
        match self.nodes.get_mut(&state) {
            Some(info) => {
                if info.settled || info.cost <= cost {
                    return;
                }
                info.cost = cost;
                info.parent = parent;
            }
            None => {
                self.nodes
                    .insert(state.clone(), NodeInfo { cost, parent, settled: false });
            }
        }
        let bound = cost + self.estimate(&state);
        let id = self.queued.len();
        self.queued.push(state);
        self.heap.push(Reverse((bound, id)));
    }

    /// Generates every legal joint step out of `state`.
    fn expand(&mut self, state: &State, cost: usize) {
        let grid = self.instance.grid();
        let agent_count = self.instance.agent_count();
        let cur: Vec<Option<Vertex>> = (0..agent_count)
            .map(|agent| {
                (state.cells[agent] != GONE).then(|| grid.vertex_at(state.cells[agent] as usize))
            })
            .collect();
        let step_cost = match self.profile.objective {
            Objective::SumOfCosts => {
                agent_count - (state.committed.count_ones() as usize)
            }
            Objective::Makespan => 1,
        };
        let mut next: Vec<Option<Vertex>> = Vec::with_capacity(agent_count);
        self.assign(state, cost + step_cost, &cur, &mut next);
    }

    /// Chooses a move for agent `next.len()`, checking it against the moves
    /// already chosen this step, and recurses; with all agents assigned,
    /// rejects rotations if they are forbidden and emits the successors.
    fn assign(
        &mut self,
        state: &State,
        child_cost: usize,
        cur: &[Option<Vertex>],
        next: &mut Vec<Option<Vertex>>,
    ) {
        let agent = next.len();
        if agent == self.instance.agent_count() {
            if self.forbid_cycle && !step_rings(cur, next).is_empty() {
                return;
            }
            self.emit(state, child_cost, next);
            return;
        }
        if state.committed & (1 << agent) != 0 {
            // A committed agent's move is forced — it keeps its footprint
            // under stay and vanishes one step after arriving otherwise —
            // but it still has to get along with the moves already chosen.
            let to = if self.vanish { None } else { cur[agent] };
            if self.move_allowed(cur, next, cur[agent], to) {
                next.push(to);
                self.assign(state, child_cost, cur, next);
                next.pop();
            }
            return;
        }
        let here = cur[agent].expect("uncommitted agents stand somewhere");
        for to in std::iter::once(here).chain(self.instance.grid().neighbors(here)) {
            if !self.move_allowed(cur, next, Some(here), Some(to)) {
                continue;
            }
            next.push(Some(to));
            self.assign(state, child_cost, cur, next);
            next.pop();
        }
    }

    /// Whether moving `here -> to` (`None` meaning off the grid) is
    /// compatible with the moves the earlier agents already chose for this
    /// step, under the forbidden pairwise kinds. (Rotations are a
    /// whole-step property, checked in `assign`.)
    fn move_allowed(
        &self,
        cur: &[Option<Vertex>],
        next: &[Option<Vertex>],
        here: Option<Vertex>,
        to: Option<Vertex>,
    ) -> bool {
        for other in 0..next.len() {
            let other_here = cur[other];
            let other_to = next[other];
            if self.forbid_vertex && to.is_some() && other_to == to {
                return false;
            }
            if self.forbid_edge
                && to.is_some()
                && here.is_some()
                && other_here == here
                && other_to == to
            {
                return false;
            }
            if self.forbid_following
                && ((to.is_some() && other_here == to) || (here.is_some() && other_to == here))
            {
                return false;
            }
            if self.forbid_swapping
                && to.is_some()
                && here.is_some()
                && other_here == to
                && other_to == here
            {
                return false;
            }
        }
        true
    }

    /// Turns one legal joint move into successor states: vanishing agents
    /// finish the moment they stand on their target (and leave the grid one
    /// step later), staying agents that stand on their target may finish or
    /// stay in play.
    fn emit(&mut self, state: &State, child_cost: usize, next: &[Option<Vertex>]) {
        let grid = self.instance.grid();
        let mut cells = Vec::with_capacity(next.len());
        let mut committed = state.committed;
        let mut eligible = Vec::new();
        for (agent, &to) in next.iter().enumerate() {
            match to {
                None => cells.push(GONE),
                Some(to) => {
                    cells.push(grid.index(to) as u32);
                    let active = state.committed & (1 << agent) == 0;
                    if active && to == self.instance.target(agent) {
                        if self.vanish {
                            committed |= 1 << agent;
                        } else {
                            eligible.push(agent);
                        }
                    }
                }
            }
        }
        let time = state.time + 1;
        for pick in 0..(1usize << eligible.len()) {
            let mut picked = committed;
            for (slot, &agent) in eligible.iter().enumerate() {
                if pick & (1 << slot) != 0 {
                    picked |= 1 << agent;
                }
            }
            let child =
                State { cells: cells.clone().into_boxed_slice(), committed: picked, time };
            self.relax(child, child_cost, Some(state.clone()));
        }
    }

    /// Rebuilds the witness solution by walking parents back to time zero.
    fn reconstruct(&self, goal: &State, cost: usize) -> OracleOutcome {
        let grid = self.instance.grid();
        let mut chain = Vec::new();
        let mut cursor = Some(goal.clone());
        while let Some(state) = cursor {
            cursor = self.nodes[&state].parent.clone();
            chain.push(state);
        }
        chain.reverse();
        let plans = (0..self.instance.agent_count())
            .map(|agent| {
                // A vanished agent's cells read `GONE` from the step after
                // its arrival, so the prefix of present cells is its walk.
                let locations: Vec<Vertex> = chain
                    .iter()
                    .map_while(|state| {
                        (state.cells[agent] != GONE)
                            .then(|| grid.vertex_at(state.cells[agent] as usize))
                    })
                    .collect();
                Plan::new(locations).expect("every agent is present at time zero")
            })
            .collect();
        let solution = Solution::new(plans).canonical();
        assert!(
            solution_conflicts(&solution, self.profile).is_empty(),
            "exhaustive search accepted a conflicting joint walk"
        );
        let recomputed = match self.profile.objective {
            Objective::SumOfCosts => sum_of_costs(&solution),
            Objective::Makespan => makespan(&solution),
        };
        assert_eq!(
            recomputed, cost,
            "the witness does not cost what the search paid for it"
        );
        OracleOutcome::Optimal { cost, solution }
    }
}
