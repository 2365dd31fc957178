//! Coupled low-level search for a group of agents planned together.
//!
//! Conflict-based search normally replans one agent at a time, but agents
//! that keep conflicting (one-wide corridors, tight pockets) get merged into
//! a group and planned here as a unit: a best-first search over explicit
//! joint states — every member's position, the set of members whose plans
//! have ended, and the time step. Rather than enumerating whole joint steps
//! (exponentially many in the member count), the search assigns one
//! member's move at a time and queues each partial assignment behind its
//! own cost bound, so hopeless combinations are pruned before they are
//! spelled out. The group result is internally free of every conflict kind
//! the profile forbids and respects each member's individual constraint
//! table, so the high level can treat the group as one composite agent.
//!
//! Costs use an explicit end-of-plan transition: a member standing on its
//! target may *commit*, after which it never moves again (and, when agents
//! disappear on arrival, stops occupying space). Until it commits a member
//! pays one unit per step, which makes the path cost to the all-committed
//! goal exactly the group's sum of final arrival times (or, under the
//! makespan objective, the last arrival). A member that stays on its target
//! forever may only commit once no constraint touches the target at a later
//! time, mirroring how the single-agent search treats settling.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::conflict::{solution_conflicts, step_rings};
use crate::model::{
    ConflictKind, Grid, Objective, Plan, SemanticsProfile, Solution, TargetBehavior, Vertex,
};
use crate::objective::{makespan, sum_of_costs};
use crate::solve::{ConstraintTable, SolverBudget};

/// One joint planning request. Member arrays are parallel: `sources[i]`,
/// `targets[i]`, `dist[i]`, and `tables[i]` all describe the `i`-th member.
pub(crate) struct GroupQuery<'a> {
    pub grid: &'a Grid,
    pub sources: Vec<Vertex>,
    pub targets: Vec<Vertex>,
    /// Walking distance from every cell to each member's target.
    pub dist: &'a [&'a [u32]],
    pub tables: &'a [ConstraintTable],
    pub profile: &'a SemanticsProfile,
    /// Plans may use at most this many actions per member.
    pub horizon: usize,
}

/// What the joint search established.
pub(crate) enum GroupSearch {
    /// One plan per member, in member order; jointly legal and of minimal
    /// group cost under the constraint tables.
    Found(Vec<Plan>),
    /// No joint plan within the horizon satisfies the constraint tables.
    Exhausted,
    /// The budget ran out first.
    OutOfBudget,
}

pub(crate) fn joint_plans(query: &GroupQuery, budget: &SolverBudget) -> GroupSearch {
    Search::new(query).run(budget)
}

/// Cell marker for a member that has vanished from the grid.
const GONE: u32 = u32::MAX;

/// Hard ceiling on queue entries kept in memory. A group search that
/// reaches it is abandoned as out of budget: memory is part of the budget,
/// and giving an honest "ran out" beats being killed by the operating
/// system mid-search.
const STATE_LIMIT: usize = 4_000_000;

/// One joint configuration. Time is part of the state because constraint
/// tables are time-indexed and the search contract is "solvable within the
/// horizon".
#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    cells: Box<[u32]>,
    committed: u32,
    time: u32,
}

struct NodeInfo {
    cost: usize,
    parent: Option<State>,
    settled: bool,
}

/// One queue entry: either a joint configuration or a partially assigned
/// step out of one. Assigning one member at a time keeps the branching
/// factor per entry at the single-agent five moves, and the estimate prunes
/// a bad prefix before the remaining members' combinations are enumerated.
enum Step {
    Full(State),
    Partial(Partial),
}

/// A step under construction: members `0..next.len()` have chosen where to
/// be at `origin.time + 1`.
struct Partial {
    origin: State,
    /// Path cost of `origin`.
    origin_cost: usize,
    /// Chosen cells (or [`GONE`]) for the first members.
    next: Vec<u32>,
    /// Commitments after the chosen prefix.
    committed: u32,
}

struct Search<'a> {
    q: &'a GroupQuery<'a>,
    nodes: HashMap<State, NodeInfo>,
    /// Priority queue of (estimated total, age). Later entries win ties so
    /// a step in progress is finished before its alternatives are explored;
    /// entries live in `queued` because heap items must be totally ordered.
    heap: BinaryHeap<Reverse<(usize, Reverse<usize>)>>,
    queued: Vec<Option<Step>>,
    /// Earliest time each member may commit on its target without a later
    /// constraint ever touching it (always 0 for disappearing members, whose
    /// commitment leaves nothing for a constraint to apply to).
    settle_floor: Vec<usize>,
    vanish: bool,
    forbid_vertex: bool,
    forbid_edge: bool,
    forbid_following: bool,
    forbid_swapping: bool,
    forbid_cycle: bool,
}

impl<'a> Search<'a> {
    fn new(q: &'a GroupQuery<'a>) -> Self {
        let vanish = q.profile.target_behavior == TargetBehavior::Disappear;
        let settle_floor = (0..q.sources.len())
            .map(|m| if vanish { 0 } else { q.tables[m].earliest_settle(q.targets[m]) })
            .collect();
        Search {
            q,
            nodes: HashMap::new(),
            heap: BinaryHeap::new(),
            queued: Vec::new(),
            settle_floor,
            vanish,
            forbid_vertex: q.profile.is_forbidden(ConflictKind::Vertex),
            forbid_edge: q.profile.is_forbidden(ConflictKind::Edge),
            forbid_following: q.profile.is_forbidden(ConflictKind::Following),
            forbid_swapping: q.profile.is_forbidden(ConflictKind::Swapping),
            forbid_cycle: q.profile.is_forbidden(ConflictKind::Cycle),
        }
    }

    fn member_count(&self) -> usize {
        self.q.sources.len()
    }

    fn run(&mut self, budget: &SolverBudget) -> GroupSearch {
        if budget.expired() {
            return GroupSearch::OutOfBudget;
        }
        let members = self.member_count();
        debug_assert!(members <= 32, "joint groups are capped at the mask width");
        for m in 0..members {
            let start = self.q.grid.index(self.q.sources[m]);
            if self.q.dist[m][start] == u32::MAX
                || self.q.tables[m].vertex_blocked(self.q.sources[m], 0)
            {
                return GroupSearch::Exhausted;
            }
        }
        self.seed();
        let full = full_mask(members);
        let mut ticker = 0u32;
        while let Some(Reverse((_, Reverse(id)))) = self.heap.pop() {
            if self.queued.len() >= STATE_LIMIT {
                return GroupSearch::OutOfBudget;
            }
            ticker = ticker.wrapping_add(1);
            if ticker & 0x3ff == 0 && budget.expired() {
                return GroupSearch::OutOfBudget;
            }
            let step = self.queued[id].take().expect("heap ids are popped once");
            match step {
                Step::Full(state) => {
                    let info =
                        self.nodes.get_mut(&state).expect("queued states have node records");
                    if info.settled {
                        continue;
                    }
                    info.settled = true;
                    let cost = info.cost;
                    if state.committed == full {
                        return GroupSearch::Found(self.reconstruct(&state, cost));
                    }
                    if (state.time as usize) < self.q.horizon {
                        self.open_step(state, cost);
                    }
                }
                Step::Partial(partial) => self.advance(partial),
            }
        }
        GroupSearch::Exhausted
    }

    /// Enqueues every way the start can look at time zero: members born on
    /// their targets may have already-finished plans (forced for vanishing
    /// members, optional for staying ones whose target is settle-legal from
    /// the start). A finished member still occupies its cell at time zero;
    /// vanishing takes effect from the following step.
    fn seed(&mut self) {
        let grid = self.q.grid;
        let members = self.member_count();
        let home: Vec<usize> = (0..members)
            .filter(|&m| {
                self.q.sources[m] == self.q.targets[m]
                    && (self.vanish || self.settle_floor[m] == 0)
            })
            .collect();
        let cells: Vec<u32> =
            (0..members).map(|m| grid.index(self.q.sources[m]) as u32).collect();
        let choices = if self.vanish { 0 } else { home.len() };
        for pick in 0..(1usize << choices) {
            let mut committed = 0u32;
            for (slot, &m) in home.iter().enumerate() {
                if self.vanish || pick & (1 << slot) != 0 {
                    committed |= 1 << m;
                }
            }
            let state = State { cells: cells.clone().into_boxed_slice(), committed, time: 0 };
            self.relax(state, 0, None);
        }
    }

    /// Lower bound on what an uncommitted member standing on `cell` at
    /// `time` still pays: one step per unit of distance to its target (one
    /// final committing step if already there), and no commitment before
    /// its settle floor.
    fn term(&self, member: usize, cell: u32, time: usize) -> usize {
        (self.q.dist[member][cell as usize] as usize)
            .max(1)
            .max(self.settle_floor[member].saturating_sub(time))
    }

    /// Admissible remaining-cost estimate for a full configuration. Each
    /// transition reduces any member's term by at most one while charging
    /// for that member, so the estimate is consistent for both objectives.
    fn estimate(&self, state: &State) -> usize {
        let time = state.time as usize;
        let terms = (0..self.member_count()).map(|m| {
            if state.committed & (1 << m) != 0 {
                0
            } else {
                self.term(m, state.cells[m], time)
            }
        });
        match self.q.profile.objective {
            Objective::SumOfCosts => terms.sum(),
            Objective::Makespan => terms.max().unwrap_or(0),
        }
    }

    /// What a step costs the group: everyone still in play pays for the
    /// tick under sum-of-costs, the clock pays under makespan.
    fn step_cost(&self, state: &State) -> usize {
        match self.q.profile.objective {
            Objective::SumOfCosts => {
                self.member_count() - (state.committed.count_ones() as usize)
            }
            Objective::Makespan => 1,
        }
    }

    /// Admissible bound on the total cost of any completion of `partial`:
    /// the step being built is already charged, members that have moved are
    /// estimated from where they land, members still to move from the best
    /// they could reach this step.
    fn step_bound(&self, partial: &Partial) -> usize {
        let time = partial.origin.time as usize;
        let members = self.member_count();
        let terms = (0..members).map(|m| {
            if m < partial.next.len() {
                if partial.committed & (1 << m) != 0 {
                    0
                } else {
                    self.term(m, partial.next[m], time + 1)
                }
            } else if partial.origin.committed & (1 << m) != 0 {
                0
            } else {
                self.term(m, partial.origin.cells[m], time).saturating_sub(1)
            }
        });
        let remaining = match self.q.profile.objective {
            Objective::SumOfCosts => terms.sum(),
            Objective::Makespan => terms.max().unwrap_or(0),
        };
        partial.origin_cost + self.step_cost(&partial.origin) + remaining
    }

    fn push(&mut self, bound: usize, step: Step) {
        let id = self.queued.len();
        self.queued.push(Some(step));
        self.heap.push(Reverse((bound, Reverse(id))));
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
                self.nodes.insert(state.clone(), NodeInfo { cost, parent, settled: false });
            }
        }
        let bound = cost + self.estimate(&state);
        self.push(bound, Step::Full(state));
    }

    /// Starts a step out of a settled configuration: charges its cost and
    /// queues the empty assignment prefix.
    fn open_step(&mut self, state: State, cost: usize) {
        let members = self.member_count();
        let committed = state.committed;
        let partial = Partial {
            origin: state,
            origin_cost: cost,
            next: Vec::with_capacity(members),
            committed,
        };
        let bound = self.step_bound(&partial);
        self.push(bound, Step::Partial(partial));
    }

    /// Chooses a move for member `partial.next.len()`, checking it against
    /// that member's constraint table and the moves already chosen this
    /// step; each legal choice is queued behind its own cost bound, and a
    /// fully assigned step (rotations rejected if forbidden) becomes the
    /// successor configuration.
    fn advance(&mut self, partial: Partial) {
        let grid = self.q.grid;
        let members = self.member_count();
        let member = partial.next.len();
        let time = partial.origin.time as usize;
        let cur: Vec<Option<Vertex>> = (0..members)
            .map(|m| {
                let cell = partial.origin.cells[m];
                (cell != GONE).then(|| grid.vertex_at(cell as usize))
            })
            .collect();
        let next: Vec<Option<Vertex>> = partial
            .next
            .iter()
            .map(|&cell| (cell != GONE).then(|| grid.vertex_at(cell as usize)))
            .collect();
        // (move, whether the member finishes its plan on it)
        let mut choices: Vec<(Option<Vertex>, bool)> = Vec::new();
        if partial.origin.committed & (1 << member) != 0 {
            // A committed member's move is forced — it keeps its footprint
            // under stay and vanishes one step after arriving otherwise —
            // but it still has to get along with the moves already chosen.
            // Its own table cannot object: committing required the target to
            // be free of constraints from the commit time on.
            let to = if self.vanish { None } else { cur[member] };
            if self.move_allowed(&cur, &next, cur[member], to) {
                choices.push((to, false));
            }
        } else {
            let here = cur[member].expect("uncommitted members stand somewhere");
            for to in std::iter::once(here).chain(grid.neighbors(here)) {
                if self.q.tables[member].vertex_blocked(to, time + 1)
                    || self.q.tables[member].edge_blocked(here, to, time)
                {
                    continue;
                }
                if !self.move_allowed(&cur, &next, Some(here), Some(to)) {
                    continue;
                }
                if to == self.q.targets[member] {
                    // Arrival: vanishing members finish on the spot (and
                    // leave the grid one step later); staying members on a
                    // settle-legal target may finish or stay in play.
                    if self.vanish {
                        choices.push((Some(to), true));
                        continue;
                    }
                    if time + 1 >= self.settle_floor[member] {
                        choices.push((Some(to), true));
                    }
                }
                choices.push((Some(to), false));
            }
        }
        for (choice, commits) in choices {
            let mut extended = Partial {
                origin: partial.origin.clone(),
                origin_cost: partial.origin_cost,
                next: partial.next.clone(),
                committed: partial.committed,
            };
            extended.next.push(choice.map_or(GONE, |v| grid.index(v) as u32));
            if commits {
                extended.committed |= 1 << member;
            }
            if extended.next.len() == members {
                self.finish_step(extended, &cur);
            } else {
                let bound = self.step_bound(&extended);
                self.push(bound, Step::Partial(extended));
            }
        }
    }

    /// Turns a fully assigned step into the successor configuration.
    fn finish_step(&mut self, partial: Partial, cur: &[Option<Vertex>]) {
        let grid = self.q.grid;
        if self.forbid_cycle {
            let next: Vec<Option<Vertex>> = partial
                .next
                .iter()
                .map(|&cell| (cell != GONE).then(|| grid.vertex_at(cell as usize)))
                .collect();
            if !step_rings(cur, &next).is_empty() {
                return;
            }
        }
        let child_cost = partial.origin_cost + self.step_cost(&partial.origin);
        let child = State {
            cells: partial.next.into_boxed_slice(),
            committed: partial.committed,
            time: partial.origin.time + 1,
        };
        self.relax(child, child_cost, Some(partial.origin));
    }

    /// Whether moving `here -> to` (`None` meaning off the grid) is
    /// compatible with the moves the earlier members already chose for this
    /// step, under the forbidden pairwise kinds. (Rotations are a whole-step
    /// property, checked in `assign`.)
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

    /// Rebuilds the member plans by walking parents back to time zero.
    fn reconstruct(&self, goal: &State, cost: usize) -> Vec<Plan> {
        let grid = self.q.grid;
        let mut chain = Vec::new();
        let mut cursor = Some(goal.clone());
        while let Some(state) = cursor {
            cursor = self.nodes[&state].parent.clone();
            chain.push(state);
        }
        chain.reverse();
        let plans: Vec<Plan> = (0..self.member_count())
            .map(|m| {
                // A vanished member's cells read `GONE` from the step after
                // its arrival, so the prefix of present cells is its walk;
                // staying members keep their target cell, trimmed below.
                let locations: Vec<Vertex> = chain
                    .iter()
                    .map_while(|state| {
                        (state.cells[m] != GONE)
                            .then(|| grid.vertex_at(state.cells[m] as usize))
                    })
                    .collect();
                Plan::new(locations).expect("every member is present at time zero").canonical()
            })
            .collect();
        let group = Solution::new(plans.clone());
        assert!(
            solution_conflicts(&group, self.q.profile).is_empty(),
            "joint search accepted a conflicting group walk"
        );
        let recomputed = match self.q.profile.objective {
            Objective::SumOfCosts => sum_of_costs(&group),
            Objective::Makespan => makespan(&group),
        };
        assert_eq!(
            recomputed, cost,
            "the group plans do not cost what the search paid for them"
        );
        plans
    }
}

fn full_mask(members: usize) -> u32 {
    if members == 32 {
        u32::MAX
    } else {
        (1u32 << members) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{v, Grid};
    use crate::objective::plan_cost;
    use crate::solve::Constraint;
    use std::collections::HashSet;

    fn grid(width: u32, height: u32, blocked: &[(u32, u32)]) -> Grid {
        Grid::new(width, height, &blocked.iter().copied().collect::<HashSet<_>>()).unwrap()
    }

    fn run(
        grid: &Grid,
        endpoints: &[(Vertex, Vertex)],
        constraints: Vec<Vec<Constraint>>,
        profile: &SemanticsProfile,
        horizon: usize,
    ) -> GroupSearch {
        let sources: Vec<Vertex> = endpoints.iter().map(|&(s, _)| s).collect();
        let targets: Vec<Vertex> = endpoints.iter().map(|&(_, t)| t).collect();
        let dist_owned: Vec<Vec<u32>> =
            targets.iter().map(|&t| grid.bfs_distances(t)).collect();
        let dist: Vec<&[u32]> = dist_owned.iter().map(|d| d.as_slice()).collect();
        let tables: Vec<ConstraintTable> =
            constraints.into_iter().map(ConstraintTable::new).collect();
        let query = GroupQuery {
            grid,
            sources,
            targets,
            dist: &dist,
            tables: &tables,
            profile,
            horizon,
        };
        joint_plans(&query, &SolverBudget::unlimited())
    }

    fn plans_of(outcome: GroupSearch) -> Vec<Plan> {
        match outcome {
            GroupSearch::Found(plans) => plans,
            GroupSearch::Exhausted => panic!("expected plans, search was exhausted"),
            GroupSearch::OutOfBudget => panic!("expected plans, search ran out of budget"),
        }
    }

    #[test]
    fn an_unconstrained_pair_walks_shortest_paths() {
        let grid = grid(4, 1, &[]);
        let plans = plans_of(run(
            &grid,
            &[(v(0, 0), v(2, 0)), (v(3, 0), v(3, 0))],
            vec![vec![], vec![]],
            &SemanticsProfile::search_based(),
            8,
        ));
        assert_eq!(plan_cost(&plans[0]), 2);
        assert_eq!(plan_cost(&plans[1]), 0);
    }

    #[test]
    fn members_resolve_a_crossing_internally() {
        // The same two-agent crossing the one-at-a-time solver needs a
        // conflict tree for: planned jointly, one agent waits out the other.
        let grid = grid(3, 3, &[]);
        let plans = plans_of(run(
            &grid,
            &[(v(0, 1), v(2, 1)), (v(1, 0), v(1, 2))],
            vec![vec![], vec![]],
            &SemanticsProfile::search_based(),
            12,
        ));
        assert_eq!(plan_cost(&plans[0]) + plan_cost(&plans[1]), 5);
    }

    #[test]
    fn constraint_tables_bind_individual_members() {
        // Banning the straight-line cell at the only useful time forces a
        // one-step detour or wait on member 0 alone.
        let grid = grid(3, 1, &[]);
        let unconstrained = plans_of(run(
            &grid,
            &[(v(0, 0), v(2, 0))],
            vec![vec![]],
            &SemanticsProfile::search_based(),
            6,
        ));
        assert_eq!(plan_cost(&unconstrained[0]), 2);
        let constrained = plans_of(run(
            &grid,
            &[(v(0, 0), v(2, 0))],
            vec![vec![Constraint::Vertex { vertex: v(1, 0), time: 1 }]],
            &SemanticsProfile::search_based(),
            6,
        ));
        assert_eq!(plan_cost(&constrained[0]), 3);
    }

    #[test]
    fn settling_waits_out_late_constraints_on_the_target() {
        // A vertex ban on the target at time 3 means the member cannot be
        // parked there at 3: it must end its plan later than 3 even though
        // it could arrive at 1.
        let grid = grid(2, 1, &[]);
        let plans = plans_of(run(
            &grid,
            &[(v(0, 0), v(1, 0))],
            vec![vec![Constraint::Vertex { vertex: v(1, 0), time: 3 }]],
            &SemanticsProfile::search_based(),
            8,
        ));
        assert_eq!(plan_cost(&plans[0]), 4);
    }

    #[test]
    fn an_impossible_table_exhausts_the_search() {
        // The lone corridor cell between source and target is banned at
        // every reachable time within the horizon.
        let grid = grid(3, 1, &[]);
        let bans = (1..=4)
            .map(|time| Constraint::Vertex { vertex: v(1, 0), time })
            .collect();
        let outcome = run(
            &grid,
            &[(v(0, 0), v(2, 0))],
            vec![bans],
            &SemanticsProfile::search_based(),
            4,
        );
        assert!(matches!(outcome, GroupSearch::Exhausted));
    }

    #[test]
    fn a_swap_is_resolved_only_when_the_profile_allows_it() {
        let corridor = grid(2, 1, &[]);
        let endpoints = [(v(0, 0), v(1, 0)), (v(1, 0), v(0, 0))];
        let strict = run(
            &corridor,
            &endpoints,
            vec![vec![], vec![]],
            &SemanticsProfile::search_based(),
            6,
        );
        assert!(matches!(strict, GroupSearch::Exhausted));
        let vertex_only = SemanticsProfile::new(
            [ConflictKind::Vertex],
            TargetBehavior::Stay,
            Objective::SumOfCosts,
        );
        let plans = plans_of(run(&corridor, &endpoints, vec![vec![], vec![]], &vertex_only, 6));
        assert_eq!(plan_cost(&plans[0]) + plan_cost(&plans[1]), 2);
    }

    #[test]
    fn disappearing_members_clear_the_way() {
        // Member 0 finishes mid-corridor and vanishes; member 1 walks
        // through the vacated cell one step later.
        let corridor = grid(3, 1, &[]);
        let vanishing =
            SemanticsProfile::search_based().with_target_behavior(TargetBehavior::Disappear);
        let plans = plans_of(run(
            &corridor,
            &[(v(0, 0), v(1, 0)), (v(2, 0), v(0, 0))],
            vec![vec![], vec![]],
            &vanishing,
            8,
        ));
        assert_eq!(plan_cost(&plans[0]) + plan_cost(&plans[1]), 4);
    }

    #[test]
    fn the_horizon_bounds_group_plans() {
        let grid = grid(3, 1, &[]);
        let outcome = run(
            &grid,
            &[(v(0, 0), v(2, 0))],
            vec![vec![]],
            &SemanticsProfile::search_based(),
            1,
        );
        assert!(matches!(outcome, GroupSearch::Exhausted));
    }

    #[test]
    fn an_expired_budget_stops_the_search() {
        let grid = grid(5, 5, &[]);
        let sources: Vec<Vertex> = (0..4).map(|i| v(i, 0)).collect();
        let targets: Vec<Vertex> = (0..4).map(|i| v(3 - i, 4)).collect();
        let endpoints: Vec<(Vertex, Vertex)> =
            sources.into_iter().zip(targets).collect();
        let dist_owned: Vec<Vec<u32>> = endpoints
            .iter()
            .map(|&(_, t)| grid.bfs_distances(t))
            .collect();
        let dist: Vec<&[u32]> = dist_owned.iter().map(|d| d.as_slice()).collect();
        let tables: Vec<ConstraintTable> =
            (0..4).map(|_| ConstraintTable::new([])).collect();
        let query = GroupQuery {
            grid: &grid,
            sources: endpoints.iter().map(|&(s, _)| s).collect(),
            targets: endpoints.iter().map(|&(_, t)| t).collect(),
            dist: &dist,
            tables: &tables,
            profile: &SemanticsProfile::search_based(),
            horizon: 29,
        };
        let budget = SolverBudget { deadline: Some(std::time::Instant::now()) };
        let outcome = joint_plans(&query, &budget);
        assert!(matches!(outcome, GroupSearch::OutOfBudget));
    }
}
