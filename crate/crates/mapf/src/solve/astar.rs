//! Space-time A* for a single agent.
//!
//! States are (cell, time) pairs; actions are the four grid moves plus
//! waiting in place, each costing one time step. The search minimizes the
//! agent's arrival time — the plan's cost — subject to a constraint table,
//! and tie-breaks toward fewer collisions with a set of other agents' plans
//! (pure guidance, never affecting the cost of the returned plan) and then
//! toward states deeper in time.

use std::collections::BinaryHeap;

use crate::model::{Grid, Plan, TargetBehavior, Vertex, UNREACHABLE};
use crate::solve::{ConstraintTable, SolverBudget};

/// One single-agent search request.
pub(crate) struct PathQuery<'a> {
    pub grid: &'a Grid,
    pub source: Vertex,
    pub target: Vertex,
    /// Breadth-first distances from the target (the heuristic).
    pub dist_to_target: &'a [u32],
    pub constraints: &'a ConstraintTable,
    pub behavior: TargetBehavior,
    /// Largest allowed arrival time.
    pub horizon: usize,
    /// Other agents' plans to steer around when cost permits.
    pub avoid: Option<&'a Occupancy>,
}

pub(crate) enum PathSearch {
    Found(Plan),
    /// No plan arrives within the horizon under these constraints.
    Exhausted,
    OutOfBudget,
}

struct HeapEntry {
    f: u32,
    collisions: u32,
    time: u32,
    cell: u32,
    parent: u32,
    seq: u32,
}

/// Best-first order: smallest f, then fewest collisions, then latest time,
/// then insertion order. `BinaryHeap` pops its maximum, so "better" compares
/// as greater.
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .f
            .cmp(&self.f)
            .then_with(|| other.collisions.cmp(&self.collisions))
            .then_with(|| self.time.cmp(&other.time))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for HeapEntry {}

pub(crate) fn space_time_astar(query: &PathQuery<'_>, budget: &SolverBudget) -> PathSearch {
    if budget.expired() {
        return PathSearch::OutOfBudget;
    }
    let grid = query.grid;
    let cells = grid.cell_count();
    let horizon = query.horizon;
    let h0 = query.dist_to_target[grid.index(query.source)];
    if h0 == UNREACHABLE
        || h0 as usize > horizon
        || query.constraints.vertex_blocked(query.source, 0)
    {
        return PathSearch::Exhausted;
    }

    // State id = time * cells + cell index.
    let state_count = (horizon + 1) * cells;
    let mut closed = vec![false; state_count];
    let mut parent = vec![u32::MAX; state_count];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u32;
    let start_cell = grid.index(query.source) as u32;
    heap.push(HeapEntry { f: h0, collisions: 0, time: 0, cell: start_cell, parent: u32::MAX, seq });

    let earliest_settle = query.constraints.earliest_settle(query.target);
    let mut pops = 0u32;
    while let Some(entry) = heap.pop() {
        let id = entry.time as usize * cells + entry.cell as usize;
        if closed[id] {
            continue;
        }
        closed[id] = true;
        parent[id] = entry.parent;

        pops += 1;
        if pops % 128 == 0 && budget.expired() {
            return PathSearch::OutOfBudget;
        }

        let here = grid.vertex_at(entry.cell as usize);
        let t = entry.time as usize;
        if here == query.target
            && (query.behavior == TargetBehavior::Disappear || t >= earliest_settle)
        {
            return PathSearch::Found(reconstruct(grid, &parent, id));
        }
        if t == horizon {
            continue;
        }

        let wait = std::iter::once(here);
        for next in grid.neighbors(here).chain(wait) {
            let h = query.dist_to_target[grid.index(next)];
            if h == UNREACHABLE || t + 1 + h as usize > horizon {
                continue;
            }
            if query.constraints.vertex_blocked(next, t + 1)
                || query.constraints.edge_blocked(here, next, t)
            {
                continue;
            }
            let next_id = (t + 1) * cells + grid.index(next);
            if closed[next_id] {
                continue;
            }
            let collisions = entry.collisions
                + query.avoid.map_or(0, |o| o.collision_count(here, next, t));
            seq += 1;
            heap.push(HeapEntry {
                f: (t as u32 + 1) + h,
                collisions,
                time: t as u32 + 1,
                cell: grid.index(next) as u32,
                parent: id as u32,
                seq,
            });
        }
    }
    PathSearch::Exhausted
}

fn reconstruct(grid: &Grid, parent: &[u32], goal_id: usize) -> Plan {
    let cells = grid.cell_count();
    let mut locations = Vec::new();
    let mut id = goal_id;
    loop {
        locations.push(grid.vertex_at(id % cells));
        let up = parent[id];
        if up == u32::MAX {
            break;
        }
        id = up as usize;
    }
    locations.reverse();
    Plan::new(locations).expect("a reconstructed path has at least its start")
}

/// Time-indexed occupancy of a set of plans, used to count collisions a
/// candidate move would cause. Each plan holds one bit per (cell, time);
/// agents beyond 63 share the top bit, which only blurs the count, never
/// the search's correctness.
pub(crate) struct Occupancy {
    masks: std::collections::HashMap<(Vertex, usize), u64>,
}

impl Occupancy {
    /// Indexes `plans` (skipping index `skip`) out to `horizon`.
    pub fn build<'a>(
        plans: impl Iterator<Item = &'a Plan>,
        skip: usize,
        behavior: TargetBehavior,
        horizon: usize,
    ) -> Self {
        let mut masks = std::collections::HashMap::new();
        for (agent, plan) in plans.enumerate() {
            if agent == skip {
                continue;
            }
            let bit = 1u64 << agent.min(63);
            for t in 0..=horizon {
                if let Some(at) = plan.location_at(t, behavior) {
                    *masks.entry((at, t)).or_insert(0) |= bit;
                } else {
                    break;
                }
            }
        }
        Occupancy { masks }
    }

    fn mask(&self, vertex: Vertex, time: usize) -> u64 {
        self.masks.get(&(vertex, time)).copied().unwrap_or(0)
    }

    /// Number of agents the move `from -> to` over step `time` would share a
    /// cell with (at `time + 1`) or swap with.
    pub fn collision_count(&self, from: Vertex, to: Vertex, time: usize) -> u32 {
        let shared = self.mask(to, time + 1);
        let swapped = self.mask(to, time) & self.mask(from, time + 1);
        shared.count_ones() + (swapped & !shared).count_ones()
    }
}
